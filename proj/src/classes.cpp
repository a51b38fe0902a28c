#include "orr/classes.hpp"

#include "orr/symmetric.hpp"

namespace orr {

namespace {

std::vector<Elem> elementary(const std::vector<Elem>& xs, const RingPtr& r) {
  std::vector<Elem> e(xs.size() + 1, Elem(r));
  e[0] = Elem::constant(r, Rational(1));
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t k = j + 1; k >= 1; --k) e[k] += e[k - 1] * xs[j];
  return e;
}

}  // namespace

std::vector<Elem> chern_classes(const Bundle& e, const Orientation& o) {
  if (o.is_identity()) return e.reference_classes();
  const RingPtr& r = e.base()->ring();
  if (e.kind() == Bundle::Kind::roots) {
    std::vector<Elem> images;
    for (const auto& x : e.roots()) images.push_back(o.apply(x));
    auto el = elementary(images, r);
    return {el.begin() + 1, el.end()};
  }
  return transported_elementary(o.theta(), e.reference_classes());
}

Elem chern(int i, const Bundle& e, const Orientation& o) {
  const RingPtr& r = e.base()->ring();
  if (i == 0) return Elem::constant(r, Rational(1));
  if (i < 0 || i > e.rank()) return Elem(r);
  if (o.is_identity()) return e.reference_chern(i);
  return chern_classes(e, o)[static_cast<std::size_t>(i - 1)];
}

Elem total_chern(const Bundle& e, const Orientation& o) {
  Elem t = Elem::constant(e.base()->ring(), Rational(1));
  for (const auto& c : chern_classes(e, o)) t += c;
  return t;
}

Elem c1_tensor(const Bundle& l1, const Bundle& l2, const Orientation& o) {
  if (l1.rank() != 1 || l2.rank() != 1) fail(ErrorCode::arity, "c1_tensor needs two line bundles");
  if (l1.base() != l2.base()) fail(ErrorCode::base_mismatch, "c1_tensor: line bundles on different spaces");
  return o.law()(chern(1, l1, o), chern(1, l2, o));
}

Elem thom(const Bundle& e, const SpacePtr& completion, const Orientation& o) {
  const int n = e.rank();
  if (n < 1) fail(ErrorCode::degenerate_bundle, "Thom class of a rank-0 bundle");
  if (completion->is_point() || completion->base() != e.base() || completion->bundle_rank() != n + 1)
    fail(ErrorCode::base_mismatch, "space " + completion->label() + " is not the completion of " + e.describe());
  const auto ce = e.reference_classes();
  const auto cp = completion->bundle().reference_classes();
  for (int i = 0; i < n; ++i)
    if (!(ce[static_cast<std::size_t>(i)] == cp[static_cast<std::size_t>(i)]))
      fail(ErrorCode::base_mismatch, "space " + completion->label() + " is not the completion of " + e.describe());
  const RingPtr& r = completion->ring();
  const Elem minus_t = -o.apply(completion->generator());
  const auto c = chern_classes(e.pullback(completion), o);
  Elem out(r);
  for (int i = 0; i <= n; ++i) {
    Elem ci = i == 0 ? Elem::constant(r, Rational(1)) : c[static_cast<std::size_t>(i - 1)];
    out += ci * minus_t.pow(n - i);
  }
  const Elem via_quotient = chern(n, universal_quotient(completion), o);
  if (!(out == via_quotient))
    fail(ErrorCode::internal_invariant, "thom(E) = " + out.str() + " differs from c_n(xi) = " + via_quotient.str());
  return out;
}

Elem euler(const Bundle& e, const Orientation& o) { return chern(e.rank(), e, o); }

Elem top_chern_line_tensor(const Bundle& line, const Bundle& e, const Orientation& o) {
  if (line.rank() != 1) fail(ErrorCode::arity, "top_chern_line_tensor needs a line bundle");
  if (line.base() != e.base()) fail(ErrorCode::base_mismatch, "top_chern_line_tensor: bundles on different spaces");
  const RingPtr& r = e.base()->ring();
  const Elem l = chern(1, line, o);
  // g(t) = F(l, t), coefficients in the space ring.
  const FormalGroupLaw& f = o.law();
  TruncatedSeries g(r, {"t"}, f.order());
  std::vector<Elem> lp{Elem::constant(r, Rational(1))};
  for (const auto& [ex, c] : f.series().coefficients()) {
    while (static_cast<int>(lp.size()) <= ex[0]) lp.push_back(lp.back() * l);
    g.add(Exponents{ex[1]}, c * lp[static_cast<std::size_t>(ex[0])]);
  }
  return transported_product(g, chern_classes(e, o));
}

Elem excess_class(const Embedding& outer, const Embedding& inner, const Orientation& o) {
  if (outer.source() != inner.source())
    fail(ErrorCode::invalid_excess, "excess class needs embeddings with one source");
  const int e = outer.codim() - inner.codim();
  if (e < 0)
    fail(ErrorCode::invalid_excess, "normal bundle of rank " + std::to_string(inner.codim()) +
                                        " does not fit in one of rank " + std::to_string(outer.codim()));
  const SpacePtr& z = outer.source();
  const Elem total = outer.normal().reference_total() * inner.normal().reference_total().inverse();
  std::vector<Elem> classes;
  Elem tail = total - Elem::constant(z->ring(), Rational(1));
  for (int k = 1; k <= e; ++k) {
    classes.push_back(total.weight_part(k));
    tail -= classes.back();
  }
  if (!tail.is_zero())
    fail(ErrorCode::invalid_excess, "c(outer normal)/c(inner normal) has terms beyond rank " + std::to_string(e) +
                                        ": " + tail.str());
  return chern(e, Bundle::from_chern(z, std::move(classes)), o);
}

namespace {

Elem todd_of(const TruncatedSeries& g, const Bundle& b) {
  const RingPtr& r = b.base()->ring();
  if (b.kind() == Bundle::Kind::roots) {
    Elem p = Elem::constant(r, Rational(1));
    for (const auto& x : b.roots()) p *= evaluate_at_nilpotents(g, {x});
    return p;
  }
  return transported_product(g, b.reference_classes()).in(r);
}

}  // namespace

Elem todd(const TruncatedSeries& phi, const VirtualBundle& v, const Orientation& o) {
  if (phi.nvars() != 1 || !phi.constant_term().is_zero() ||
      !(phi.coefficient(1) == Elem::constant(phi.ring(), Rational(1))))
    fail(ErrorCode::presentation, "comparison series must be t + O(t^2), got " + phi.str());
  if (v.plus.base() != v.minus.base()) fail(ErrorCode::base_mismatch, "virtual bundle over two bases");
  // Per reference root x: (t / phi(t)) evaluated at theta(x).
  const TruncatedSeries q = phi.divided_by_variable().reciprocal();
  const TruncatedSeries g = series_compose(q, o.theta().in(q.ring()).truncated(q.order()));
  return todd_of(g, v.plus) * todd_of(g, v.minus).inverse();
}

}  // namespace orr
