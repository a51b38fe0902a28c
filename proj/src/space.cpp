#include "orr/space.hpp"

#include "orr/classes.hpp"
#include "orr/symmetric.hpp"

namespace orr {

namespace {

void check_root(const Elem& x) {
  if (x.is_zero()) return;
  if (!x.is_homogeneous() || x.weight() != 1)
    fail(ErrorCode::presentation, "Chern root " + x.str() + " is not homogeneous of weight 1");
  if (x.min_generator_degree() < 1) fail(ErrorCode::presentation, "Chern root " + x.str() + " is not nilpotent");
}

void check_class(const Elem& c, int k) {
  if (c.is_zero()) return;
  if (!c.is_homogeneous() || c.weight() != k)
    fail(ErrorCode::presentation, "Chern class c" + std::to_string(k) + " = " + c.str() + " is not of weight " +
                                      std::to_string(k));
  if (c.min_generator_degree() < k)
    fail(ErrorCode::presentation, "Chern class c" + std::to_string(k) + " = " + c.str() +
                                      " has generator-degree below " + std::to_string(k));
}

void same_base(const Bundle& a, const Bundle& b) {
  if (a.base() != b.base())
    fail(ErrorCode::base_mismatch, "bundles " + a.describe() + " and " + b.describe() + " have different bases");
}

}  // namespace

// ---------------------------------------------------------------------------
// Bundle

Bundle Bundle::from_roots(SpacePtr base, std::vector<Elem> roots) {
  Bundle b;
  b.kind_ = Kind::roots;
  b.rank_ = static_cast<int>(roots.size());
  for (auto& x : roots) {
    x = x.in(base->ring());
    check_root(x);
  }
  b.base_ = std::move(base);
  b.data_ = std::move(roots);
  return b;
}

Bundle Bundle::from_chern(SpacePtr base, std::vector<Elem> classes) {
  Bundle b;
  b.kind_ = Kind::chern_data;
  b.rank_ = static_cast<int>(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    classes[k] = classes[k].in(base->ring());
    check_class(classes[k], static_cast<int>(k + 1));
  }
  b.base_ = std::move(base);
  b.data_ = std::move(classes);
  return b;
}

Bundle Bundle::trivial(SpacePtr base, int rank) {
  if (rank < 0) fail(ErrorCode::range, "negative bundle rank");
  std::vector<Elem> roots(static_cast<std::size_t>(rank), Elem(base->ring()));
  return from_roots(std::move(base), std::move(roots));
}

Bundle Bundle::line(SpacePtr base, const Elem& root) { return from_roots(std::move(base), {root}); }

Elem Bundle::reference_chern(int i) const {
  const RingPtr& r = base_->ring();
  if (i == 0) return Elem::constant(r, Rational(1));
  if (i < 0 || i > rank_) return Elem(r);
  if (kind_ == Kind::chern_data) return data_[static_cast<std::size_t>(i - 1)];
  // e_i of the roots.
  std::vector<Elem> e(static_cast<std::size_t>(i + 1), Elem(r));
  e[0] = Elem::constant(r, Rational(1));
  for (std::size_t j = 0; j < data_.size(); ++j)
    for (std::size_t k = std::min<std::size_t>(j + 1, static_cast<std::size_t>(i)); k >= 1; --k)
      e[k] += e[k - 1] * data_[j];
  return e[static_cast<std::size_t>(i)];
}

std::vector<Elem> Bundle::reference_classes() const {
  if (kind_ == Kind::chern_data) return data_;
  std::vector<Elem> out;
  for (int i = 1; i <= rank_; ++i) out.push_back(reference_chern(i));
  return out;
}

Elem Bundle::reference_total() const {
  Elem t = Elem::constant(base_->ring(), Rational(1));
  for (const auto& c : reference_classes()) t += c;
  return t;
}

Bundle Bundle::pullback(const SpacePtr& space) const {
  if (space == base_) return *this;
  if (!space->ring()->contains(*base_->ring()))
    fail(ErrorCode::base_mismatch, "cannot pull " + describe() + " back to " + space->label());
  Bundle b = *this;
  b.base_ = space;
  for (auto& x : b.data_) x = x.in(space->ring());
  return b;
}

Bundle Bundle::restricted(const Substitution& map, const SpacePtr& space) const {
  if (map.source() != base_->ring() || map.target() != space->ring())
    fail(ErrorCode::base_mismatch, "restriction map does not match bundle " + describe());
  Bundle b = *this;
  b.base_ = space;
  for (auto& x : b.data_) x = map(x);
  return b;
}

std::string Bundle::describe() const {
  std::string s = kind_ == Kind::roots ? "roots(" : "cdata(";
  for (std::size_t i = 0; i < data_.size(); ++i) s += (i ? ", " : "") + data_[i].str();
  return s + ")";
}

Bundle bundle_sum(const Bundle& a, const Bundle& b) {
  same_base(a, b);
  if (a.kind() == Bundle::Kind::roots && b.kind() == Bundle::Kind::roots) {
    std::vector<Elem> r = a.roots();
    r.insert(r.end(), b.roots().begin(), b.roots().end());
    return Bundle::from_roots(a.base(), std::move(r));
  }
  // Whitney: c_k = sum_{i+j=k} c_i(a) c_j(b).
  std::vector<Elem> c;
  for (int k = 1; k <= a.rank() + b.rank(); ++k) {
    Elem s(a.base()->ring());
    for (int i = 0; i <= k; ++i) s += a.reference_chern(i) * b.reference_chern(k - i);
    c.push_back(s);
  }
  return Bundle::from_chern(a.base(), std::move(c));
}

Bundle bundle_dual(const Bundle& e) {
  if (e.kind() == Bundle::Kind::roots) {
    std::vector<Elem> r;
    for (const auto& x : e.roots()) r.push_back(-x);
    return Bundle::from_roots(e.base(), std::move(r));
  }
  const RingPtr& ring = e.base()->ring();
  TruncatedSeries neg = -TruncatedSeries::variable(ring, {"t"}, ring->nilpotency_bound(), 0);
  return Bundle::from_chern(e.base(), transported_elementary(neg, e.reference_classes()));
}

Bundle bundle_tensor_line(const Bundle& e, const Bundle& line) {
  same_base(e, line);
  if (line.rank() != 1) fail(ErrorCode::arity, "tensor_line needs a line bundle, got rank " + std::to_string(line.rank()));
  const Elem l = line.reference_chern(1);
  if (e.kind() == Bundle::Kind::roots) {
    std::vector<Elem> r;
    for (const auto& x : e.roots()) r.push_back(x + l);
    return Bundle::from_roots(e.base(), std::move(r));
  }
  const RingPtr& ring = e.base()->ring();
  // Formal roots y_j become y_j + l.
  TruncatedSeries shift = TruncatedSeries::variable(ring, {"t"}, ring->nilpotency_bound(), 0);
  shift.add(Exponents{0}, l);
  std::vector<Elem> classes = transported_elementary(shift, e.reference_classes());
  return Bundle::from_chern(e.base(), std::move(classes));
}

VirtualBundle VirtualBundle::of(const Bundle& b) { return {b, Bundle::trivial(b.base(), 0)}; }

VirtualBundle operator+(const VirtualBundle& a, const VirtualBundle& b) {
  return {bundle_sum(a.plus, b.plus), bundle_sum(a.minus, b.minus)};
}

// ---------------------------------------------------------------------------
// Space

SpacePtr Space::point(const Theory& theory) {
  auto s = std::shared_ptr<Space>(new Space());
  s->theory_ = theory;
  s->ring_ = theory.point_ring();
  return s;
}

SpacePtr Space::proj_bundle(const SpacePtr& base, const Bundle& e, const std::string& generator) {
  if (e.base() != base) fail(ErrorCode::base_mismatch, "bundle " + e.describe() + " is not on " + base->label());
  const int r = e.rank();
  if (r < 1) fail(ErrorCode::degenerate_bundle, "projective bundle of a rank-0 bundle");
  // h^r = sum_{i=1..r} (-1)^(i+1) c_i h^(r-i).
  std::vector<Elem> lower(static_cast<std::size_t>(r), Elem(base->ring()));
  for (int i = 1; i <= r; ++i) {
    Elem c = e.reference_chern(i);
    lower[static_cast<std::size_t>(r - i)] = i % 2 == 1 ? c : -c;
  }
  auto s = std::shared_ptr<Space>(new Space());
  s->theory_ = base->theory_;
  s->ring_ = CohRing::adjoin(base->ring(), generator, lower);
  s->base_ = base;
  s->bundle_ = e;
  s->generator_ = generator;
  return s;
}

SpacePtr Space::projective_space(int n, const Theory& theory, const std::string& generator) {
  if (n < 0) fail(ErrorCode::range, "projective space dimension must be >= 0");
  SpacePtr pt = point(theory);
  return proj_bundle(pt, Bundle::trivial(pt, n + 1), generator);
}

Elem Space::generator() const {
  if (is_point()) fail(ErrorCode::presentation, "a point has no generator");
  return Elem::generator(ring_, ring_->ngens() - 1);
}

int Space::dimension() const { return ring_->nilpotency_bound(); }

std::string Space::label() const {
  std::lock_guard lock(mutex_);
  if (!label_.empty()) return label_;
  if (is_point()) return "pt";
  bool trivial = true;
  for (const auto& c : bundle_.reference_classes()) trivial = trivial && c.is_zero();
  if (trivial && base_->is_point()) return "P" + std::to_string(bundle_.rank() - 1);
  return "P(" + bundle_.describe() + ")";
}

void Space::set_label(std::string label) const {
  std::lock_guard lock(mutex_);
  label_ = std::move(label);
}

std::shared_ptr<const DualityData> Space::cached_duality(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = duality_.find(key);
  return it == duality_.end() ? nullptr : it->second;
}

void Space::store_duality(const std::string& key, std::shared_ptr<const DualityData> data) const {
  std::lock_guard lock(mutex_);
  duality_.emplace(key, std::move(data));
}

// ---------------------------------------------------------------------------
// Derived bundles

Bundle tautological_sub(const SpacePtr& p) {
  if (p->is_point()) fail(ErrorCode::presentation, "a point has no tautological bundle");
  return Bundle::line(p, p->generator());
}

Bundle universal_quotient(const SpacePtr& p) {
  if (p->is_point()) fail(ErrorCode::presentation, "a point has no universal quotient");
  const RingPtr& r = p->ring();
  const int rank = p->bundle_rank();
  Elem total = p->bundle().pullback(p).reference_total() * (Elem::constant(r, Rational(1)) + p->generator()).inverse();
  std::vector<Elem> classes;
  for (int k = 1; k < rank; ++k) classes.push_back(total.weight_part(k));
  Elem tail = total - Elem::constant(r, Rational(1));
  for (const auto& c : classes) tail -= c;
  if (!tail.is_zero())
    fail(ErrorCode::internal_invariant, "c(E)/(1+h) has a tail beyond the rank on " + p->label() + ": " + tail.str());
  return Bundle::from_chern(p, std::move(classes));
}

Bundle relative_tangent(const SpacePtr& p) {
  return bundle_tensor_line(universal_quotient(p), bundle_dual(tautological_sub(p)));
}

SpacePtr projective_completion(const Bundle& e, const std::string& generator) {
  return Space::proj_bundle(e.base(), bundle_sum(e, Bundle::trivial(e.base(), 1)), generator);
}

// ---------------------------------------------------------------------------
// Embedding

Embedding::Embedding(std::string name, SpacePtr source, SpacePtr target, Substitution restrict_map, Lift lift_map,
                     Fdl fdl_map, Bundle normal)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      restrict_(std::move(restrict_map)),
      lift_(std::move(lift_map)),
      fdl_(std::move(fdl_map)),
      normal_(std::move(normal)) {
  auto bad = [&](const std::string& why) { fail(ErrorCode::invalid_embedding, "embedding " + name_ + ": " + why); };
  if (restrict_.source() != target_->ring() || restrict_.target() != source_->ring())
    bad("restriction map has the wrong rings");
  if (normal_.base() != source_) bad("normal bundle is not on the source");
  if (!restrict_.respects_relations()) bad("restriction is not a ring map");
  const RingPtr& zr = source_->ring();
  const RingPtr& xr = target_->ring();
  for (const auto& b : zr->basis()) {
    Elem z = Elem::monomial(zr, b, Rational(1));
    if (!(restrict(lift(z)) == z)) bad("restrict(lift(" + z.str() + ")) != " + z.str());
  }
  const Elem f = fdl(target_->theory().identity());
  if (!f.is_homogeneous() || (!f.is_zero() && f.weight() != codim()))
    bad("fundamental class " + f.str() + " is not of weight " + std::to_string(codim()));
  for (const auto& b : xr->basis()) {
    Elem x = Elem::monomial(xr, b, Rational(1));
    Elem k = x - lift(restrict(x));
    if (!(f * k).is_zero()) bad("fundamental class does not annihilate " + k.str());
  }
  if (!(restrict(f) == normal_.reference_chern(codim())))
    bad("restrict(fdl) = " + restrict(f).str() + " but c_top(normal) = " + normal_.reference_chern(codim()).str());
}

Embedding embed_zero_section(const Bundle& e, const std::string& generator) {
  const SpacePtr x = e.base();
  const SpacePtr p = projective_completion(e, generator);
  std::vector<Elem> images;
  for (std::size_t j = 0; j < x->ring()->ngens(); ++j) images.push_back(Elem::generator(x->ring(), j));
  images.push_back(Elem(x->ring()));
  Substitution restrict(p->ring(), x->ring(), images);
  auto lift = [p](const Elem& z) { return z.in(p->ring()); };
  const int n = e.rank();
  auto fdl = [p, n](const Orientation& o) { return chern(n, universal_quotient(p), o); };
  return Embedding("zero_section", x, p, restrict, lift, fdl, e);
}

namespace {

bool is_trivial(const Bundle& e) {
  for (const auto& c : e.reference_classes())
    if (!c.is_zero()) return false;
  return true;
}

}  // namespace

Embedding embed_linear(const SpacePtr& small, const SpacePtr& large) {
  if (small->is_point() || large->is_point() ||
      (small->base() != large->base() && !(small->base()->is_point() && large->base()->is_point())))
    fail(ErrorCode::invalid_embedding, "linear embedding needs two projective bundles over one base");
  if (!is_trivial(small->bundle()) || !is_trivial(large->bundle()))
    fail(ErrorCode::invalid_embedding, "linear embedding needs trivial bundles");
  const int m = small->bundle_rank() - 1, n = large->bundle_rank() - 1;
  if (m > n) fail(ErrorCode::range, "linear embedding P" + std::to_string(m) + " into P" + std::to_string(n));
  const RingPtr& zr = small->ring();
  const RingPtr& xr = large->ring();
  std::vector<Elem> down, up;
  for (std::size_t j = 0; j < xr->ngens(); ++j) {
    down.push_back(Elem::generator(zr, j));
    up.push_back(Elem::generator(xr, j));
  }
  Substitution restrict(xr, zr, down);
  // Monomial-wise h^j -> h^j; a module map, not a ring map.
  Substitution lift_map(zr, xr, up);
  auto lift = [lift_map](const Elem& z) { return lift_map(z); };
  const SpacePtr big = large;
  auto fdl = [big, m, n](const Orientation& o) { return o.apply(-big->generator()).pow(n - m); };
  std::vector<Elem> roots(static_cast<std::size_t>(n - m), -small->generator());
  return Embedding("linear", small, large, restrict, lift, fdl, Bundle::from_roots(small, roots));
}

Embedding embed_diagonal(const SpacePtr& p, const std::string& generator) {
  if (p->is_point()) fail(ErrorCode::invalid_embedding, "diagonal of a point");
  const SpacePtr k = Space::proj_bundle(p, p->bundle().pullback(p), generator);
  const RingPtr& pr = p->ring();
  std::vector<Elem> images;
  for (std::size_t j = 0; j < pr->ngens(); ++j) images.push_back(Elem::generator(pr, j));
  images.push_back(p->generator());
  Substitution restrict(k->ring(), pr, images);
  auto lift = [k](const Elem& z) { return z.in(k->ring()); };
  const int r = p->bundle_rank();
  auto fdl = [p, k, r](const Orientation& o) {
    Bundle dual1 = bundle_dual(tautological_sub(p)).pullback(k);
    return chern(r - 1, bundle_tensor_line(universal_quotient(k), dual1), o);
  };
  return Embedding("diagonal", p, k, restrict, lift, fdl, relative_tangent(p));
}

Embedding embed_compose(const Embedding& inner, const Embedding& outer) {
  if (inner.target() != outer.source())
    fail(ErrorCode::invalid_embedding, "cannot compose " + inner.name() + " with " + outer.name() +
                                           ": target and source differ");
  const Substitution& r1 = inner.restriction_map();
  const Substitution& r2 = outer.restriction_map();
  std::vector<Elem> images;
  for (const auto& im : r2.images()) images.push_back(r1(im));
  Substitution restrict(outer.target()->ring(), inner.source()->ring(), images);
  auto lift = [inner, outer](const Elem& z) { return outer.lift(inner.lift(z)); };
  auto fdl = [inner, outer](const Orientation& o) { return outer.lift(inner.fdl(o)) * outer.fdl(o); };
  Bundle normal = bundle_sum(inner.normal(), outer.normal().restricted(r1, inner.source()));
  return Embedding(outer.name() + "." + inner.name(), inner.source(), outer.target(), restrict, lift, fdl,
                   normal);
}

Embedding embed_identity(const SpacePtr& s) {
  auto lift = [](const Elem& z) { return z; };
  const RingPtr r = s->ring();
  auto fdl = [r](const Orientation&) { return Elem::constant(r, Rational(1)); };
  return Embedding("identity", s, s, Substitution::identity(r), lift, fdl, Bundle::trivial(s, 0));
}

}  // namespace orr
