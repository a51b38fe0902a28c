#include <doctest.h>

#include "orr/rr.hpp"
#include "support.hpp"

using namespace orr;
using orr::test::error_code_of;
using orr::test::Rng;
using orr::test::uniform;

namespace {

Elem one(const RingPtr& r) { return Elem::constant(r, Rational(1)); }

Bundle random_chern_bundle(const SpacePtr& s, Rng& rng) {
  const int rank = uniform(rng, 1, 3);
  const Elem h = s->generator();
  std::vector<Elem> cs;
  for (int k = 1; k <= rank; ++k) cs.push_back(h.pow(k) * Rational(uniform(rng, -2, 2)));
  return Bundle::from_chern(s, cs);
}

Bundle random_split_bundle(const SpacePtr& s, Rng& rng) {
  const int rank = uniform(rng, 1, 3);
  std::vector<Elem> roots;
  for (int k = 0; k < rank; ++k) roots.push_back(s->generator() * Rational(uniform(rng, -2, 2)));
  return Bundle::from_roots(s, roots);
}

}  // namespace

TEST_CASE("Chern classes of split bundles are elementary functions of theta(roots)") {
  const Theory t = Theory::universal(3);
  const SpacePtr p3 = Space::projective_space(3, t);
  const Elem h = p3->generator();
  const Bundle e = Bundle::from_roots(p3, {h, -h * Rational(2), h * Rational(3)});
  for (const auto& o : t.orientations()) {
    const Elem a = o.apply(h), b = o.apply(-h * Rational(2)), c = o.apply(h * Rational(3));
    CHECK(chern(1, e, o) == a + b + c);
    CHECK(chern(2, e, o) == a * b + a * c + b * c);
    CHECK(chern(3, e, o) == a * b * c);
    CHECK(euler(e, o) == a * b * c);
    CHECK(chern(4, e, o).is_zero());
    CHECK(chern(0, e, o) == one(p3->ring()));
    // The same bundle given by Chern data goes through the transport route.
    const Bundle d = Bundle::from_chern(p3, e.reference_classes());
    CHECK(chern_classes(d, o) == chern_classes(e, o));
  }
}

TEST_CASE("first Chern class of a tensor product follows the law") {
  const Theory t = Theory::multiplicative();
  const SpacePtr p2 = Space::projective_space(2, t);
  const Elem h = p2->generator();
  const Elem beta = Elem::symbol(p2->ring(), "beta");
  const Bundle o1 = Bundle::line(p2, -h);
  const Orientation& m = t.orientation("mult");
  // O(2): theta(-2h) = (1 - exp(2 beta h)) / beta = -2h - 2 beta h^2 on P^2.
  CHECK(c1_tensor(o1, o1, m) == -h * Rational(2) - beta * h * h * Rational(2));
  CHECK(c1_tensor(o1, o1, m) == chern(1, bundle_tensor_line(o1, o1), m));
  CHECK(c1_tensor(o1, o1, t.identity()) == -h * Rational(2));
  CHECK(error_code_of([&] { c1_tensor(o1, Bundle::trivial(p2, 2), m); }) == ErrorCode::arity);
}

TEST_CASE("Whitney formula on random bundles over P^3") {
  Rng rng(101);
  for (const Theory& t : {Theory::multiplicative(), Theory::universal(2)}) {
    const SpacePtr p3 = Space::projective_space(3, t);
    for (int i = 0; i < 12; ++i) {
      const Bundle a = uniform(rng, 0, 1) ? random_chern_bundle(p3, rng) : random_split_bundle(p3, rng);
      const Bundle b = uniform(rng, 0, 1) ? random_chern_bundle(p3, rng) : random_split_bundle(p3, rng);
      for (const auto& o : t.orientations())
        CHECK(total_chern(bundle_sum(a, b), o) == total_chern(a, o) * total_chern(b, o));
    }
  }
}

TEST_CASE("top Chern class of a line twist: law route against the tensor bundle") {
  Rng rng(17);
  const Theory t = Theory::universal(3);
  const SpacePtr p3 = Space::projective_space(3, t);
  for (int i = 0; i < 10; ++i) {
    const Bundle e = uniform(rng, 0, 1) ? random_chern_bundle(p3, rng) : random_split_bundle(p3, rng);
    const Bundle l = Bundle::line(p3, p3->generator() * Rational(uniform(rng, -2, 2)));
    for (const auto& o : t.orientations())
      CHECK(top_chern_line_tensor(l, e, o) == chern(e.rank(), bundle_tensor_line(e, l), o));
  }
}

TEST_CASE("Thom class equals the top Chern class of the universal quotient") {
  for (const Theory& t : {Theory::additive(), Theory::multiplicative(), Theory::universal(3)}) {
    const SpacePtr p1 = Space::projective_space(1, t);
    const Elem h = p1->generator();
    for (const Bundle& e : {Bundle::from_roots(p1, {h}), Bundle::from_roots(p1, {h, -h}),
                            Bundle::from_chern(p1, {h * Rational(3), Elem(p1->ring())})}) {
      const SpacePtr c = projective_completion(e, "g");
      for (const auto& o : t.orientations())
        CHECK(thom(e, c, o) == chern(e.rank(), universal_quotient(c), o));
    }
    const Bundle e = Bundle::from_roots(p1, {h});
    CHECK(error_code_of([&] { thom(e, Space::projective_space(2, t), t.identity()); }) == ErrorCode::base_mismatch);
  }
}

TEST_CASE("Todd class: classical series and multiplicativity") {
  const Theory t = Theory::multiplicative(10);
  const SpacePtr p3 = Space::projective_space(3, t);
  const RingPtr& r = p3->ring();
  const RingPtr& pt = t.point_ring();
  const Elem h = p3->generator();
  const Elem beta = Elem::symbol(pt, "beta");
  const OrientationPair pair = make_pair(t.orientation("mult"), t.identity());

  // td(L) = beta x / (1 - exp(-beta x)) at the reference root x.
  const TruncatedSeries one_minus_exp =
      TruncatedSeries::constant(pt, {"t"}, 11, Elem::constant(pt, 1)) - exp_series(pt, 11, -beta);
  const TruncatedSeries q = (one_minus_exp * beta.inverse()).divided_by_variable().reciprocal();
  for (int d = -2; d <= 2; ++d) {
    const Bundle l = Bundle::line(p3, h * Rational(-d));
    CHECK(todd(pair.phi, VirtualBundle::of(l), pair.second) == evaluate_at_nilpotents(q, {h * Rational(-d)}));
  }

  Rng rng(33);
  for (int i = 0; i < 30; ++i) {
    const VirtualBundle v{random_chern_bundle(p3, rng), random_split_bundle(p3, rng)};
    const VirtualBundle w{random_split_bundle(p3, rng), random_chern_bundle(p3, rng)};
    for (const auto& [first, second] : {std::pair{0, 1}, std::pair{1, 0}}) {
      const OrientationPair p = make_pair(t.orientations()[first], t.orientations()[second]);
      const Elem tv = todd(p.phi, v, p.second), tw = todd(p.phi, w, p.second);
      CHECK(todd(p.phi, v + w, p.second) == tv * tw);
      CHECK(todd(p.phi, v.negated(), p.second) * tv == one(r));
    }
  }
  // The identity comparison has trivial Todd class.
  const OrientationPair same = make_pair(t.identity(), t.identity());
  CHECK(todd(same.phi, VirtualBundle::of(relative_tangent(p3)), same.second) == one(r));
}

TEST_CASE("excess class") {
  const Theory t = Theory::multiplicative();
  const SpacePtr pt = Space::point(t);
  std::vector<SpacePtr> proj;
  for (int n = 0; n <= 3; ++n) proj.push_back(Space::proj_bundle(pt, Bundle::trivial(pt, n + 1), "h"));
  const Embedding outer = embed_linear(proj[1], proj[3]);
  const Embedding inner = embed_linear(proj[1], proj[2]);
  const Orientation& m = t.orientation("mult");
  // 2 O(1) / O(1) = O(1).
  CHECK(excess_class(outer, inner, m) == m.apply(-proj[1]->generator()));
  CHECK(error_code_of([&] { excess_class(inner, outer, m); }) == ErrorCode::invalid_excess);
  CHECK(error_code_of([&] { excess_class(outer, embed_linear(proj[0], proj[1]), m); }) == ErrorCode::invalid_excess);
}
