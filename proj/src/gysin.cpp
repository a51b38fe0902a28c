#include "orr/gysin.hpp"

namespace orr {

KunnethSquare kunneth_square(const SpacePtr& p) {
  if (p->is_point()) fail(ErrorCode::presentation, "Kunneth square of a point");
  std::string name = p->generator_name() + "_2";
  while (p->ring()->find_generator(name) >= 0) name += "_2";
  return {p, Space::proj_bundle(p, p->bundle().pullback(p), name)};
}

Elem diagonal_class(const KunnethSquare& k, const Orientation& o) {
  const Bundle dual1 = bundle_dual(tautological_sub(k.p)).pullback(k.square);
  return top_chern_line_tensor(dual1, universal_quotient(k.square), o);
}

Matrix zeta_matrix(const Matrix& c) {
  const std::size_t r = c.size();
  Matrix m(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) {
      const Elem& v = c[i][r - 1 - k];
      m[i].push_back((i + r - 1 - k) % 2 == 0 ? v : -v);
    }
  return m;
}

Triangularity duality_triangularity(const Matrix& c) {
  const Matrix m = zeta_matrix(c);
  Triangularity t;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Elem& v = m[i][k];
      const Elem one = Elem::constant(v.ring(), Rational(1));
      if (i == k) {
        t.unit_diagonal = t.unit_diagonal && v == one;
        t.filtered_unit_diagonal = t.filtered_unit_diagonal && v.constant_part() == one;
      } else if (k > i) {
        t.lower = t.lower && v.is_zero();
        t.filtered_lower = t.filtered_lower && v.in_augmentation();
      } else {
        t.upper = t.upper && v.is_zero();
      }
    }
  return t;
}

Matrix invert(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  const RingPtr r = m[0][0].ring();
  Matrix a = m;
  Matrix inv(n, std::vector<Elem>(n, Elem(r)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Elem::constant(r, Rational(1));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && !a[piv][col].is_unit()) ++piv;
    if (piv == n) fail(ErrorCode::not_a_unit, "matrix has no unit pivot in column " + std::to_string(col));
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Elem u = a[col][col].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * u;
      inv[col][j] = inv[col][j] * u;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      const Elem f = a[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[row][j] -= f * a[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

std::shared_ptr<const DualityData> duality_matrix(const SpacePtr& p, const Orientation& o) {
  if (auto cached = p->cached_duality(o.key())) return cached;
  const KunnethSquare k = kunneth_square(p);
  const Elem diag = diagonal_class(k, o);
  const std::size_t r = static_cast<std::size_t>(p->bundle_rank());
  auto d = std::make_shared<DualityData>();
  d->c.assign(r, std::vector<Elem>(r, Elem(p->base()->ring())));
  const auto by_h2 = diag.coordinates();
  for (std::size_t j = 0; j < r; ++j) {
    const auto by_h1 = by_h2[j].coordinates();
    for (std::size_t i = 0; i < r; ++i) d->c[i][j] = by_h1[i];
  }
  const Triangularity t = duality_triangularity(d->c);
  if (!t.filtered())
    fail(ErrorCode::internal_invariant, "duality matrix of " + p->label() + " under " + o.name() +
                                            " is not unitriangular modulo the base augmentation");
  d->c_inverse = invert(d->c);
  p->store_duality(o.key(), d);
  return d;
}

Elem pushforward_embedding(const Embedding& e, const Elem& z, const Orientation& o) {
  return e.lift(z) * e.fdl(o);
}

Elem pushforward_projection(const SpacePtr& p, const Elem& alpha, const Orientation& o) {
  if (p->is_point()) fail(ErrorCode::presentation, "pushforward from a point");
  const auto d = duality_matrix(p, o);
  const auto a = alpha.in(p->ring()).coordinates();
  Elem x0(p->base()->ring());
  for (std::size_t j = 0; j < a.size(); ++j) x0 += a[j] * d->c_inverse[j][0];
  return x0;
}

Elem pushforward_lci(const Embedding& i, const SpacePtr& p, const Elem& y, const Orientation& o) {
  if (i.target() != p) fail(ErrorCode::base_mismatch, "embedding " + i.name() + " does not land in " + p->label());
  return pushforward_projection(p, pushforward_embedding(i, y, o), o);
}

Elem pushforward_to_point(const SpacePtr& s, const Elem& alpha, const Orientation& o) {
  Elem x = alpha.in(s->ring());
  for (SpacePtr cur = s; !cur->is_point(); cur = cur->base()) x = pushforward_projection(cur, x, o);
  return x;
}

SelfIntersection self_intersection_check(const Embedding& e, const Orientation& o) {
  const Elem one = Elem::constant(e.source()->ring(), Rational(1));
  return {e.restrict(pushforward_embedding(e, one, o)), euler(e.normal(), o)};
}

}  // namespace orr
