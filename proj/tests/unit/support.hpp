#pragma once

// Random test data shared by the unit tests. Every generator takes an
// explicit engine so failures reproduce from the seed.

#include <optional>
#include <random>
#include <vector>

#include "orr/error.hpp"
#include "orr/ring.hpp"
#include "orr/space.hpp"

namespace orr::test {

using Rng = std::mt19937;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rational small_rational(Rng& rng) {
  const int num = uniform(rng, -4, 4);
  const int den = uniform(rng, 1, 3);
  return Rational(num, den);
}

/// Random element built from a few random monomials in the normal-form basis
/// times coefficient monomials of weight in [-2, 0].
inline Elem random_elem(const RingPtr& r, Rng& rng, int terms = 4) {
  const auto basis = r->basis();
  const auto& c = *r->coeffs();
  Elem out(r);
  for (int t = 0; t < terms; ++t) {
    Exponents e = basis[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(basis.size()) - 1))];
    if (c.size() > 0 && uniform(rng, 0, 2) == 0) {
      const std::size_t s = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(c.size()) - 1));
      e[s] += c.kind() == CoeffRing::Kind::laurent_beta ? uniform(rng, -1, 2) : 1;
    }
    out += Elem::monomial(r, e, small_rational(rng));
  }
  return out;
}

/// Random homogeneous weight-w element of generator-degree >= 1.
inline Elem random_homogeneous(const RingPtr& r, Rng& rng, int w) {
  Elem out(r);
  for (const auto& b : r->basis()) {
    const int d = r->generator_degree(b);
    if (d < 1 || d < w || uniform(rng, 0, 1) == 0) continue;
    const int need = w - d;  // coefficient weight
    if (need == 0) {
      out += Elem::monomial(r, b, small_rational(rng));
    } else if (r->coeffs()->kind() == CoeffRing::Kind::laurent_beta) {
      Exponents e = b;
      e[0] = -need;
      out += Elem::monomial(r, e, small_rational(rng));
    }
  }
  return out;
}

/// Code of the orr::Error raised by f, or nothing.
template <class F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace orr::test
