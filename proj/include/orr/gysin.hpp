#pragma once

// Gysin pushforwards along closed immersions, projective-bundle projections
// and their composites.

#include <memory>
#include <string>
#include <vector>

#include "orr/classes.hpp"
#include "orr/space.hpp"

namespace orr {

/// P x_X P for P = P(E) over X: P(E pulled back to P). Generators: h1 is P's
/// generator, h2 the new one.
struct KunnethSquare {
  SpacePtr p;
  SpacePtr square;
};

KunnethSquare kunneth_square(const SpacePtr& p);

/// Diagonal class: top Chern class of lambda_1^dual (x) xi_2, computed by
/// formal roots and symmetric reduction.
Elem diagonal_class(const KunnethSquare& k, const Orientation& o);

using Matrix = std::vector<std::vector<Elem>>;

struct DualityData {
  /// diag = sum C[i][j] h1^i h2^j with C[i][j] in the base ring.
  Matrix c;
  Matrix c_inverse;
};

/// Computes (or fetches from the space's cache) the duality data of P -> X.
/// Asserts the triangularity invariant (see duality_triangularity).
std::shared_ptr<const DualityData> duality_matrix(const SpacePtr& p, const Orientation& o);

/// M[i][k] = (-1)^(i + r - 1 - k) C[i][r - 1 - k], the matrix of the diagonal
/// in the bases h1^i and (-h2)^(r-1-k).
Matrix zeta_matrix(const Matrix& c);

struct Triangularity {
  bool unit_diagonal = true;
  bool lower = true;  // entries above the diagonal vanish
  bool upper = true;  // entries below the diagonal vanish
  // The same two properties modulo the augmentation ideal of the base.
  bool filtered_unit_diagonal = true;
  bool filtered_lower = true;

  bool strict() const { return unit_diagonal && (lower || upper); }
  bool filtered() const { return filtered_unit_diagonal && filtered_lower; }
};

Triangularity duality_triangularity(const Matrix& c);

/// Inverse of a square matrix over a ring by Gauss-Jordan with unit pivots
/// (raises not_a_unit if none exists).
Matrix invert(const Matrix& m);

/// i_*(z) = lift(z) * fdl.
Elem pushforward_embedding(const Embedding& e, const Elem& z, const Orientation& o);

/// p_*(alpha) for P -> base: solve x C = coordinates(alpha), return x_0.
Elem pushforward_projection(const SpacePtr& p, const Elem& alpha, const Orientation& o);

/// f_* = p_* i_* for i into P and P -> base.
Elem pushforward_lci(const Embedding& i, const SpacePtr& p, const Elem& y, const Orientation& o);

/// Pushforward to the point along the whole tower of a space.
Elem pushforward_to_point(const SpacePtr& s, const Elem& alpha, const Orientation& o);

struct SelfIntersection {
  Elem lhs;  // restrict(i_*(1))
  Elem rhs;  // euler(normal)
  bool passed() const { return lhs == rhs; }
};

SelfIntersection self_intersection_check(const Embedding& e, const Orientation& o);

}  // namespace orr
