#pragma once

// Coefficient rings and finitely presented graded cohomology rings.
//
// Every ring shares one monomial layout: exponents of the coefficient
// symbols (beta, or b1..bk) come first, followed by the exponents of the
// space generators h_1..h_m in the order they were adjoined. Weights: beta
// has weight -1, b_i has weight -i, every generator has weight 1.
//
// Generators are adjoined one at a time with a monic relation
//     h^d = a_{d-1} h^{d-1} + ... + a_0,   a_k in the previous ring,
// so reduction is triangular and the normal form (all generator exponents
// below their relation degrees) is unique.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "orr/error.hpp"
#include "orr/rational.hpp"

namespace orr {

using Exponents = boost::container::small_vector<int, 8>;

class CoeffRing;
class CohRing;
class Elem;
using CoeffRingPtr = std::shared_ptr<const CoeffRing>;
using RingPtr = std::shared_ptr<const CohRing>;

class CoeffRing {
 public:
  enum class Kind { rationals, laurent_beta, truncated_universal };

  static CoeffRingPtr rationals();
  /// Q[beta, beta^-1]; exponents outside [min_exponent, max_exponent] raise
  /// beta_window instead of being dropped.
  static CoeffRingPtr laurent_beta(int min_exponent = -64, int max_exponent = 64);
  /// Q[b1..bk] modulo every monomial of weight magnitude > max_weight.
  static CoeffRingPtr truncated_universal(int k, int max_weight);

  Kind kind() const { return kind_; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  int symbol_weight(std::size_t i) const { return weights_[i]; }
  int max_weight() const { return max_weight_; }
  int universal_rank() const { return kind_ == Kind::truncated_universal ? static_cast<int>(size()) : 0; }
  int beta_min() const { return beta_min_; }
  int beta_max() const { return beta_max_; }

  /// Index of a symbol, or -1.
  int find(const std::string& name) const;

  /// Applies the defining relation of the ring to the coefficient part of a
  /// monomial. Returns false if the monomial is zero in this ring; throws
  /// beta_window if a Laurent exponent leaves the window.
  bool admissible(const Exponents& e) const;

  /// Weight of the coefficient part of a monomial.
  int weight(const Exponents& e) const;

  std::string name() const;

  friend bool operator==(const CoeffRing& a, const CoeffRing& b);

 private:
  CoeffRing() = default;

  Kind kind_ = Kind::rationals;
  std::vector<std::string> symbols_;
  std::vector<int> weights_;
  int max_weight_ = 0;
  int beta_min_ = 0;
  int beta_max_ = 0;
};

/// Monomial order used for storage and display: generator part compared
/// graded-lexicographically, then the coefficient part lexicographically.
struct TermOrder {
  std::size_t ncoeff = 0;
  bool operator()(const Exponents& a, const Exponents& b) const;
};

using Terms = std::map<Exponents, Rational, TermOrder>;

class CohRing : public std::enable_shared_from_this<CohRing> {
 public:
  struct Generator {
    std::string name;
    int degree = 1;
    // h^degree = sum of these terms (already in normal form, full layout).
    std::vector<std::pair<Exponents, Rational>> relation;
  };

  static RingPtr point(CoeffRingPtr coeffs);

  /// Adjoins a generator `name` with relation h^d = sum_k lower[k] h^k,
  /// where d = lower.size() and every lower[k] lies in `base`.
  static RingPtr adjoin(const RingPtr& base, const std::string& name, const std::vector<Elem>& lower);

  const CoeffRingPtr& coeffs() const { return coeffs_; }
  const RingPtr& parent() const { return parent_; }
  std::size_t ncoeff() const { return coeffs_->size(); }
  std::size_t ngens() const { return gens_.size(); }
  std::size_t nvars() const { return ncoeff() + ngens(); }
  const Generator& generator(std::size_t j) const { return gens_[j]; }
  const std::vector<Generator>& generators() const { return gens_; }
  bool is_point() const { return gens_.empty(); }

  /// Index of a generator by name, or -1.
  int find_generator(const std::string& name) const;

  /// Sum over generators of (degree - 1): every element of the augmentation
  /// ideal raised to a power beyond this vanishes.
  int nilpotency_bound() const;

  /// Rank as a free module over the coefficient ring (product of degrees).
  std::size_t rank() const;

  /// Normal-form generator monomials (coefficient part zero), graded-lex.
  std::vector<Exponents> basis() const;

  /// True if `sub` is this ring or one of its ancestors (so elements of
  /// `sub` embed by zero-padding exponents).
  bool contains(const CohRing& sub) const;

  Exponents zero_exponents() const { return Exponents(nvars(), 0); }
  TermOrder order() const { return TermOrder{ncoeff()}; }

  /// Reduces an arbitrary polynomial to normal form.
  Terms reduce(Terms raw) const;

  /// Generator-degree of a monomial.
  int generator_degree(const Exponents& e) const;
  /// Weight of a monomial.
  int weight(const Exponents& e) const;

  std::string describe() const;

 private:
  CohRing() = default;

  CoeffRingPtr coeffs_;
  RingPtr parent_;
  std::vector<Generator> gens_;
};

/// Element of a CohRing, always in normal form.
class Elem {
 public:
  Elem() = default;
  explicit Elem(RingPtr ring);

  static Elem constant(RingPtr ring, const Rational& c);
  static Elem generator(RingPtr ring, std::size_t j);
  static Elem generator(RingPtr ring, const std::string& name);
  /// Coefficient symbol raised to `power` (negative powers only for beta).
  static Elem symbol(RingPtr ring, const std::string& name, int power = 1);
  static Elem monomial(RingPtr ring, const Exponents& e, const Rational& c);
  static Elem from_terms(RingPtr ring, Terms raw);

  const RingPtr& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool valid() const { return ring_ != nullptr; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Elem operator-() const;
  Elem& operator+=(const Elem& o);
  Elem& operator-=(const Elem& o);
  Elem& operator*=(const Elem& o);
  Elem& operator*=(const Rational& c);

  friend Elem operator+(Elem a, const Elem& b) { return a += b; }
  friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
  friend Elem operator*(const Elem& a, const Elem& b);
  friend Elem operator*(Elem a, const Rational& c) { return a *= c; }
  friend Elem operator*(const Rational& c, Elem a) { return a *= c; }
  friend bool operator==(const Elem& a, const Elem& b);

  Elem pow(int n) const;

  /// Embeds into a ring containing this element's ring.
  Elem in(const RingPtr& target) const;

  /// Part with generator-degree zero (a coefficient-ring element).
  Elem constant_part() const;
  /// True if every term has generator-degree >= 1.
  bool in_augmentation() const { return constant_part().is_zero(); }
  /// Lowest generator-degree among terms (huge for zero).
  int min_generator_degree() const;

  bool is_homogeneous() const;
  /// Weight of a homogeneous nonzero element.
  int weight() const;
  Elem weight_part(int w) const;

  /// Coordinates along powers of the last generator h: x = sum_k c[k] h^k
  /// with c[k] in the parent ring and k < degree(h).
  std::vector<Elem> coordinates() const;

  bool is_unit() const;
  /// Inverse of a unit: unit constant plus nilpotent remainder.
  Elem inverse() const;

  /// If the element is c * (coefficient monomial), returns true.
  bool is_rational() const;
  Rational rational_value() const;

  std::string str() const;

 private:
  RingPtr ring_;
  Terms terms_;
};

/// Promotes two elements into a common ring (one must contain the other).
RingPtr common_ring(const RingPtr& a, const RingPtr& b);

/// A map E(source) -> E(target) fixing coefficients, defined by the images
/// of the source generators and applied term by term to normal forms. It is
/// a ring map when the images satisfy the source relations (see
/// `respects_relations`), otherwise only a module map.
class Substitution {
 public:
  Substitution() = default;
  Substitution(RingPtr source, RingPtr target, std::vector<Elem> images);

  static Substitution identity(const RingPtr& ring);
  /// Inclusion of `source` into a ring containing it.
  static Substitution inclusion(const RingPtr& source, const RingPtr& target);

  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }
  const std::vector<Elem>& images() const { return images_; }

  Elem operator()(const Elem& x) const;

  bool respects_relations() const;

 private:
  RingPtr source_;
  RingPtr target_;
  std::vector<Elem> images_;
};

}  // namespace orr
