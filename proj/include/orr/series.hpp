#pragma once

// Truncated multivariate power series with coefficients in a CohRing
// (usually the coefficient ring of a theory, i.e. a point ring).

#include <map>
#include <string>
#include <vector>

#include "orr/ring.hpp"

namespace orr {

/// Graded order on series exponents: total degree, then lexicographic.
struct SeriesOrder {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class TruncatedSeries {
 public:
  using Coefficients = std::map<Exponents, Elem, SeriesOrder>;

  TruncatedSeries() = default;
  TruncatedSeries(RingPtr ring, std::vector<std::string> variables, int order);

  static TruncatedSeries variable(RingPtr ring, std::vector<std::string> variables, int order, std::size_t index);
  static TruncatedSeries constant(RingPtr ring, std::vector<std::string> variables, int order, const Elem& c);
  /// f(t) = sum_k coeffs[k] t^k in a single variable.
  static TruncatedSeries univariate(RingPtr ring, int order, const std::vector<Elem>& coeffs,
                                    const std::string& var = "t");
  static TruncatedSeries univariate(RingPtr ring, int order, const std::vector<Rational>& coeffs,
                                    const std::string& var = "t");

  const RingPtr& ring() const { return ring_; }
  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  int order() const { return order_; }
  const Coefficients& coefficients() const { return coeffs_; }

  Elem coefficient(const Exponents& e) const;
  /// Univariate coefficient of t^k.
  Elem coefficient(int k) const;
  /// Adds c to the coefficient of e (ignored beyond the order).
  void add(const Exponents& e, const Elem& c);

  bool is_zero() const { return coeffs_.empty(); }
  Elem constant_term() const;

  TruncatedSeries operator-() const;
  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const Elem& c);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(TruncatedSeries a, const Elem& c) { return a *= c; }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

  /// Same series cut at a lower order.
  TruncatedSeries truncated(int order) const;
  /// Coefficients moved into a ring containing the current one.
  TruncatedSeries in(const RingPtr& ring) const;
  /// Variables renamed (same count).
  TruncatedSeries renamed(std::vector<std::string> variables) const;

  /// Univariate f(t)/t for f(0) = 0; the result is known to order - 1.
  TruncatedSeries divided_by_variable() const;
  /// 1/f for a univariate series whose constant term is a unit.
  TruncatedSeries reciprocal() const;

  bool is_homogeneous_of_weight(int w) const;

  std::string str() const;

 private:
  RingPtr ring_;
  std::vector<std::string> vars_;
  int order_ = 0;
  Coefficients coeffs_;
};

/// f(g(t)) for univariate f, g with g(0) = 0.
TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g);

/// f(g_1, ..., g_k) where f has k variables and every g_i has zero constant
/// term; all g_i share one variable list and the result is cut at the
/// smallest order involved.
TruncatedSeries substitute(const TruncatedSeries& f, const std::vector<TruncatedSeries>& args);

/// Compositional inverse of a univariate f with f(0) = 0 and unit linear term.
TruncatedSeries series_reverse(const TruncatedSeries& f);

/// Exact value of f(args) for args in the augmentation ideal of a CohRing.
/// Raises truncation_unsound if the series order is below the ring's
/// nilpotency bound.
Elem evaluate_at_nilpotents(const TruncatedSeries& f, const std::vector<Elem>& args);

/// Common series used by orientations and tests.
TruncatedSeries exp_series(const RingPtr& ring, int order, const Elem& scale);        // exp(scale t) - 1 + 1
TruncatedSeries log1p_series(const RingPtr& ring, int order, const Elem& scale);      // log(1 + scale t)

}  // namespace orr
