#pragma once

// Reduction of symmetric power series in y_1..y_n to polynomials in the
// elementary symmetric functions e_1..e_n.

#include <cstddef>
#include <string>
#include <vector>

#include "orr/series.hpp"

namespace orr {

/// Variable names y1..yn.
std::vector<std::string> root_variables(std::size_t n);

/// e_k(y_1..y_n) as a series over `ring`.
TruncatedSeries elementary_symmetric(const RingPtr& ring, std::size_t n, std::size_t k, int order);

/// Writes a symmetric series P(y_1..y_n) as Q(e_1..e_n) (variables e1..en,
/// same order; e_k counts as degree 1 in the result). Raises
/// symmetry_violation if P is not invariant under adjacent transpositions.
TruncatedSeries symmetric_reduce(const TruncatedSeries& p);

/// Q(c_1..c_n) for Q from symmetric_reduce, where c_k are the values of the
/// elementary symmetric functions. Each c_k must have generator-degree >= k,
/// which makes dropping y-degrees beyond the series order exact.
Elem evaluate_elementary(const TruncatedSeries& q, const std::vector<Elem>& values);

/// Formal-root transport. `classes` are the elementary symmetric values
/// c_1..c_n of formal roots y_1..y_n and g is univariate. Returns
/// e_k(g(y_1), ..., g(y_n)) for k = 1..n.
std::vector<Elem> transported_elementary(const TruncatedSeries& g, const std::vector<Elem>& classes);
/// prod_j g(y_j).
Elem transported_product(const TruncatedSeries& g, const std::vector<Elem>& classes);

}  // namespace orr
