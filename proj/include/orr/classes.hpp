#pragma once

// Characteristic classes for a chosen orientation theta. A line bundle with
// reference root x has c_1 = theta(x); a split bundle has
// c_i = e_i(theta(x_1), ..., theta(x_r)); ChernData bundles go through
// formal roots and symmetric reduction.

#include <vector>

#include "orr/fgl.hpp"
#include "orr/space.hpp"

namespace orr {

Elem chern(int i, const Bundle& e, const Orientation& o);
/// c_1, ..., c_rank.
std::vector<Elem> chern_classes(const Bundle& e, const Orientation& o);
Elem total_chern(const Bundle& e, const Orientation& o);

/// F_theta(c1(L1), c1(L2)), the group-law route to c_1(L1 (x) L2).
Elem c1_tensor(const Bundle& l1, const Bundle& l2, const Orientation& o);

/// Thom class of E in the completion P(E + 1):
///   sum_i c_i(E) (-c_1(lambda))^(n - i).
/// Raises internal_invariant unless it equals c_n of the universal quotient.
Elem thom(const Bundle& e, const SpacePtr& completion, const Orientation& o);

/// Top Chern class.
Elem euler(const Bundle& e, const Orientation& o);

/// prod_i F_theta(c1(L), y_i) over theta-roots y_i of E, by symmetric
/// reduction.
Elem top_chern_line_tensor(const Bundle& line, const Bundle& e, const Orientation& o);

/// c_e of the excess bundle outer.normal / inner.normal on the common source.
Elem excess_class(const Embedding& outer, const Embedding& inner, const Orientation& o);

/// Todd class for a comparison series phi (phi(t) = t + O(t^2)) and target
/// orientation o: td(L) = (t / phi(t))(c1(L)), multiplicative, inverted on
/// the negative part of a virtual bundle.
Elem todd(const TruncatedSeries& phi, const VirtualBundle& v, const Orientation& o);

}  // namespace orr
