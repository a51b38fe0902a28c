#pragma once

// Riemann-Roch checks between two orientations of one theory.

#include <functional>
#include <string>
#include <vector>

#include "orr/gysin.hpp"

namespace orr {

struct OrientationPair {
  Orientation first;
  Orientation second;
  TruncatedSeries phi;  // first o second^-1

  std::string name() const { return first.name() + "/" + second.name(); }
};

OrientationPair make_pair(const Orientation& theta1, const Orientation& theta2);

/// [restrict of T_p along i] - [N_i] on the source of i.
VirtualBundle virtual_tangent(const Embedding& i, const SpacePtr& p);

/// One exact-equality verdict.
struct CheckReport {
  std::string check;
  std::string space;
  std::string orientation;
  std::string subject;  // the class the check was run on
  Elem lhs;
  Elem rhs;
  bool passed() const { return lhs == rhs; }
};

/// i^(1)_*(z) = i^(2)_*(td(-N) z).
CheckReport verify_rr_closed(const OrientationPair& pair, const Embedding& e, const Elem& z);
/// p^(1)_*(alpha) = p^(2)_*(td(T_p) alpha).
CheckReport verify_rr_projection(const OrientationPair& pair, const SpacePtr& p, const Elem& alpha);
/// f^(1)_*(y) = f^(2)_*(td(tau_f) y) for f = p o i.
CheckReport verify_grr_lci(const OrientationPair& pair, const Embedding& i, const SpacePtr& p, const Elem& y);

/// Euler characteristic of O(d) on P^n from the multiplicative pushforward.
Rational hrr_number(int n, int d);

/// Every check of the Riemann-Roch sweep for a theory, up to projective
/// dimension max_dim. Tasks run on `threads` workers; the result order does
/// not depend on the thread count.
std::vector<CheckReport> grr_sweep(const Theory& theory, int max_dim, unsigned threads = 1);

/// Runs independent tasks on up to `threads` workers, collecting results in
/// task order.
std::vector<CheckReport> run_tasks(const std::vector<std::function<CheckReport()>>& tasks, unsigned threads);

/// Worker count from ORIENT_RR_THREADS (default 1).
unsigned default_threads();

}  // namespace orr
