#include "orr/symmetric.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace orr {

std::vector<std::string> root_variables(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("y" + std::to_string(i));
  return v;
}

TruncatedSeries elementary_symmetric(const RingPtr& ring, std::size_t n, std::size_t k, int order) {
  TruncatedSeries s(ring, root_variables(n), order);
  if (k > n) return s;
  // Walk all k-subsets of {0..n-1} via a selection mask.
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  const Elem one = Elem::constant(ring, Rational(1));
  do {
    Exponents e(n, 0);
    for (std::size_t i = 0; i < n; ++i) e[i] = mask[i] ? 1 : 0;
    s.add(e, one);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return s;
}

namespace {

void check_symmetric(const TruncatedSeries& p) {
  const std::size_t n = p.nvars();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (const auto& [e, c] : p.coefficients()) {
      Exponents s = e;
      std::swap(s[i], s[i + 1]);
      if (!(p.coefficient(s) == c))
        fail(ErrorCode::symmetry_violation,
             "series is not symmetric under y" + std::to_string(i + 1) + " <-> y" + std::to_string(i + 2));
    }
  }
}

bool lex_less(const Exponents& a, const Exponents& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

TruncatedSeries symmetric_reduce(const TruncatedSeries& p) {
  check_symmetric(p);
  const std::size_t n = p.nvars();
  const RingPtr& ring = p.ring();
  const int order = p.order();
  std::vector<std::string> evars;
  for (std::size_t k = 1; k <= n; ++k) evars.push_back("e" + std::to_string(k));
  TruncatedSeries out(ring, evars, order);
  if (n == 0) {
    out.add(Exponents{}, p.constant_term());
    return out;
  }

  // powers[k][m] = e_{k+1}^m in the y variables.
  std::vector<std::vector<TruncatedSeries>> powers(n);
  auto power = [&](std::size_t k, int m) -> const TruncatedSeries& {
    auto& v = powers[k];
    if (v.empty()) {
      v.push_back(TruncatedSeries::constant(ring, p.variables(), order, Elem::constant(ring, Rational(1))));
    }
    while (static_cast<int>(v.size()) <= m) v.push_back(v.back() * elementary_symmetric(ring, n, k + 1, order));
    return v[static_cast<std::size_t>(m)];
  };

  TruncatedSeries rest = p;
  while (!rest.is_zero()) {
    const auto& terms = rest.coefficients();
    auto lead = terms.begin();
    for (auto it = terms.begin(); it != terms.end(); ++it)
      if (lex_less(lead->first, it->first)) lead = it;
    const Exponents a = lead->first;
    const Elem c = lead->second;
    // The lex-leading exponent of a symmetric series is a partition.
    Exponents m(n, 0);
    TruncatedSeries prod = power(0, 0);
    for (std::size_t k = 0; k < n; ++k) {
      m[k] = a[k] - (k + 1 < n ? a[k + 1] : 0);
      if (m[k] < 0) fail(ErrorCode::internal_invariant, "leading exponent is not a partition");
      if (m[k] > 0) prod = prod * power(k, m[k]);
    }
    out.add(m, c);
    rest -= prod * c;
  }
  return out;
}

Elem evaluate_elementary(const TruncatedSeries& q, const std::vector<Elem>& values) {
  const std::size_t n = q.nvars();
  if (values.size() != n) fail(ErrorCode::presentation, "evaluate_elementary: value count mismatch");
  RingPtr ring = q.ring();
  for (const auto& v : values) ring = common_ring(ring, v.ring());
  const int bound = ring->nilpotency_bound();
  if (q.order() < bound)
    fail(ErrorCode::truncation_unsound, "symmetric series order " + std::to_string(q.order()) +
                                            " is below the nilpotency bound " + std::to_string(bound));
  std::vector<std::vector<Elem>> powers(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Elem v = values[k].in(ring);
    if (!v.is_zero() && v.min_generator_degree() < static_cast<int>(k + 1))
      fail(ErrorCode::presentation, "class c" + std::to_string(k + 1) + " = " + v.str() +
                                        " has generator-degree below its index");
    powers[k].push_back(Elem::constant(ring, Rational(1)));
    powers[k].push_back(v);
  }
  Elem out(ring);
  for (const auto& [m, c] : q.coefficients()) {
    int ydeg = 0;
    for (std::size_t k = 0; k < n; ++k) ydeg += static_cast<int>(k + 1) * m[k];
    if (ydeg > bound) continue;
    Elem term = c.in(ring);
    for (std::size_t k = 0; k < n && !term.is_zero(); ++k) {
      if (m[k] == 0) continue;
      auto& pw = powers[k];
      while (static_cast<int>(pw.size()) <= m[k]) pw.push_back(pw.back() * pw[1]);
      term *= pw[static_cast<std::size_t>(m[k])];
    }
    out += term;
  }
  return out;
}

namespace {

RingPtr transport_ring(const TruncatedSeries& g, const std::vector<Elem>& classes) {
  if (g.nvars() != 1) fail(ErrorCode::presentation, "transport needs a univariate series");
  RingPtr r = g.ring();
  for (const auto& c : classes) r = common_ring(r, c.ring());
  if (g.order() < r->nilpotency_bound())
    fail(ErrorCode::truncation_unsound, "series order " + std::to_string(g.order()) +
                                            " is below the nilpotency bound " +
                                            std::to_string(r->nilpotency_bound()) + " of " + r->describe());
  return r;
}

// g(y_j) as series in y_1..y_n over r, cut at the nilpotency bound.
std::vector<TruncatedSeries> root_images(const TruncatedSeries& g, const RingPtr& r, std::size_t n) {
  const int order = r->nilpotency_bound();
  const TruncatedSeries gr = g.in(r).truncated(order);
  std::vector<TruncatedSeries> out;
  for (std::size_t j = 0; j < n; ++j)
    out.push_back(substitute(gr, {TruncatedSeries::variable(r, root_variables(n), order, j)}));
  return out;
}

}  // namespace

std::vector<Elem> transported_elementary(const TruncatedSeries& g, const std::vector<Elem>& classes) {
  const std::size_t n = classes.size();
  if (n == 0) return {};
  const RingPtr r = transport_ring(g, classes);
  const int order = r->nilpotency_bound();
  const auto images = root_images(g, r, n);
  // E[k] = e_k of the images seen so far.
  std::vector<TruncatedSeries> e(n + 1, TruncatedSeries(r, root_variables(n), order));
  e[0].add(Exponents(n, 0), Elem::constant(r, Rational(1)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k >= 1; --k) e[k] += e[k - 1] * images[j];
  std::vector<Elem> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(evaluate_elementary(symmetric_reduce(e[k]), classes));
  return out;
}

Elem transported_product(const TruncatedSeries& g, const std::vector<Elem>& classes) {
  const std::size_t n = classes.size();
  if (n == 0) return Elem::constant(g.ring(), Rational(1));
  const RingPtr r = transport_ring(g, classes);
  const auto images = root_images(g, r, n);
  TruncatedSeries p = images[0];
  for (std::size_t j = 1; j < n; ++j) p = p * images[j];
  return evaluate_elementary(symmetric_reduce(p), classes);
}

}  // namespace orr
