#include "orr/series.hpp"

#include <algorithm>
#include <numeric>

namespace orr {

namespace {

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

void require_same_shape(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.variables() != b.variables())
    fail(ErrorCode::presentation, "series over different variables");
}

}  // namespace

bool SeriesOrder::operator()(const Exponents& a, const Exponents& b) const {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

TruncatedSeries::TruncatedSeries(RingPtr ring, std::vector<std::string> variables, int order)
    : ring_(std::move(ring)), vars_(std::move(variables)), order_(order) {
  if (order_ < 0) fail(ErrorCode::range, "negative truncation order");
}

TruncatedSeries TruncatedSeries::variable(RingPtr ring, std::vector<std::string> variables, int order,
                                          std::size_t index) {
  TruncatedSeries s(ring, std::move(variables), order);
  Exponents e(s.nvars(), 0);
  e[index] = 1;
  s.add(e, Elem::constant(ring, Rational(1)));
  return s;
}

TruncatedSeries TruncatedSeries::constant(RingPtr ring, std::vector<std::string> variables, int order,
                                          const Elem& c) {
  TruncatedSeries s(ring, std::move(variables), order);
  s.add(Exponents(s.nvars(), 0), c);
  return s;
}

TruncatedSeries TruncatedSeries::univariate(RingPtr ring, int order, const std::vector<Elem>& coeffs,
                                            const std::string& var) {
  TruncatedSeries s(ring, {var}, order);
  for (std::size_t k = 0; k < coeffs.size(); ++k) s.add(Exponents{static_cast<int>(k)}, coeffs[k]);
  return s;
}

TruncatedSeries TruncatedSeries::univariate(RingPtr ring, int order, const std::vector<Rational>& coeffs,
                                            const std::string& var) {
  std::vector<Elem> c;
  for (const auto& q : coeffs) c.push_back(Elem::constant(ring, q));
  return univariate(ring, order, c, var);
}

Elem TruncatedSeries::coefficient(const Exponents& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? Elem(ring_) : it->second;
}

Elem TruncatedSeries::coefficient(int k) const {
  if (nvars() != 1) fail(ErrorCode::presentation, "univariate coefficient of a multivariate series");
  return coefficient(Exponents{k});
}

void TruncatedSeries::add(const Exponents& e, const Elem& c) {
  if (e.size() != nvars()) fail(ErrorCode::presentation, "series exponent arity mismatch");
  if (total_degree(e) > order_ || c.is_zero()) return;
  Elem v = c.in(ring_);
  auto [it, inserted] = coeffs_.try_emplace(e, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

Elem TruncatedSeries::constant_term() const { return coefficient(Exponents(nvars(), 0)); }

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries s = *this;
  for (auto& [e, c] : s.coeffs_) c = -c;
  return s;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_same_shape(*this, o);
  order_ = std::min(order_, o.order_);
  for (auto it = coeffs_.begin(); it != coeffs_.end();)
    it = total_degree(it->first) > order_ ? coeffs_.erase(it) : std::next(it);
  for (const auto& [e, c] : o.coeffs_) add(e, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) { return *this += -o; }

TruncatedSeries& TruncatedSeries::operator*=(const Elem& c) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second = it->second * c;
    it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
  }
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_shape(a, b);
  TruncatedSeries out(common_ring(a.ring_, b.ring_), a.vars_, std::min(a.order_, b.order_));
  Exponents e(a.nvars(), 0);
  for (const auto& [ea, ca] : a.coeffs_) {
    const int da = total_degree(ea);
    for (const auto& [eb, cb] : b.coeffs_) {
      // Coefficients are stored by ascending degree.
      if (da + total_degree(eb) > out.order_) break;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add(e, ca * cb);
    }
  }
  return out;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.vars_ != b.vars_ || a.order_ != b.order_ || a.coeffs_.size() != b.coeffs_.size()) return false;
  auto ib = b.coeffs_.begin();
  for (const auto& [e, c] : a.coeffs_) {
    if (ib->first != e || !(ib->second == c)) return false;
    ++ib;
  }
  return true;
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  TruncatedSeries s(ring_, vars_, std::min(order, order_));
  for (const auto& [e, c] : coeffs_) s.add(e, c);
  return s;
}

TruncatedSeries TruncatedSeries::in(const RingPtr& ring) const {
  TruncatedSeries s(ring, vars_, order_);
  for (const auto& [e, c] : coeffs_) s.add(e, c.in(ring));
  return s;
}

TruncatedSeries TruncatedSeries::renamed(std::vector<std::string> variables) const {
  if (variables.size() != vars_.size()) fail(ErrorCode::presentation, "rename changes the variable count");
  TruncatedSeries s = *this;
  s.vars_ = std::move(variables);
  return s;
}

TruncatedSeries TruncatedSeries::divided_by_variable() const {
  if (nvars() != 1) fail(ErrorCode::presentation, "divided_by_variable needs a univariate series");
  if (!constant_term().is_zero()) fail(ErrorCode::composition_domain, "series has a nonzero constant term");
  TruncatedSeries s(ring_, vars_, std::max(order_ - 1, 0));
  for (const auto& [e, c] : coeffs_) s.add(Exponents{e[0] - 1}, c);
  return s;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  if (nvars() != 1) fail(ErrorCode::presentation, "reciprocal needs a univariate series");
  const Elem a0 = constant_term();
  if (!a0.is_unit()) fail(ErrorCode::not_a_unit, "constant term " + a0.str() + " is not a unit");
  const Elem inv0 = a0.inverse();
  // b_0 = 1/a_0,  b_k = -(1/a_0) sum_{i=1..k} a_i b_{k-i}
  std::vector<Elem> b{inv0};
  for (int k = 1; k <= order_; ++k) {
    Elem acc(ring_);
    for (int i = 1; i <= k; ++i) acc += coefficient(i) * b[static_cast<std::size_t>(k - i)];
    b.push_back(-(acc * inv0));
  }
  return univariate(ring_, order_, b, vars_[0]);
}

bool TruncatedSeries::is_homogeneous_of_weight(int w) const {
  // t-variables carry weight 1.
  for (const auto& [e, c] : coeffs_) {
    if (!c.is_homogeneous()) return false;
    if (c.weight() + total_degree(e) != w) return false;
  }
  return true;
}

std::string TruncatedSeries::str() const {
  std::string out;
  for (const auto& [e, c] : coeffs_) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff = c.str();
    const bool simple = c.size() == 1;
    std::string piece;
    if (mono.empty())
      piece = simple ? coeff : "(" + coeff + ")";
    else if (coeff == "1")
      piece = mono;
    else if (coeff == "-1")
      piece = "-" + mono;
    else
      piece = (simple ? coeff : "(" + coeff + ")") + "*" + mono;
    if (out.empty())
      out = piece;
    else if (piece[0] == '-')
      out += " - " + piece.substr(1);
    else
      out += " + " + piece;
  }
  if (out.empty()) out = "0";
  return out + " + O(" + std::to_string(order_ + 1) + ")";
}

TruncatedSeries substitute(const TruncatedSeries& f, const std::vector<TruncatedSeries>& args) {
  if (args.size() != f.nvars()) fail(ErrorCode::presentation, "substitute: argument count mismatch");
  if (args.empty()) return f;
  int order = f.order();
  RingPtr ring = f.ring();
  for (const auto& g : args) {
    if (g.variables() != args[0].variables()) fail(ErrorCode::presentation, "substitute: mixed variable lists");
    if (!g.constant_term().is_zero())
      fail(ErrorCode::composition_domain, "substituted series must have zero constant term");
    order = std::min(order, g.order());
    ring = common_ring(ring, g.ring());
  }
  // Each g_i has zero constant term, so g_i^k only contributes from degree k on.
  std::vector<std::vector<TruncatedSeries>> powers(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    TruncatedSeries g = args[i].in(ring).truncated(order);
    powers[i].push_back(TruncatedSeries::constant(ring, g.variables(), order, Elem::constant(ring, Rational(1))));
    for (int k = 1; k <= order; ++k) powers[i].push_back(powers[i].back() * g);
  }
  TruncatedSeries out(ring, args[0].variables(), order);
  for (const auto& [e, c] : f.coefficients()) {
    if (total_degree(e) > order) break;
    TruncatedSeries term = TruncatedSeries::constant(ring, out.variables(), order, c.in(ring));
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) term = term * powers[i][static_cast<std::size_t>(e[i])];
    out += term;
  }
  return out;
}

TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g) {
  if (f.nvars() != 1 || g.nvars() != 1) fail(ErrorCode::presentation, "series_compose needs univariate series");
  if (!g.constant_term().is_zero())
    fail(ErrorCode::composition_domain, "inner series has nonzero constant term " + g.constant_term().str());
  return substitute(f, {g});
}

TruncatedSeries series_reverse(const TruncatedSeries& f) {
  if (f.nvars() != 1) fail(ErrorCode::presentation, "series_reverse needs a univariate series");
  if (!f.constant_term().is_zero()) fail(ErrorCode::reversion, "series to reverse has nonzero constant term");
  const Elem a1 = f.coefficient(1);
  if (!a1.is_unit()) fail(ErrorCode::reversion, "linear coefficient " + a1.str() + " is not a unit");
  const Elem inv1 = a1.inverse();
  const RingPtr& ring = f.ring();
  const int n = f.order();
  TruncatedSeries g(ring, f.variables(), n);
  g.add(Exponents{1}, inv1);
  // Fix the coefficient of t^k in f(g(t)) one degree at a time.
  for (int k = 2; k <= n; ++k) {
    TruncatedSeries fg = series_compose(f, g.truncated(k)).truncated(k);
    Elem err = fg.coefficient(k);
    if (!err.is_zero()) g.add(Exponents{k}, -(err * inv1));
  }
  return g;
}

Elem evaluate_at_nilpotents(const TruncatedSeries& f, const std::vector<Elem>& args) {
  if (args.size() != f.nvars()) fail(ErrorCode::presentation, "evaluate: argument count mismatch");
  RingPtr ring = f.ring();
  for (const auto& a : args) ring = common_ring(ring, a.ring());
  const int bound = ring->nilpotency_bound();
  if (f.order() < bound)
    fail(ErrorCode::truncation_unsound, "series order " + std::to_string(f.order()) +
                                            " is below the nilpotency bound " + std::to_string(bound) +
                                            " of " + ring->describe());
  std::vector<std::vector<Elem>> powers(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    Elem a = args[i].in(ring);
    if (!a.in_augmentation())
      fail(ErrorCode::composition_domain, "evaluation point " + a.str() + " is not nilpotent");
    powers[i].push_back(Elem::constant(ring, Rational(1)));
    for (int k = 1; k <= bound; ++k) powers[i].push_back(powers[i].back() * a);
  }
  Elem out(ring);
  for (const auto& [e, c] : f.coefficients()) {
    if (total_degree(e) > bound) break;
    Elem term = c.in(ring);
    for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i)
      if (e[i] > 0) term *= powers[i][static_cast<std::size_t>(e[i])];
    out += term;
  }
  return out;
}

TruncatedSeries exp_series(const RingPtr& ring, int order, const Elem& scale) {
  std::vector<Elem> c;
  Elem p = Elem::constant(ring, Rational(1));
  for (int k = 0; k <= order; ++k) {
    c.push_back(p * (Rational(1) / factorial(k)));
    p = p * scale;
  }
  return TruncatedSeries::univariate(ring, order, c);
}

TruncatedSeries log1p_series(const RingPtr& ring, int order, const Elem& scale) {
  std::vector<Elem> c{Elem(ring)};
  Elem p = scale;
  for (int k = 1; k <= order; ++k) {
    c.push_back(p * Rational(k % 2 == 1 ? 1 : -1, k));
    p = p * scale;
  }
  return TruncatedSeries::univariate(ring, order, c);
}

}  // namespace orr
