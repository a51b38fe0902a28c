#include "orr/fgl.hpp"

#include <charconv>

namespace orr {

namespace {

TruncatedSeries var(const RingPtr& r, const std::vector<std::string>& vars, int order, std::size_t i) {
  return TruncatedSeries::variable(r, vars, order, i);
}

Elem one(const RingPtr& r) { return Elem::constant(r, Rational(1)); }

}  // namespace

// ---------------------------------------------------------------------------
// FormalGroupLaw

FormalGroupLaw::FormalGroupLaw(std::string name, TruncatedSeries f) : name_(std::move(name)), f_(std::move(f)) {
  if (f_.nvars() != 2) fail(ErrorCode::presentation, "a formal group law needs two variables");
}

Elem FormalGroupLaw::coefficient(int i, int j) const { return f_.coefficient(Exponents{i, j}); }

Elem FormalGroupLaw::operator()(const Elem& a, const Elem& b) const { return evaluate_at_nilpotents(f_, {a, b}); }

FormalGroupLaw fgl_additive(const RingPtr& coeffs, int order) {
  const std::vector<std::string> xy{"x", "y"};
  return FormalGroupLaw("additive", var(coeffs, xy, order, 0) + var(coeffs, xy, order, 1));
}

FormalGroupLaw fgl_multiplicative(const RingPtr& coeffs, int order) {
  const std::vector<std::string> xy{"x", "y"};
  TruncatedSeries f = var(coeffs, xy, order, 0) + var(coeffs, xy, order, 1);
  f.add(Exponents{1, 1}, -Elem::symbol(coeffs, "beta"));
  return FormalGroupLaw("multiplicative", f);
}

TruncatedSeries fgl_inverse(const FormalGroupLaw& f) {
  const RingPtr& r = f.ring();
  const int n = f.order();
  TruncatedSeries x = TruncatedSeries::variable(r, {"x"}, n, 0);
  TruncatedSeries iota = -x;
  // F(x, y) = x + y + (higher), so the x^k coefficient of F(x, iota) moves
  // one-for-one with the x^k coefficient of iota.
  for (int k = 2; k <= n; ++k) {
    TruncatedSeries res = substitute(f.series(), {x.truncated(k), iota.truncated(k)});
    Elem c = res.coefficient(k);
    if (!c.is_zero()) iota.add(Exponents{k}, -c);
  }
  return iota;
}

bool FglReport::passed() const {
  return left_unit.is_zero() && right_unit.is_zero() && commutativity.is_zero() && associativity.is_zero() &&
         weight_homogeneous;
}

FglReport fgl_check(const FormalGroupLaw& f) {
  const RingPtr& r = f.ring();
  const int n = f.order();
  FglReport rep;
  {
    const std::vector<std::string> v{"x"};
    TruncatedSeries x = var(r, v, n, 0);
    TruncatedSeries zero(r, v, n);
    rep.left_unit = substitute(f.series(), {x, zero}) - x;
    rep.right_unit = substitute(f.series(), {zero, x}) - x;
    rep.right_unit = rep.right_unit.renamed({"y"});
  }
  {
    const std::vector<std::string> v{"x", "y"};
    rep.commutativity = f.series() - substitute(f.series(), {var(r, v, n, 1), var(r, v, n, 0)});
  }
  {
    const std::vector<std::string> v{"x", "y", "z"};
    TruncatedSeries x = var(r, v, n, 0), y = var(r, v, n, 1), z = var(r, v, n, 2);
    TruncatedSeries fxy = substitute(f.series(), {x, y});
    TruncatedSeries fyz = substitute(f.series(), {y, z});
    rep.associativity = substitute(f.series(), {fxy, z}) - substitute(f.series(), {x, fyz});
  }
  for (const auto& [e, c] : f.series().coefficients()) {
    if (!c.is_homogeneous() || c.weight() != 1 - e[0] - e[1]) rep.weight_homogeneous = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Orientation

Orientation::Orientation(std::string name, TruncatedSeries theta) : name_(std::move(name)), theta_(std::move(theta)) {
  if (theta_.nvars() != 1) fail(ErrorCode::presentation, "orientation series must be univariate");
  if (!theta_.constant_term().is_zero())
    fail(ErrorCode::composition_domain, "orientation series must vanish at 0");
  if (!(theta_.coefficient(1) == one(theta_.ring())))
    fail(ErrorCode::reversion, "orientation series must have linear coefficient 1");
  if (!theta_.is_homogeneous_of_weight(1))
    fail(ErrorCode::presentation, "orientation series must be weight-homogeneous of weight 1");
  theta_ = theta_.renamed({"t"});
  auto d = std::make_shared<Data>();
  d->inverse = series_reverse(theta_);
  d->key = name_ + ":" + theta_.str();
  data_ = d;
  d->law = fgl_from_orientation(*this);
}

Orientation Orientation::identity(const RingPtr& coeffs, int order) {
  // Only this factory knows the series is exactly t; a truncated series that
  // happens to read "t + O(2)" may not be.
  Orientation o("identity", TruncatedSeries::variable(coeffs, {"t"}, order, 0));
  auto d = std::make_shared<Data>(*o.data_);
  d->identity = true;
  d->law = FormalGroupLaw("additive", d->law.series());
  o.data_ = d;
  return o;
}

Orientation Orientation::multiplicative(const RingPtr& coeffs, int order) {
  // (1 - exp(-beta t)) / beta = sum_{k>=1} (-1)^(k+1) beta^(k-1) t^k / k!
  std::vector<Elem> c{Elem(coeffs)};
  for (int k = 1; k <= order; ++k) {
    Rational q = Rational(k % 2 == 1 ? 1 : -1) / factorial(k);
    c.push_back(Elem::symbol(coeffs, "beta", k - 1) * q);
  }
  return Orientation("mult", TruncatedSeries::univariate(coeffs, order, c));
}

Orientation Orientation::universal(const RingPtr& coeffs, int order, int k) {
  if (k < 1 || k > coeffs->coeffs()->universal_rank())
    fail(ErrorCode::range, "universal orientation u" + std::to_string(k) + " needs b1..b" + std::to_string(k));
  std::vector<Elem> c{Elem(coeffs), one(coeffs)};
  for (int i = 1; i <= k; ++i) c.push_back(Elem::symbol(coeffs, "b" + std::to_string(i)));
  return Orientation("u" + std::to_string(k), TruncatedSeries::univariate(coeffs, order, c));
}

Elem Orientation::apply(const Elem& x) const {
  if (!x.in_augmentation()) fail(ErrorCode::composition_domain, "first Chern class argument " + x.str() + " is not nilpotent");
  if (data_->identity) return x;
  return evaluate_at_nilpotents(theta_, {x});
}

FormalGroupLaw fgl_from_orientation(const Orientation& o) {
  const RingPtr& r = o.ring();
  const int n = o.order();
  const std::vector<std::string> xy{"x", "y"};
  const TruncatedSeries& inv = o.theta_inverse();
  TruncatedSeries u = substitute(inv, {var(r, xy, n, 0)});
  TruncatedSeries v = substitute(inv, {var(r, xy, n, 1)});
  return FormalGroupLaw("law(" + o.name() + ")", substitute(o.theta(), {u + v}));
}

TruncatedSeries comparison_series(const Orientation& theta1, const Orientation& theta2) {
  if (theta1.ring() != theta2.ring() && !(*theta1.ring()->coeffs() == *theta2.ring()->coeffs()))
    fail(ErrorCode::incompatible, "orientations " + theta1.name() + " and " + theta2.name() +
                                      " live over different coefficient rings");
  const int n = std::min(theta1.order(), theta2.order());
  TruncatedSeries inv2 = theta2.theta_inverse().in(theta1.ring()).truncated(n);
  return series_compose(theta1.theta().truncated(n), inv2);
}

// ---------------------------------------------------------------------------
// Theory

Theory Theory::additive(int order) {
  Theory t;
  t.kind_ = Kind::additive;
  t.order_ = order;
  t.point_ = CohRing::point(CoeffRing::rationals());
  t.orientations_ = std::make_shared<std::vector<Orientation>>(std::vector{Orientation::identity(t.point_, order)});
  return t;
}

Theory Theory::multiplicative(int order) {
  Theory t;
  t.kind_ = Kind::multiplicative;
  t.order_ = order;
  t.point_ = CohRing::point(CoeffRing::laurent_beta());
  t.orientations_ = std::make_shared<std::vector<Orientation>>(
      std::vector{Orientation::identity(t.point_, order), Orientation::multiplicative(t.point_, order)});
  return t;
}

Theory Theory::universal(int k, int order) {
  Theory t;
  t.kind_ = Kind::universal;
  t.k_ = k;
  t.order_ = order;
  t.point_ = CohRing::point(CoeffRing::truncated_universal(k, order));
  std::vector<Orientation> os{Orientation::identity(t.point_, order)};
  for (int i = 1; i <= k; ++i) os.push_back(Orientation::universal(t.point_, order, i));
  t.orientations_ = std::make_shared<std::vector<Orientation>>(std::move(os));
  return t;
}

Theory Theory::parse(const std::string& name, int order) {
  if (order < 1) fail(ErrorCode::range, "truncation order must be >= 1");
  if (name == "additive") return additive(order);
  if (name == "multiplicative") return multiplicative(order);
  const std::string prefix = "universal:";
  if (name.rfind(prefix, 0) == 0) {
    int k = 0;
    const char* b = name.data() + prefix.size();
    const char* e = name.data() + name.size();
    auto [p, ec] = std::from_chars(b, e, k);
    if (ec != std::errc() || p != e || b == e) fail(ErrorCode::usage, "malformed theory '" + name + "'");
    if (k < 1 || k > 8) fail(ErrorCode::range, "universal rank must be in 1..8");
    return universal(k, order);
  }
  fail(ErrorCode::usage, "unknown theory '" + name + "' (expected additive, multiplicative or universal:k)");
}

std::string Theory::name() const {
  switch (kind_) {
    case Kind::additive: return "additive";
    case Kind::multiplicative: return "multiplicative";
    case Kind::universal: return "universal:" + std::to_string(k_);
  }
  return "?";
}

const Orientation& Theory::orientation(const std::string& name) const {
  for (const auto& o : orientations())
    if (o.name() == name) return o;
  fail(ErrorCode::unknown_identifier, "theory " + this->name() + " has no orientation '" + name + "'");
}

}  // namespace orr
