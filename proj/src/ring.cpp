#include "orr/ring.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace orr {

// ---------------------------------------------------------------------------
// CoeffRing

CoeffRingPtr CoeffRing::rationals() {
  auto r = std::shared_ptr<CoeffRing>(new CoeffRing());
  r->kind_ = Kind::rationals;
  return r;
}

CoeffRingPtr CoeffRing::laurent_beta(int min_exponent, int max_exponent) {
  if (min_exponent > 0 || max_exponent < 0)
    fail(ErrorCode::range, "beta exponent window must contain 0");
  auto r = std::shared_ptr<CoeffRing>(new CoeffRing());
  r->kind_ = Kind::laurent_beta;
  r->symbols_ = {"beta"};
  r->weights_ = {-1};
  r->beta_min_ = min_exponent;
  r->beta_max_ = max_exponent;
  return r;
}

CoeffRingPtr CoeffRing::truncated_universal(int k, int max_weight) {
  if (k < 1) fail(ErrorCode::range, "universal coefficient ring needs k >= 1");
  if (max_weight < 0) fail(ErrorCode::range, "negative weight truncation");
  auto r = std::shared_ptr<CoeffRing>(new CoeffRing());
  r->kind_ = Kind::truncated_universal;
  for (int i = 1; i <= k; ++i) {
    r->symbols_.push_back("b" + std::to_string(i));
    r->weights_.push_back(-i);
  }
  r->max_weight_ = max_weight;
  return r;
}

int CoeffRing::find(const std::string& name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == name) return static_cast<int>(i);
  return -1;
}

int CoeffRing::weight(const Exponents& e) const {
  int w = 0;
  for (std::size_t i = 0; i < symbols_.size(); ++i) w += weights_[i] * e[i];
  return w;
}

bool CoeffRing::admissible(const Exponents& e) const {
  switch (kind_) {
    case Kind::rationals:
      return true;
    case Kind::laurent_beta:
      if (e[0] < beta_min_ || e[0] > beta_max_)
        fail(ErrorCode::beta_window, "beta exponent " + std::to_string(e[0]) + " outside window [" +
                                         std::to_string(beta_min_) + ", " + std::to_string(beta_max_) + "]");
      return true;
    case Kind::truncated_universal:
      return -weight(e) <= max_weight_;
  }
  return true;
}

std::string CoeffRing::name() const {
  switch (kind_) {
    case Kind::rationals:
      return "Q";
    case Kind::laurent_beta:
      return "Q[beta,beta^-1]";
    case Kind::truncated_universal: {
      std::ostringstream os;
      os << "Q[b1..b" << symbols_.size() << "]/(weight>" << max_weight_ << ")";
      return os.str();
    }
  }
  return "?";
}

bool operator==(const CoeffRing& a, const CoeffRing& b) {
  return a.kind_ == b.kind_ && a.symbols_ == b.symbols_ && a.max_weight_ == b.max_weight_ &&
         a.beta_min_ == b.beta_min_ && a.beta_max_ == b.beta_max_;
}

// ---------------------------------------------------------------------------
// Orders

bool TermOrder::operator()(const Exponents& a, const Exponents& b) const {
  int da = 0, db = 0;
  for (std::size_t i = ncoeff; i < a.size(); ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db;
  for (std::size_t i = ncoeff; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  for (std::size_t i = 0; i < ncoeff; ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

namespace {

// Lexicographic from the last generator down; reduction of h_j strictly
// lowers a monomial in this order, so the largest key is always final.
struct ReduceOrder {
  std::size_t ncoeff = 0;
  bool operator()(const Exponents& a, const Exponents& b) const {
    for (std::size_t i = a.size(); i-- > ncoeff;)
      if (a[i] != b[i]) return a[i] < b[i];
    for (std::size_t i = 0; i < ncoeff; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

void add_term(Terms& t, const Exponents& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CohRing

RingPtr CohRing::point(CoeffRingPtr coeffs) {
  auto r = std::shared_ptr<CohRing>(new CohRing());
  r->coeffs_ = std::move(coeffs);
  return r;
}

RingPtr CohRing::adjoin(const RingPtr& base, const std::string& name, const std::vector<Elem>& lower) {
  if (lower.empty()) fail(ErrorCode::degenerate_bundle, "relation degree must be >= 1 for generator " + name);
  if (name.empty()) fail(ErrorCode::presentation, "empty generator name");
  if (base->find_generator(name) >= 0 || base->coeffs()->find(name) >= 0)
    fail(ErrorCode::presentation, "duplicate generator name '" + name + "'");
  auto r = std::shared_ptr<CohRing>(new CohRing());
  r->coeffs_ = base->coeffs_;
  r->parent_ = base;
  r->gens_ = base->gens_;
  Generator g;
  g.name = name;
  g.degree = static_cast<int>(lower.size());
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!lower[k].valid() || !base->contains(*lower[k].ring()))
      fail(ErrorCode::base_mismatch, "relation coefficient for " + name + " not in the base ring");
    Elem a = lower[k].in(base);
    for (const auto& [e, c] : a.terms()) {
      Exponents full(e.begin(), e.end());
      full.push_back(static_cast<int>(k));
      g.relation.emplace_back(full, c);
    }
  }
  r->gens_.push_back(std::move(g));
  return r;
}

int CohRing::find_generator(const std::string& name) const {
  for (std::size_t j = 0; j < gens_.size(); ++j)
    if (gens_[j].name == name) return static_cast<int>(j);
  return -1;
}

int CohRing::nilpotency_bound() const {
  int n = 0;
  for (const auto& g : gens_) n += g.degree - 1;
  return n;
}

std::size_t CohRing::rank() const {
  std::size_t n = 1;
  for (const auto& g : gens_) n *= static_cast<std::size_t>(g.degree);
  return n;
}

std::vector<Exponents> CohRing::basis() const {
  std::vector<Exponents> out;
  Exponents e = zero_exponents();
  const std::size_t nc = ncoeff();
  while (true) {
    out.push_back(e);
    std::size_t j = 0;
    for (; j < gens_.size(); ++j) {
      if (++e[nc + j] < gens_[j].degree) break;
      e[nc + j] = 0;
    }
    if (j == gens_.size()) break;
  }
  std::sort(out.begin(), out.end(), order());
  return out;
}

bool CohRing::contains(const CohRing& sub) const {
  for (const CohRing* r = this; r != nullptr; r = r->parent_.get()) {
    if (r == &sub) return true;
    if (r->is_point() && sub.is_point() && *r->coeffs_ == *sub.coeffs_) return true;
  }
  return false;
}

int CohRing::generator_degree(const Exponents& e) const {
  int d = 0;
  for (std::size_t i = ncoeff(); i < e.size(); ++i) d += e[i];
  return d;
}

int CohRing::weight(const Exponents& e) const { return coeffs_->weight(e) + generator_degree(e); }

Terms CohRing::reduce(Terms raw) const {
  const std::size_t nc = ncoeff();
  bool normal = true;
  for (const auto& [e, c] : raw) {
    for (std::size_t j = 0; j < gens_.size() && normal; ++j)
      if (e[nc + j] >= gens_[j].degree) normal = false;
    if (!normal) break;
  }
  if (normal) return raw;

  std::map<Exponents, Rational, ReduceOrder> work(ReduceOrder{nc});
  for (auto& [e, c] : raw) work.emplace(e, c);
  Terms out(order());
  while (!work.empty()) {
    auto it = std::prev(work.end());
    Exponents e = it->first;
    Rational c = it->second;
    work.erase(it);
    if (c.is_zero()) continue;
    std::size_t j = gens_.size();
    for (std::size_t k = gens_.size(); k-- > 0;) {
      if (e[nc + k] >= gens_[k].degree) {
        j = k;
        break;
      }
    }
    if (j == gens_.size()) {
      add_term(out, e, c);
      continue;
    }
    e[nc + j] -= gens_[j].degree;
    for (const auto& [re, rc] : gens_[j].relation) {
      Exponents ne = e;
      for (std::size_t i = 0; i < re.size(); ++i) ne[i] += re[i];
      if (!coeffs_->admissible(ne)) continue;
      Rational v = c * rc;
      auto [wit, inserted] = work.try_emplace(ne, v);
      if (!inserted) wit->second += v;
    }
  }
  return out;
}

std::string CohRing::describe() const {
  std::ostringstream os;
  os << coeffs_->name();
  if (!gens_.empty()) {
    os << "[";
    for (std::size_t j = 0; j < gens_.size(); ++j) os << (j ? "," : "") << gens_[j].name;
    os << "]/(";
    for (std::size_t j = 0; j < gens_.size(); ++j) os << (j ? "," : "") << gens_[j].name << "^" << gens_[j].degree;
    os << " relations)";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Elem

Elem::Elem(RingPtr ring) : ring_(std::move(ring)), terms_(ring_->order()) {}

Elem Elem::constant(RingPtr ring, const Rational& c) {
  Elem x(ring);
  if (!c.is_zero()) x.terms_.emplace(ring->zero_exponents(), c);
  return x;
}

Elem Elem::generator(RingPtr ring, std::size_t j) {
  Exponents e = ring->zero_exponents();
  e[ring->ncoeff() + j] = 1;
  return monomial(std::move(ring), e, Rational(1));
}

Elem Elem::generator(RingPtr ring, const std::string& name) {
  int j = ring->find_generator(name);
  if (j < 0) fail(ErrorCode::presentation, "unknown generator '" + name + "'");
  return generator(std::move(ring), static_cast<std::size_t>(j));
}

Elem Elem::symbol(RingPtr ring, const std::string& name, int power) {
  int i = ring->coeffs()->find(name);
  if (i < 0) fail(ErrorCode::presentation, "unknown coefficient symbol '" + name + "' in " + ring->coeffs()->name());
  if (power < 0 && ring->coeffs()->kind() != CoeffRing::Kind::laurent_beta)
    fail(ErrorCode::not_a_unit, "symbol '" + name + "' is not invertible");
  Exponents e = ring->zero_exponents();
  e[static_cast<std::size_t>(i)] = power;
  return monomial(std::move(ring), e, Rational(1));
}

Elem Elem::monomial(RingPtr ring, const Exponents& e, const Rational& c) {
  if (e.size() != ring->nvars()) fail(ErrorCode::presentation, "monomial layout mismatch");
  Terms t(ring->order());
  if (!c.is_zero() && ring->coeffs()->admissible(e)) t.emplace(e, c);
  return from_terms(std::move(ring), std::move(t));
}

Elem Elem::from_terms(RingPtr ring, Terms raw) {
  Elem x(ring);
  x.terms_ = ring->reduce(std::move(raw));
  return x;
}

RingPtr common_ring(const RingPtr& a, const RingPtr& b) {
  if (a == b) return a;
  if (a->contains(*b)) return a;
  if (b->contains(*a)) return b;
  fail(ErrorCode::base_mismatch, "elements live in unrelated rings: " + a->describe() + " vs " + b->describe());
}

Elem Elem::in(const RingPtr& target) const {
  if (ring_ == target) return *this;
  if (!target->contains(*ring_))
    fail(ErrorCode::base_mismatch, "cannot embed " + ring_->describe() + " into " + target->describe());
  Elem x(target);
  const std::size_t n = target->nvars();
  for (const auto& [e, c] : terms_) {
    Exponents f(e.begin(), e.end());
    f.resize(n, 0);
    x.terms_.emplace_hint(x.terms_.end(), f, c);
  }
  return x;
}

Elem Elem::operator-() const {
  Elem x = *this;
  for (auto& [e, c] : x.terms_) c = -c;
  return x;
}

Elem& Elem::operator+=(const Elem& o) {
  RingPtr r = common_ring(ring_, o.ring_);
  if (r != ring_) *this = in(r);
  const Elem& b = o.ring_ == r ? o : o.in(r);
  for (const auto& [e, c] : b.terms_) add_term(terms_, e, c);
  return *this;
}

Elem& Elem::operator-=(const Elem& o) { return *this += -o; }

Elem& Elem::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Elem operator*(const Elem& a, const Elem& b) {
  RingPtr r = common_ring(a.ring_, b.ring_);
  const Elem& x = a.ring_ == r ? a : a.in(r);
  const Elem& y = b.ring_ == r ? b : b.in(r);
  Terms raw(r->order());
  const std::size_t n = r->nvars();
  const auto& coeffs = *r->coeffs();
  Exponents e(n, 0);
  for (const auto& [ea, ca] : x.terms_) {
    for (const auto& [eb, cb] : y.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      if (!coeffs.admissible(e)) continue;
      add_term(raw, e, ca * cb);
    }
  }
  return Elem::from_terms(r, std::move(raw));
}

Elem& Elem::operator*=(const Elem& o) {
  *this = *this * o;
  return *this;
}

bool operator==(const Elem& a, const Elem& b) {
  if (a.ring_ == b.ring_) return a.terms_ == b.terms_;
  RingPtr r = common_ring(a.ring_, b.ring_);
  return a.in(r).terms_ == b.in(r).terms_;
}

Elem Elem::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Elem result = constant(ring_, Rational(1));
  Elem base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Elem Elem::constant_part() const {
  Elem x(ring_);
  for (const auto& [e, c] : terms_)
    if (ring_->generator_degree(e) == 0) x.terms_.emplace(e, c);
  return x;
}

int Elem::min_generator_degree() const {
  int m = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) m = std::min(m, ring_->generator_degree(e));
  return m;
}

bool Elem::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int w = ring_->weight(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (ring_->weight(e) != w) return false;
  return true;
}

int Elem::weight() const {
  if (terms_.empty()) return 0;
  if (!is_homogeneous()) fail(ErrorCode::internal_invariant, "weight() of inhomogeneous element " + str());
  return ring_->weight(terms_.begin()->first);
}

Elem Elem::weight_part(int w) const {
  Elem x(ring_);
  for (const auto& [e, c] : terms_)
    if (ring_->weight(e) == w) x.terms_.emplace(e, c);
  return x;
}

std::vector<Elem> Elem::coordinates() const {
  if (ring_->is_point()) fail(ErrorCode::presentation, "coordinates() on a point ring");
  const RingPtr& base = ring_->parent();
  const std::size_t j = ring_->nvars() - 1;
  const int d = ring_->generators().back().degree;
  std::vector<Elem> out(static_cast<std::size_t>(d), Elem(base));
  for (const auto& [e, c] : terms_) {
    Exponents f(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(j));
    add_term(out[static_cast<std::size_t>(e[j])].terms_, f, c);
  }
  return out;
}

namespace {

// Splits a coefficient-ring element into (unit part, nilpotent rest).
// Returns false if the constant part is not a unit.
bool split_unit(const Elem& x, Elem& unit, Elem& rest) {
  const RingPtr& r = x.ring();
  const auto kind = r->coeffs()->kind();
  Elem c = x.constant_part();
  unit = Elem(r);
  if (kind == CoeffRing::Kind::rationals || kind == CoeffRing::Kind::laurent_beta) {
    if (c.size() != 1) return false;
    unit = c;
  } else {
    Exponents zero = r->zero_exponents();
    auto it = c.terms().find(zero);
    if (it == c.terms().end()) return false;
    unit = Elem::constant(r, it->second);
  }
  rest = x - unit;
  return true;
}

}  // namespace

bool Elem::is_unit() const {
  Elem u, n;
  return split_unit(*this, u, n);
}

Elem Elem::inverse() const {
  Elem u, n;
  if (!split_unit(*this, u, n)) fail(ErrorCode::not_a_unit, "element is not a unit: " + str());
  const auto& [ue, uc] = *u.terms().begin();
  Exponents inv_e(ue.begin(), ue.end());
  for (auto& v : inv_e) v = -v;
  Elem uinv = monomial(ring_, inv_e, Rational(1) / uc);
  // (u + n)^-1 = u^-1 * sum_k (-n u^-1)^k; n is nilpotent.
  Elem q = -(n * uinv);
  Elem term = uinv;
  Elem sum = uinv;
  const int bound = ring_->nilpotency_bound() + ring_->coeffs()->max_weight() + 2;
  for (int k = 0; k <= bound && !term.is_zero(); ++k) {
    term = term * q;
    sum += term;
  }
  if (!term.is_zero()) fail(ErrorCode::internal_invariant, "non-nilpotent remainder while inverting " + str());
  return sum;
}

bool Elem::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == ring_->zero_exponents());
}

Rational Elem::rational_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_rational()) fail(ErrorCode::presentation, "element is not a rational constant: " + str());
  return terms_.begin()->second;
}

namespace {

std::string render_factors(const CohRing& r, const Exponents& e, std::size_t from, std::size_t to) {
  std::string s;
  const std::size_t nc = r.ncoeff();
  for (std::size_t i = from; i < to; ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += i < nc ? r.coeffs()->symbols()[i] : r.generator(i - nc).name;
    if (e[i] != 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

// Appends "c*m" with sign handling to `out`.
void append_term(std::string& out, Rational c, const std::string& factors) {
  const bool neg = c.sign() < 0;
  if (out.empty())
    out += neg ? "-" : "";
  else
    out += neg ? " - " : " + ";
  c = c.abs();
  if (factors.empty())
    out += c.str();
  else if (c.is_one())
    out += factors;
  else
    out += c.str() + "*" + factors;
}

}  // namespace

std::string Elem::str() const {
  if (terms_.empty()) return "0";
  const CohRing& r = *ring_;
  const std::size_t nc = r.ncoeff();
  const std::size_t n = r.nvars();
  std::string out;
  auto it = terms_.begin();
  while (it != terms_.end()) {
    // Group terms sharing the generator part.
    auto end = it;
    std::vector<std::pair<Exponents, Rational>> group;
    while (end != terms_.end() && std::equal(end->first.begin() + nc, end->first.end(), it->first.begin() + nc)) {
      group.emplace_back(end->first, end->second);
      ++end;
    }
    const std::string gens = render_factors(r, it->first, nc, n);
    if (gens.empty() || group.size() == 1) {
      for (const auto& [e, c] : group) {
        std::string f = render_factors(r, e, 0, nc);
        if (!gens.empty()) f = f.empty() ? gens : f + "*" + gens;
        append_term(out, c, f);
      }
    } else {
      std::string inner;
      for (const auto& [e, c] : group) append_term(inner, c, render_factors(r, e, 0, nc));
      out += out.empty() ? "" : " + ";
      out += "(" + inner + ")*" + gens;
    }
    it = end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

Substitution::Substitution(RingPtr source, RingPtr target, std::vector<Elem> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->ngens())
    fail(ErrorCode::presentation, "substitution needs one image per generator");
  if (!(*source_->coeffs() == *target_->coeffs()))
    fail(ErrorCode::base_mismatch, "substitution between different coefficient rings");
  for (auto& im : images_) im = im.in(target_);
}

Substitution Substitution::identity(const RingPtr& ring) { return inclusion(ring, ring); }

Substitution Substitution::inclusion(const RingPtr& source, const RingPtr& target) {
  std::vector<Elem> images;
  for (std::size_t j = 0; j < source->ngens(); ++j) images.push_back(Elem::generator(source, j).in(target));
  return Substitution(source, target, std::move(images));
}

Elem Substitution::operator()(const Elem& x) const {
  const Elem& src = x.ring() == source_ ? x : x.in(source_);
  const std::size_t nc = source_->ncoeff();
  const std::size_t ng = source_->ngens();
  std::vector<std::vector<Elem>> powers(ng);
  auto power = [&](std::size_t j, int k) -> const Elem& {
    auto& p = powers[j];
    if (p.empty()) p.push_back(Elem::constant(target_, Rational(1)));
    while (static_cast<int>(p.size()) <= k) p.push_back(p.back() * images_[j]);
    return p[static_cast<std::size_t>(k)];
  };
  Elem out(target_);
  const auto& terms = src.terms();
  auto it = terms.begin();
  while (it != terms.end()) {
    auto end = it;
    Terms coeff_terms(target_->order());
    while (end != terms.end() && std::equal(end->first.begin() + nc, end->first.end(), it->first.begin() + nc)) {
      Exponents e = target_->zero_exponents();
      std::copy(end->first.begin(), end->first.begin() + static_cast<std::ptrdiff_t>(nc), e.begin());
      coeff_terms.emplace(e, end->second);
      ++end;
    }
    Elem piece = Elem::from_terms(target_, std::move(coeff_terms));
    for (std::size_t j = 0; j < ng; ++j) {
      const int k = it->first[nc + j];
      if (k > 0) piece *= power(j, k);
    }
    out += piece;
    it = end;
  }
  return out;
}

bool Substitution::respects_relations() const {
  const std::size_t nc = source_->ncoeff();
  for (std::size_t j = 0; j < source_->ngens(); ++j) {
    const auto& g = source_->generator(j);
    // The relation lives in the ring where g was adjoined; evaluate its
    // right-hand side through this map and compare with image^degree.
    Elem rhs(target_);
    for (const auto& [e, c] : g.relation) {
      Elem piece = Elem::constant(target_, c);
      Exponents ce = target_->zero_exponents();
      std::copy(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(nc), ce.begin());
      piece *= Elem::monomial(target_, ce, Rational(1));
      for (std::size_t i = 0; i <= j; ++i)
        if (e[nc + i] > 0) piece *= images_[i].pow(e[nc + i]);
      rhs += piece;
    }
    if (!(images_[j].pow(g.degree) == rhs)) return false;
  }
  return true;
}

}  // namespace orr
