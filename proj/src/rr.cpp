#include "orr/rr.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

namespace orr {

OrientationPair make_pair(const Orientation& theta1, const Orientation& theta2) {
  OrientationPair p{theta1, theta2, comparison_series(theta1, theta2)};
  if (!p.phi.constant_term().is_zero() || !(p.phi.coefficient(1) == Elem::constant(p.phi.ring(), Rational(1))))
    fail(ErrorCode::internal_invariant, "comparison series is not t + O(t^2)");
  for (const auto& [e, c] : p.phi.coefficients())
    if (!c.is_homogeneous() || c.weight() != 1 - e[0])
      fail(ErrorCode::internal_invariant, "comparison coefficient of t^" + std::to_string(e[0]) + " has wrong weight");
  return p;
}

VirtualBundle virtual_tangent(const Embedding& i, const SpacePtr& p) {
  if (i.target() != p) fail(ErrorCode::base_mismatch, "embedding " + i.name() + " does not land in " + p->label());
  Bundle t = relative_tangent(p).restricted(i.restriction_map(), i.source());
  return {t, i.normal()};
}

namespace {

std::string embedding_label(const Embedding& e) {
  return e.name() + ":" + e.source()->label() + "->" + e.target()->label();
}

}  // namespace

CheckReport verify_rr_closed(const OrientationPair& pair, const Embedding& e, const Elem& z) {
  const Elem td = todd(pair.phi, VirtualBundle::of(e.normal()).negated(), pair.second);
  return {"rr_closed",
          embedding_label(e),
          pair.name(),
          z.str(),
          pushforward_embedding(e, z, pair.first),
          pushforward_embedding(e, td * z, pair.second)};
}

CheckReport verify_rr_projection(const OrientationPair& pair, const SpacePtr& p, const Elem& alpha) {
  const Elem td = todd(pair.phi, VirtualBundle::of(relative_tangent(p)), pair.second);
  const Elem a = alpha.in(p->ring());
  return {"rr_projection",
          p->label(),
          pair.name(),
          a.str(),
          pushforward_projection(p, a, pair.first),
          pushforward_projection(p, td * a, pair.second)};
}

CheckReport verify_grr_lci(const OrientationPair& pair, const Embedding& i, const SpacePtr& p, const Elem& y) {
  const Elem td = todd(pair.phi, virtual_tangent(i, p), pair.second);
  const Elem z = y.in(i.source()->ring());
  return {"grr_lci",
          embedding_label(i) + "->" + p->base()->label(),
          pair.name(),
          z.str(),
          pushforward_lci(i, p, z, pair.first),
          pushforward_lci(i, p, td * z, pair.second)};
}

Rational hrr_number(int n, int d) {
  if (n < 0) fail(ErrorCode::range, "hrr_number needs n >= 0");
  const Theory t = Theory::multiplicative(std::max(10, n + 1));
  const Orientation& mult = t.orientation("mult");
  const SpacePtr p = Space::projective_space(n, t);
  const RingPtr& r = p->ring();
  // [O(d)] = exp(-beta d h) = 1 - beta * theta_mult(d h).
  const Elem beta = Elem::symbol(r, "beta");
  const Elem cls = Elem::constant(r, Rational(1)) - beta * mult.apply(p->generator() * Rational(d));
  const Elem chi = pushforward_to_point(p, cls, mult);
  Exponents e = t.point_ring()->zero_exponents();
  e[0] = n;
  Rational out;
  for (const auto& [ex, c] : chi.terms()) {
    if (ex != e) fail(ErrorCode::internal_invariant, "pushforward of O(d) is not a multiple of beta^n: " + chi.str());
    out = c;
  }
  return out;
}

unsigned default_threads() {
  if (const char* s = std::getenv("ORIENT_RR_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<CheckReport> run_tasks(const std::vector<std::function<CheckReport()>>& tasks, unsigned threads) {
  std::vector<CheckReport> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace {

std::vector<OrientationPair> sweep_pairs(const Theory& t) {
  const auto& os = t.orientations();
  std::vector<OrientationPair> out;
  if (os.size() == 1) out.push_back(make_pair(os[0], os[0]));
  for (const auto& a : os)
    for (const auto& b : os)
      if (a.key() != b.key()) out.push_back(make_pair(a, b));
  return out;
}

std::vector<Elem> basis_elements(const SpacePtr& s) {
  std::vector<Elem> out;
  for (const auto& b : s->ring()->basis()) out.push_back(Elem::monomial(s->ring(), b, Rational(1)));
  return out;
}

// Split bundles of rank 1..max_rank with roots drawn from {0, h, -h}, up to
// reordering.
std::vector<Bundle> split_bundles(const SpacePtr& base, int max_rank) {
  std::vector<Elem> choices{Elem(base->ring())};
  if (!base->is_point()) {
    choices.push_back(base->generator());
    choices.push_back(-base->generator());
  }
  std::vector<Bundle> out;
  std::vector<std::size_t> idx;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    if (!idx.empty()) {
      std::vector<Elem> roots;
      for (auto i : idx) roots.push_back(choices[i]);
      out.push_back(Bundle::from_roots(base, roots));
    }
    if (left == 0) return;
    for (std::size_t i = from; i < choices.size(); ++i) {
      idx.push_back(i);
      rec(i, left - 1);
      idx.pop_back();
    }
  };
  rec(0, max_rank);
  return out;
}

}  // namespace

std::vector<CheckReport> grr_sweep(const Theory& theory, int max_dim, unsigned threads) {
  if (max_dim < 1) fail(ErrorCode::range, "sweep dimension must be >= 1");
  const auto pairs = sweep_pairs(theory);
  const SpacePtr pt = Space::point(theory);
  std::vector<SpacePtr> proj{Space::proj_bundle(pt, Bundle::trivial(pt, 1), "h")};
  for (int n = 1; n <= max_dim; ++n) proj.push_back(Space::proj_bundle(pt, Bundle::trivial(pt, n + 1), "h"));
  const SpacePtr p1 = proj[1];

  std::vector<Embedding> embeddings;
  for (int r = 1; r <= std::min(2, max_dim); ++r) embeddings.push_back(embed_zero_section(Bundle::trivial(pt, r), "s"));
  for (const auto& e : split_bundles(p1, 2))
    if (e.rank() + 1 <= max_dim) embeddings.push_back(embed_zero_section(e, "s"));
  for (int n = 1; n <= max_dim; ++n)
    for (int m = 0; m < n; ++m) embeddings.push_back(embed_linear(proj[static_cast<std::size_t>(m)], proj[static_cast<std::size_t>(n)]));
  embeddings.push_back(embed_diagonal(p1, "k"));
  if (max_dim >= 2) embeddings.push_back(embed_compose(embed_linear(proj[0], proj[1]), embed_linear(proj[1], proj[2])));

  std::vector<SpacePtr> bundles;
  for (const auto& base : {pt, p1})
    for (const auto& e : split_bundles(base, 3))
      if (base->dimension() + e.rank() - 1 <= max_dim) bundles.push_back(Space::proj_bundle(base, e, "g"));

  struct Lci {
    Embedding i;
    SpacePtr p;
  };
  std::vector<Lci> lcis;
  for (int n = 1; n <= max_dim; ++n)
    for (int m = 0; m < n; ++m) lcis.push_back({embed_linear(proj[static_cast<std::size_t>(m)], proj[static_cast<std::size_t>(n)]), proj[static_cast<std::size_t>(n)]});
  if (max_dim >= 2)
    lcis.push_back({embed_compose(embed_linear(proj[0], proj[1]), embed_linear(proj[1], proj[2])), proj[2]});
  for (const auto& e : split_bundles(p1, 1)) {
    Embedding z = embed_zero_section(e, "s");
    lcis.push_back({z, z.target()});
  }
  lcis.push_back({embed_identity(p1), p1});

  std::vector<std::function<CheckReport()>> tasks;
  for (const auto& pair : pairs) {
    for (const auto& e : embeddings)
      for (const auto& z : basis_elements(e.source())) tasks.push_back([=] { return verify_rr_closed(pair, e, z); });
    for (const auto& p : bundles)
      for (const auto& a : basis_elements(p)) tasks.push_back([=] { return verify_rr_projection(pair, p, a); });
    for (const auto& l : lcis)
      for (const auto& y : basis_elements(l.i.source()))
        tasks.push_back([=] { return verify_grr_lci(pair, l.i, l.p, y); });
  }
  return run_tasks(tasks, threads);
}

}  // namespace orr
