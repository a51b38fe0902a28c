// Acceptance runner: one PASS/FAIL line per criterion, with wall time against
// the criterion's budget.
//
//   acceptance --cli PATH --golden DIR [--expect-fail 5,...]
//
// Exit status is 0 when the failing criteria are exactly the expected ones.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orr/rr.hpp"

using namespace orr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Counts checks and keeps the first failure for the report line.
struct Tally {
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::string first;

  void add(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failed++ == 0) first = what;
  }
  Outcome outcome(const std::string& unit = "checks") const {
    std::ostringstream s;
    s << checks << " " << unit;
    if (failed) s << ", " << failed << " failed, first: " << first;
    return {failed == 0 && checks > 0, s.str()};
  }
};

using Rng = std::mt19937;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Sum of a few normal-form monomials with small rational coefficients,
// sometimes shifted by a coefficient-ring monomial.
Elem random_class(const RingPtr& r, Rng& rng) {
  const auto basis = r->basis();
  const auto& c = *r->coeffs();
  Elem out(r);
  for (int t = 0; t < 4; ++t) {
    Exponents e = basis[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(basis.size()) - 1))];
    if (c.size() > 0 && uniform(rng, 0, 2) == 0) {
      const std::size_t s = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(c.size()) - 1));
      e[s] += c.kind() == CoeffRing::Kind::laurent_beta ? uniform(rng, -1, 2) : 1;
    }
    out += Elem::monomial(r, e, Rational(uniform(rng, -4, 4), uniform(rng, 1, 3)));
  }
  return out;
}

Bundle random_bundle(const SpacePtr& s, Rng& rng) {
  const int rank = uniform(rng, 1, 3);
  const Elem h = s->generator();
  std::vector<Elem> xs;
  if (uniform(rng, 0, 1)) {
    for (int k = 1; k <= rank; ++k) xs.push_back(h.pow(k) * Rational(uniform(rng, -2, 2)));
    return Bundle::from_chern(s, xs);
  }
  for (int k = 0; k < rank; ++k) xs.push_back(h * Rational(uniform(rng, -2, 2)));
  return Bundle::from_roots(s, xs);
}

std::vector<Theory> theories() { return {Theory::additive(), Theory::multiplicative(), Theory::universal(3)}; }

std::vector<Elem> basis_classes(const SpacePtr& s) {
  std::vector<Elem> out;
  for (const auto& b : s->ring()->basis()) out.push_back(Elem::monomial(s->ring(), b, Rational(1)));
  return out;
}

// Split bundles of rank 1..max_rank with roots a h, a in {0, 1, -2}.
std::vector<Bundle> split_family(const SpacePtr& base, int max_rank) {
  const std::vector<int> as{0, 1, -2};
  std::vector<Bundle> out;
  std::function<void(std::vector<int>&, std::size_t)> rec = [&](std::vector<int>& pick, std::size_t from) {
    if (!pick.empty()) {
      std::vector<Elem> roots;
      for (int a : pick) roots.push_back(base->is_point() ? Elem(base->ring()) : base->generator() * Rational(a));
      out.push_back(Bundle::from_roots(base, roots));
    }
    if (static_cast<int>(pick.size()) == max_rank) return;
    for (std::size_t i = from; i < as.size(); ++i) {
      pick.push_back(as[i]);
      rec(pick, i);
      pick.pop_back();
    }
  };
  std::vector<int> pick;
  rec(pick, 0);
  return out;
}

// P(E) for the duality tests: trivial E of rank <= 4 over the point and split
// E of rank <= 3 over P^1.
std::vector<SpacePtr> tested_bundles(const Theory& t) {
  const SpacePtr pt = Space::point(t);
  const SpacePtr p1 = Space::proj_bundle(pt, Bundle::trivial(pt, 2), "h");
  std::vector<SpacePtr> out;
  for (int r = 1; r <= 4; ++r) out.push_back(Space::proj_bundle(pt, Bundle::trivial(pt, r), "g"));
  for (const Bundle& e : split_family(p1, 3)) out.push_back(Space::proj_bundle(p1, e, "g"));
  return out;
}

std::string describe(const SpacePtr& p) {
  std::ostringstream s;
  s << "P(E) over " << p->base()->label() << " with c(E) = " << p->bundle().reference_total().str();
  return s.str();
}

// -- criteria ---------------------------------------------------------------

Outcome fgl_suite() {
  Tally t;
  auto check = [&](const FormalGroupLaw& f, const std::string& name) {
    const FglReport r = fgl_check(f);
    t.add(r.left_unit.is_zero() && r.right_unit.is_zero() && r.commutativity.is_zero() && r.associativity.is_zero(),
          name);
  };
  const Theory m = Theory::multiplicative(10);
  check(fgl_additive(m.point_ring(), 10), "additive");
  check(fgl_multiplicative(m.point_ring(), 10), "multiplicative");
  for (const auto& o : m.orientations()) check(o.law(), "multiplicative/" + o.name());
  const Theory u = Theory::universal(3, 10);
  for (const auto& o : u.orientations()) check(o.law(), "universal:3/" + o.name());
  return t.outcome("laws");
}

Outcome projective_bundle_theorem() {
  Tally t;
  const Theory th = Theory::multiplicative();
  const SpacePtr pt = Space::point(th);
  const SpacePtr p1 = Space::proj_bundle(pt, Bundle::trivial(pt, 2), "h");
  std::vector<Bundle> es;
  for (int r = 1; r <= 4; ++r) es.push_back(Bundle::trivial(pt, r));
  for (const Bundle& e : split_family(p1, 3)) es.push_back(e);
  for (const Bundle& e : es) {
    const SpacePtr p = Space::proj_bundle(e.base(), e, "g");
    const auto base_basis = e.base()->ring()->basis();
    std::set<Exponents> want;
    for (const auto& b : base_basis)
      for (int j = 0; j < e.rank(); ++j) {
        Exponents x = b;
        x.push_back(j);
        want.insert(x);
      }
    const auto got_list = p->ring()->basis();
    const std::set<Exponents> got(got_list.begin(), got_list.end());
    t.add(p->ring()->rank() == base_basis.size() * static_cast<std::size_t>(e.rank()) && got == want &&
              got_list.size() == got.size(),
          describe(p));
  }
  return t.outcome("bundles");
}

Outcome thom_quotient() {
  Tally t;
  for (const Theory& th : theories()) {
    const SpacePtr pt = Space::point(th);
    for (int n : {1, 2}) {
      const SpacePtr base = Space::proj_bundle(pt, Bundle::trivial(pt, n + 1), "h");
      for (const Bundle& e : split_family(base, 3)) {
        const SpacePtr c = projective_completion(e, "g");
        const Bundle xi = universal_quotient(c);
        for (const auto& o : th.orientations())
          t.add(thom(e, c, o) == chern(e.rank(), xi, o), th.name() + "/" + o.name() + " " + describe(c));
      }
    }
  }
  return t.outcome();
}

Outcome whitney_todd() {
  Tally t;
  Rng rng(20240601);
  for (const Theory& th : {Theory::multiplicative(), Theory::universal(3)}) {
    const SpacePtr p3 = Space::projective_space(3, th);
    const auto& os = th.orientations();
    for (int i = 0; i < 60; ++i) {
      const Bundle a = random_bundle(p3, rng), b = random_bundle(p3, rng);
      const Orientation& o = os[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(os.size()) - 1))];
      t.add(total_chern(bundle_sum(a, b), o) == total_chern(a, o) * total_chern(b, o),
            "Whitney " + th.name() + "/" + o.name() + " instance " + std::to_string(i));

      const VirtualBundle v{random_bundle(p3, rng), random_bundle(p3, rng)};
      const VirtualBundle w{random_bundle(p3, rng), random_bundle(p3, rng)};
      const OrientationPair pair = make_pair(os[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(os.size()) - 1))],
                                             os[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(os.size()) - 1))]);
      t.add(todd(pair.phi, v + w, pair.second) == todd(pair.phi, v, pair.second) * todd(pair.phi, w, pair.second),
            "Todd " + th.name() + "/" + pair.name() + " instance " + std::to_string(i));
    }
  }
  return t.outcome("instances");
}

Outcome duality_triangular() {
  Tally t;
  std::size_t filtered_only = 0;
  for (const Theory& th : theories())
    for (const SpacePtr& p : tested_bundles(th))
      for (const auto& o : th.orientations()) {
        const Triangularity tri = duality_triangularity(duality_matrix(p, o)->c);
        if (!tri.strict() && tri.filtered()) ++filtered_only;
        t.add(tri.strict(), th.name() + "/" + o.name() + " " + describe(p));
      }
  Outcome out = t.outcome("matrices");
  if (filtered_only) out.detail += "; " + std::to_string(filtered_only) + " of the failures are unitriangular modulo the base augmentation";
  return out;
}

Outcome section_and_projection_formula() {
  Tally t;
  Rng rng(77);
  for (const Theory& th : theories()) {
    const SpacePtr pt = Space::point(th);
    std::vector<SpacePtr> proj;
    for (int n = 0; n <= 3; ++n) proj.push_back(Space::proj_bundle(pt, Bundle::trivial(pt, n + 1), "h"));
    const SpacePtr p1 = proj[1];
    const Elem h = p1->generator();

    // p_* s_* = 1 for the zero section s of P(E + O) -> S.
    for (const Bundle& e : {Bundle::trivial(pt, 1), Bundle::trivial(pt, 2), Bundle::from_roots(p1, {h}),
                            Bundle::from_roots(p1, {h, -h}), Bundle::from_roots(p1, {Elem(p1->ring()), h * Rational(2)})}) {
      const Embedding s = embed_zero_section(e, "s");
      for (const auto& o : th.orientations())
        for (const Elem& z : basis_classes(e.base()))
          t.add(pushforward_projection(s.target(), pushforward_embedding(s, z, o), o) == z,
                "p_* s_* on " + s.target()->label() + " " + o.name());
    }

    for (const SpacePtr& p : tested_bundles(th))
      for (const auto& o : th.orientations())
        for (int i = 0; i < 2; ++i) {
          const Elem x = random_class(p->base()->ring(), rng);
          const Elem y = random_class(p->ring(), rng);
          t.add(pushforward_projection(p, x.in(p->ring()) * y, o) == x * pushforward_projection(p, y, o),
                "projection formula for " + describe(p) + " " + o.name());
        }

    for (const Embedding& e : {embed_linear(proj[1], proj[3]), embed_linear(proj[0], proj[2]),
                               embed_zero_section(Bundle::from_roots(p1, {h}), "s"), embed_diagonal(p1, "k"),
                               embed_compose(embed_linear(proj[0], proj[1]), embed_linear(proj[1], proj[2]))})
      for (const auto& o : th.orientations())
        for (int i = 0; i < 3; ++i) {
          const Elem x = random_class(e.target()->ring(), rng);
          const Elem y = random_class(e.source()->ring(), rng);
          t.add(pushforward_embedding(e, e.restrict(x) * y, o) == x * pushforward_embedding(e, y, o),
                "projection formula for " + e.name() + " " + o.name());
        }
  }
  return t.outcome();
}

Outcome factorization_independence() {
  Tally t;
  for (const Theory& th : theories()) {
    const SpacePtr pt = Space::point(th);
    std::vector<SpacePtr> proj;
    for (int n = 0; n <= 2; ++n) proj.push_back(Space::proj_bundle(pt, Bundle::trivial(pt, n + 1), "h"));
    const Embedding i01 = embed_linear(proj[0], proj[1]);
    const Embedding i12 = embed_linear(proj[1], proj[2]);
    const Embedding i02 = embed_linear(proj[0], proj[2]);
    const Embedding comp = embed_compose(i01, i12);
    for (const auto& o : th.orientations()) {
      const std::string tag = th.name() + "/" + o.name();
      for (const Elem& z : basis_classes(proj[0])) {
        const Elem via_p1 = pushforward_projection(proj[1], pushforward_embedding(i01, z, o), o);
        const Elem via_p2 = pushforward_projection(proj[2], pushforward_embedding(i02, z, o), o);
        const Elem via_chain =
            pushforward_projection(proj[2], pushforward_embedding(i12, pushforward_embedding(i01, z, o), o), o);
        const Elem via_lci = pushforward_lci(comp, proj[2], z, o);
        t.add(via_p1 == z && via_p2 == z && via_chain == z && via_lci == z, "P0 chains " + tag);
        t.add(pushforward_embedding(comp, z, o) == pushforward_embedding(i12, pushforward_embedding(i01, z, o), o),
              "composite embedding " + tag);
      }
      for (const Elem& y : basis_classes(proj[1]))
        t.add(pushforward_projection(proj[2], pushforward_embedding(i12, y, o), o) ==
                  pushforward_projection(proj[1], y, o),
              "P1 in P2 " + tag + " on " + y.str());
    }
  }
  return t.outcome();
}

Outcome self_intersection() {
  Tally t;
  for (const Theory& th : theories()) {
    const SpacePtr pt = Space::point(th);
    std::vector<SpacePtr> proj;
    for (int n = 0; n <= 3; ++n) proj.push_back(Space::proj_bundle(pt, Bundle::trivial(pt, n + 1), "h"));
    const Elem h = proj[1]->generator();
    std::vector<Embedding> es;
    for (int n = 1; n <= 3; ++n)
      for (int m = 0; m < n; ++m) es.push_back(embed_linear(proj[static_cast<std::size_t>(m)], proj[static_cast<std::size_t>(n)]));
    es.push_back(embed_zero_section(Bundle::trivial(pt, 2), "s"));
    es.push_back(embed_zero_section(Bundle::from_roots(proj[1], {h}), "s"));
    es.push_back(embed_zero_section(Bundle::from_roots(proj[1], {h, -h}), "s"));
    es.push_back(embed_diagonal(proj[1], "k"));
    es.push_back(embed_diagonal(proj[2], "k"));
    es.push_back(embed_compose(embed_linear(proj[0], proj[1]), embed_linear(proj[1], proj[2])));
    es.push_back(embed_identity(proj[2]));
    for (const auto& e : es)
      for (const auto& o : th.orientations())
        t.add(self_intersection_check(e, o).passed(), th.name() + "/" + o.name() + " " + e.name());
  }
  return t.outcome("embeddings");
}

// The sweep is shared by the two Riemann-Roch criteria.
const std::vector<CheckReport>& sweep() {
  static const std::vector<CheckReport> all = [] {
    std::vector<CheckReport> out;
    for (const Theory& th : theories()) {
      auto part = grr_sweep(th, 3, default_threads());
      for (auto& r : part) r.orientation = th.name() + "/" + r.orientation;
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }();
  return all;
}

Outcome sweep_subset(const std::set<std::string>& kinds) {
  Tally t;
  for (const auto& r : sweep())
    if (kinds.count(r.check)) t.add(r.passed(), r.check + " " + r.space + " " + r.orientation + " on " + r.subject);
  return t.outcome();
}

// Pascal's triangle, extended by C(m, k) = 0 for m < k.
Rational binomial_oracle(int m, int k) {
  if (m < 0 || k < 0 || k > m) return Rational(0);
  std::vector<std::vector<long>> row(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    row[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j)
      row[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          row[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] + row[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
  }
  return Rational(row[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]);
}

Outcome hirzebruch_numbers() {
  Tally t;
  for (int n = 0; n <= 3; ++n) {
    for (int d = 0; d <= 5; ++d)
      t.add(hrr_number(n, d) == binomial_oracle(n + d, n), "n = " + std::to_string(n) + ", d = " + std::to_string(d));
    for (int d = -n; d < 0; ++d)
      t.add(hrr_number(n, d).is_zero() && binomial_oracle(n + d, n).is_zero(),
            "n = " + std::to_string(n) + ", d = " + std::to_string(d));
  }
  return t.outcome("numbers");
}

struct Run {
  std::string out;
  int status = -1;
};

Run run_cli(const std::string& cli, const std::string& dir, const std::string& name, const std::string& flags) {
  const std::string cmd = "cd '" + dir + "' && '" + cli + "' run " + flags + " '" + name + ".orr' 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

Outcome golden_corpus(const std::string& cli, const std::string& dir) {
  Tally t;
  std::ifstream cases(dir + "/cases.txt");
  if (!cases) return {false, "cannot read " + dir + "/cases.txt"};
  std::string line;
  bool saw_failure_exit = false;
  while (std::getline(cases, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name, flags, f;
    int exit_code = 0;
    fields >> name >> exit_code;
    while (fields >> f) flags += (flags.empty() ? "" : " ") + f;
    std::ifstream in(dir + "/" + name + ".out", std::ios::binary);
    const std::string want((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const Run a = run_cli(cli, dir, name, flags);
    const Run b = run_cli(cli, dir, name, flags);
    t.add(a.status == exit_code && a.out == want && b.out == a.out && b.status == a.status,
          name + " (exit " + std::to_string(a.status) + ")");
    saw_failure_exit = saw_failure_exit || (exit_code == 1 && a.status == 1);
  }
  Outcome out = t.outcome("scripts");
  if (t.checks < 10) {
    out.pass = false;
    out.detail += "; fewer than 10 scripts";
  }
  if (!saw_failure_exit) {
    out.pass = false;
    out.detail += "; no script exercises exit code 1";
  }
  return out;
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria runner"};
  std::string cli, golden;
  std::vector<int> expect_fail;
  app.add_option("--cli", cli, "orient-rr executable")->required();
  app.add_option("--golden", golden, "golden corpus directory")->required();
  app.add_option("--expect-fail", expect_fail, "criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "formal group law residuals", 10, fgl_suite},
      {2, "projective bundle theorem", 1, projective_bundle_theorem},
      {3, "Thom class equals c_rank of the quotient", 10, thom_quotient},
      {4, "Whitney and Todd multiplicativity", 30, whitney_todd},
      {5, "duality matrix unitriangular", 10, duality_triangular},
      {6, "section identity and projection formula", 30, section_and_projection_formula},
      {7, "factorization independence", 10, factorization_independence},
      {8, "self-intersection formula", 5, self_intersection},
      {9, "Riemann-Roch for closed immersions", 60, [] { return sweep_subset({"rr_closed"}); }},
      {10, "Riemann-Roch for projections and lci maps", 120,
       [] {
         Outcome o = sweep_subset({"rr_projection", "grr_lci"});
         o.detail += "; sweep timed under criterion 9";
         return o;
       }},
      {11, "Hirzebruch numbers against binomials", 10, hirzebruch_numbers},
      {12, "CLI golden corpus", 5, [&] { return golden_corpus(cli, golden); }},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    if (!o.pass) failed.insert(c.id);
    std::cout << "criterion " << std::setw(2) << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << " ("
              << o.detail << ") [" << std::fixed << std::setprecision(2) << secs << " s]" << std::endl;
  }

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (failed == expected) return 0;
  for (int id : failed)
    if (!expected.count(id)) std::cout << "unexpected failure: criterion " << id << "\n";
  for (int id : expected)
    if (!failed.count(id)) std::cout << "expected failure did not occur: criterion " << id << "\n";
  return 1;
}
