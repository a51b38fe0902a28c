#include <map>
#include <optional>
#include <sstream>

#include "orr/dsl.hpp"
#include "orr/rr.hpp"

namespace orr::dsl {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kReportVersion = "1";

const Node* find_modifier(const Node& s, const std::string& name) {
  for (const auto& k : s.kids)
    if (k.kind == Node::Kind::modifier && k.text == name) return &k;
  return nullptr;
}

std::vector<const Node*> arguments(const Node& s) {
  std::vector<const Node*> out;
  for (const auto& k : s.kids)
    if (k.kind != Node::Kind::modifier) out.push_back(&k);
  return out;
}

long integer_value(const Node& n) { return n.kind == Node::Kind::neg ? -n.kids[0].value : n.value; }

json report_json(const CheckReport& r) {
  json j;
  j["check"] = r.check;
  j["space"] = r.space;
  j["orientation"] = r.orientation;
  j["subject"] = r.subject;
  j["status"] = r.passed() ? "pass" : "fail";
  j["lhs"] = r.lhs.str();
  j["rhs"] = r.rhs.str();
  return j;
}

json fgl_json(const std::string& law, const FglReport& r) {
  json j;
  j["check"] = "fgl";
  j["space"] = "pt";
  j["orientation"] = law;
  j["status"] = r.passed() ? "pass" : "fail";
  j["left_unit"] = r.left_unit.str();
  j["right_unit"] = r.right_unit.str();
  j["commutativity"] = r.commutativity.str();
  j["associativity"] = r.associativity.str();
  j["weight_homogeneous"] = r.weight_homogeneous;
  return j;
}

struct Context {
  SpacePtr in;
  const Orientation* orientation = nullptr;
};

class Interpreter {
 public:
  explicit Interpreter(const RunOptions& opt) : opt_(opt), theory_name_(opt.theory), truncation_(opt.truncation) {}

  RunResult run(const Script& script) {
    json results = json::array();
    int exit_code = 0;
    // theory/truncation statements come first (the parser enforces it).
    for (const auto& s : script.statements) {
      if (s.text == "theory") theory_name_ = s.name;
      if (s.text == "truncation") truncation_ = static_cast<int>(s.value);
    }
    bool stop = false;
    for (const auto& s : script.statements) {
      if (stop) break;
      if (s.text == "theory" || s.text == "truncation") continue;
      const std::string command = print_statement(s);
      try {
        ensure_theory();
        const bool declaration =
            s.text == "orientation" || s.text == "space" || s.text == "bundle" || s.text == "embedding";
        if (declaration) {
          declare(s);
          continue;
        }
        json entry;
        entry["command"] = command;
        execute(s, entry);
        if (entry["status"] == "fail") exit_code = std::max(exit_code, 1);
        results.push_back(std::move(entry));
      } catch (const Error& e) {
        json entry;
        entry["command"] = command;
        entry["status"] = "error";
        entry["code"] = std::string(to_string(e.code()));
        entry["message"] = e.what();
        results.push_back(std::move(entry));
        exit_code = std::max(exit_code, e.code() == ErrorCode::internal_invariant ? 3 : 1);
        if (s.text == "orientation" || s.text == "space" || s.text == "bundle" || s.text == "embedding")
          stop = true;
      }
    }
    json report;
    report["version"] = kReportVersion;
    try {
      ensure_theory();
      report["theory"] = theory_->name();
      json names = json::array();
      for (const auto& o : theory_->orientations()) names.push_back(o.name());
      report["orientations"] = names;
    } catch (const Error& e) {
      report["theory"] = theory_name_;
      report["orientations"] = json::array();
      json entry;
      entry["command"] = "theory " + theory_name_;
      entry["status"] = "error";
      entry["code"] = std::string(to_string(e.code()));
      entry["message"] = e.what();
      results.push_back(std::move(entry));
      exit_code = std::max(exit_code, 1);
    }
    report["truncation"] = truncation_;
    report["results"] = std::move(results);
    return {std::move(report), exit_code};
  }

 private:
  // -- environment ----------------------------------------------------------

  void ensure_theory() {
    if (theory_) return;
    theory_ = Theory::parse(theory_name_, truncation_);
    point_ = Space::point(*theory_);
    point_->set_label("pt");
    for (const auto& o : theory_->orientations()) orientations_[o.name()] = o;
  }

  const Orientation& default_orientation() const { return theory_->orientations().back(); }

  const Orientation& orientation(const std::string& name) const { return orientations_.at(name); }

  Context context(const Node& s) const {
    Context c;
    if (const Node* m = find_modifier(s, "in")) c.in = spaces_.at(m->kids[0].text);
    c.orientation = &default_orientation();
    if (const Node* m = find_modifier(s, "with")) c.orientation = &orientation(m->kids[0].text);
    return c;
  }

  std::string generator_modifier(const Node& s) const { return find_modifier(s, "gen")->kids[0].text; }

  void remember(const SpacePtr& s) { order_.push_back(s); }

  void declare(const Node& s) {
    const Node& rhs = s.kids.front();
    if (s.text == "orientation") {
      const std::string& spec = rhs.text;
      std::string target = spec == "identity" ? "identity" : spec == "multiplicative" ? "mult" : "u" + spec.substr(10);
      orientations_[s.name] = theory_->orientation(target);
    } else if (s.text == "space") {
      SpacePtr sp;
      bool fresh = true;
      if (rhs.kind == Node::Kind::proj) {
        const SpacePtr base = rhs.kids.empty() ? point_ : spaces_.at(rhs.kids[0].text);
        sp = Space::proj_bundle(base, Bundle::trivial(base, static_cast<int>(rhs.value) + 1), generator_modifier(s));
      } else if (rhs.kind == Node::Kind::ident && rhs.text == "point") {
        sp = point_;
        fresh = false;
      } else if (rhs.kind == Node::Kind::call && rhs.text == "proj") {
        const Bundle b = bundle(rhs.kids[0]);
        sp = Space::proj_bundle(b.base(), b, generator_modifier(s));
      } else if (rhs.kind == Node::Kind::call && rhs.text == "completion") {
        sp = projective_completion(bundle(rhs.kids[0]), generator_modifier(s));
      } else if (rhs.kind == Node::Kind::call && rhs.text == "kunneth") {
        const SpacePtr p = space(rhs.kids[0]);
        sp = Space::proj_bundle(p, p->bundle().pullback(p), generator_modifier(s));
      } else {
        sp = space(rhs);
        fresh = false;
      }
      if (fresh) sp->set_label(s.name);
      spaces_[s.name] = sp;
      remember(sp);
    } else if (s.text == "bundle") {
      bundles_[s.name] = bundle(rhs);
    } else {
      Embedding e;
      if (rhs.kind == Node::Kind::call && rhs.text == "zero_section") {
        e = embed_zero_section(bundle(rhs.kids[0]), generator_modifier(s));
        remember(e.target());
      } else if (rhs.kind == Node::Kind::call && rhs.text == "diagonal") {
        e = embed_diagonal(space(rhs.kids[0]), generator_modifier(s));
        remember(e.target());
      } else {
        e = embedding(rhs);
      }
      embeddings_[s.name] = e;
    }
  }

  // -- evaluation -----------------------------------------------------------

  SpacePtr space(const Node& n) const {
    if (n.kind == Node::Kind::ident) return spaces_.at(n.text);
    const std::string& f = n.text;
    if (f == "target") return embedding(n.kids[0]).target();
    if (f == "source") return embedding(n.kids[0]).source();
    const SpacePtr s = space(n.kids[0]);
    if (s->is_point()) fail(ErrorCode::base_mismatch, "the point has no base");
    return s->base();
  }

  Embedding embedding(const Node& n) const {
    if (n.kind == Node::Kind::ident) return embeddings_.at(n.text);
    const std::string& f = n.text;
    if (f == "linear") return embed_linear(space(n.kids[0]), space(n.kids[1]));
    if (f == "identity") return embed_identity(space(n.kids[0]));
    return embed_compose(embedding(n.kids[0]), embedding(n.kids[1]));
  }

  Bundle bundle(const Node& n) const {
    switch (n.kind) {
      case Node::Kind::ident: return bundles_.at(n.text);
      case Node::Kind::binary: return bundle_sum(bundle(n.kids[0]), bundle(n.kids[1]));
      case Node::Kind::at: {
        const SpacePtr s = space(n.kids[1]);
        const Node& f = n.kids[0];
        if (f.text == "O") {
          // O(1) is the dual of the tautological sub-line.
          const long d = integer_value(f.kids[0]);
          return Bundle::line(s, s->is_point() ? Elem(s->ring()) : s->generator() * Rational(-d));
        }
        if (f.text == "trivial") return Bundle::trivial(s, static_cast<int>(integer_value(f.kids[0])));
        Context c;
        c.in = s;
        c.orientation = &default_orientation();
        std::vector<Elem> xs;
        for (const auto& k : f.kids) xs.push_back(cls(k, c).in(s->ring()));
        return f.text == "roots" ? Bundle::from_roots(s, std::move(xs)) : Bundle::from_chern(s, std::move(xs));
      }
      case Node::Kind::call: {
        const std::string& f = n.text;
        if (f == "taut") return tautological_sub(space(n.kids[0]));
        if (f == "xi") return universal_quotient(space(n.kids[0]));
        if (f == "T") return relative_tangent(space(n.kids[0]));
        if (f == "dual") return bundle_dual(bundle(n.kids[0]));
        if (f == "tensor") return bundle_tensor_line(bundle(n.kids[0]), bundle(n.kids[1]));
        if (f == "pullback") return bundle(n.kids[0]).pullback(space(n.kids[1]));
        return embedding(n.kids[0]).normal();
      }
      default: break;
    }
    fail(ErrorCode::internal_invariant, "unexpected bundle expression " + print_expr(n));
  }

  bool names_space(const Node& n) const { return n.kind == Node::Kind::ident && spaces_.count(n.text); }

  Elem identifier(const std::string& name, const Context& c) const {
    if (c.in && c.in->ring()->find_generator(name) >= 0) return Elem::generator(c.in->ring(), name);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it)
      if ((*it)->ring()->find_generator(name) >= 0) return Elem::generator((*it)->ring(), name);
    if (theory_->point_ring()->coeffs()->find(name) >= 0) return Elem::symbol(theory_->point_ring(), name);
    fail(ErrorCode::unknown_identifier, "generator '" + name + "' belongs to no named space");
  }

  // Generators in the argument of push/pull resolve in the space the map starts from.
  Context argument_scope(const Node& f, const Context& c, bool pushing) const {
    Context inner = c;
    if (names_space(f)) {
      const SpacePtr s = spaces_.at(f.text);
      inner.in = pushing || s->is_point() ? s : s->base();
    } else {
      const Embedding e = embedding(f);
      inner.in = pushing ? e.source() : e.target();
    }
    return inner;
  }

  Elem push(const Node& f, const Elem& x, const Orientation& o) const {
    if (names_space(f)) return pushforward_projection(spaces_.at(f.text), x, o);
    return pushforward_embedding(embedding(f), x, o);
  }

  Elem pull(const Node& f, const Elem& x) const {
    if (names_space(f)) {
      const SpacePtr s = spaces_.at(f.text);
      return x.in(s->base()->ring()).in(s->ring());
    }
    return embedding(f).restrict(x);
  }

  Elem cls(const Node& n, const Context& c) const {
    const Orientation& o = *c.orientation;
    const RingPtr& pt = theory_->point_ring();
    switch (n.kind) {
      case Node::Kind::number: return Elem::constant(pt, Rational(n.value));
      case Node::Kind::ident: return identifier(n.text, c);
      case Node::Kind::neg: return -cls(n.kids[0], c);
      case Node::Kind::power: {
        const Elem b = cls(n.kids[0], c);
        return n.value >= 0 ? b.pow(static_cast<int>(n.value)) : b.inverse().pow(static_cast<int>(-n.value));
      }
      case Node::Kind::binary: {
        const Elem a = cls(n.kids[0], c);
        const Elem b = cls(n.kids[1], c);
        if (n.text == "+") return a + b;
        if (n.text == "-") return a - b;
        if (n.text == "*") return a * b;
        return a * b.inverse();
      }
      case Node::Kind::call: break;
      default: fail(ErrorCode::internal_invariant, "unexpected class expression " + print_expr(n));
    }
    const std::string& f = n.text;
    const auto& k = n.kids;
    if (f == "chern") return chern(static_cast<int>(integer_value(k[0])), bundle(k[1]), o);
    if (f == "c1") return chern(1, bundle(k[0]), o);
    if (f == "total") return total_chern(bundle(k[0]), o);
    if (f == "euler") return euler(bundle(k[0]), o);
    if (f == "thom") return thom(bundle(k[0]), space(k[1]), o);
    if (f == "todd") {
      const OrientationPair p = make_pair(orientation(k[0].text), orientation(k[1].text));
      const Bundle plus = bundle(k[2]);
      VirtualBundle v = VirtualBundle::of(plus);
      if (k.size() == 4) v.minus = bundle(k[3]);
      return todd(p.phi, v, p.second);
    }
    if (f == "c1_tensor") return c1_tensor(bundle(k[0]), bundle(k[1]), o);
    if (f == "top_tensor") return top_chern_line_tensor(bundle(k[0]), bundle(k[1]), o);
    if (f == "theta") {
      Context inner = c;
      return orientation(k[0].text).apply(cls(k[1], inner));
    }
    if (f == "fdl") return embedding(k[0]).fdl(o);
    if (f == "excess") return excess_class(embedding(k[0]), embedding(k[1]), o);
    if (f == "push") return push(k[0], cls(k[1], argument_scope(k[0], c, true)), o);
    return pull(k[0], cls(k[1], argument_scope(k[0], c, false)));
  }

  TruncatedSeries series(const Node& n) const {
    const RingPtr& pt = theory_->point_ring();
    const std::vector<std::string> vars{"x", "y"};
    switch (n.kind) {
      case Node::Kind::number:
        return TruncatedSeries::constant(pt, vars, truncation_, Elem::constant(pt, Rational(n.value)));
      case Node::Kind::ident:
        if (n.text == "x") return TruncatedSeries::variable(pt, vars, truncation_, 0);
        if (n.text == "y") return TruncatedSeries::variable(pt, vars, truncation_, 1);
        return TruncatedSeries::constant(pt, vars, truncation_, Elem::symbol(pt, n.text));
      case Node::Kind::neg: return -series(n.kids[0]);
      case Node::Kind::power: {
        const TruncatedSeries b = series(n.kids[0]);
        TruncatedSeries out = TruncatedSeries::constant(pt, vars, truncation_, Elem::constant(pt, Rational(1)));
        for (long i = 0; i < n.value; ++i) out = out * b;
        return out;
      }
      case Node::Kind::binary: {
        const TruncatedSeries a = series(n.kids[0]);
        if (n.text == "/") {
          const TruncatedSeries b = series(n.kids[1]);
          const auto& bc = b.coefficients();
          if (bc.size() != 1 || bc.begin()->first[0] != 0 || bc.begin()->first[1] != 0)
            fail(ErrorCode::not_a_unit, "series may only be divided by a constant");
          return a * b.constant_term().inverse();
        }
        const TruncatedSeries b = series(n.kids[1]);
        if (n.text == "+") return a + b;
        if (n.text == "-") return a - b;
        return a * b;
      }
      default: break;
    }
    fail(ErrorCode::internal_invariant, "unexpected series expression " + print_expr(n));
  }

  // -- commands -------------------------------------------------------------

  void execute(const Node& s, json& entry) {
    const Context c = context(s);
    const auto args = arguments(s);
    auto finish = [&](const Elem& v) {
      entry["status"] = "ok";
      entry["value"] = (c.in ? v.in(c.in->ring()) : v).str();
    };
    if (s.text == "eval") {
      finish(cls(*args[0], c));
      return;
    }
    if (s.text == "push") {
      finish(push(*args[0], cls(*args[1], argument_scope(*args[0], c, true)), *c.orientation));
      return;
    }
    if (s.text == "pull") {
      finish(pull(*args[0], cls(*args[1], argument_scope(*args[0], c, false))));
      return;
    }
    const std::string& kind = s.name;
    auto verdict = [&](const std::string& space, const std::string& orientation, const Elem& lhs, const Elem& rhs) {
      entry["check"] = kind;
      entry["space"] = space;
      entry["orientation"] = orientation;
      entry["status"] = lhs == rhs ? "pass" : "fail";
      entry["lhs"] = lhs.str();
      entry["rhs"] = rhs.str();
    };
    auto add_report = [&](const CheckReport& r) {
      const json j = report_json(r);
      for (const auto& [key, value] : j.items()) entry[key] = value;
    };
    if (kind == "grr") {
      const Node* m = find_modifier(s, "max_dim");
      const int d = m ? static_cast<int>(m->value) : opt_.max_dim;
      const auto reports = grr_sweep(*theory_, d, opt_.threads);
      std::size_t failed = 0;
      json list = json::array();
      for (const auto& r : reports) {
        failed += !r.passed();
        list.push_back(report_json(r));
      }
      entry["check"] = "grr";
      entry["status"] = failed == 0 ? "pass" : "fail";
      entry["checks"] = reports.size();
      entry["failed"] = failed;
      entry["reports"] = std::move(list);
    } else if (kind == "fgl") {
      json list = json::array();
      bool ok = true;
      if (args.empty()) {
        for (const auto& o : theory_->orientations()) {
          const FglReport r = fgl_check(o.law());
          ok = ok && r.passed();
          list.push_back(fgl_json(o.name(), r));
        }
      } else {
        const FormalGroupLaw law("law", series(*args[0]));
        const FglReport r = fgl_check(law);
        ok = r.passed();
        list.push_back(fgl_json(print_expr(*args[0]), r));
      }
      entry["check"] = "fgl";
      entry["status"] = ok ? "pass" : "fail";
      entry["reports"] = std::move(list);
    } else if (kind == "thom") {
      const Bundle e = bundle(*args[0]);
      std::string g = "h";
      for (int i = 2; e.base()->ring()->find_generator(g) >= 0; ++i) g = "h" + std::to_string(i);
      const SpacePtr p = projective_completion(e, g);
      const Elem lhs = thom(e, p, *c.orientation);
      verdict(p->label(), c.orientation->name(), lhs, chern(e.rank(), universal_quotient(p), *c.orientation));
    } else if (kind == "equal") {
      Elem a = cls(*args[0], c);
      Elem b = cls(*args[1], c);
      if (c.in) {
        a = a.in(c.in->ring());
        b = b.in(c.in->ring());
      }
      verdict(c.in ? c.in->label() : "-", c.orientation->name(), a, b);
    } else if (kind == "rr_closed" || kind == "rr_projection" || kind == "grr_lci") {
      const OrientationPair p = make_pair(orientation(args[0]->text), orientation(args[1]->text));
      if (kind == "rr_closed") {
        const Embedding e = embedding(*args[2]);
        add_report(verify_rr_closed(p, e, cls(*args[3], Context{e.source(), &p.second})));
      } else if (kind == "rr_projection") {
        const SpacePtr sp = space(*args[2]);
        add_report(verify_rr_projection(p, sp, cls(*args[3], Context{sp, &p.second})));
      } else {
        const Embedding e = embedding(*args[2]);
        add_report(verify_grr_lci(p, e, space(*args[3]), cls(*args[4], Context{e.source(), &p.second})));
      }
    } else if (kind == "self_intersection") {
      const Embedding e = embedding(*args[0]);
      const SelfIntersection r = self_intersection_check(e, *c.orientation);
      verdict(e.source()->label() + "->" + e.target()->label(), c.orientation->name(), r.lhs, r.rhs);
    } else if (kind == "duality") {
      const SpacePtr sp = space(*args[0]);
      if (sp->is_point()) fail(ErrorCode::presentation, "the point has no duality matrix");
      const auto d = duality_matrix(sp, *c.orientation);
      const Triangularity t = duality_triangularity(d->c);
      json matrix = json::array();
      for (const auto& row : d->c) {
        json r = json::array();
        for (const auto& x : row) r.push_back(x.str());
        matrix.push_back(std::move(r));
      }
      entry["check"] = "duality";
      entry["space"] = sp->label();
      entry["orientation"] = c.orientation->name();
      entry["status"] = t.filtered() ? "pass" : "fail";
      entry["strict"] = t.strict();
      entry["matrix"] = std::move(matrix);
    } else if (kind == "hrr") {
      const int n = static_cast<int>(integer_value(*args[0]));
      const int d = static_cast<int>(integer_value(*args[1]));
      const Rational got = hrr_number(n, d);
      const Rational want(integer_value(*args[2]));
      entry["check"] = "hrr";
      entry["space"] = "P" + std::to_string(n);
      entry["orientation"] = "mult";
      entry["status"] = got == want ? "pass" : "fail";
      entry["lhs"] = got.str();
      entry["rhs"] = want.str();
    }
  }

  RunOptions opt_;
  std::string theory_name_;
  int truncation_;
  std::optional<Theory> theory_;
  SpacePtr point_;
  std::map<std::string, Orientation> orientations_;
  std::map<std::string, SpacePtr> spaces_;
  std::map<std::string, Bundle> bundles_;
  std::map<std::string, Embedding> embeddings_;
  std::vector<SpacePtr> order_;
};

}  // namespace

RunResult run(const Script& script, const RunOptions& options) { return Interpreter(options).run(script); }

std::string render_text(const nlohmann::ordered_json& report) {
  std::ostringstream out;
  out << "theory " << report["theory"].get<std::string>() << ", truncation " << report["truncation"].get<int>()
      << "\n";
  for (const auto& r : report["results"]) {
    const std::string status = r["status"];
    out << r["command"].get<std::string>();
    if (status == "ok") {
      out << " = " << r["value"].get<std::string>() << "\n";
    } else if (status == "error") {
      out << ": ERROR " << r["code"].get<std::string>() << " " << r["message"].get<std::string>() << "\n";
    } else {
      out << ": " << (status == "pass" ? "PASS" : "FAIL");
      if (r.contains("checks")) out << " (" << r["failed"].get<std::size_t>() << " of " << r["checks"].get<std::size_t>() << " failed)";
      if (status == "fail" && r.contains("lhs"))
        out << "  lhs = " << r["lhs"].get<std::string>() << ", rhs = " << r["rhs"].get<std::string>();
      out << "\n";
      if (r.contains("reports"))
        for (const auto& sub : r["reports"])
          if (sub["status"] == "fail") {
            out << "  " << sub["check"].get<std::string>() << " " << sub["space"].get<std::string>() << " "
                << sub["orientation"].get<std::string>();
            if (sub.contains("lhs"))
              out << ": " << sub["lhs"].get<std::string>() << " != " << sub["rhs"].get<std::string>();
            for (const char* key : {"left_unit", "right_unit", "commutativity", "associativity"})
              if (sub.contains(key)) out << "\n    " << key << " = " << sub[key].get<std::string>();
            if (sub.contains("weight_homogeneous") && !sub["weight_homogeneous"].get<bool>())
              out << "\n    not weight-homogeneous";
            out << "\n";
          }
    }
  }
  return out.str();
}

}  // namespace orr::dsl
