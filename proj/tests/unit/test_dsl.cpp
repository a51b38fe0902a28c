#include <doctest.h>

#include "orr/dsl.hpp"
#include "support.hpp"

using namespace orr;
using namespace orr::dsl;
using orr::test::Rng;
using orr::test::uniform;

namespace {

struct Failure {
  ErrorCode code;
  int line;
  int column;
};

Failure parse_failure(const std::string& text, const std::string& theory = "additive") {
  try {
    parse(text, theory);
  } catch (const ParseError& e) {
    return {e.code(), e.line(), e.column()};
  }
  FAIL("parsed without error: " << text);
  return {};
}

nlohmann::ordered_json run_text(const std::string& text, int* exit_code = nullptr) {
  const RunResult r = run(parse(text), RunOptions{});
  if (exit_code) *exit_code = r.exit_code;
  return r.report;
}

std::string first_code(const std::string& text) {
  const auto report = run_text(text);
  for (const auto& r : report["results"])
    if (r["status"] == "error") return r["code"];
  return "";
}

// Random class expressions over the declarations of kHeader.
std::string random_class(Rng& rng, int depth) {
  if (depth == 0 || uniform(rng, 0, 3) == 0) {
    switch (uniform(rng, 0, 6)) {
      case 0: return std::to_string(uniform(rng, 0, 9));
      case 1: return "h";
      case 2: return "beta";
      case 3: return "chern(" + std::to_string(uniform(rng, 0, 2)) + ", E)";
      case 4: return "c1(O(" + std::to_string(uniform(rng, -2, 2)) + ")@P)";
      case 5: return "push(z, " + random_class(rng, 0) + ")";
      default: return "todd(mult, identity, T(P))";
    }
  }
  switch (uniform(rng, 0, 5)) {
    case 0: return random_class(rng, depth - 1) + " + " + random_class(rng, depth - 1);
    case 1: return random_class(rng, depth - 1) + " - " + random_class(rng, depth - 1);
    case 2: return random_class(rng, depth - 1) + " * " + random_class(rng, depth - 1);
    case 3: return "-" + random_class(rng, depth - 1);
    case 4: return "(" + random_class(rng, depth - 1) + ")^" + std::to_string(uniform(rng, 0, 3));
    default: return "(" + random_class(rng, depth - 1) + ")";
  }
}

const char* kHeader =
    "theory multiplicative;\n"
    "space P = proj 2;\n"
    "bundle E = O(1)@P + O(-1)@P;\n"
    "embedding z = zero_section(E);\n";

}  // namespace

TEST_CASE("valid scripts") {
  CHECK(parse("theory multiplicative; space P2 = proj 2; eval chern(1, O(1)@P2);").statements.size() == 3);
  const Script s = parse(
      "theory universal:2;  # comment\n"
      "truncation 8;\n"
      "orientation K = universal:2;\n"
      "space X = point;\n"
      "space P1 = proj 1 over X gen a;\n"
      "bundle L = roots(a)@P1;\n"
      "space Q = completion(L);\n"
      "embedding d = diagonal(P1);\n"
      "embedding i = compose(linear(X, P1), identity(P1));\n"
      "eval thom(L, Q) + fdl(d) with K;\n"
      "push(P1, a^2 - b1*a) with u1;\n"
      "pull(i, a);\n"
      "check grr max_dim 1;\n"
      "check fgl(x + y + b1*x*y);\n"
      "check rr_projection(u1, identity, P1, 1);\n");
  CHECK(s.statements.size() == 15);
}

TEST_CASE("parse errors carry codes and positions") {
  Failure f = parse_failure("space X = proj -1;");
  CHECK(f.code == ErrorCode::range);
  CHECK(f.line == 1);
  CHECK(f.column == 16);

  f = parse_failure("space P = proj 1;\neval chern(1, E);");
  CHECK(f.code == ErrorCode::unknown_identifier);
  CHECK(f.line == 2);
  CHECK(f.column == 15);

  f = parse_failure("space P = proj 1; eval chern(1);");
  CHECK(f.code == ErrorCode::arity);

  CHECK(parse_failure("eval 1 +;").code == ErrorCode::syntax);
  CHECK(parse_failure("eval 1").code == ErrorCode::syntax);
  CHECK(parse_failure("eval $;").code == ErrorCode::syntax);
  CHECK(parse_failure("space P = proj 1; space P = proj 2;").code == ErrorCode::duplicate_name);
  CHECK(parse_failure("space beta = proj 1;", "multiplicative").code == ErrorCode::duplicate_name);
  CHECK(parse_failure("space P = proj 1 gen beta;", "multiplicative").code == ErrorCode::duplicate_name);
  CHECK(parse_failure("theory universal:0;").code == ErrorCode::range);
  CHECK(parse_failure("theory cobordism;").code == ErrorCode::unknown_identifier);
  CHECK(parse_failure("space P = proj 1; theory additive;").code == ErrorCode::syntax);
  CHECK(parse_failure("orientation K = multiplicative;").code == ErrorCode::incompatible);
  CHECK(parse_failure("orientation K = universal:3;", "universal:2").code == ErrorCode::range);
  CHECK(parse_failure("space P = proj 1; eval chern(1, O(1)@P) with foo;").code == ErrorCode::unknown_identifier);
  CHECK(parse_failure("space P = proj 1; eval chern(1, P);").code == ErrorCode::syntax);
  CHECK(parse_failure("space P = proj 1; eval chern(1, O(1));").code == ErrorCode::syntax);
  CHECK(parse_failure("space P = proj 1; eval frobnicate(P);").code == ErrorCode::unknown_identifier);
  CHECK(parse_failure("check nothing;").code == ErrorCode::unknown_identifier);
  CHECK(parse_failure("check hrr(1, 2);").code == ErrorCode::arity);
  CHECK(parse_failure("check grr max_dim 9;").code == ErrorCode::range);
  CHECK(parse_failure("space P = proj 1; bundle E = trivial(-1)@P;").code == ErrorCode::range);
  CHECK(parse_failure("eval 99999999999999999999;").code == ErrorCode::range);
  CHECK(parse_failure("space P = proj 1; eval push(diagonal(P), 1);").code == ErrorCode::syntax);
  CHECK(parse_failure("space P = proj 1; eval 1 in P in P;").code == ErrorCode::syntax);
}

TEST_CASE("default generators are written into the tree") {
  const std::string printed = print(parse("space P = proj 1; space Q = proj 1 over P; space K = kunneth(Q);"));
  CHECK(printed == "space P = proj 1 gen h;\nspace Q = proj 1 over P gen h2;\nspace K = kunneth(Q) gen h2_2;\n");
}

TEST_CASE("parse-print-parse fixpoint on generated scripts") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    std::string text = kHeader;
    const int n = uniform(rng, 1, 4);
    for (int k = 0; k < n; ++k) {
      const std::string e = random_class(rng, 4);
      switch (uniform(rng, 0, 2)) {
        case 0: text += "eval " + e + ";\n"; break;
        case 1: text += "check equal(" + e + ", " + random_class(rng, 2) + ") in P with identity;\n"; break;
        default: text += "push(P, " + e + ");\n"; break;
      }
    }
    const Script a = parse(text);
    const std::string printed = print(a);
    const Script b = parse(printed);
    CHECK(a.statements == b.statements);
    CHECK(print(b) == printed);
  }
}

TEST_CASE("printing keeps precedence") {
  const auto round = [](const std::string& e) {
    const Script s = parse("theory multiplicative; space P = proj 2; eval " + e + ";");
    return print_expr(s.statements.back().kids[0]);
  };
  CHECK(round("(h + 1) * (h - 2)") == "(h + 1) * (h - 2)");
  CHECK(round("h - (1 - h)") == "h - (1 - h)");
  CHECK(round("h - 1 - h") == "h - 1 - h");
  CHECK(round("-h^2") == "-h^2");
  CHECK(round("(-h)^2") == "(-h)^2");
  CHECK(round("beta^-1 * h") == "beta^-1 * h");
  CHECK(round("((h))") == "h");
}

TEST_CASE("run: values and verdicts") {
  int code = -1;
  const auto report = run_text(
      "theory multiplicative; space P2 = proj 2;"
      "eval c1_tensor(O(1)@P2, O(1)@P2);"
      "eval chern(1, O(1)@P2) with identity;"
      "push(P2, 1);"
      "check hrr(2, 1, 3);",
      &code);
  CHECK(code == 0);
  CHECK(report["theory"] == "multiplicative");
  CHECK(report["truncation"] == 10);
  const auto& r = report["results"];
  CHECK(r[0]["value"] == "-2*h - 2*beta*h^2");
  CHECK(r[1]["value"] == "-h");
  CHECK(r[2]["value"] == "beta^2");
  CHECK(r[3]["status"] == "pass");

  run_text("check fgl(x + y + x^2);", &code);
  CHECK(code == 1);
  run_text("check hrr(1, 1, 3);", &code);
  CHECK(code == 1);
}

TEST_CASE("run output is deterministic") {
  const std::string text = std::string(kHeader) +
                           "check self_intersection(z);\n"
                           "check rr_closed(mult, identity, z, h);\n"
                           "eval todd(mult, identity, T(P));\n"
                           "check grr max_dim 1;\n";
  CHECK(run_text(text).dump(2) == run_text(text).dump(2));
}

TEST_CASE("engine errors reach the report with stable codes") {
  CHECK(first_code("space P = proj 1; eval h^3 / 0;") == "E_NOT_A_UNIT");
  CHECK(first_code("space P = proj 1; eval 1 / h;") == "E_NOT_A_UNIT");
  CHECK(first_code("theory multiplicative; eval beta^-100;") == "E_BETA_WINDOW");
  CHECK(first_code("theory multiplicative; truncation 1; space P = proj 3; eval chern(1, O(1)@P) with mult;") ==
        "E_TRUNCATION_UNSOUND");
  CHECK(first_code("space P = proj 1; space Q = proj 2; eval c1_tensor(O(1)@P, O(1)@Q);") == "E_BASE_MISMATCH");
  CHECK(first_code("space P = proj 1; space Q = proj 2; embedding e = linear(Q, P);") == "E_RANGE");
  CHECK(first_code("space P = proj 1; bundle E = trivial(0)@P; space X = proj(E);") == "E_DEGENERATE_BUNDLE");
  CHECK(first_code("space P = proj 1; space P3 = proj 3; embedding e = linear(P, P3);"
                   "eval excess(identity(P), e);") == "E_INVALID_EXCESS");
  CHECK(first_code("space P = proj 1; eval chern(1, tensor(O(1)@P + O(1)@P, O(1)@P + O(1)@P));") == "E_ARITY");
  CHECK(first_code("space P = proj 1; bundle E = roots(1)@P;") == "E_PRESENTATION");
  CHECK(first_code("space P = proj 1; space X = point; check duality(X);") == "E_PRESENTATION");
}

TEST_CASE("declaration errors stop the script") {
  int code = -1;
  const auto report = run_text("space P = proj 1; bundle E = trivial(0)@P; space X = proj(E); eval 1;", &code);
  CHECK(code == 1);
  CHECK(report["results"].size() == 1);
}

TEST_CASE("text rendering") {
  const auto report = run_text("space P = proj 1; eval h + 1; check equal(h, 0) in P;");
  CHECK(render_text(report) ==
        "theory additive, truncation 10\n"
        "eval h + 1 = 1 + h\n"
        "check equal(h, 0) in P: FAIL  lhs = h, rhs = 0\n");
}
