#pragma once

// The orient-rr script language.
//
//   theory multiplicative;
//   truncation 10;
//   space P2 = proj 2;
//   bundle E = O(1)@P2 + O(-1)@P2;
//   eval chern(2, E) with mult;
//   check thom(E);
//
// Statements end with ';', '#' starts a comment. parse() resolves every name
// against the declarations before it, so run() only sees well-formed scripts.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orr/error.hpp"

namespace orr::dsl {

struct Node {
  enum class Kind {
    number,     // value
    ident,      // text
    call,       // text(kids...)
    binary,     // kids[0] text kids[1], text one of + - * /
    neg,        // -kids[0]
    power,      // kids[0]^value
    at,         // kids[0]@kids[1]
    proj,       // proj value [over kids[0]]
    modifier,   // text (gen, in, with, max_dim) followed by kids[0] or value
    statement,  // text is the keyword, name the declared name or check kind
  };

  Kind kind = Kind::number;
  std::string text;
  std::string name;
  long value = 0;
  std::vector<Node> kids;
  int line = 0;
  int column = 0;

  /// Structural equality; source positions are ignored.
  friend bool operator==(const Node& a, const Node& b);
};

struct Script {
  std::vector<Node> statements;
};

/// First error of a script, with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, int line, int column)
      : Error(code, message), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses and resolves a script. `default_theory` applies until a `theory`
/// statement overrides it.
Script parse(std::string_view text, const std::string& default_theory = "additive");

/// Canonical rendering; parse(print(s)) == s.
std::string print(const Script& script);
std::string print_statement(const Node& statement);
std::string print_expr(const Node& expr);

struct RunOptions {
  std::string theory = "additive";
  int truncation = 10;
  int max_dim = 3;
  unsigned threads = 1;
};

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = 0;  // 0 all pass, 1 a check failed or an engine error, 3 internal invariant
};

RunResult run(const Script& script, const RunOptions& options);

/// Plain-text rendering of a report, one line per result.
std::string render_text(const nlohmann::ordered_json& report);

}  // namespace orr::dsl
