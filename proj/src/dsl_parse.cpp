#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "orr/dsl.hpp"

namespace orr::dsl {

bool operator==(const Node& a, const Node& b) {
  return a.kind == b.kind && a.text == b.text && a.name == b.name && a.value == b.value && a.kids == b.kids;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  long value = 0;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      long v = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        const int d = s[j] - '0';
        if (v > (std::numeric_limits<long>::max() - d) / 10)
          throw ParseError(ErrorCode::range, "integer literal too large", line, col);
        v = v * 10 + d;
        ++j;
      }
      t.kind = Token::Kind::number;
      t.text = std::string(s.substr(i, j - i));
      t.value = v;
      advance(j - i);
    } else if (std::string_view(";=(),@+-*/^:").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(ErrorCode::syntax, std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Static name resolution

enum class Type { cls, bundle, space, embedding, orientation, integer, series };

const char* type_name(Type t) {
  switch (t) {
    case Type::cls: return "a class";
    case Type::bundle: return "a bundle";
    case Type::space: return "a space";
    case Type::embedding: return "an embedding";
    case Type::orientation: return "an orientation";
    case Type::integer: return "an integer";
    case Type::series: return "a series in x, y";
  }
  return "?";
}

struct Signature {
  Type result;
  std::vector<std::vector<Type>> forms;  // accepted argument lists
  bool needs_at = false;                 // f(...)@space
  bool variadic_class = false;           // roots(...), cdata(...)
};

const std::map<std::string, Signature>& functions() {
  static const std::map<std::string, Signature> table = {
      {"chern", {Type::cls, {{Type::integer, Type::bundle}}}},
      {"c1", {Type::cls, {{Type::bundle}}}},
      {"total", {Type::cls, {{Type::bundle}}}},
      {"euler", {Type::cls, {{Type::bundle}}}},
      {"thom", {Type::cls, {{Type::bundle, Type::space}}}},
      {"todd",
       {Type::cls,
        {{Type::orientation, Type::orientation, Type::bundle},
         {Type::orientation, Type::orientation, Type::bundle, Type::bundle}}}},
      {"c1_tensor", {Type::cls, {{Type::bundle, Type::bundle}}}},
      {"top_tensor", {Type::cls, {{Type::bundle, Type::bundle}}}},
      {"theta", {Type::cls, {{Type::orientation, Type::cls}}}},
      {"fdl", {Type::cls, {{Type::embedding}}}},
      {"excess", {Type::cls, {{Type::embedding, Type::embedding}}}},
      {"push", {Type::cls, {{Type::embedding, Type::cls}}}},
      {"pull", {Type::cls, {{Type::embedding, Type::cls}}}},
      {"O", {Type::bundle, {{Type::integer}}, true}},
      {"trivial", {Type::bundle, {{Type::integer}}, true}},
      {"roots", {Type::bundle, {}, true, true}},
      {"cdata", {Type::bundle, {}, true, true}},
      {"taut", {Type::bundle, {{Type::space}}}},
      {"xi", {Type::bundle, {{Type::space}}}},
      {"T", {Type::bundle, {{Type::space}}}},
      {"dual", {Type::bundle, {{Type::bundle}}}},
      {"tensor", {Type::bundle, {{Type::bundle, Type::bundle}}}},
      {"pullback", {Type::bundle, {{Type::bundle, Type::space}}}},
      {"normal", {Type::bundle, {{Type::embedding}}}},
      {"target", {Type::space, {{Type::embedding}}}},
      {"source", {Type::space, {{Type::embedding}}}},
      {"base", {Type::space, {{Type::space}}}},
      {"linear", {Type::embedding, {{Type::space, Type::space}}}},
      {"identity", {Type::embedding, {{Type::space}}}},
      {"compose", {Type::embedding, {{Type::embedding, Type::embedding}}}},
  };
  return table;
}

// Declaration-only constructors: they create new spaces.
const std::set<std::string>& space_constructors() {
  static const std::set<std::string> s{"proj", "completion", "kunneth"};
  return s;
}
const std::set<std::string>& embedding_constructors() {
  static const std::set<std::string> s{"zero_section", "diagonal"};
  return s;
}

struct CheckSignature {
  std::vector<std::vector<Type>> forms;
  std::set<std::string> modifiers;
};

const std::map<std::string, CheckSignature>& checks() {
  static const std::map<std::string, CheckSignature> table = {
      {"grr", {{{}}, {"max_dim"}}},
      {"fgl", {{{}, {Type::series}}, {}}},
      {"thom", {{{Type::bundle}}, {"with"}}},
      {"equal", {{{Type::cls, Type::cls}}, {"in", "with"}}},
      {"rr_closed", {{{Type::orientation, Type::orientation, Type::embedding, Type::cls}}, {}}},
      {"rr_projection", {{{Type::orientation, Type::orientation, Type::space, Type::cls}}, {}}},
      {"grr_lci", {{{Type::orientation, Type::orientation, Type::embedding, Type::space, Type::cls}}, {}}},
      {"self_intersection", {{{Type::embedding}}, {"with"}}},
      {"duality", {{{Type::space}}, {"with"}}},
      {"hrr", {{{Type::integer, Type::integer, Type::integer}}, {}}},
  };
  return table;
}

std::string default_generator(const std::vector<std::string>& taken) {
  auto used = [&](const std::string& g) {
    for (const auto& t : taken)
      if (t == g) return true;
    return false;
  };
  std::size_t n = taken.size() + 1;
  std::string g = taken.empty() ? "h" : "h" + std::to_string(n);
  while (used(g)) g = "h" + std::to_string(++n);
  return g;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, std::string theory) : tokens_(lex(text)) { set_theory(std::move(theory), 0, 0); }

  Script run() {
    Script s;
    while (peek().kind != Token::Kind::end) s.statements.push_back(statement());
    return s;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool is_punct(const std::string& p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::punct && peek(ahead).text == p;
  }
  bool is_word(const std::string& w) const { return peek().kind == Token::Kind::ident && peek().text == w; }

  [[noreturn]] void error(ErrorCode code, const std::string& msg, const Token& at) const {
    throw ParseError(code, msg, at.line, at.column);
  }
  [[noreturn]] void error(ErrorCode code, const std::string& msg, const Node& at) const {
    throw ParseError(code, msg, at.line, at.column);
  }

  void expect(const std::string& p) {
    if (!is_punct(p)) error(ErrorCode::syntax, "expected '" + p + "'" + found(), peek());
    take();
  }
  std::string found() const {
    const Token& t = peek();
    if (t.kind == Token::Kind::end) return ", found end of input";
    return ", found '" + t.text + "'";
  }
  Token expect_ident(const std::string& what) {
    if (peek().kind != Token::Kind::ident) error(ErrorCode::syntax, "expected " + what + found(), peek());
    return take();
  }
  long expect_integer(const std::string& what, bool allow_negative) {
    const Token& start = peek();
    bool negative = false;
    if (is_punct("-")) {
      take();
      negative = true;
    }
    if (peek().kind != Token::Kind::number) error(ErrorCode::syntax, "expected " + what + found(), peek());
    const long v = take().value;
    if (negative && !allow_negative) error(ErrorCode::range, what + " must be >= 0", start);
    return negative ? -v : v;
  }

  static Node make(Node::Kind k, const Token& at) {
    Node n;
    n.kind = k;
    n.line = at.line;
    n.column = at.column;
    return n;
  }

  // -- expressions ----------------------------------------------------------

  Node expr() {
    Node left = product();
    while (is_punct("+") || is_punct("-")) {
      const Token op = take();
      Node b = make(Node::Kind::binary, op);
      b.line = left.line;
      b.column = left.column;
      b.text = op.text;
      b.kids.push_back(std::move(left));
      b.kids.push_back(product());
      left = std::move(b);
    }
    return left;
  }

  Node product() {
    Node left = unary();
    while (is_punct("*") || is_punct("/")) {
      const Token op = take();
      Node b = make(Node::Kind::binary, op);
      b.line = left.line;
      b.column = left.column;
      b.text = op.text;
      b.kids.push_back(std::move(left));
      b.kids.push_back(unary());
      left = std::move(b);
    }
    return left;
  }

  Node unary() {
    if (is_punct("-")) {
      Node n = make(Node::Kind::neg, take());
      n.kids.push_back(unary());
      return n;
    }
    return power();
  }

  Node power() {
    Node base = postfix();
    if (is_punct("^")) {
      take();
      Node p = make(Node::Kind::power, peek());
      p.line = base.line;
      p.column = base.column;
      p.value = expect_integer("an exponent", true);
      p.kids.push_back(std::move(base));
      return p;
    }
    return base;
  }

  Node postfix() {
    Node a = primary();
    if (is_punct("@")) {
      const Token at = take();
      Node n = make(Node::Kind::at, at);
      n.line = a.line;
      n.column = a.column;
      n.kids.push_back(std::move(a));
      n.kids.push_back(primary());
      return n;
    }
    return a;
  }

  Node primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::number) {
      Node n = make(Node::Kind::number, t);
      n.value = take().value;
      return n;
    }
    if (is_punct("(")) {
      take();
      Node inner = expr();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::ident) {
      const Token id = take();
      if (is_punct("(")) {
        take();
        Node call = make(Node::Kind::call, id);
        call.text = id.text;
        if (!is_punct(")")) {
          call.kids.push_back(expr());
          while (is_punct(",")) {
            take();
            call.kids.push_back(expr());
          }
        }
        expect(")");
        return call;
      }
      Node n = make(Node::Kind::ident, id);
      n.text = id.text;
      return n;
    }
    error(ErrorCode::syntax, "expected an expression" + found(), t);
  }

  // -- statements -----------------------------------------------------------

  Node statement() {
    const Token kw = expect_ident("a statement keyword");
    Node s = make(Node::Kind::statement, kw);
    s.text = kw.text;
    const std::string& k = kw.text;
    if (k == "theory") {
      if (locked_) error(ErrorCode::syntax, "theory must be set before any other declaration", kw);
      const Token name = expect_ident("a theory name");
      std::string full = name.text;
      if (is_punct(":")) {
        take();
        full += ":" + std::to_string(expect_integer("a universal rank", false));
      }
      set_theory(full, name.line, name.column);
      s.name = full;
    } else if (k == "truncation") {
      if (locked_) error(ErrorCode::syntax, "truncation must be set before any other declaration", kw);
      const Token& at = peek();
      s.value = expect_integer("a truncation order", false);
      if (s.value < 1 || s.value > 64) error(ErrorCode::range, "truncation order must be in 1..64", at);
    } else if (k == "orientation") {
      lock();
      const Token name = declare_name();
      s.name = name.text;
      expect("=");
      const Token spec = expect_ident("an orientation kind");
      Node n = make(Node::Kind::ident, spec);
      n.text = spec.text;
      if (is_punct(":")) {
        take();
        n.text += ":" + std::to_string(expect_integer("a universal index", false));
      }
      const std::string target = orientation_for(n.text, spec);
      aliases_[s.name] = target;
      orientations_.insert(s.name);
      s.kids.push_back(std::move(n));
    } else if (k == "space") {
      lock();
      const Token name = declare_name();
      s.name = name.text;
      expect("=");
      space_statement(s);
    } else if (k == "bundle") {
      lock();
      const Token name = declare_name();
      s.name = name.text;
      expect("=");
      Node b = expr();
      bundles_[s.name] = check(b, Type::bundle).space;
      s.kids.push_back(std::move(b));
      modifiers(s, {});
    } else if (k == "embedding") {
      lock();
      const Token name = declare_name();
      s.name = name.text;
      expect("=");
      embedding_statement(s);
    } else if (k == "eval") {
      lock();
      Node e = expr();
      check(e, Type::cls);
      s.kids.push_back(std::move(e));
      modifiers(s, {"in", "with"});
    } else if (k == "push" || k == "pull") {
      lock();
      expect("(");
      Node f = expr();
      if (f.kind == Node::Kind::ident && spaces_.count(f.text)) {
        if (spaces_.at(f.text) == 0) error(ErrorCode::syntax, "the point has no projection to push along", f);
      } else {
        check(f, Type::embedding);
      }
      expect(",");
      Node x = expr();
      check(x, Type::cls);
      expect(")");
      s.kids.push_back(std::move(f));
      s.kids.push_back(std::move(x));
      modifiers(s, {"with"});
    } else if (k == "check") {
      lock();
      const Token name = expect_ident("a check name");
      s.name = name.text;
      auto it = checks().find(name.text);
      if (it == checks().end()) error(ErrorCode::unknown_identifier, "unknown check '" + name.text + "'", name);
      std::vector<Node> args;
      if (is_punct("(")) {
        take();
        if (!is_punct(")")) {
          args.push_back(expr());
          while (is_punct(",")) {
            take();
            args.push_back(expr());
          }
        }
        expect(")");
      }
      const std::vector<Type>* form = nullptr;
      for (const auto& f : it->second.forms)
        if (f.size() == args.size()) form = &f;
      if (!form) error(ErrorCode::arity, "check " + name.text + " takes " + arity_text(it->second.forms), name);
      for (std::size_t i = 0; i < args.size(); ++i) check(args[i], (*form)[i]);
      s.kids = std::move(args);
      modifiers(s, it->second.modifiers);
    } else {
      error(ErrorCode::syntax, "unknown statement '" + k + "'", kw);
    }
    expect(";");
    return s;
  }

  void space_statement(Node& s) {
    int id = -1;
    std::vector<std::string> base_gens;
    if (is_word("proj") && !is_punct("(", 1)) {
      const Token kw = take();
      Node p = make(Node::Kind::proj, kw);
      p.value = expect_integer("a projective dimension", false);
      int base = 0;
      if (is_word("over")) {
        take();
        Node b = space_ident();
        base = spaces_.at(b.text);
        p.kids.push_back(std::move(b));
      }
      s.kids.push_back(std::move(p));
      base_gens = gens_[static_cast<std::size_t>(base)];
      id = -2;
    } else if (is_word("point") && !is_punct("(", 1)) {
      Node n = make(Node::Kind::ident, take());
      n.text = "point";
      s.kids.push_back(std::move(n));
      id = 0;
    } else {
      Node e = expr();
      if (e.kind == Node::Kind::call && space_constructors().count(e.text)) {
        if (e.kids.size() != 1) error(ErrorCode::arity, e.text + " takes 1 argument", e);
        if (e.text == "kunneth") {
          const int base = check(e.kids[0], Type::space).space;
          if (base == 0) error(ErrorCode::syntax, "the point has no Kunneth square", e.kids[0]);
          base_gens = gens_[static_cast<std::size_t>(base)];
        } else {
          base_gens = gens_[static_cast<std::size_t>(check(e.kids[0], Type::bundle).space)];
        }
        id = -2;
      } else {
        id = check(e, Type::space).space;
      }
      s.kids.push_back(std::move(e));
    }
    if (id == -2) {
      modifiers(s, {"gen"});
      const std::string g = generator_of(s, base_gens, s.kids.front());
      base_gens.push_back(g);
      id = new_space(base_gens);
    } else {
      modifiers(s, {});
    }
    spaces_[s.name] = id;
  }

  void embedding_statement(Node& s) {
    Node e = expr();
    if (e.kind == Node::Kind::call && embedding_constructors().count(e.text)) {
      if (e.kids.size() != 1) error(ErrorCode::arity, e.text + " takes 1 argument", e);
      int source = 0;
      std::vector<std::string> base_gens;
      if (e.text == "zero_section") {
        source = check(e.kids[0], Type::bundle).space;
      } else {
        source = check(e.kids[0], Type::space).space;
        if (source == 0) error(ErrorCode::syntax, "the point has no diagonal", e.kids[0]);
      }
      base_gens = gens_[static_cast<std::size_t>(source)];
      s.kids.push_back(std::move(e));
      modifiers(s, {"gen"});
      const std::string g = generator_of(s, base_gens, s.kids.front());
      base_gens.push_back(g);
      embeddings_[s.name] = {source, new_space(base_gens)};
      return;
    }
    const Info info = check(e, Type::embedding);
    s.kids.push_back(std::move(e));
    modifiers(s, {});
    embeddings_[s.name] = {info.space, info.target};
  }

  // Returns the generator named by a `gen` modifier, adding the default one
  // when absent.
  std::string generator_of(Node& s, const std::vector<std::string>& base_gens, const Node& ctor) {
    for (const auto& m : s.kids)
      if (m.kind == Node::Kind::modifier && m.text == "gen") {
        const std::string& g = m.kids[0].text;
        for (const auto& b : base_gens)
          if (b == g) error(ErrorCode::duplicate_name, "generator '" + g + "' already exists in the base", m.kids[0]);
        if (symbols_.count(g) || g == "x" || g == "y")
          error(ErrorCode::duplicate_name, "generator '" + g + "' clashes with a reserved symbol", m.kids[0]);
        generators_.insert(g);
        return g;
      }
    std::string g;
    if (ctor.kind == Node::Kind::call && (ctor.text == "kunneth" || ctor.text == "diagonal")) {
      g = base_gens.back() + "_2";
      bool clash = true;
      while (clash) {
        clash = false;
        for (const auto& b : base_gens)
          if (b == g) {
            g += "_2";
            clash = true;
          }
      }
    } else {
      g = default_generator(base_gens);
    }
    Node m = make(Node::Kind::modifier, take_position(s));
    m.text = "gen";
    Node id = make(Node::Kind::ident, take_position(s));
    id.text = g;
    m.kids.push_back(std::move(id));
    s.kids.push_back(std::move(m));
    generators_.insert(g);
    return g;
  }

  static Token take_position(const Node& s) {
    Token t;
    t.line = s.line;
    t.column = s.column;
    return t;
  }

  void modifiers(Node& s, const std::set<std::string>& allowed) {
    std::set<std::string> seen;
    while (peek().kind == Token::Kind::ident) {
      const Token kw = peek();
      if (!allowed.count(kw.text)) {
        static const std::set<std::string> all{"gen", "in", "with", "max_dim", "over"};
        if (all.count(kw.text))
          error(ErrorCode::syntax, "'" + kw.text + "' is not allowed in a " + s.text + " statement", kw);
        error(ErrorCode::syntax, "expected ';'" + found(), kw);
      }
      if (!seen.insert(kw.text).second) error(ErrorCode::syntax, "repeated '" + kw.text + "'", kw);
      take();
      Node m = make(Node::Kind::modifier, kw);
      m.text = kw.text;
      if (kw.text == "max_dim") {
        const Token& at = peek();
        m.value = expect_integer("a dimension", false);
        if (m.value < 1 || m.value > 6) error(ErrorCode::range, "max_dim must be in 1..6", at);
      } else if (kw.text == "gen") {
        const Token g = expect_ident("a generator name");
        Node id = make(Node::Kind::ident, g);
        id.text = g.text;
        m.kids.push_back(std::move(id));
      } else if (kw.text == "in") {
        m.kids.push_back(space_ident());
      } else {
        const Token o = expect_ident("an orientation");
        if (!orientations_.count(o.text))
          error(ErrorCode::unknown_identifier, "unknown orientation '" + o.text + "'", o);
        Node id = make(Node::Kind::ident, o);
        id.text = o.text;
        m.kids.push_back(std::move(id));
      }
      s.kids.push_back(std::move(m));
    }
  }

  Node space_ident() {
    const Token t = expect_ident("a space name");
    if (!spaces_.count(t.text)) error(ErrorCode::unknown_identifier, "unknown space '" + t.text + "'", t);
    Node n = make(Node::Kind::ident, t);
    n.text = t.text;
    return n;
  }

  // -- declarations ---------------------------------------------------------

  void lock() { locked_ = true; }

  Token declare_name() {
    const Token t = expect_ident("a name");
    static const std::set<std::string> reserved{"point", "proj", "over", "gen", "in", "with", "max_dim", "x", "y"};
    if (reserved.count(t.text) || functions().count(t.text) || space_constructors().count(t.text) ||
        embedding_constructors().count(t.text))
      error(ErrorCode::duplicate_name, "'" + t.text + "' is reserved", t);
    if (names_.count(t.text) || orientations_.count(t.text) || symbols_.count(t.text))
      error(ErrorCode::duplicate_name, "'" + t.text + "' is already declared", t);
    names_.insert(t.text);
    return t;
  }

  void set_theory(std::string name, int line, int col) {
    symbols_.clear();
    orientations_ = {"identity"};
    int k = -1;
    if (name == "additive") {
    } else if (name == "multiplicative") {
      symbols_ = {"beta"};
      orientations_.insert("mult");
    } else if (name.rfind("universal:", 0) == 0) {
      k = std::atoi(name.c_str() + 10);
      if (k < 1 || k > 8) throw ParseError(ErrorCode::range, "universal rank must be in 1..8", line, col);
      for (int i = 1; i <= k; ++i) {
        symbols_.insert("b" + std::to_string(i));
        orientations_.insert("u" + std::to_string(i));
      }
    } else {
      throw ParseError(ErrorCode::unknown_identifier, "unknown theory '" + name + "'", line, col);
    }
    theory_ = std::move(name);
    universal_k_ = k;
  }

  std::string orientation_for(const std::string& spec, const Token& at) const {
    if (spec == "identity") return "identity";
    if (spec == "multiplicative") {
      if (theory_ != "multiplicative")
        error(ErrorCode::incompatible, "the multiplicative orientation needs theory multiplicative", at);
      return "mult";
    }
    if (spec.rfind("universal:", 0) == 0) {
      const int j = std::atoi(spec.c_str() + 10);
      if (universal_k_ < 0) error(ErrorCode::incompatible, "universal orientations need a universal theory", at);
      if (j < 1 || j > universal_k_)
        error(ErrorCode::range, "universal orientation index must be in 1.." + std::to_string(universal_k_), at);
      return "u" + std::to_string(j);
    }
    error(ErrorCode::unknown_identifier, "unknown orientation kind '" + spec + "'", at);
  }

  int new_space(std::vector<std::string> gens) {
    gens_.push_back(std::move(gens));
    return static_cast<int>(gens_.size()) - 1;
  }

  // -- typing ---------------------------------------------------------------

  struct Info {
    int space = 0;   // base of a bundle, the space itself, or an embedding source
    int target = 0;  // embedding target
  };

  static std::string arity_text(const std::vector<std::vector<Type>>& forms) {
    std::string out;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      if (i) out += i + 1 == forms.size() ? " or " : ", ";
      out += std::to_string(forms[i].size());
    }
    return out + (forms.size() == 1 && forms[0].size() == 1 ? " argument" : " arguments");
  }

  [[noreturn]] void mismatch(const Node& n, Type want) const {
    error(ErrorCode::syntax, "expected " + std::string(type_name(want)), n);
  }

  Info check(const Node& n, Type want) {
    switch (n.kind) {
      case Node::Kind::number:
        if (want != Type::cls && want != Type::integer && want != Type::series) mismatch(n, want);
        return {};
      case Node::Kind::neg:
        if (want == Type::integer) {
          if (n.kids[0].kind != Node::Kind::number) mismatch(n, want);
          return {};
        }
        if (want != Type::cls && want != Type::series) mismatch(n, want);
        check(n.kids[0], want);
        return {};
      case Node::Kind::power:
        if (want != Type::cls && want != Type::series) mismatch(n, want);
        if (want == Type::series && n.value < 0) error(ErrorCode::range, "series exponents must be >= 0", n);
        check(n.kids[0], want);
        return {};
      case Node::Kind::binary:
        if (want == Type::bundle && n.text == "+") {
          const Info a = check(n.kids[0], Type::bundle);
          check(n.kids[1], Type::bundle);
          return a;
        }
        if (want != Type::cls && want != Type::series) mismatch(n, want);
        check(n.kids[0], want);
        check(n.kids[1], want);
        return {};
      case Node::Kind::ident:
        return check_ident(n, want);
      case Node::Kind::at: {
        if (want != Type::bundle) mismatch(n, want);
        const Node& f = n.kids[0];
        if (f.kind != Node::Kind::call || !functions().count(f.text) || !functions().at(f.text).needs_at)
          error(ErrorCode::syntax, "'@' follows O(d), trivial(r), roots(...) or cdata(...)", n);
        if (n.kids[1].kind != Node::Kind::ident) mismatch(n.kids[1], Type::space);
        const Info s = check(n.kids[1], Type::space);
        check_call(f, Type::bundle, true);
        return s;
      }
      case Node::Kind::call:
        return check_call(n, want, false);
      default:
        mismatch(n, want);
    }
  }

  Info check_ident(const Node& n, Type want) {
    const std::string& id = n.text;
    switch (want) {
      case Type::cls:
        if (generators_.count(id) || symbols_.count(id)) return {};
        break;
      case Type::series:
        if (id == "x" || id == "y" || symbols_.count(id)) return {};
        break;
      case Type::bundle:
        if (auto it = bundles_.find(id); it != bundles_.end()) return {it->second, 0};
        break;
      case Type::space:
        if (auto it = spaces_.find(id); it != spaces_.end()) return {it->second, 0};
        break;
      case Type::embedding:
        if (auto it = embeddings_.find(id); it != embeddings_.end()) return {it->second.first, it->second.second};
        break;
      case Type::orientation:
        if (orientations_.count(id)) return {};
        break;
      case Type::integer:
        mismatch(n, want);
    }
    if (names_.count(id) || orientations_.count(id)) mismatch(n, want);
    error(ErrorCode::unknown_identifier, "unknown identifier '" + id + "'", n);
  }

  Info check_call(const Node& n, Type want, bool under_at) {
    if (space_constructors().count(n.text) || embedding_constructors().count(n.text))
      error(ErrorCode::syntax, n.text + "(...) may only appear directly in a declaration", n);
    auto it = functions().find(n.text);
    if (it == functions().end()) error(ErrorCode::unknown_identifier, "unknown function '" + n.text + "'", n);
    const Signature& sig = it->second;
    if (sig.result != want) mismatch(n, want);
    if (sig.needs_at && !under_at) error(ErrorCode::syntax, n.text + "(...) needs an @space suffix", n);
    if (sig.variadic_class) {
      if (n.kids.empty()) error(ErrorCode::arity, n.text + " takes at least 1 argument", n);
      for (const auto& k : n.kids) check(k, Type::cls);
      return {};
    }
    const std::vector<Type>* form = nullptr;
    for (const auto& f : sig.forms)
      if (f.size() == n.kids.size()) form = &f;
    if (!form) error(ErrorCode::arity, n.text + " takes " + arity_text(sig.forms), n);
    std::vector<Info> infos;
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      Type t = (*form)[i];
      // push/pull accept a space (projection to its base) in place of an embedding.
      if ((n.text == "push" || n.text == "pull") && i == 0 && n.kids[0].kind == Node::Kind::ident &&
          spaces_.count(n.kids[0].text)) {
        if (spaces_.at(n.kids[0].text) == 0) error(ErrorCode::syntax, "the point has no projection", n.kids[0]);
        t = Type::space;
      }
      infos.push_back(check(n.kids[i], t));
    }
    if (n.text == "O" || n.text == "trivial") {
      if (n.text == "trivial" && n.kids[0].kind == Node::Kind::neg)
        error(ErrorCode::range, "rank must be >= 0", n.kids[0]);
    }
    if (n.text == "pullback") return {infos[1].space, 0};
    if (n.text == "normal" || n.text == "source") return {infos[0].space, 0};
    if (n.text == "target") return {infos[0].target, 0};
    if (n.text == "base") return {parent_of(infos[0].space), 0};
    if (n.text == "linear") return {infos[0].space, infos[1].space};
    if (n.text == "identity") return {infos[0].space, infos[0].space};
    if (n.text == "compose") return {infos[0].space, infos[1].target};
    return infos.empty() ? Info{} : infos[0];
  }

  int parent_of(int id) const {
    // Name-level only: any space whose generators are a proper prefix.
    const auto& g = gens_[static_cast<std::size_t>(id)];
    if (g.empty()) return 0;
    for (std::size_t j = 0; j < gens_.size(); ++j)
      if (gens_[j].size() + 1 == g.size() && std::equal(gens_[j].begin(), gens_[j].end(), g.begin()))
        return static_cast<int>(j);
    return 0;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool locked_ = false;

  std::string theory_;
  int universal_k_ = -1;
  std::set<std::string> symbols_;
  std::set<std::string> orientations_;
  std::map<std::string, std::string> aliases_;
  std::set<std::string> names_;
  std::set<std::string> generators_;
  std::vector<std::vector<std::string>> gens_{{}};  // id 0 is the point
  std::map<std::string, int> spaces_;
  std::map<std::string, int> bundles_;
  std::map<std::string, std::pair<int, int>> embeddings_;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::binary: return n.text == "+" || n.text == "-" ? 1 : 2;
    case Node::Kind::neg: return 3;
    case Node::Kind::power: return 4;
    default: return 5;
  }
}

std::string wrap(const Node& n, int min_prec) {
  const std::string s = print_expr(n);
  return precedence(n) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

Script parse(std::string_view text, const std::string& default_theory) {
  return Parser(text, default_theory).run();
}

std::string print_expr(const Node& n) {
  switch (n.kind) {
    case Node::Kind::number: return std::to_string(n.value);
    case Node::Kind::ident: return n.text;
    case Node::Kind::call: {
      std::string out = n.text + "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? ", " : "") + print_expr(n.kids[i]);
      return out + ")";
    }
    case Node::Kind::binary: {
      const int p = precedence(n);
      return wrap(n.kids[0], p) + " " + n.text + " " + wrap(n.kids[1], p + 1);
    }
    case Node::Kind::neg: return "-" + wrap(n.kids[0], 3);
    case Node::Kind::power: return wrap(n.kids[0], 5) + "^" + std::to_string(n.value);
    case Node::Kind::at: return wrap(n.kids[0], 5) + "@" + print_expr(n.kids[1]);
    case Node::Kind::proj: {
      std::string out = "proj " + std::to_string(n.value);
      if (!n.kids.empty()) out += " over " + print_expr(n.kids[0]);
      return out;
    }
    case Node::Kind::modifier:
      if (n.text == "max_dim") return "max_dim " + std::to_string(n.value);
      return n.text + " " + print_expr(n.kids[0]);
    case Node::Kind::statement: return print_statement(n);
  }
  return {};
}

std::string print_statement(const Node& s) {
  std::string out = s.text;
  std::vector<const Node*> args, mods;
  for (const auto& k : s.kids) (k.kind == Node::Kind::modifier ? mods : args).push_back(&k);
  if (s.text == "theory") {
    out += " " + s.name;
  } else if (s.text == "truncation") {
    out += " " + std::to_string(s.value);
  } else if (s.text == "orientation" || s.text == "space" || s.text == "bundle" || s.text == "embedding") {
    out += " " + s.name + " = " + print_expr(*args.at(0));
  } else if (s.text == "eval") {
    out += " " + print_expr(*args.at(0));
  } else if (s.text == "push" || s.text == "pull") {
    out += "(" + print_expr(*args.at(0)) + ", " + print_expr(*args.at(1)) + ")";
  } else if (s.text == "check") {
    out += " " + s.name;
    if (!args.empty()) {
      out += "(";
      for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + print_expr(*args[i]);
      out += ")";
    }
  }
  for (const Node* m : mods) out += " " + print_expr(*m);
  return out;
}

std::string print(const Script& script) {
  std::string out;
  for (const auto& s : script.statements) out += print_statement(s) + ";\n";
  return out;
}

}  // namespace orr::dsl
