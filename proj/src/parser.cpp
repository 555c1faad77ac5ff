#include "streamhw/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace streamhw {

namespace {

enum class Tok { Ident, Int, Decimal, String, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

[[noreturn]] void syntax_error(int line, int col, const std::string& msg) {
  throw SpecError(Diagnostic{ErrorKind::SyntaxError, msg, line, col});
}

// Multi-byte operator spellings and their canonical form.
struct Spelling {
  const char* bytes;
  Tok kind;
  const char* canonical;
};

constexpr Spelling kUnicode[] = {
    {"\xE2\x88\xA7", Tok::Sym, "&"},         // logical and
    {"\xE2\x88\xA8", Tok::Sym, "|"},         // logical or
    {"\xC2\xAC", Tok::Sym, "!"},             // negation
    {"\xE2\x89\xA4", Tok::Sym, "<="},
    {"\xE2\x89\xA5", Tok::Sym, ">="},
    {"\xE2\x89\xA0", Tok::Sym, "!="},
    {"\xCE\xA3", Tok::Ident, "sum"},         // capital sigma
    {"\xE2\x88\xAB", Tok::Ident, "integral"},
    {"\xCE\xB4", Tok::Ident, "delta"},
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text.push_back(advance());
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          t.text.push_back(advance());
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          t.kind = Tok::Decimal;
          t.text.push_back(advance());
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            t.text.push_back(advance());
        }
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n')
            syntax_error(t.line, t.col, "unterminated string literal");
          char d = advance();
          if (d == '"') break;
          if (d == '\\' && pos_ < src_.size()) d = advance();
          t.text.push_back(d);
        }
      } else if (static_cast<unsigned char>(c) >= 0x80) {
        bool matched = false;
        for (const auto& sp : kUnicode) {
          std::string_view b(sp.bytes);
          if (src_.substr(pos_, b.size()) == b) {
            pos_ += b.size();
            ++col_;
            t.kind = sp.kind;
            t.text = sp.canonical;
            matched = true;
            break;
          }
        }
        if (!matched) syntax_error(t.line, t.col, "unexpected character");
      } else {
        t.kind = Tok::Sym;
        t.text = symbol();
        if (t.text.empty()) syntax_error(t.line, t.col, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string symbol() {
    auto two = src_.substr(pos_, 2);
    static const std::map<std::string_view, std::string> kTwo = {
        {":=", ":="}, {"==", "=="}, {"!=", "!="}, {"<=", "<="}, {">=", ">="},
        {"&&", "&"},  {"||", "|"}};
    if (auto it = kTwo.find(two); it != kTwo.end()) {
      advance();
      advance();
      return it->second;
    }
    const char c = src_[pos_];
    switch (c) {
      case '=':
        advance();
        return "==";
      case '(': case ')': case ',': case ':': case '.': case '@':
      case '<': case '>': case '+': case '-': case '*': case '/':
      case '&': case '|': case '!':
        advance();
        return std::string(1, c);
      default:
        return {};
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::optional<ValueType> type_from_name(const std::string& name) {
  if (name == "Bool" || name == "bool") return ValueType::boolean();
  for (int w : {8, 16, 32, 64}) {
    if (name == "Int" + std::to_string(w)) return ValueType::int_type(w);
    if (name == "UInt" + std::to_string(w)) return ValueType::uint_type(w);
  }
  return std::nullopt;
}

std::optional<Aggregation> aggregation_from_name(const std::string& name) {
  if (name == "count") return Aggregation::Count;
  if (name == "sum") return Aggregation::Sum;
  if (name == "avg" || name == "average") return Aggregation::Avg;
  if (name == "min") return Aggregation::Min;
  if (name == "max") return Aggregation::Max;
  if (name == "integral") return Aggregation::Integral;
  return std::nullopt;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"input", "output", "trigger", "constant", "if", "then",
                                          "else",  "true",   "false",   "and",      "or", "not"};
  return k;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Spec run() {
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_word("input"))
        input_decl();
      else if (is_word("output"))
        output_decl();
      else if (is_word("trigger"))
        trigger_decl();
      else if (is_word("constant"))
        constant_decl();
      else
        syntax_error(t.line, t.col, "expected 'input', 'output', 'trigger' or 'constant'");
    }
    resolve();
    return std::move(spec_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool is_word(const char* w, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == w;
  }
  bool is_sym(const char* s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Sym && t.text == s;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    syntax_error(t.line, t.col, "expected " + expected + ", found " + got);
  }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("'") + s + "'");
    next();
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("'") + w + "'");
    next();
  }

  Token expect_ident() {
    if (peek().kind != Tok::Ident || keywords().count(peek().text)) fail("identifier");
    return next();
  }

  // --- declarations -------------------------------------------------------

  void declare(const Token& name) {
    if (name.text == kTimeStream)
      throw SpecError(Diagnostic{ErrorKind::DuplicateName, "'time' is a reserved stream name",
                                 name.line, name.col});
    if (!declared_.insert(name.text).second)
      throw SpecError(Diagnostic{ErrorKind::DuplicateName, "duplicate name '" + name.text + "'",
                                 name.line, name.col});
  }

  ValueType scalar_type() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("type");
    if (t.text.rfind("Float", 0) == 0)
      syntax_error(t.line, t.col, "floating-point types are not supported");
    auto ty = type_from_name(t.text);
    if (!ty) fail("type");
    next();
    return *ty;
  }

  std::vector<ValueType> input_type() {
    if (is_sym("(")) {
      next();
      std::vector<ValueType> parts{scalar_type()};
      while (is_sym(",")) {
        next();
        parts.push_back(scalar_type());
      }
      expect_sym(")");
      return parts;
    }
    return {scalar_type()};
  }

  void input_decl() {
    const int line = next().line;
    std::vector<Token> names{expect_ident()};
    while (is_sym(",")) {
      next();
      names.push_back(expect_ident());
    }
    expect_sym(":");
    const auto parts = input_type();
    for (const auto& n : names) {
      declare(n);
      if (parts.size() == 1) {
        add_input(n.text, parts[0], line);
      } else {
        tuples_[n.text] = n.text + "_0";
        for (std::size_t i = 0; i < parts.size(); ++i) {
          Token element = n;
          element.text = n.text + "_" + std::to_string(i);
          declare(element);
          add_input(element.text, parts[i], line);
        }
      }
    }
  }

  void add_input(const std::string& name, ValueType t, int line) {
    spec_.order.emplace_back(DeclKind::Input, static_cast<int>(spec_.inputs.size()));
    spec_.inputs.push_back(InputDecl{name, t, line});
  }

  Rational positive_number(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Int && t.kind != Tok::Decimal) fail(what);
    auto r = parse_decimal(t.text);
    if (!r) syntax_error(t.line, t.col, "number out of range");
    next();
    return *r;
  }

  Rational frequency() {
    expect_sym("@");
    const Token at = peek();
    Rational f = positive_number("frequency");
    const Token& unit = peek();
    if (unit.kind == Tok::Ident && unit.text == "Hz") {
      next();
    } else if (unit.kind == Tok::Ident && unit.text == "kHz") {
      next();
      f *= 1000;
    } else {
      fail("'Hz'");
    }
    if (f <= 0) syntax_error(at.line, at.col, "frequency must be positive");
    return f;
  }

  void output_decl() {
    const int line = next().line;
    Token name = expect_ident();
    declare(name);
    OutputDecl o;
    o.name = name.text;
    o.line = line;
    if (is_sym("@")) o.frequency = frequency();
    if (is_sym(":")) {
      next();
      o.type = scalar_type();
    }
    if (is_sym("@")) {
      if (o.frequency) fail("':='");
      o.frequency = frequency();
    }
    expect_sym(":=");
    o.expr = expr();
    spec_.order.emplace_back(DeclKind::Output, static_cast<int>(spec_.outputs.size()));
    spec_.outputs.push_back(std::move(o));
  }

  void trigger_decl() {
    const int line = next().line;
    TriggerDecl t;
    t.line = line;
    if (is_sym("@")) t.frequency = frequency();
    t.expr = expr();
    if (peek().kind == Tok::String) t.message = next().text;
    spec_.order.emplace_back(DeclKind::Trigger, static_cast<int>(spec_.triggers.size()));
    spec_.triggers.push_back(std::move(t));
  }

  void constant_decl() {
    const int line = next().line;
    Token name = expect_ident();
    declare(name);
    expect_sym(":");
    ValueType ty = scalar_type();
    if (is_sym("==") || is_sym(":="))
      next();
    else
      fail("'='");
    const Token v = peek();
    Value value;
    if (is_word("true") || is_word("false")) {
      if (!ty.is_bool()) syntax_error(v.line, v.col, "boolean value for integer constant");
      value = Value::boolean(next().text == "true");
    } else {
      bool negative = false;
      if (is_sym("-")) {
        next();
        negative = true;
      }
      if (peek().kind != Tok::Int) fail("constant value");
      if (ty.is_bool()) syntax_error(v.line, v.col, "integer value for Bool constant");
      __int128 n = int_literal(next());
      value = Value::of_int(ty, negative ? -n : n);
    }
    spec_.order.emplace_back(DeclKind::Constant, static_cast<int>(spec_.constants.size()));
    spec_.constants.push_back(ConstantDecl{name.text, ty, value, line});
  }

  static std::uint64_t int_literal(const Token& t) {
    std::uint64_t v = 0;
    for (char c : t.text) {
      const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
      if (v > (~std::uint64_t{0} - d) / 10) syntax_error(t.line, t.col, "integer literal out of range");
      v = v * 10 + d;
    }
    return v;
  }

  // --- expressions --------------------------------------------------------

  template <typename N>
  static ExprPtr at(N&& node, const Token& t) {
    node->line = t.line;
    node->col = t.col;
    return std::move(node);
  }

  ExprPtr expr() { return disjunction(); }

  ExprPtr disjunction() {
    ExprPtr lhs = conjunction();
    while (is_sym("|") || is_word("or")) {
      Token op = next();
      lhs = at(make_binary(BinaryOp::Or, std::move(lhs), conjunction()), op);
    }
    return lhs;
  }

  ExprPtr conjunction() {
    ExprPtr lhs = comparison();
    while (is_sym("&") || is_word("and")) {
      Token op = next();
      lhs = at(make_binary(BinaryOp::And, std::move(lhs), comparison()), op);
    }
    return lhs;
  }

  std::optional<BinaryOp> comparison_op() const {
    if (peek().kind != Tok::Sym) return std::nullopt;
    const std::string& s = peek().text;
    if (s == "<") return BinaryOp::Lt;
    if (s == "<=") return BinaryOp::Le;
    if (s == ">") return BinaryOp::Gt;
    if (s == ">=") return BinaryOp::Ge;
    if (s == "==") return BinaryOp::Eq;
    if (s == "!=") return BinaryOp::Ne;
    return std::nullopt;
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    if (auto op = comparison_op()) {
      Token t = next();
      lhs = at(make_binary(*op, std::move(lhs), additive()), t);
      if (comparison_op()) fail("operator (comparisons do not chain)");
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (is_sym("+") || is_sym("-")) {
      Token t = next();
      BinaryOp op = t.text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = at(make_binary(op, std::move(lhs), multiplicative()), t);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (is_sym("*") || is_sym("/")) {
      Token t = next();
      BinaryOp op = t.text == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = at(make_binary(op, std::move(lhs), unary()), t);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_sym("!") || is_word("not")) {
      Token t = next();
      return at(make_unary(UnaryOp::Not, unary()), t);
    }
    if (is_sym("-")) {
      Token t = next();
      return at(make_unary(UnaryOp::Neg, unary()), t);
    }
    return primary();
  }

  ExprPtr primary() {
    const Token t = peek();
    if (t.kind == Tok::Int) {
      next();
      return at(make_int(int_literal(t)), t);
    }
    if (t.kind == Tok::Decimal) syntax_error(t.line, t.col, "decimal literals are not supported");
    if (is_sym("(")) {
      next();
      ExprPtr inner = expr();
      if (is_sym(",")) syntax_error(peek().line, peek().col, "tuple expressions are not supported");
      expect_sym(")");
      return inner;
    }
    if (is_word("true") || is_word("false")) {
      next();
      return at(make_bool(t.text == "true"), t);
    }
    if (is_word("if")) {
      next();
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Ite;
      e->args.push_back(expr());
      expect_word("then");
      e->args.push_back(expr());
      expect_word("else");
      e->args.push_back(expr());
      return at(e, t);
    }
    if (t.kind != Tok::Ident || keywords().count(t.text)) fail("expression");
    if ((t.text == "sqrt" || t.text == "abs") && is_sym("(", 1)) {
      next();
      next();
      ExprPtr arg = expr();
      expect_sym(")");
      return at(make_unary(t.text == "sqrt" ? UnaryOp::Isqrt : UnaryOp::Abs, std::move(arg)), t);
    }
    if (t.text == "delta" && is_sym("(", 1)) {
      next();
      next();
      Token target = expect_ident();
      expect_sym(")");
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Delta;
      e->name = target.text;
      return at(e, t);
    }
    next();
    return access(t);
  }

  ExprPtr access(const Token& name) {
    if (!is_sym(".")) return at(make_ref(name.text), name);
    next();
    ExprPtr inner;
    if (is_word("offset")) {
      next();
      expect_sym("(");
      expect_word("by");
      expect_sym(":");
      bool negative = false;
      if (is_sym("-")) {
        next();
        negative = true;
      }
      if (peek().kind != Tok::Int) fail("integer offset");
      const Token k = next();
      std::uint64_t mag = int_literal(k);
      if (!negative && mag != 0) syntax_error(k.line, k.col, "future offsets are not supported");
      if (mag > static_cast<std::uint64_t>(1) << 32) syntax_error(k.line, k.col, "offset too large");
      expect_sym(")");
      inner = make_offset(name.text, negative ? -static_cast<std::int64_t>(mag) : 0);
    } else if (is_word("hold")) {
      next();
      expect_sym("(");
      expect_sym(")");
      inner = std::make_unique<Expr>();
      inner->kind = ExprKind::Hold;
      inner->name = name.text;
    } else if (is_word("aggregate")) {
      next();
      expect_sym("(");
      expect_word("over");
      expect_sym(":");
      Rational d = duration();
      expect_sym(",");
      expect_word("using");
      expect_sym(":");
      const Token g = peek();
      if (g.kind != Tok::Ident) fail("aggregation function");
      auto agg = aggregation_from_name(g.text);
      if (!agg) syntax_error(g.line, g.col, "unknown aggregation '" + g.text + "'");
      next();
      expect_sym(")");
      inner = std::make_unique<Expr>();
      inner->kind = ExprKind::Window;
      inner->name = name.text;
      inner->duration = d;
      inner->agg = *agg;
    } else {
      fail("'offset', 'hold' or 'aggregate'");
    }
    inner->line = name.line;
    inner->col = name.col;
    if (!is_sym(".") || !is_word("defaults", 1)) fail("'.defaults(to: ...)'");
    next();
    next();
    expect_sym("(");
    expect_word("to");
    expect_sym(":");
    ExprPtr dflt = expr();
    expect_sym(")");
    return at(make_default(std::move(inner), std::move(dflt)), name);
  }

  Rational duration() {
    const Token t = peek();
    Rational d = positive_number("duration");
    const Token& unit = peek();
    if (unit.kind != Tok::Ident) fail("'s' or 'ms'");
    if (unit.text == "s") {
    } else if (unit.text == "ms") {
      d /= 1000;
    } else if (unit.text == "us") {
      d /= 1000000;
    } else if (unit.text == "ns") {
      d /= 1000000000;
    } else {
      fail("'s' or 'ms'");
    }
    next();
    if (d <= 0) syntax_error(t.line, t.col, "window duration must be positive");
    return d;
  }

  // --- name resolution ----------------------------------------------------

  void resolve() {
    std::map<std::string, RefKind> names;
    for (const auto& c : spec_.constants) names[c.name] = RefKind::Constant;
    for (const auto& i : spec_.inputs) names[i.name] = RefKind::Stream;
    for (const auto& o : spec_.outputs) names[o.name] = RefKind::Stream;
    names[kTimeStream] = RefKind::Stream;

    auto fix = [&](Expr& e) {
      switch (e.kind) {
        case ExprKind::Ref:
        case ExprKind::Offset:
        case ExprKind::Hold:
        case ExprKind::Window:
        case ExprKind::Delta: {
          if (auto it = tuples_.find(e.name); it != tuples_.end()) e.name = it->second;
          auto it = names.find(e.name);
          if (it == names.end())
            throw SpecError(Diagnostic{ErrorKind::UnknownIdentifier,
                                       "unknown identifier '" + e.name + "'", e.line, e.col});
          if (it->second == RefKind::Constant && e.kind != ExprKind::Ref)
            throw SpecError(Diagnostic{ErrorKind::UnknownIdentifier,
                                       "'" + e.name + "' is a constant, not a stream", e.line, e.col});
          e.ref_kind = it->second;
          break;
        }
        default:
          break;
      }
    };
    for (auto& o : spec_.outputs) walk(*o.expr, fix);
    for (auto& t : spec_.triggers) walk(*t.expr, fix);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Spec spec_;
  std::set<std::string> declared_;
  std::map<std::string, std::string> tuples_;
};

}  // namespace

Spec parse(std::string_view source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace streamhw
