#pragma once

// The .geo configuration language.
//
//   program := line* ; line := (stmt)? comment? NEWLINE
//   stmt    := "point" IDENT "=" pexpr
//            | "param" IDENT "=" NUMBER
//            | "assert" REL "(" IDENT ("," IDENT)* ")"
//   pexpr   := "(" scalar "," scalar ")" | FUNC "(" args ")"
//   scalar  := NUMBER | IDENT | scalar ("+"|"-"|"*"|"/") scalar | "-" scalar | "(" scalar ")"
//   comment := "#" any-to-EOL ; IDENT := [A-Za-z_][A-Za-z0-9_']*
//
// Labels and params must be defined before use. Angles are in degrees.

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geodeform/centers.hpp"
#include "geodeform/configuration.hpp"
#include "geodeform/relations.hpp"

namespace geodeform::script {

struct Span {
  int line = 1;
  int column = 1;
};

enum class ParseErrorKind { Syntax, UseBeforeDefine, Arity, DuplicateDefinition };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, Span at, std::string message, std::vector<std::string> expected)
      : std::runtime_error(std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message),
        kind_(kind),
        at_(at),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  ParseErrorKind kind() const { return kind_; }
  int line() const { return at_.line; }
  int column() const { return at_.column; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  ParseErrorKind kind_;
  Span at_;
  std::string message_;
  std::vector<std::string> expected_;
};

class UnknownParam : public std::invalid_argument {
 public:
  explicit UnknownParam(const std::string& name) : std::invalid_argument("unknown param: " + name) {}
};

// ---------------------------------------------------------------------------
// AST

struct Scalar {
  enum class Kind { Number, Name, Negate, Binary };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  char op = 0;
  std::vector<Scalar> operands;
  Span span;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.kind == b.kind && (a.kind != Kind::Number || a.value == b.value) && a.name == b.name && a.op == b.op &&
           a.operands == b.operands;
  }
};

struct PointExpr {
  bool literal = true;
  std::vector<Scalar> coords;  // literal: x, y
  std::string func;
  std::vector<Scalar> args;  // point slots are Name scalars
  Span span;

  friend bool operator==(const PointExpr& a, const PointExpr& b) {
    return a.literal == b.literal && a.coords == b.coords && a.func == b.func && a.args == b.args;
  }
};

struct Statement {
  enum class Kind { Define, Assert, Param };
  Kind kind = Kind::Define;
  std::string name;  // label or param name
  PointExpr expr;
  double value = 0.0;
  RelationKind relation = RelationKind::Collinear;
  std::vector<std::string> labels;
  Span span;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind && a.name == b.name && a.expr == b.expr && a.value == b.value &&
           a.relation == b.relation && a.labels == b.labels;
  }
};

/// Structural equality ignores source spans.
struct Program {
  std::vector<Statement> statements;
  friend bool operator==(const Program&, const Program&) = default;
};

// ---------------------------------------------------------------------------
// Function and relation tables

struct FuncSig {
  std::string_view name;
  std::string_view required;  // 'P' point, 'S' scalar
  std::string_view optional;
  bool variadic_points = false;
};

inline constexpr FuncSig kFunctions[] = {
    {"midpoint", "PP", ""},          {"reflect_line", "PPP", ""},
    {"reflect_point", "PP", ""},     {"rotate", "PPS", ""},
    {"centroid", "PP", "", true},    {"circumcenter", "PPP", ""},
    {"incenter", "PPP", ""},         {"orthocenter", "PPP", ""},
    {"ninepoint", "PPP", ""},        {"fermat1", "PPP", ""},
    {"fermat2", "PPP", ""},          {"eq_apex", "PPP", "S"},
    {"ri_apex", "PPP", "S"},         {"second_intersection", "PPPPP", ""},
    {"bisector_meet", "PPPP", ""},
};

inline const FuncSig* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

inline constexpr std::pair<std::string_view, RelationKind> kRelations[] = {
    {"collinear", RelationKind::Collinear},       {"concyclic", RelationKind::Concyclic},
    {"concurrent", RelationKind::ConcurrentLines}, {"perpendicular", RelationKind::Perpendicular},
    {"equal_length", RelationKind::EqualLength},  {"on_conic", RelationKind::OnConic},
    {"coaxial", RelationKind::Coaxial},           {"perspective", RelationKind::Perspective},
};

inline std::optional<RelationKind> find_relation(std::string_view name) {
  for (const auto& [n, k] : kRelations)
    if (n == name) return k;
  return std::nullopt;
}

inline std::string_view relation_keyword(RelationKind k) {
  for (const auto& [n, kind] : kRelations)
    if (kind == k) return n;
  return to_string(k);
}

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

enum class Tok { Ident, Number, LParen, RParen, Comma, Equals, Plus, Minus, Star, Slash, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  Span span;
};

inline std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "\"(\"";
    case Tok::RParen: return "\")\"";
    case Tok::Comma: return "\",\"";
    case Tok::Equals: return "\"=\"";
    case Tok::Plus: return "\"+\"";
    case Tok::Minus: return "\"-\"";
    case Tok::Star: return "\"*\"";
    case Tok::Slash: return "\"/\"";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    i += n;
    col += static_cast<int>(n);
  };
  while (i < src.size()) {
    const char c = src[i];
    const Span at{line, col};
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", 0.0, at});
      ++i;
      ++line;
      col = 1;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), 0.0, at});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      double v = 0.0;
      const auto res = std::from_chars(src.data() + i, src.data() + j, v);
      if (res.ec != std::errc() || res.ptr != src.data() + j)
        throw ParseError(ParseErrorKind::Syntax, at, "malformed number", {"number"});
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), v, at});
      advance(j - i);
    } else {
      Tok t;
      switch (c) {
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case ',': t = Tok::Comma; break;
        case '=': t = Tok::Equals; break;
        case '+': t = Tok::Plus; break;
        case '-': t = Tok::Minus; break;
        case '*': t = Tok::Star; break;
        case '/': t = Tok::Slash; break;
        default:
          throw ParseError(ParseErrorKind::Syntax, at, std::string("unexpected character '") + c + "'",
                           {"identifier", "number", "operator"});
      }
      out.push_back({t, std::string(1, c), 0.0, at});
      advance(1);
    }
  }
  out.push_back({Tok::End, "", 0.0, Span{line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program parse() {
    Program prog;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      prog.statements.push_back(statement());
      if (peek().kind != Tok::Newline && peek().kind != Tok::End)
        fail(peek(), "expected end of statement", {"end of line", "comment"});
    }
    if (prog.statements.empty())
      throw ParseError(ParseErrorKind::Syntax, Span{1, 1}, "program has no statements", {"point", "param", "assert"});
    return prog;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& at, const std::string& msg, std::vector<std::string> expected) const {
    fail(at.span, msg + (at.kind == Tok::Newline || at.kind == Tok::End ? "" : ", found '" + at.text + "'"),
         std::move(expected));
  }
  [[noreturn]] void fail(Span at, const std::string& msg, std::vector<std::string> expected,
                         ParseErrorKind kind = ParseErrorKind::Syntax) const {
    throw ParseError(kind, at, msg, std::move(expected));
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail(peek(), "expected " + describe(kind), {describe(kind)});
    return next();
  }

  // A list item must be followed by ","; the missing-separator error points at the item.
  void expect_separator(Span item, Tok closer, bool allow_close) {
    if (peek().kind == Tok::Comma) {
      ++pos_;
      return;
    }
    if (allow_close && peek().kind == closer) return;
    std::vector<std::string> exp{"\",\""};
    if (allow_close) exp.push_back(describe(closer));
    fail(item, "expected " + exp.front() + " after this item", exp);
  }

  Statement statement() {
    const Token& kw = peek();
    if (kw.kind != Tok::Ident || (kw.text != "point" && kw.text != "param" && kw.text != "assert"))
      fail(kw, "expected a statement", {"point", "param", "assert"});
    ++pos_;
    Statement st;
    st.span = kw.span;
    if (kw.text == "param") {
      st.kind = Statement::Kind::Param;
      const Token& name = expect(Tok::Ident);
      define(name, params_);
      st.name = name.text;
      expect(Tok::Equals);
      double sign = 1.0;
      if (peek().kind == Tok::Minus) {
        ++pos_;
        sign = -1.0;
      }
      st.value = sign * expect(Tok::Number).number;
    } else if (kw.text == "point") {
      st.kind = Statement::Kind::Define;
      const Token& name = expect(Tok::Ident);
      if (params_.contains(name.text) || labels_.contains(name.text))
        fail(name.span, "duplicate definition of " + name.text, {"new identifier"}, ParseErrorKind::DuplicateDefinition);
      st.name = name.text;
      expect(Tok::Equals);
      st.expr = point_expr();
      labels_.insert(name.text);
    } else {
      st.kind = Statement::Kind::Assert;
      const Token& rel = expect(Tok::Ident);
      const auto kind = find_relation(rel.text);
      if (!kind) {
        std::vector<std::string> names;
        for (const auto& [n, k] : kRelations) names.emplace_back(n);
        fail(rel, "unknown relation", names);
      }
      st.relation = *kind;
      expect(Tok::LParen);
      for (;;) {
        const Token& label = expect(Tok::Ident);
        require_label(label);
        st.labels.push_back(label.text);
        expect_separator(label.span, Tok::RParen, true);
        if (peek().kind == Tok::RParen) break;
      }
      expect(Tok::RParen);
      if (!arity_ok(*kind, st.labels.size())) {
        const Arity a = arity(*kind);
        std::string want = std::to_string(a.min) + (a.max == 0 ? " or more" : "");
        if (a.group > 1) want += " (multiple of " + std::to_string(a.group) + ")";
        fail(rel.span, rel.text + " takes " + want + " labels, got " + std::to_string(st.labels.size()), {want},
             ParseErrorKind::Arity);
      }
    }
    return st;
  }

  void define(const Token& name, std::set<std::string>& into) {
    if (params_.contains(name.text) || labels_.contains(name.text))
      fail(name.span, "duplicate definition of " + name.text, {"new identifier"}, ParseErrorKind::DuplicateDefinition);
    into.insert(name.text);
  }

  void require_label(const Token& t) const {
    if (!labels_.contains(t.text))
      fail(t.span, "point " + t.text + " used before definition", {"defined point label"},
           ParseErrorKind::UseBeforeDefine);
  }

  PointExpr point_expr() {
    PointExpr e;
    e.span = peek().span;
    if (peek().kind == Tok::LParen) {
      ++pos_;
      e.literal = true;
      Scalar x = scalar();
      expect_separator(x.span, Tok::RParen, false);
      Scalar y = scalar();
      expect(Tok::RParen);
      e.coords = {std::move(x), std::move(y)};
      return e;
    }
    const Token& fn = peek();
    if (fn.kind != Tok::Ident) fail(fn, "expected a point expression", {"\"(\"", "function name"});
    const FuncSig* sig = find_function(fn.text);
    if (!sig) {
      std::vector<std::string> names;
      for (const auto& f : kFunctions) names.emplace_back(f.name);
      fail(fn, "unknown function", names);
    }
    ++pos_;
    e.literal = false;
    e.func = fn.text;
    expect(Tok::LParen);
    for (;;) {
      Scalar a = scalar(true);
      e.args.push_back(a);
      expect_separator(a.span, Tok::RParen, true);
      if (peek().kind == Tok::RParen) break;
    }
    expect(Tok::RParen);
    check_call(*sig, fn, e.args);
    return e;
  }

  void check_call(const FuncSig& sig, const Token& fn, const std::vector<Scalar>& args) const {
    const std::size_t n = args.size();
    const std::size_t lo = sig.required.size();
    const bool ok = sig.variadic_points ? n >= lo : (n >= lo && n <= lo + sig.optional.size());
    if (!ok) {
      std::string want = std::to_string(lo);
      if (sig.variadic_points) want += " or more";
      if (!sig.optional.empty()) want += " or " + std::to_string(lo + sig.optional.size());
      fail(fn.span, std::string(sig.name) + " takes " + want + " arguments, got " + std::to_string(n), {want},
           ParseErrorKind::Arity);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const char kind = i < lo ? sig.required[i] : (sig.variadic_points ? 'P' : sig.optional[i - lo]);
      if (kind == 'P') {
        if (args[i].kind != Scalar::Kind::Name)
          fail(args[i].span, "argument " + std::to_string(i + 1) + " of " + std::string(sig.name) + " must be a point",
               {"point label"}, ParseErrorKind::Arity);
        if (!labels_.contains(args[i].name))
          fail(args[i].span, "point " + args[i].name + " used before definition", {"defined point label"},
               ParseErrorKind::UseBeforeDefine);
      } else {
        check_scalar_names(args[i]);
      }
    }
  }

  void check_scalar_names(const Scalar& s) const {
    if (s.kind == Scalar::Kind::Name && !params_.contains(s.name))
      fail(s.span, "param " + s.name + " used before definition", {"defined param"}, ParseErrorKind::UseBeforeDefine);
    for (const auto& o : s.operands) check_scalar_names(o);
  }

  // Names inside function arguments are resolved by check_call (point or param slot).
  Scalar scalar(bool defer_names = false) {
    Scalar lhs = term(defer_names);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      Scalar rhs = term(defer_names);
      lhs = binary(op.text[0], std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Scalar term(bool defer_names) {
    Scalar lhs = unary(defer_names);
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& op = next();
      Scalar rhs = unary(defer_names);
      lhs = binary(op.text[0], std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Scalar unary(bool defer_names) {
    if (peek().kind == Tok::Minus) {
      const Token& m = next();
      Scalar s;
      s.kind = Scalar::Kind::Negate;
      s.span = m.span;
      s.operands.push_back(unary(defer_names));
      return s;
    }
    return primary(defer_names);
  }

  Scalar primary(bool defer_names) {
    const Token& t = peek();
    Scalar s;
    s.span = t.span;
    if (t.kind == Tok::Number) {
      ++pos_;
      s.kind = Scalar::Kind::Number;
      s.value = t.number;
      return s;
    }
    if (t.kind == Tok::Ident) {
      ++pos_;
      s.kind = Scalar::Kind::Name;
      s.name = t.text;
      if (!defer_names && !params_.contains(t.text))
        fail(t.span, "param " + t.text + " used before definition", {"defined param"},
             ParseErrorKind::UseBeforeDefine);
      return s;
    }
    if (t.kind == Tok::LParen) {
      ++pos_;
      Scalar inner = scalar(defer_names);
      expect(Tok::RParen);
      if (defer_names) check_scalar_names(inner);
      return inner;
    }
    fail(t, "expected a number or name", {"number", "identifier", "\"(\"", "\"-\""});
  }

  static Scalar binary(char op, Scalar lhs, Scalar rhs) {
    Scalar s;
    s.kind = Scalar::Kind::Binary;
    s.op = op;
    s.span = lhs.span;
    s.operands.push_back(std::move(lhs));
    s.operands.push_back(std::move(rhs));
    return s;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> params_;
  std::set<std::string> labels_;
};

}  // namespace detail

inline Program parse(std::string_view source) { return detail::Parser(source).parse(); }

// ---------------------------------------------------------------------------
// Pretty printer

namespace detail {

inline int precedence(const Scalar& s) {
  if (s.kind == Scalar::Kind::Binary) return (s.op == '+' || s.op == '-') ? 1 : 2;
  return 3;
}

inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string print(const Scalar& s) {
  switch (s.kind) {
    case Scalar::Kind::Number: return format_number(s.value);
    case Scalar::Kind::Name: return s.name;
    case Scalar::Kind::Negate: {
      const std::string inner = print(s.operands[0]);
      return precedence(s.operands[0]) < 3 ? "-(" + inner + ")" : "-" + inner;
    }
    case Scalar::Kind::Binary: {
      const int p = precedence(s);
      std::string l = print(s.operands[0]);
      std::string r = print(s.operands[1]);
      if (precedence(s.operands[0]) < p) l = "(" + l + ")";
      if (precedence(s.operands[1]) <= p) r = "(" + r + ")";
      return l + " " + s.op + " " + r;
    }
  }
  return {};
}

}  // namespace detail

/// Canonical source text; parse(to_source(p)) == p.
inline std::string to_source(const Program& program) {
  std::ostringstream out;
  for (const auto& st : program.statements) {
    switch (st.kind) {
      case Statement::Kind::Param:
        out << "param " << st.name << " = " << detail::format_number(st.value) << '\n';
        break;
      case Statement::Kind::Define: {
        out << "point " << st.name << " = ";
        if (st.expr.literal) {
          out << '(' << detail::print(st.expr.coords[0]) << ", " << detail::print(st.expr.coords[1]) << ')';
        } else {
          out << st.expr.func << '(';
          for (std::size_t i = 0; i < st.expr.args.size(); ++i)
            out << (i ? ", " : "") << detail::print(st.expr.args[i]);
          out << ')';
        }
        out << '\n';
        break;
      }
      case Statement::Kind::Assert: {
        out << "assert " << relation_keyword(st.relation) << '(';
        for (std::size_t i = 0; i < st.labels.size(); ++i) out << (i ? ", " : "") << st.labels[i];
        out << ")\n";
        break;
      }
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Evaluation

struct AssertionResult {
  RelationKind kind;
  std::vector<std::string> labels;
  RelationVerdict verdict;
  Span span;
};

struct Evaluation {
  Configuration configuration;
  std::vector<AssertionResult> assertions;
  std::map<std::string, std::string> failed_points;  // label -> construction error

  bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.verdict.pass) return false;
    return true;
  }
};

namespace detail {

inline double eval(const Scalar& s, const std::map<std::string, double>& params) {
  switch (s.kind) {
    case Scalar::Kind::Number: return s.value;
    case Scalar::Kind::Name: return params.at(s.name);
    case Scalar::Kind::Negate: return -eval(s.operands[0], params);
    case Scalar::Kind::Binary: {
      const double l = eval(s.operands[0], params);
      const double r = eval(s.operands[1], params);
      switch (s.op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        default: return l / r;
      }
    }
  }
  return 0.0;
}

inline Point apply(const std::string& f, const std::vector<Point>& p, const std::vector<double>& s,
                   const ToleranceBudget& tol) {
  const auto orient = [&s] { return !s.empty() && s[0] < 0.0 ? Orientation::Away : Orientation::Toward; };
  if (f == "midpoint") return midpoint(p[0], p[1]);
  if (f == "reflect_line") return reflect(p[0], line_through(p[1], p[2], tol));
  if (f == "reflect_point") return reflect(p[0], p[1]);
  if (f == "rotate") return rotate(p[0], p[1], s[0] * std::numbers::pi / 180.0);
  if (f == "centroid") {
    Point sum = p[0];
    for (std::size_t i = 1; i < p.size(); ++i) sum = sum + p[i];
    return sum / static_cast<double>(p.size());
  }
  if (f == "circumcenter") return triangle_center(CenterKind::X3, p[0], p[1], p[2], tol);
  if (f == "incenter") return triangle_center(CenterKind::X1, p[0], p[1], p[2], tol);
  if (f == "orthocenter") return triangle_center(CenterKind::X4, p[0], p[1], p[2], tol);
  if (f == "ninepoint") return triangle_center(CenterKind::X5, p[0], p[1], p[2], tol);
  if (f == "fermat1") return triangle_center(CenterKind::X13, p[0], p[1], p[2], tol);
  if (f == "fermat2") return triangle_center(CenterKind::X14, p[0], p[1], p[2], tol);
  if (f == "eq_apex") return equilateral_apex(p[0], p[1], orient(), p[2], tol);
  if (f == "ri_apex") return right_isosceles_apex(p[0], p[1], orient(), p[2], tol);
  if (f == "second_intersection") return second_intersection(p[0], p[1], circumcircle(p[2], p[3], p[4], tol), tol);
  if (f == "bisector_meet") {
    const Line first = angle_bisector(p[1], p[0], p[2], tol).line;
    const Line second = angle_bisector(p[2], p[1], p[3], tol).line;
    return intersect(first, second, tol).points.front();
  }
  throw GeometryError(ErrorCode::InvalidArgument, "unknown function " + f);
}

}  // namespace detail

/// Runs the program. Construction failures never abort: they poison the label, and any
/// assertion touching a poisoned label yields a failed verdict carrying the error.
inline Evaluation evaluate(const Program& program, const std::map<std::string, double>& overrides = {},
                           const ToleranceBudget& tol = {}) {
  std::map<std::string, double> params;
  for (const auto& st : program.statements)
    if (st.kind == Statement::Kind::Param) params[st.name] = st.value;
  for (const auto& [name, value] : overrides) {
    if (!params.contains(name)) throw UnknownParam(name);
    params[name] = value;
  }

  Evaluation ev;
  ev.configuration = Configuration({"script", {}});
  for (const auto& st : program.statements) {
    if (st.kind != Statement::Kind::Define) continue;
    try {
      if (st.expr.literal) {
        ev.configuration.add_defining(
            st.name, Point{detail::eval(st.expr.coords[0], params), detail::eval(st.expr.coords[1], params)});
        continue;
      }
      const FuncSig* sig = find_function(st.expr.func);
      std::vector<Point> pts;
      std::vector<double> scalars;
      for (std::size_t i = 0; i < st.expr.args.size(); ++i) {
        const std::size_t lo = sig->required.size();
        const char kind = i < lo ? sig->required[i] : (sig->variadic_points ? 'P' : sig->optional[i - lo]);
        if (kind == 'P') {
          const auto& label = st.expr.args[i].name;
          if (auto it = ev.failed_points.find(label); it != ev.failed_points.end())
            throw GeometryError(ErrorCode::InvalidArgument, "depends on failed point " + label + " (" + it->second + ")");
          pts.push_back(ev.configuration.point(label));
        } else {
          scalars.push_back(detail::eval(st.expr.args[i], params));
        }
      }
      ev.configuration.add(st.name, detail::apply(st.expr.func, pts, scalars, tol));
    } catch (const GeometryError& e) {
      ev.failed_points[st.name] = e.what();
    }
  }

  const double scale = ev.configuration.defining_diameter();
  for (const auto& st : program.statements) {
    if (st.kind != Statement::Kind::Assert) continue;
    AssertionResult r{st.relation, st.labels, {}, st.span};
    std::string broken;
    for (const auto& l : st.labels)
      if (auto it = ev.failed_points.find(l); it != ev.failed_points.end()) broken = l + ": " + it->second;
    if (!broken.empty()) {
      r.verdict = RelationVerdict{st.relation, kInfiniteResidual, false, {}, {VerdictFlag::EvaluationError}, broken};
    } else {
      try {
        r.verdict = check_relation(st.relation, ev.configuration.points(st.labels), tol, scale > 0.0 ? scale : 0.0);
      } catch (const GeometryError& e) {
        r.verdict = RelationVerdict{st.relation, kInfiniteResidual, false, {}, {VerdictFlag::EvaluationError}, e.what()};
      }
    }
    ev.assertions.push_back(std::move(r));
  }
  return ev;
}

}  // namespace geodeform::script
