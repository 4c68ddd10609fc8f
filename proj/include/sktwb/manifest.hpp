#pragma once

// The .skt manifest dialect: a sectioned, line-oriented format whose right
// hand sides are exterior-algebra expressions. parse_manifest reports errors
// with line and column; print_manifest emits the canonical text.

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/cohomology.hpp"
#include "sktwb/topology.hpp"
#include "sktwb/torus_map.hpp"

namespace sktwb {

class ParseError : public InputError {
 public:
  ParseError(int line, int column, const std::string& token, const std::string& msg)
      : InputError("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg +
                   (token.empty() ? "" : " (at '" + token + "')")),
        line_(line),
        column_(column),
        token_(token) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  int line_, column_;
  std::string token_;
};

struct Token {
  enum class Kind { ident, number, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 0, column = 0;
};

inline std::vector<Token> tokenize(const std::string& text, int line, int column0 = 1) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const int col = column0 + static_cast<int>(i);
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::Kind::ident, text.substr(i, j - i), line, col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Token::Kind::number, text.substr(i, j - i), line, col});
      i = j;
    } else if (std::string("+-*/^(),=[]!<>").find(c) != std::string::npos) {
      out.push_back({Token::Kind::symbol, std::string(1, c), line, col});
      ++i;
    } else {
      throw ParseError(line, col, std::string(1, c), "unexpected character");
    }
  }
  out.push_back({Token::Kind::end, "", line, column0 + static_cast<int>(text.size())});
  return out;
}

/// A parsed right-hand side: a scalar, a form in the real coframe e^i or a
/// form in the complex coframe phi^j / phibar^j.
struct Value {
  enum class Basis { scalar, real, complex };
  Basis basis = Basis::scalar;
  Form form;
};

inline const char* basis_name(Value::Basis b) {
  switch (b) {
    case Value::Basis::scalar: return "scalar";
    case Value::Basis::real: return "real coframe";
    default: return "complex coframe";
  }
}

/// Recursive-descent evaluator for manifest expressions.
///   expr   = term { ('+' | '-') term }
///   term   = unary { ('*' | '/') unary }
///   unary  = '-' unary | power
///   power  = atom { '^' atom }      (scalar ^ integer is a power, otherwise wedge)
///   atom   = integer | name | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(const Ring& ring, int dim, std::vector<Token> tokens)
      : ring_(ring), dim_(dim), t_(std::move(tokens)) {}

  Value parse() {
    Value v = expr();
    if (peek().kind != Token::Kind::end) fail(peek(), "unexpected token");
    return v;
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  const Token& take() { return t_[pos_++]; }
  bool accept(const char* sym) {
    if (peek().kind == Token::Kind::symbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, t.text, msg);
  }

  Value scalar(const Scalar& s) const { return {Value::Basis::scalar, Form::constant(dim_ < 0 ? 0 : dim_, s)}; }
  int form_dim() const { return dim_ < 0 ? 0 : dim_; }

  static Value::Basis merge(const Value& a, const Value& b, const Token& at, const ExpressionParser& p) {
    if (a.basis == Value::Basis::scalar) return b.basis;
    if (b.basis == Value::Basis::scalar || a.basis == b.basis) return a.basis;
    p.fail(at, "expression mixes e generators with phi generators");
  }
  static Scalar as_scalar(const Value& v) {
    if (v.form.is_zero()) return Scalar();
    return v.form.coefficient(0);
  }

  Value expr() {
    Value v = term();
    for (;;) {
      const Token& op = peek();
      if (accept("+")) {
        Value w = term();
        v = {merge(v, w, op, *this), v.form + w.form};
      } else if (accept("-")) {
        Value w = term();
        v = {merge(v, w, op, *this), v.form - w.form};
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      const Token& op = peek();
      if (accept("*")) {
        Value w = unary();
        if (v.basis != Value::Basis::scalar && w.basis != Value::Basis::scalar)
          fail(op, "use '^' to wedge two forms");
        v = {merge(v, w, op, *this), wedge(v.form, w.form)};
      } else if (accept("/")) {
        Value w = unary();
        if (w.basis != Value::Basis::scalar) fail(op, "can only divide by a scalar");
        const Scalar d = as_scalar(w);
        if (d.is_zero()) fail(op, "division by zero");
        v.form = (Scalar(1) / d) * v.form;
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (accept("-")) {
      Value v = unary();
      v.form = -v.form;
      return v;
    }
    return power();
  }

  Value power() {
    Value v = atom();
    for (;;) {
      const Token& op = peek();
      if (!accept("^")) return v;
      if (v.basis == Value::Basis::scalar && peek().kind == Token::Kind::number) {
        const Token& n = take();
        if (n.text.size() > 4) fail(n, "exponent too large");
        const int k = std::stoi(n.text);
        const Scalar base = as_scalar(v);
        Scalar r(1);
        for (int i = 0; i < k; ++i) r = r * base;
        v = scalar(r);
        continue;
      }
      Value w = atom();
      v = {merge(v, w, op, *this), wedge(v.form, w.form)};
    }
  }

  Value atom() {
    const Token& t = take();
    if (t.kind == Token::Kind::number) return scalar(Scalar(Rational(Integer(t.text))));
    if (t.kind == Token::Kind::symbol && t.text == "(") {
      Value v = expr();
      if (!accept(")")) fail(peek(), "expected ')'");
      return v;
    }
    if (t.kind != Token::Kind::ident) fail(t, "expected a number, a name or '('");
    const std::string& n = t.text;
    if (n == "I") {
      if (!ring_.field().has_i()) fail(t, "I needs a cyclotomic order divisible by 4");
      return scalar(ring_.imaginary_unit());
    }
    if (n == "zeta") return scalar(ring_.zeta(1));
    if (n == "xi") {
      if (!ring_.field().has_cube_root()) fail(t, "xi needs a cyclotomic order divisible by 3");
      return scalar(ring_.cube_root_of_unity());
    }
    if (auto k = numbered(n, "phibar")) return generator(t, *k, Value::Basis::complex, true);
    if (auto k = numbered(n, "phi")) return generator(t, *k, Value::Basis::complex, false);
    if (auto k = numbered(n, "e")) return generator(t, *k, Value::Basis::real, false);
    if (ring_.is_parameter(n)) return scalar(ring_.parameter(n));
    if (ring_.function_variable(n)) return scalar(Scalar::variable(canonical_function_name(n)));
    fail(t, "unknown symbol");
  }

  std::string canonical_function_name(const std::string& n) const {
    auto fv = ring_.function_variable(n);
    return Ring::derivative_name(fv->first->name, fv->second);
  }

  static std::optional<int> numbered(const std::string& n, const std::string& prefix) {
    if (n.size() <= prefix.size() || n.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    for (std::size_t i = prefix.size(); i < n.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(n[i]))) return std::nullopt;
    if (n.size() - prefix.size() > 3) return std::nullopt;
    return std::stoi(n.substr(prefix.size()));
  }

  Value generator(const Token& t, int k, Value::Basis b, bool bar) const {
    if (dim_ < 0) fail(t, "generators need [algebra] dim");
    if (b == Value::Basis::real) {
      if (k < 1 || k > dim_) fail(t, "unknown generator");
      return {b, Form::generator(dim_, k - 1)};
    }
    if (dim_ % 2 != 0) fail(t, "phi generators need an even dimension");
    const int n = dim_ / 2;
    if (k < 1 || k > n) fail(t, "unknown generator");
    return {b, Form::generator(dim_, bar ? n + k - 1 : k - 1)};
  }

  const Ring& ring_;
  int dim_;
  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

struct ActionGenerator {
  enum class Kind { matrix_real, matrix_complex, identity, minus_identity };
  std::string name;
  Kind kind = Kind::matrix_real;
  std::map<int, Form> images;  // 0-based generator -> pullback image
};

struct ScheduleSpec {
  enum class Start { betti, invariant, explicit_poly };
  int ambient = 0;
  Start start = Start::betti;
  PoincarePoly start_poly;
  std::vector<BlowupStep> steps;
  std::vector<std::pair<long, long>> exceptional_b1;  // (b1 of E, number of such divisors)
};

struct Manifest {
  RingDescriptor ring_desc;
  std::shared_ptr<const Ring> ring;
  int dim = 0;
  std::vector<Form> differentials;

  std::optional<Matrix<Scalar>> j;
  std::optional<std::vector<Form>> phis;
  bool flip_lee = false;

  bool has_metric = false;
  bool metric_identity = false;
  std::map<std::pair<int, int>, Scalar> metric_entries;  // 0-based (j,k), j <= k as written

  bool has_action = false;
  std::size_t bound = 1024;
  std::vector<ActionGenerator> action;

  std::optional<Matrix<Integer>> torus_a;
  std::vector<Rational> torus_b;

  std::vector<std::pair<std::string, Rational>> specialize;
  std::optional<ScheduleSpec> schedule;

  bool has_complex() const { return j.has_value() || phis.has_value(); }
};

namespace manifest_detail {

struct Line {
  int number;
  int column;  // column of the first character of `text`
  std::string text;
};

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline Rational parse_rational(const std::vector<Token>& t, std::size_t& pos) {
  bool neg = false;
  if (t[pos].kind == Token::Kind::symbol && t[pos].text == "-") {
    neg = true;
    ++pos;
  }
  if (t[pos].kind != Token::Kind::number) throw ParseError(t[pos].line, t[pos].column, t[pos].text, "expected a number");
  Rational r(Integer(t[pos++].text));
  if (t[pos].kind == Token::Kind::symbol && t[pos].text == "/") {
    ++pos;
    if (t[pos].kind != Token::Kind::number) throw ParseError(t[pos].line, t[pos].column, t[pos].text, "expected a denominator");
    Integer d(t[pos].text);
    if (sgn(d) == 0) throw ParseError(t[pos].line, t[pos].column, t[pos].text, "zero denominator");
    r /= Rational(d);
    ++pos;
  }
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

inline std::vector<Rational> parse_rational_list(const std::vector<Token>& t, std::size_t& pos) {
  std::vector<Rational> out;
  out.push_back(parse_rational(t, pos));
  while (t[pos].kind == Token::Kind::symbol && t[pos].text == ",") {
    ++pos;
    out.push_back(parse_rational(t, pos));
  }
  return out;
}

inline long parse_int(const std::vector<Token>& t, std::size_t& pos) {
  std::size_t p = pos;
  Rational r = parse_rational(t, p);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p())
    throw ParseError(t[pos].line, t[pos].column, t[pos].text, "expected an integer");
  pos = p;
  return r.get_num().get_si();
}

inline void expect(const std::vector<Token>& t, std::size_t& pos, const std::string& what) {
  if (t[pos].text != what || t[pos].kind == Token::Kind::end)
    throw ParseError(t[pos].line, t[pos].column, t[pos].text, "expected '" + what + "'");
  ++pos;
}

inline void expect_end(const std::vector<Token>& t, std::size_t pos) {
  if (t[pos].kind != Token::Kind::end)
    throw ParseError(t[pos].line, t[pos].column, t[pos].text, "unexpected trailing input");
}

/// Tokens after the '=' of the line, as an expression.
inline Value rhs_value(const Ring& ring, int dim, const std::vector<Token>& t, std::size_t pos) {
  std::vector<Token> rest(t.begin() + static_cast<long>(pos), t.end());
  if (rest.size() == 1) throw ParseError(t[pos].line, t[pos].column, "", "missing expression");
  return ExpressionParser(ring, dim, std::move(rest)).parse();
}

inline std::optional<int> generator_index(const Token& tok, const std::string& prefix) {
  const std::string& n = tok.text;
  if (tok.kind != Token::Kind::ident || n.size() <= prefix.size() || n.compare(0, prefix.size(), prefix) != 0)
    return std::nullopt;
  for (std::size_t i = prefix.size(); i < n.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(n[i]))) return std::nullopt;
  return std::stoi(n.substr(prefix.size()));
}

}  // namespace manifest_detail

inline Manifest parse_manifest(const std::string& text) {
  using namespace manifest_detail;
  static const std::vector<std::string> order = {"ring",     "algebra",    "complex",  "metric",
                                                 "action",   "torusmap",   "specialize", "schedule"};
  std::map<std::string, std::vector<Line>> sections;
  std::map<std::string, int> section_line;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t first = 0;
    while (first < raw.size() && std::isspace(static_cast<unsigned char>(raw[first]))) ++first;
    const std::string body = trim(raw);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError(lineno, static_cast<int>(first) + 1, body, "malformed section header");
      current = trim(body.substr(1, body.size() - 2));
      if (std::find(order.begin(), order.end(), current) == order.end())
        throw ParseError(lineno, static_cast<int>(first) + 2, current, "unknown section");
      if (section_line.count(current)) throw ParseError(lineno, static_cast<int>(first) + 2, current, "duplicate section");
      section_line[current] = lineno;
      sections[current];
      continue;
    }
    if (current.empty()) throw ParseError(lineno, static_cast<int>(first) + 1, body, "content before the first section");
    sections[current].push_back({lineno, static_cast<int>(first) + 1, body});
  }

  Manifest m;

  // [ring]
  for (const auto& l : sections["ring"]) {
    auto t = tokenize(l.text, l.number, l.column);
    std::size_t p = 0;
    const std::string key = t[0].text;
    if (key == "cyclotomic") {
      ++p;
      expect(t, p, "=");
      m.ring_desc.cyclotomic_order = static_cast<int>(parse_int(t, p));
      if (m.ring_desc.cyclotomic_order < 1 || m.ring_desc.cyclotomic_order > 720)
        throw ParseError(t[2].line, t[2].column, t[2].text, "cyclotomic order must be in [1, 720]");
      expect_end(t, p);
    } else if (key == "parameters") {
      ++p;
      expect(t, p, "=");
      while (t[p].kind == Token::Kind::ident) {
        m.ring_desc.parameters.push_back(t[p++].text);
        if (t[p].text == ",") ++p;
      }
      expect_end(t, p);
    } else if (key == "function") {
      ++p;
      if (t[p].kind != Token::Kind::ident) throw ParseError(t[p].line, t[p].column, t[p].text, "expected a function name");
      FunctionSymbol f{t[p++].text, {}, {}};
      if (f.name.find('_') != std::string::npos)
        throw ParseError(t[1].line, t[1].column, f.name, "function names may not contain '_'");
      expect(t, p, "depends");
      while (t[p].kind == Token::Kind::number) f.depends_on.push_back(static_cast<int>(parse_int(t, p)));
      if (f.depends_on.empty()) throw ParseError(t[p].line, t[p].column, t[p].text, "expected coordinate indices");
      while (t[p].kind == Token::Kind::ident) f.metadata.push_back(t[p++].text);
      expect_end(t, p);
      m.ring_desc.functions.push_back(std::move(f));
    } else if (key == "assume") {
      m.ring_desc.assumptions.push_back(trim(l.text.substr(6)));
    } else {
      throw ParseError(t[0].line, t[0].column, t[0].text, "unknown [ring] entry");
    }
  }
  try {
    m.ring = Ring::make(m.ring_desc);
  } catch (const InputError& e) {
    const int ln = section_line.count("ring") ? section_line["ring"] : 1;
    throw ParseError(ln, 1, "", e.what());
  }
  const Ring& ring = *m.ring;

  // [algebra]
  if (!sections.count("algebra")) throw ParseError(lineno, 1, "", "missing [algebra] section");
  m.dim = -1;
  std::vector<std::pair<Line, std::vector<Token>>> dlines;
  for (const auto& l : sections["algebra"]) {
    auto t = tokenize(l.text, l.number, l.column);
    std::size_t p = 0;
    if (t[0].text == "dim") {
      ++p;
      expect(t, p, "=");
      const Token at = t[p];
      m.dim = static_cast<int>(parse_int(t, p));
      if (m.dim < 1 || m.dim > 16) throw ParseError(at.line, at.column, at.text, "dim must be in [1, 16]");
      expect_end(t, p);
    } else if (t[0].text == "d") {
      dlines.emplace_back(l, std::move(t));
    } else {
      throw ParseError(t[0].line, t[0].column, t[0].text, "unknown [algebra] entry");
    }
  }
  if (m.dim < 0) throw ParseError(section_line["algebra"], 1, "", "[algebra] needs 'dim = N'");
  m.differentials.assign(static_cast<std::size_t>(m.dim), Form(m.dim));
  std::vector<bool> seen(static_cast<std::size_t>(m.dim), false);
  for (const auto& [l, t] : dlines) {
    std::size_t p = 1;
    auto k = generator_index(t[p], "e");
    if (!k || *k < 1 || *k > m.dim) throw ParseError(t[p].line, t[p].column, t[p].text, "unknown generator");
    if (seen[static_cast<std::size_t>(*k - 1)]) throw ParseError(t[p].line, t[p].column, t[p].text, "d of this generator given twice");
    seen[static_cast<std::size_t>(*k - 1)] = true;
    ++p;
    expect(t, p, "=");
    Value v = rhs_value(ring, m.dim, t, p);
    if (v.basis == Value::Basis::complex) throw ParseError(t[p].line, t[p].column, t[p].text, "structure equations use e generators");
    if (!v.form.is_homogeneous(2)) throw ParseError(t[p].line, t[p].column, t[p].text, "d e" + std::to_string(*k) + " must be a 2-form");
    m.differentials[static_cast<std::size_t>(*k - 1)] = v.form;
  }

  // [complex]
  if (sections.count("complex")) {
    std::map<int, Form> jrows;
    std::map<int, Form> phis;
    Token first_j{}, first_phi{};
    for (const auto& l : sections["complex"]) {
      auto t = tokenize(l.text, l.number, l.column);
      std::size_t p = 0;
      if (t[0].text == "flip_lee_sign") {
        m.flip_lee = true;
        expect_end(t, 1);
      } else if (t[0].text == "J") {
        p = 1;
        auto k = generator_index(t[p], "e");
        if (!k || *k < 1 || *k > m.dim) throw ParseError(t[p].line, t[p].column, t[p].text, "unknown generator");
        if (jrows.count(*k - 1)) throw ParseError(t[p].line, t[p].column, t[p].text, "J of this generator given twice");
        if (jrows.empty()) first_j = t[0];
        ++p;
        expect(t, p, "=");
        Value v = rhs_value(ring, m.dim, t, p);
        if (v.basis == Value::Basis::complex || !v.form.is_homogeneous(1))
          throw ParseError(t[p].line, t[p].column, t[p].text, "J e" + std::to_string(*k) + " must be a 1-form in e generators");
        jrows[*k - 1] = v.form;
      } else if (auto k = generator_index(t[0], "phi")) {
        if (*k < 1 || 2 * *k > m.dim) throw ParseError(t[0].line, t[0].column, t[0].text, "unknown generator");
        if (phis.count(*k - 1)) throw ParseError(t[0].line, t[0].column, t[0].text, "phi given twice");
        if (phis.empty()) first_phi = t[0];
        p = 1;
        expect(t, p, "=");
        Value v = rhs_value(ring, m.dim, t, p);
        if (v.basis == Value::Basis::complex || !v.form.is_homogeneous(1) || v.form.is_zero())
          throw ParseError(t[p].line, t[p].column, t[p].text, "phi" + std::to_string(*k) + " must be a nonzero 1-form in e generators");
        phis[*k - 1] = v.form;
      } else {
        throw ParseError(t[0].line, t[0].column, t[0].text, "unknown [complex] entry");
      }
    }
    if (!jrows.empty()) {
      // a single-term row J e_a = c e_b determines J e_b = -(1/c) e_a
      auto given = jrows;
      for (const auto& [a, f] : given) {
        if (f.terms().size() != 1) continue;
        const auto& [mask, c] = *f.terms().begin();
        const int b = std::countr_zero(mask);
        if (!jrows.count(b)) jrows[b] = (Scalar(-1) / c) * Form::generator(m.dim, a);
      }
      if (static_cast<int>(jrows.size()) != m.dim)
        throw ParseError(first_j.line, first_j.column, "J", "J must be given on every generator");
      Matrix<Scalar> j(static_cast<std::size_t>(m.dim), static_cast<std::size_t>(m.dim));
      for (const auto& [a, f] : jrows)
        for (const auto& [mask, c] : f.terms())
          j(static_cast<std::size_t>(a), static_cast<std::size_t>(std::countr_zero(mask))) = c;
      m.j = std::move(j);
    }
    if (!phis.empty()) {
      if (static_cast<int>(phis.size()) * 2 != m.dim)
        throw ParseError(first_phi.line, first_phi.column, first_phi.text, "need phi1..phin with n = dim/2");
      std::vector<Form> v;
      for (auto& [k, f] : phis) v.push_back(f);
      m.phis = std::move(v);
    }
  }

  // [metric]
  if (sections.count("metric")) {
    m.has_metric = true;
    for (const auto& l : sections["metric"]) {
      auto t = tokenize(l.text, l.number, l.column);
      std::size_t p = 0;
      if (t[0].text == "identity") {
        expect_end(t, 1);
        m.metric_identity = true;
      } else if (t[0].text == "H") {
        p = 1;
        const Token jt = t[p];
        const long a = parse_int(t, p);
        const long b = parse_int(t, p);
        if (a < 1 || b < 1 || 2 * a > m.dim || 2 * b > m.dim)
          throw ParseError(jt.line, jt.column, jt.text, "metric index out of range");
        expect(t, p, "=");
        Value v = rhs_value(ring, m.dim, t, p);
        if (v.basis != Value::Basis::scalar) throw ParseError(t[p].line, t[p].column, t[p].text, "metric entries are scalars");
        m.metric_entries[{static_cast<int>(a - 1), static_cast<int>(b - 1)}] = v.form.is_zero() ? Scalar() : v.form.coefficient(0);
      } else {
        throw ParseError(t[0].line, t[0].column, t[0].text, "unknown [metric] entry");
      }
    }
    if (m.metric_identity && !m.metric_entries.empty())
      throw ParseError(section_line["metric"], 1, "", "metric is either 'identity' or a list of H entries");
  }

  // [action]
  if (sections.count("action")) {
    m.has_action = true;
    auto find_gen = [&](const std::string& name) -> ActionGenerator& {
      for (auto& g : m.action)
        if (g.name == name) return g;
      m.action.push_back({name, ActionGenerator::Kind::matrix_real, {}});
      return m.action.back();
    };
    for (const auto& l : sections["action"]) {
      auto t = tokenize(l.text, l.number, l.column);
      std::size_t p = 0;
      if (t[0].text == "bound") {
        p = 1;
        expect(t, p, "=");
        const long b = parse_int(t, p);
        if (b < 1 || b > 1 << 20) throw ParseError(t[2].line, t[2].column, t[2].text, "bound out of range");
        m.bound = static_cast<std::size_t>(b);
        expect_end(t, p);
        continue;
      }
      if (t[0].kind != Token::Kind::ident || Ring::is_reserved(t[0].text))
        throw ParseError(t[0].line, t[0].column, t[0].text, "expected a group generator name");
      const Token name = t[0];
      if (t[1].text == "=") {
        p = 2;
        bool minus = false;
        if (t[p].text == "-") {
          minus = true;
          ++p;
        }
        expect(t, p, "identity");
        expect_end(t, p);
        ActionGenerator& g = find_gen(name.text);
        if (!g.images.empty()) throw ParseError(name.line, name.column, name.text, "generator defined twice");
        g.kind = minus ? ActionGenerator::Kind::minus_identity : ActionGenerator::Kind::identity;
        continue;
      }
      p = 1;
      expect(t, p, "*");
      const Token gt = t[p];
      std::optional<int> k;
      bool complex = false;
      if ((k = generator_index(gt, "phi"))) complex = true;
      else k = generator_index(gt, "e");
      const int limit = complex ? m.dim / 2 : m.dim;
      if (!k || *k < 1 || *k > limit) throw ParseError(gt.line, gt.column, gt.text, "unknown generator");
      ++p;
      expect(t, p, "=");
      Value v = rhs_value(ring, m.dim, t, p);
      const Value::Basis want = complex ? Value::Basis::complex : Value::Basis::real;
      if ((v.basis != want && !v.form.is_zero()) || !v.form.is_homogeneous(1))
        throw ParseError(t[p].line, t[p].column, t[p].text,
                         std::string("pullback image must be a 1-form in the ") + basis_name(want));
      ActionGenerator& g = find_gen(name.text);
      const auto kind = complex ? ActionGenerator::Kind::matrix_complex : ActionGenerator::Kind::matrix_real;
      if (!g.images.empty() && g.kind != kind)
        throw ParseError(gt.line, gt.column, gt.text, "a generator is given either on e or on phi, not both");
      if (g.kind == ActionGenerator::Kind::identity || g.kind == ActionGenerator::Kind::minus_identity)
        if (g.images.empty() && &g != &m.action.back())
          throw ParseError(name.line, name.column, name.text, "generator defined twice");
      if (g.images.count(*k - 1)) throw ParseError(gt.line, gt.column, gt.text, "image given twice");
      g.kind = kind;
      g.images[*k - 1] = v.form;
    }
    if (m.action.empty()) throw ParseError(section_line["action"], 1, "", "[action] declares no generator");
  }

  // [torusmap]
  if (sections.count("torusmap")) {
    const auto n = static_cast<std::size_t>(m.dim);
    Matrix<Integer> a(n, n);
    std::vector<bool> rows_seen(n, false);
    bool whole = false;
    for (const auto& l : sections["torusmap"]) {
      auto t = tokenize(l.text, l.number, l.column);
      std::size_t p = 0;
      if (t[0].text == "A") {
        p = 1;
        expect(t, p, "=");
        bool minus = false;
        if (t[p].text == "-") {
          minus = true;
          ++p;
        }
        expect(t, p, "identity");
        expect_end(t, p);
        a = Matrix<Integer>::identity(n);
        if (minus)
          for (std::size_t i = 0; i < n; ++i) a(i, i) = -1;
        whole = true;
      } else if (t[0].text == "row") {
        p = 1;
        const Token it = t[p];
        const long i = parse_int(t, p);
        if (i < 1 || i > static_cast<long>(n)) throw ParseError(it.line, it.column, it.text, "row index out of range");
        expect(t, p, "=");
        const Token vt = t[p];
        auto vals = parse_rational_list(t, p);
        expect_end(t, p);
        if (vals.size() != n) throw ParseError(vt.line, vt.column, vt.text, "row needs " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) {
          if (vals[c].get_den() != 1) throw ParseError(vt.line, vt.column, vt.text, "torus map entries must be integers");
          a(static_cast<std::size_t>(i - 1), c) = vals[c].get_num();
        }
        rows_seen[static_cast<std::size_t>(i - 1)] = true;
      } else if (t[0].text == "b") {
        p = 1;
        expect(t, p, "=");
        const Token vt = t[p];
        m.torus_b = parse_rational_list(t, p);
        expect_end(t, p);
        if (m.torus_b.size() != n) throw ParseError(vt.line, vt.column, vt.text, "b needs " + std::to_string(n) + " entries");
      } else {
        throw ParseError(t[0].line, t[0].column, t[0].text, "unknown [torusmap] entry");
      }
    }
    if (!whole)
      for (std::size_t i = 0; i < n; ++i)
        if (!rows_seen[i]) throw ParseError(section_line["torusmap"], 1, "", "torus map needs 'A = ...' or every row");
    m.torus_a = std::move(a);
  }

  // [specialize]
  for (const auto& l : sections["specialize"]) {
    auto t = tokenize(l.text, l.number, l.column);
    if (t[0].kind != Token::Kind::ident || !ring.is_parameter(t[0].text))
      throw ParseError(t[0].line, t[0].column, t[0].text, "not a declared parameter");
    std::size_t p = 1;
    expect(t, p, "=");
    Rational v = parse_rational(t, p);
    expect_end(t, p);
    for (const auto& [k, unused] : m.specialize)
      if (k == t[0].text) throw ParseError(t[0].line, t[0].column, t[0].text, "parameter assigned twice");
    m.specialize.emplace_back(t[0].text, v);
  }

  // [schedule]
  if (sections.count("schedule")) {
    ScheduleSpec s;
    for (const auto& l : sections["schedule"]) {
      auto t = tokenize(l.text, l.number, l.column);
      std::size_t p = 1;
      const std::string key = t[0].text;
      if (key == "ambient") {
        expect(t, p, "=");
        s.ambient = static_cast<int>(parse_int(t, p));
        expect_end(t, p);
      } else if (key == "start") {
        expect(t, p, "=");
        if (t[p].text == "betti") {
          s.start = ScheduleSpec::Start::betti;
          ++p;
        } else if (t[p].text == "invariant") {
          s.start = ScheduleSpec::Start::invariant;
          ++p;
        } else {
          const Token vt = t[p];
          std::vector<long> c;
          for (const auto& r : parse_rational_list(t, p)) {
            if (r.get_den() != 1 || sgn(r) < 0) throw ParseError(vt.line, vt.column, vt.text, "Betti numbers are nonnegative integers");
            c.push_back(r.get_num().get_si());
          }
          s.start = ScheduleSpec::Start::explicit_poly;
          s.start_poly = PoincarePoly(std::move(c));
        }
        expect_end(t, p);
      } else if (key == "exceptional") {
        long b1 = -1, count = 1;
        while (t[p].kind != Token::Kind::end) {
          const Token kt = t[p++];
          expect(t, p, "=");
          if (kt.text == "b1") b1 = parse_int(t, p);
          else if (kt.text == "count") count = parse_int(t, p);
          else throw ParseError(kt.line, kt.column, kt.text, "unknown exceptional-divisor attribute");
        }
        if (b1 < 0 || count < 0) throw ParseError(t[0].line, t[0].column, t[0].text, "exceptional needs b1 >= 0 and count >= 0");
        s.exceptional_b1.emplace_back(b1, count);
      } else if (key == "point" || key == "submanifold") {
        BlowupStep step;
        step.kind = key == "point" ? BlowupStep::Kind::point : BlowupStep::Kind::submanifold;
        while (t[p].kind != Token::Kind::end) {
          const Token kt = t[p++];
          expect(t, p, "=");
          if (kt.text == "count") {
            step.count = parse_int(t, p);
          } else if (kt.text == "dim" && step.kind == BlowupStep::Kind::submanifold) {
            step.center_dim = static_cast<int>(parse_int(t, p));
          } else if (kt.text == "poly" && step.kind == BlowupStep::Kind::submanifold) {
            std::vector<long> c;
            for (const auto& r : parse_rational_list(t, p)) {
              if (r.get_den() != 1 || sgn(r) < 0) throw ParseError(kt.line, kt.column, kt.text, "Betti numbers are nonnegative integers");
              c.push_back(r.get_num().get_si());
            }
            step.center = PoincarePoly(std::move(c));
          } else {
            throw ParseError(kt.line, kt.column, kt.text, "unknown blow-up attribute");
          }
        }
        s.steps.push_back(std::move(step));
      } else {
        throw ParseError(t[0].line, t[0].column, t[0].text, "unknown [schedule] entry");
      }
    }
    if (s.ambient < 1) throw ParseError(section_line["schedule"], 1, "", "[schedule] needs 'ambient = n'");
    for (auto& st : s.steps) {
      st.ambient_dim = s.ambient;
      try {
        st.validate();
      } catch (const InputError& e) {
        throw ParseError(section_line["schedule"], 1, "", e.what());
      }
    }
    m.schedule = std::move(s);
  }
  return m;
}

namespace manifest_detail {

inline std::string rational_text(const Rational& r) { return r.get_str(); }

inline std::string poly_list(const PoincarePoly& p) {
  std::string s;
  for (std::size_t k = 0; k < p.b.size(); ++k) s += (k ? ", " : "") + std::to_string(p.b[k]);
  return s.empty() ? "0" : s;
}

}  // namespace manifest_detail

/// Canonical text of a manifest.
inline std::string print_manifest(const Manifest& m) {
  using namespace manifest_detail;
  std::ostringstream os;
  const auto& rd = m.ring_desc;
  const auto real = real_names(m.dim);
  const auto cplx = complex_names(m.dim / 2);
  os << "[ring]\n";
  os << "cyclotomic = " << rd.cyclotomic_order << "\n";
  if (!rd.parameters.empty()) {
    os << "parameters = ";
    for (std::size_t i = 0; i < rd.parameters.size(); ++i) os << (i ? ", " : "") << rd.parameters[i];
    os << "\n";
  }
  for (const auto& f : m.ring->descriptor().functions) {
    os << "function " << f.name << " depends";
    for (int j : f.depends_on) os << " " << j;
    for (const auto& w : f.metadata) os << " " << w;
    os << "\n";
  }
  for (const auto& a : rd.assumptions) os << "assume " << a << "\n";

  os << "\n[algebra]\ndim = " << m.dim << "\n";
  for (int k = 0; k < m.dim; ++k)
    if (!m.differentials[static_cast<std::size_t>(k)].is_zero())
      os << "d e" << k + 1 << " = " << m.differentials[static_cast<std::size_t>(k)].to_string(real) << "\n";

  if (m.has_complex() || m.flip_lee) {
    os << "\n[complex]\n";
    if (m.j) {
      for (std::size_t a = 0; a < m.j->rows(); ++a) {
        Form f(m.dim);
        for (std::size_t b = 0; b < m.j->cols(); ++b) f.add_term(Mask(1) << b, (*m.j)(a, b));
        os << "J e" << a + 1 << " = " << f.to_string(real) << "\n";
      }
    }
    if (m.phis)
      for (std::size_t a = 0; a < m.phis->size(); ++a)
        os << "phi" << a + 1 << " = " << (*m.phis)[a].to_string(real) << "\n";
    if (m.flip_lee) os << "flip_lee_sign\n";
  }

  if (m.has_metric) {
    os << "\n[metric]\n";
    if (m.metric_identity) os << "identity\n";
    for (const auto& [jk, v] : m.metric_entries)
      if (!v.is_zero()) os << "H " << jk.first + 1 << " " << jk.second + 1 << " = " << v.to_string() << "\n";
  }

  if (m.has_action) {
    os << "\n[action]\n";
    if (m.bound != 1024) os << "bound = " << m.bound << "\n";
    for (const auto& g : m.action) {
      switch (g.kind) {
        case ActionGenerator::Kind::identity: os << g.name << " = identity\n"; break;
        case ActionGenerator::Kind::minus_identity: os << g.name << " = -identity\n"; break;
        case ActionGenerator::Kind::matrix_real:
          for (const auto& [k, f] : g.images) os << g.name << "* e" << k + 1 << " = " << f.to_string(real) << "\n";
          break;
        case ActionGenerator::Kind::matrix_complex:
          for (const auto& [k, f] : g.images) os << g.name << "* phi" << k + 1 << " = " << f.to_string(cplx) << "\n";
          break;
      }
    }
  }

  if (m.torus_a) {
    os << "\n[torusmap]\n";
    const auto& a = *m.torus_a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      os << "row " << i + 1 << " =";
      for (std::size_t c = 0; c < a.cols(); ++c) os << (c ? ", " : " ") << a(i, c).get_str();
      os << "\n";
    }
    if (!m.torus_b.empty()) {
      os << "b =";
      for (std::size_t c = 0; c < m.torus_b.size(); ++c) os << (c ? ", " : " ") << rational_text(m.torus_b[c]);
      os << "\n";
    }
  }

  if (!m.specialize.empty()) {
    os << "\n[specialize]\n";
    for (const auto& [k, v] : m.specialize) os << k << " = " << rational_text(v) << "\n";
  }

  if (m.schedule) {
    const auto& s = *m.schedule;
    os << "\n[schedule]\nambient = " << s.ambient << "\n";
    switch (s.start) {
      case ScheduleSpec::Start::betti: os << "start = betti\n"; break;
      case ScheduleSpec::Start::invariant: os << "start = invariant\n"; break;
      default: os << "start = " << poly_list(s.start_poly) << "\n";
    }
    for (const auto& st : s.steps) {
      if (st.kind == BlowupStep::Kind::point) {
        os << "point count = " << st.count << "\n";
      } else {
        os << "submanifold dim = " << st.center_dim << " poly = " << poly_list(st.center) << " count = " << st.count
           << "\n";
      }
    }
    for (const auto& [b1, count] : s.exceptional_b1) os << "exceptional b1 = " << b1 << " count = " << count << "\n";
  }
  return os.str();
}

}  // namespace sktwb
