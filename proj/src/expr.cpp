// SPDX-License-Identifier: MIT
#include "hessborn/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

namespace hessborn {

namespace {

using Node = ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::array<std::pair<std::string_view, Func>, 6> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"tanh", Func::Tanh},
}};

std::string_view func_name(Func f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    auto root = expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) {
      if (at_end()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
      throw ParseError(std::string("expected '") + c + "' but found '" + peek() + "'", pos_);
    }
    ++pos_;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+'))
        lhs = make({Node::Kind::Add, at, 0.0, -1, Func::Sin, lhs, term()});
      else if (accept('-'))
        lhs = make({Node::Kind::Sub, at, 0.0, -1, Func::Sin, lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*'))
        lhs = make({Node::Kind::Mul, at, 0.0, -1, Func::Sin, lhs, unary()});
      else if (accept('/'))
        lhs = make({Node::Kind::Div, at, 0.0, -1, Func::Sin, lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) return make({Node::Kind::Negate, at, 0.0, -1, Func::Sin, unary(), nullptr});
    return power();
  }

  NodePtr power() {
    auto base = atom();
    skip_ws();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
      skip_ws();
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '(')
      throw ParseError("variable exponent: '^' must be followed by a numeric literal", pos_);
    if (!starts_number()) throw ParseError("expected numeric exponent after '^'", pos_);
    double e = number();
    return make({Node::Kind::Pow, at, negative ? -e : e, -1, Func::Sin, base, nullptr});
  }

  bool starts_number() const {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
  }

  double number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;  // 'e' belongs to something else; let the caller complain
      } else {
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double v = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return v;
  }

  NodePtr atom() {
    skip_ws();
    const std::size_t at = pos_;
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    if (starts_number()) return make({Node::Kind::Constant, at, number(), -1, Func::Sin, nullptr, nullptr});
    if (accept('(')) {
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
      const std::string_view name = text_.substr(at, pos_ - at);
      for (const auto& [fname, fn] : kFunctions) {
        if (fname != name) continue;
        skip_ws();
        if (peek() != '(')
          throw ParseError("arity error: function '" + std::string(name) + "' takes one argument", pos_);
        ++pos_;
        skip_ws();
        if (peek() == ')')
          throw ParseError("arity error: function '" + std::string(name) + "' takes one argument", pos_);
        auto arg = expr();
        skip_ws();
        if (peek() == ',')
          throw ParseError("arity error: function '" + std::string(name) + "' takes one argument", pos_);
        expect(')');
        return make({Node::Kind::Call, at, 0.0, -1, fn, arg, nullptr});
      }
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] != name) continue;
        skip_ws();
        if (peek() == '(') throw ParseError("'" + std::string(name) + "' is a coordinate, not a function", at);
        return make({Node::Kind::Variable, at, 0.0, static_cast<int>(i), Func::Sin, nullptr, nullptr});
      }
      throw ParseError("unknown identifier \"" + std::string(name) + "\"", at);
    }
    throw ParseError(std::string("unexpected '") + peek() + "'", pos_);
  }
};

template <class Scalar>
Scalar call(Func f, const Scalar& x, std::size_t offset) {
  const double v = value_of(x);
  using std::cos, std::exp, std::log, std::sin, std::sqrt, std::tanh;
  switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Exp: return exp(x);
    case Func::Log:
      if (!(v > 0.0)) throw EvalDomainError("log of non-positive value " + std::to_string(v), offset);
      return log(x);
    case Func::Sqrt:
      if (!(v > 0.0)) throw EvalDomainError("sqrt of non-positive value " + std::to_string(v), offset);
      return sqrt(x);
    case Func::Tanh: return tanh(x);
  }
  return x;
}

template <class Scalar>
Scalar raise(const Scalar& x, double e, std::size_t offset) {
  const double v = value_of(x);
  const bool integral = std::nearbyint(e) == e;
  if (!integral && !(v > 0.0))
    throw EvalDomainError("non-integer power of non-positive value " + std::to_string(v), offset);
  if (integral && e < 0.0 && v == 0.0) throw EvalDomainError("negative power of zero", offset);
  using std::pow;
  return pow(x, e);
}

template <class Scalar>
Scalar eval(const Node& n, std::span<const Scalar> args) {
  switch (n.kind) {
    case Node::Kind::Constant: return Scalar(n.number);
    case Node::Kind::Variable: return args[n.variable];
    case Node::Kind::Negate: return -eval(*n.lhs, args);
    case Node::Kind::Add: return eval(*n.lhs, args) + eval(*n.rhs, args);
    case Node::Kind::Sub: return eval(*n.lhs, args) - eval(*n.rhs, args);
    case Node::Kind::Mul: return eval(*n.lhs, args) * eval(*n.rhs, args);
    case Node::Kind::Div: {
      Scalar d = eval(*n.rhs, args);
      if (value_of(d) == 0.0) throw EvalDomainError("division by zero", n.offset);
      return eval(*n.lhs, args) / d;
    }
    case Node::Kind::Pow: return raise(eval(*n.lhs, args), n.number, n.offset);
    case Node::Kind::Call: return call(n.func, eval(*n.lhs, args), n.offset);
  }
  return Scalar(0.0);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void render(const Node& n, const std::vector<std::string>& coords, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Constant: out += format_number(n.number); return;
    case Node::Kind::Variable: out += coords[n.variable]; return;
    case Node::Kind::Negate:
      out += "(-";
      render(*n.lhs, coords, out);
      out += ')';
      return;
    case Node::Kind::Pow:
      out += '(';
      render(*n.lhs, coords, out);
      out += '^';
      out += format_number(n.number);
      out += ')';
      return;
    case Node::Kind::Call:
      out += func_name(n.func);
      out += '(';
      render(*n.lhs, coords, out);
      out += ')';
      return;
    default: break;
  }
  const char* op = n.kind == Node::Kind::Add ? " + " : n.kind == Node::Kind::Sub ? " - "
                                                   : n.kind == Node::Kind::Mul   ? " * "
                                                                                 : " / ";
  out += '(';
  render(*n.lhs, coords, out);
  out += op;
  render(*n.rhs, coords, out);
  out += ')';
}

void collect(const Node& n, std::set<int>& out) {
  if (n.kind == Node::Kind::Variable) out.insert(n.variable);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

}  // namespace

bool is_reserved_function(std::string_view name) {
  for (const auto& [fname, fn] : kFunctions)
    if (fname == name) return true;
  return false;
}

void validate_coordinate_names(std::span<const std::string> coords) {
  if (coords.empty()) throw std::invalid_argument("coordinate list is empty");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto& c = coords[i];
    bool ok = !c.empty() && std::isalpha(static_cast<unsigned char>(c[0]));
    for (char ch : c) ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
    if (!ok) throw std::invalid_argument("invalid coordinate name \"" + c + "\"");
    if (is_reserved_function(c)) throw std::invalid_argument("coordinate name \"" + c + "\" is a reserved function");
    for (std::size_t j = 0; j < i; ++j)
      if (coords[j] == c) throw std::invalid_argument("duplicate coordinate name \"" + c + "\"");
  }
}

Expr Expr::parse(std::string_view text, std::span<const std::string> coords) {
  validate_coordinate_names(coords);
  Expr e;
  e.root_ = Parser(text, coords).parse();
  e.coords_.assign(coords.begin(), coords.end());
  e.source_ = std::string(text);
  return e;
}

Expr Expr::constant(double c, int dimension) {
  Expr e;
  e.root_ = make({Node::Kind::Constant, 0, c, -1, Func::Sin, nullptr, nullptr});
  e.coords_.resize(dimension);
  for (int i = 0; i < dimension; ++i) e.coords_[i] = "x" + std::to_string(i);
  e.source_ = format_number(c);
  return e;
}

Expr Expr::average(const Expr& a, const Expr& b) {
  if (a.coords_ != b.coords_) throw std::invalid_argument("average: coordinate lists differ");
  Expr e;
  auto sum = make({Node::Kind::Add, 0, 0.0, -1, Func::Sin, a.root_, b.root_});
  auto half = make({Node::Kind::Constant, 0, 0.5, -1, Func::Sin, nullptr, nullptr});
  e.root_ = make({Node::Kind::Mul, 0, 0.0, -1, Func::Sin, sum, half});
  e.coords_ = a.coords_;
  e.source_ = "(" + a.source_ + " + " + b.source_ + ") * 0.5";
  return e;
}

double Expr::evaluate(std::span<const double> args) const {
  if (static_cast<int>(args.size()) != dimension())
    throw std::invalid_argument("evaluate: expected " + std::to_string(dimension()) + " arguments");
  return eval<double>(*root_, args);
}

Jet Expr::evaluate(std::span<const Jet> args) const {
  if (static_cast<int>(args.size()) != dimension())
    throw std::invalid_argument("evaluate: expected " + std::to_string(dimension()) + " arguments");
  const JetLayout* layout = nullptr;
  for (const auto& a : args) {
    if (a.is_constant()) continue;
    if (layout && layout != a.layout()) throw std::invalid_argument("evaluate: arguments have mixed jet layouts");
    layout = a.layout();
  }
  Jet out = eval<Jet>(*root_, args);
  // Constant subtrees stay layout-free; give the result the common layout.
  if (layout && out.is_constant()) out += Jet::zero(layout->arity(), layout->order());
  return out;
}

std::set<int> Expr::free_coordinates() const {
  std::set<int> out;
  if (root_) collect(*root_, out);
  return out;
}

std::string Expr::to_string() const {
  std::string out;
  if (root_) render(*root_, coords_, out);
  return out;
}

bool Expr::is_literal_zero() const {
  const Node* n = root_.get();
  while (n && n->kind == Node::Kind::Negate) n = n->lhs.get();
  return n && n->kind == Node::Kind::Constant && n->number == 0.0;
}

}  // namespace hessborn
