#pragma once

// Real functions on [0,1]: a registry of named test functions and a small
// arithmetic expression language in the variable t.
//
// Grammar (highest binding first):
//   primary := number | 't' | name '(' expr ')' | '(' expr ')'
//   power   := primary ('^' unary)?          right-associative
//   unary   := '-' unary | power
//   term    := unary (('*' | '/') unary)*
//   expr    := term (('+' | '-') term)*
// name is one of abs, exp, sin, cos, sqrt.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qdurr/error.hpp"

namespace qdurr {

class RealFunction {
 public:
  RealFunction(std::function<double(double)> eval, std::string name,
               std::optional<double> lipschitz = std::nullopt)
      : eval_(std::move(eval)), name_(std::move(name)), lipschitz_(lipschitz) {}

  double operator()(double t) const { return eval_(t); }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::optional<double> lipschitz() const { return lipschitz_; }

 private:
  std::function<double(double)> eval_;
  std::string name_;
  std::optional<double> lipschitz_;
};

class ParseError : public DomainError {
 public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected = {})
      : DomainError(format(offset, message, expected)),
        offset_(offset),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  [[nodiscard]] std::size_t offset() const { return offset_; }
  [[nodiscard]] const std::string& message() const { return message_; }
  [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string out = "parse error at offset " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) out += ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::string message_;
  std::vector<std::string> expected_;
};

enum class MathFunction { Abs, Exp, Sin, Cos, Sqrt };

inline std::optional<MathFunction> math_function_from_name(std::string_view name) {
  if (name == "abs") return MathFunction::Abs;
  if (name == "exp") return MathFunction::Exp;
  if (name == "sin") return MathFunction::Sin;
  if (name == "cos") return MathFunction::Cos;
  if (name == "sqrt") return MathFunction::Sqrt;
  return std::nullopt;
}

inline std::string_view math_function_name(MathFunction fn) {
  switch (fn) {
    case MathFunction::Abs: return "abs";
    case MathFunction::Exp: return "exp";
    case MathFunction::Sin: return "sin";
    case MathFunction::Cos: return "cos";
    case MathFunction::Sqrt: return "sqrt";
  }
  return "?";
}

/// Immutable expression tree; subtrees are shared, so copies are cheap and
/// safe to use from several threads.
class Expression {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Number {
    double value;
  };
  struct Variable {};
  struct Negate {
    NodePtr operand;
  };
  struct Binary {
    char op;  // one of + - * / ^
    NodePtr lhs;
    NodePtr rhs;
  };
  struct Call {
    MathFunction fn;
    NodePtr arg;
  };
  struct Node {
    std::variant<Number, Variable, Negate, Binary, Call> value;
  };

  static Expression number(double v) { return Expression(make(Number{v})); }
  static Expression variable() { return Expression(make(Variable{})); }
  static Expression negate(const Expression& e) { return Expression(make(Negate{e.root_})); }
  static Expression binary(char op, const Expression& a, const Expression& b) {
    return Expression(make(Binary{op, a.root_, b.root_}));
  }
  static Expression call(MathFunction fn, const Expression& arg) {
    return Expression(make(Call{fn, arg.root_}));
  }

  [[nodiscard]] const Node& root() const { return *root_; }

  /// Evaluates at t; a negative sqrt argument or a non-finite result is an
  /// error reported with the offending t.
  double operator()(double t) const {
    const double v = eval(*root_, t);
    if (!std::isfinite(v)) {
      throw NumericError("expression is not finite at t = " + std::to_string(t));
    }
    return v;
  }

  /// Fully parenthesised text that parses back to the same tree.
  [[nodiscard]] std::string to_string() const {
    std::string out;
    print(*root_, out);
    return out;
  }

  friend bool operator==(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

 private:
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  template <typename T>
  static NodePtr make(T&& v) {
    return std::make_shared<const Node>(Node{std::forward<T>(v)});
  }

  static double eval(const Node& node, double t) {
    return std::visit(
        [t](const auto& n) -> double {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Number>) {
            return n.value;
          } else if constexpr (std::is_same_v<N, Variable>) {
            return t;
          } else if constexpr (std::is_same_v<N, Negate>) {
            return -eval(*n.operand, t);
          } else if constexpr (std::is_same_v<N, Binary>) {
            const double a = eval(*n.lhs, t);
            const double b = eval(*n.rhs, t);
            switch (n.op) {
              case '+': return a + b;
              case '-': return a - b;
              case '*': return a * b;
              case '/': return a / b;
              default: return std::pow(a, b);
            }
          } else {
            const double a = eval(*n.arg, t);
            switch (n.fn) {
              case MathFunction::Abs: return std::fabs(a);
              case MathFunction::Exp: return std::exp(a);
              case MathFunction::Sin: return std::sin(a);
              case MathFunction::Cos: return std::cos(a);
              case MathFunction::Sqrt:
                if (a < 0.0) {
                  throw NumericError("sqrt of negative value " + std::to_string(a) +
                                     " at t = " + std::to_string(t));
                }
                return std::sqrt(a);
            }
            return a;
          }
        },
        node.value);
  }

  static void print(const Node& node, std::string& out) {
    std::visit(
        [&out](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Number>) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
          } else if constexpr (std::is_same_v<N, Variable>) {
            out += 't';
          } else if constexpr (std::is_same_v<N, Negate>) {
            out += "(-";
            print(*n.operand, out);
            out += ')';
          } else if constexpr (std::is_same_v<N, Binary>) {
            out += '(';
            print(*n.lhs, out);
            out += ' ';
            out += n.op;
            out += ' ';
            print(*n.rhs, out);
            out += ')';
          } else {
            out += math_function_name(n.fn);
            out += '(';
            print(*n.arg, out);
            out += ')';
          }
        },
        node.value);
  }

  static bool equal(const Node& a, const Node& b) {
    if (a.value.index() != b.value.index()) return false;
    return std::visit(
        [&b](const auto& x) -> bool {
          using N = std::decay_t<decltype(x)>;
          const auto& y = std::get<N>(b.value);
          if constexpr (std::is_same_v<N, Number>) {
            return x.value == y.value;
          } else if constexpr (std::is_same_v<N, Variable>) {
            return true;
          } else if constexpr (std::is_same_v<N, Negate>) {
            return equal(*x.operand, *y.operand);
          } else if constexpr (std::is_same_v<N, Binary>) {
            return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          } else {
            return x.fn == y.fn && equal(*x.arg, *y.arg);
          }
        },
        a.value);
  }

  NodePtr root_;
};

namespace detail {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view src) : src_(src) {}

  Expression parse() {
    skip_space();
    if (pos_ == src_.size()) throw ParseError(pos_, "empty expression", {"expression"});
    Expression e = expr();
    skip_space();
    if (pos_ != src_.size()) {
      throw ParseError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'",
                       {"operator", "end of input"});
    }
    return e;
  }

 private:
  Expression expr() {
    Expression lhs = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        lhs = Expression::binary('+', lhs, term());
      } else if (accept('-')) {
        lhs = Expression::binary('-', lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      skip_space();
      if (accept('*')) {
        lhs = Expression::binary('*', lhs, unary());
      } else if (accept('/')) {
        lhs = Expression::binary('/', lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    skip_space();
    if (accept('-')) return Expression::negate(unary());
    return power();
  }

  Expression power() {
    Expression base = primary();
    skip_space();
    if (accept('^')) return Expression::binary('^', base, unary());
    return base;
  }

  Expression primary() {
    skip_space();
    if (pos_ == src_.size()) {
      throw ParseError(pos_, "unexpected end of input", {"number", "t", "function", "'('"});
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "t") return Expression::variable();
      if (const auto fn = math_function_from_name(name)) {
        skip_space();
        expect('(');
        Expression arg = expr();
        expect(')');
        return Expression::call(*fn, arg);
      }
      throw ParseError(start, "unknown identifier '" + std::string(name) + "'",
                       {"t", "abs", "exp", "sin", "cos", "sqrt"});
    }
    throw ParseError(pos_, "unexpected '" + std::string(1, c) + "'",
                     {"number", "t", "function", "'('"});
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [this] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    if (text == ".") throw ParseError(start, "malformed number", {"digit"});
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError(start, "malformed number '" + text + "'", {"number"});
    }
    return Expression::number(value);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (!accept(c)) {
      throw ParseError(pos_, pos_ == src_.size() ? "unexpected end of input" : "unexpected character",
                       {"'" + std::string(1, c) + "'"});
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline std::optional<double> parse_real(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

inline Expression parse(std::string_view source) { return detail::ExpressionParser(source).parse(); }

/// Named test functions: const:c, id, square, absdev:c, sin:a, exp.
/// Returns nullopt for names outside the registry.
inline std::optional<RealFunction> try_builtin(std::string_view name) {
  const auto colon = name.find(':');
  const std::string_view head = name.substr(0, colon);
  const std::optional<std::string_view> arg =
      colon == std::string_view::npos ? std::nullopt : std::optional(name.substr(colon + 1));
  const std::string label(name);
  auto number_arg = [&]() -> double {
    if (!arg) throw DomainError("builtin '" + std::string(head) + "' needs a numeric argument");
    const auto v = detail::parse_real(*arg);
    if (!v) throw DomainError("bad numeric argument in '" + label + "'");
    return *v;
  };
  if (head == "const") {
    const double c = number_arg();
    return RealFunction([c](double) { return c; }, label, 0.0);
  }
  if (head == "absdev") {
    const double c = number_arg();
    return RealFunction([c](double t) { return std::fabs(t - c); }, label, 1.0);
  }
  if (head == "sin") {
    const double a = number_arg();
    return RealFunction([a](double t) { return std::sin(a * t); }, label, std::fabs(a));
  }
  if (arg) return std::nullopt;
  if (head == "id") return RealFunction([](double t) { return t; }, label, 1.0);
  if (head == "square") return RealFunction([](double t) { return t * t; }, label, 2.0);
  if (head == "exp") return RealFunction([](double t) { return std::exp(t); }, label, std::exp(1.0));
  return std::nullopt;
}

inline RealFunction builtin(std::string_view name) {
  if (auto f = try_builtin(name)) return *std::move(f);
  throw DomainError("unknown builtin function '" + std::string(name) + "'");
}

/// A registry name if it is one, otherwise an expression in t.
inline RealFunction make_function(std::string_view source) {
  if (auto f = try_builtin(source)) return *std::move(f);
  Expression e = parse(source);
  return RealFunction([e](double t) { return e(t); }, std::string(source));
}

}  // namespace qdurr
