#include "dbracket/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <utility>

#include "dbracket/error.hpp"

namespace dbracket {

enum class Op {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Exp,
  Sqrt,
  Atan2,
  Acosh,
};

struct Expression::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::size_t variable = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto node = std::make_shared<Expression::Node>();
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> variables)
      : text_(text), variables_(variables) {}

  NodePtr parse() {
    NodePtr root = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                what + " at offset " + std::to_string(pos_) + " in '" +
                    std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_node(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_node(Op::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    fail("unexpected character");
  }

  NodePtr parse_number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    auto node = std::make_shared<Expression::Node>();
    node->op = Op::Constant;
    node->value = value;
    return node;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      return parse_call(name);
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i] == name) {
        auto node = std::make_shared<Expression::Node>();
        node->op = Op::Variable;
        node->variable = i;
        return node;
      }
    }
    if (name == "pi") {
      auto node = std::make_shared<Expression::Node>();
      node->op = Op::Constant;
      node->value = std::numbers::pi;
      return node;
    }
    pos_ = start;
    fail("unknown variable '" + name + "'");
  }

  NodePtr parse_call(const std::string& name) {
    static const std::pair<const char*, Op> unary[] = {
        {"sin", Op::Sin},   {"cos", Op::Cos},   {"sinh", Op::Sinh},
        {"cosh", Op::Cosh}, {"exp", Op::Exp},   {"sqrt", Op::Sqrt},
        {"acosh", Op::Acosh},
    };
    for (const auto& [fname, op] : unary) {
      if (name == fname) {
        NodePtr arg = parse_sum();
        expect(')');
        return make_node(op, arg);
      }
    }
    if (name == "atan2") {
      NodePtr y = parse_sum();
      expect(',');
      NodePtr x = parse_sum();
      expect(')');
      return make_node(Op::Atan2, y, x);
    }
    fail("unknown function '" + name + "'");
  }

  std::string_view text_;
  std::span<const std::string> variables_;
  std::size_t pos_ = 0;
};

// Value and one directional derivative.
struct Dual {
  double v;
  double d;
};

bool is_integer(double x) { return std::floor(x) == x && std::abs(x) < 1e9; }

Dual eval(const Expression::Node& n, const Vector& x, Eigen::Index seed) {
  switch (n.op) {
    case Op::Constant:
      return {n.value, 0.0};
    case Op::Variable: {
      const auto i = static_cast<Eigen::Index>(n.variable);
      return {x[i], i == seed ? 1.0 : 0.0};
    }
    case Op::Neg: {
      const Dual a = eval(*n.lhs, x, seed);
      return {-a.v, -a.d};
    }
    default:
      break;
  }
  const Dual a = eval(*n.lhs, x, seed);
  switch (n.op) {
    case Op::Sin: return {std::sin(a.v), std::cos(a.v) * a.d};
    case Op::Cos: return {std::cos(a.v), -std::sin(a.v) * a.d};
    case Op::Sinh: return {std::sinh(a.v), std::cosh(a.v) * a.d};
    case Op::Cosh: return {std::cosh(a.v), std::sinh(a.v) * a.d};
    case Op::Exp: {
      const double e = std::exp(a.v);
      return {e, e * a.d};
    }
    case Op::Sqrt: {
      const double s = std::sqrt(a.v);
      return {s, a.d == 0.0 ? 0.0 : a.d / (2 * s)};
    }
    case Op::Acosh:
      return {std::acosh(a.v),
              a.d == 0.0 ? 0.0 : a.d / std::sqrt(a.v * a.v - 1.0)};
    default:
      break;
  }
  const Dual b = eval(*n.rhs, x, seed);
  switch (n.op) {
    case Op::Add: return {a.v + b.v, a.d + b.d};
    case Op::Sub: return {a.v - b.v, a.d - b.d};
    case Op::Mul: return {a.v * b.v, a.d * b.v + a.v * b.d};
    case Op::Div: return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    case Op::Atan2: {
      const double r2 = a.v * a.v + b.v * b.v;
      return {std::atan2(a.v, b.v), (b.v * a.d - a.v * b.d) / r2};
    }
    case Op::Pow: {
      if (b.d == 0.0 && is_integer(b.v)) {
        const double p = b.v;
        if (p == 0.0) return {1.0, 0.0};
        return {std::pow(a.v, p), p * std::pow(a.v, p - 1) * a.d};
      }
      const double value = std::pow(a.v, b.v);
      double d = b.v * std::pow(a.v, b.v - 1) * a.d;
      if (b.d != 0.0) d += value * std::log(a.v) * b.d;
      return {value, d};
    }
    default:
      break;
  }
  throw Error(ErrorCode::ParseError, "corrupt expression tree");
}

}  // namespace

Expression Expression::parse(std::string_view text,
                             std::span<const std::string> variables) {
  Expression e;
  e.root_ = Parser(text, variables).parse();
  e.arity_ = variables.size();
  e.text_ = std::string(text);
  return e;
}

double Expression::evaluate(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), arity_,
                    "expression argument");
  return eval(*root_, x, -1).v;
}

Vector Expression::gradient(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), arity_,
                    "expression argument");
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = eval(*root_, x, i).d;
  return g;
}

ScalarFunction Expression::as_function() const {
  return ScalarFunction([e = *this](const Vector& x) { return e.evaluate(x); },
                        [e = *this](const Vector& x) { return e.gradient(x); },
                        text_);
}

ExpressionMap ExpressionMap::parse(std::span<const std::string> components,
                                   std::span<const std::string> variables) {
  ExpressionMap map;
  map.input_dim_ = variables.size();
  for (const auto& c : components) {
    map.components_.push_back(Expression::parse(c, variables));
  }
  return map;
}

Vector ExpressionMap::evaluate(const Vector& x) const {
  Vector out(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = components_[i].evaluate(x);
  }
  return out;
}

Matrix ExpressionMap::jacobian(const Vector& x) const {
  Matrix jac(static_cast<Eigen::Index>(components_.size()), x.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    jac.row(static_cast<Eigen::Index>(i)) =
        components_[i].gradient(x).transpose();
  }
  return jac;
}

std::vector<std::string> indexed_names(std::string_view prefix, std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    names.push_back(std::string(prefix) + std::to_string(i));
  }
  return names;
}

}  // namespace dbracket
