#include "caplab/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "caplab/errors.hpp"

namespace caplab {

namespace {
enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Sqrt, Log };
}

struct Expression::Node {
  Op op;
  double value = 0.0;  // for Const
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr mk(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr num(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

// Light constant folding keeps derivative trees small.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return num(a->value + b->value);
  return mk(Op::Add, std::move(a), std::move(b));
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return num(a->value - b->value);
  return mk(Op::Sub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return num(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return num(a->value * b->value);
  return mk(Op::Mul, std::move(a), std::move(b));
}
NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return num(0.0);
  if (is_const(b, 1.0)) return a;
  return mk(Op::Div, std::move(a), std::move(b));
}
NodePtr neg(NodePtr a) {
  if (a->op == Op::Const) return num(-a->value);
  return mk(Op::Neg, std::move(a));
}

double eval_node(const Expression::Node* n, double u) {
  switch (n->op) {
    case Op::Const: return n->value;
    case Op::Var: return u;
    case Op::Add: return eval_node(n->a.get(), u) + eval_node(n->b.get(), u);
    case Op::Sub: return eval_node(n->a.get(), u) - eval_node(n->b.get(), u);
    case Op::Mul: return eval_node(n->a.get(), u) * eval_node(n->b.get(), u);
    case Op::Div: return eval_node(n->a.get(), u) / eval_node(n->b.get(), u);
    case Op::Pow: return std::pow(eval_node(n->a.get(), u), eval_node(n->b.get(), u));
    case Op::Neg: return -eval_node(n->a.get(), u);
    case Op::Exp: return std::exp(eval_node(n->a.get(), u));
    case Op::Sin: return std::sin(eval_node(n->a.get(), u));
    case Op::Cos: return std::cos(eval_node(n->a.get(), u));
    case Op::Sqrt: return std::sqrt(eval_node(n->a.get(), u));
    case Op::Log: return std::log(eval_node(n->a.get(), u));
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: return num(0.0);
    case Op::Var: return num(1.0);
    case Op::Add: return add(diff_node(n->a), diff_node(n->b));
    case Op::Sub: return sub(diff_node(n->a), diff_node(n->b));
    case Op::Mul: return add(mul(diff_node(n->a), n->b), mul(n->a, diff_node(n->b)));
    case Op::Div:
      return div(sub(mul(diff_node(n->a), n->b), mul(n->a, diff_node(n->b))),
                 mul(n->b, n->b));
    case Op::Pow: {
      if (n->b->op == Op::Const) {
        // d(a^c) = c * a^(c-1) * a'
        double c = n->b->value;
        return mul(mul(num(c), mk(Op::Pow, n->a, num(c - 1.0))), diff_node(n->a));
      }
      // general: a^b = exp(b log a)
      NodePtr as_exp = mk(Op::Exp, mul(n->b, mk(Op::Log, n->a)));
      return mul(as_exp, add(mul(diff_node(n->b), mk(Op::Log, n->a)),
                             div(mul(n->b, diff_node(n->a)), n->a)));
    }
    case Op::Neg: return neg(diff_node(n->a));
    case Op::Exp: return mul(mk(Op::Exp, n->a), diff_node(n->a));
    case Op::Sin: return mul(mk(Op::Cos, n->a), diff_node(n->a));
    case Op::Cos: return neg(mul(mk(Op::Sin, n->a), diff_node(n->a)));
    case Op::Sqrt: return div(diff_node(n->a), mul(num(2.0), mk(Op::Sqrt, n->a)));
    case Op::Log: return div(diff_node(n->a), n->a);
  }
  return num(0.0);
}

void print_node(const Expression::Node* n, std::ostream& os) {
  switch (n->op) {
    case Op::Const: os << n->value; return;
    case Op::Var: os << "u"; return;
    case Op::Add: os << "("; print_node(n->a.get(), os); os << " + "; print_node(n->b.get(), os); os << ")"; return;
    case Op::Sub: os << "("; print_node(n->a.get(), os); os << " - "; print_node(n->b.get(), os); os << ")"; return;
    case Op::Mul: os << "("; print_node(n->a.get(), os); os << " * "; print_node(n->b.get(), os); os << ")"; return;
    case Op::Div: os << "("; print_node(n->a.get(), os); os << " / "; print_node(n->b.get(), os); os << ")"; return;
    case Op::Pow: os << "("; print_node(n->a.get(), os); os << " ^ "; print_node(n->b.get(), os); os << ")"; return;
    case Op::Neg: os << "(-"; print_node(n->a.get(), os); os << ")"; return;
    case Op::Exp: os << "exp("; print_node(n->a.get(), os); os << ")"; return;
    case Op::Sin: os << "sin("; print_node(n->a.get(), os); os << ")"; return;
    case Op::Cos: os << "cos("; print_node(n->a.get(), os); os << ")"; return;
    case Op::Sqrt: os << "sqrt("; print_node(n->a.get(), os); os << ")"; return;
    case Op::Log: os << "log("; print_node(n->a.get(), os); os << ")"; return;
  }
}

// Recursive-descent parser.
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw Error(ErrorKind::InvalidInput,
                "expression parse error at position " + std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = mk(Op::Add, lhs, term());
      else if (eat('-')) lhs = mk(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = mk(Op::Mul, lhs, unary());
      else if (eat('/')) lhs = mk(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return mk(Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return mk(Op::Pow, base, unary());  // right associative
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected operand");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return num(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (name == "u") return mk(Op::Var);
      if (name == "pi") return num(M_PI);
      Op fn;
      if (name == "exp") fn = Op::Exp;
      else if (name == "sin") fn = Op::Sin;
      else if (name == "cos") fn = Op::Cos;
      else if (name == "sqrt") fn = Op::Sqrt;
      else if (name == "log") fn = Op::Log;
      else { pos_ = start; fail("unknown identifier '" + name + "'"); }
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return mk(fn, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  return Expression(Parser(text).parse());
}

double Expression::eval(double u) const { return eval_node(root_.get(), u); }

Expression Expression::derivative() const { return Expression(diff_node(root_)); }

std::string Expression::str() const {
  std::ostringstream os;
  print_node(root_.get(), os);
  return os.str();
}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::~Expression() = default;

}  // namespace caplab
