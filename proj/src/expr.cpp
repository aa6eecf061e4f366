#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "error.hpp"

namespace fpt {

enum class NodeKind { number, variable, negate, binary, call };
enum class BinOp { add, sub, mul, div, pow };
enum class Func { sin, cos, exp, tanh, atan, abs };

struct Expression::Node {
  NodeKind kind;
  double value = 0.0;  // number
  BinOp op = BinOp::add;
  Func fn = Func::sin;
  std::shared_ptr<const Node> lhs, rhs;  // negate/call use lhs only
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_number(double v) {
  return std::make_shared<Node>(Node{NodeKind::number, v, BinOp::add,
                                     Func::sin, nullptr, nullptr});
}

NodePtr make_node(NodeKind k, BinOp op, Func fn, NodePtr l, NodePtr r) {
  return std::make_shared<Node>(
      Node{k, 0.0, op, fn, std::move(l), std::move(r)});
}

[[noreturn]] void syntax_fail(std::size_t pos, const std::string& what) {
  fail(errc::syntax_error,
       "syntax error at byte " + std::to_string(pos) + ": " + what);
}

struct Parser {
  const std::string& src;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_space();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos < src.size() ? src[pos] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr node = parse_product();
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') return node;
      ++pos;
      NodePtr rhs = parse_product();
      node = make_node(NodeKind::binary, c == '+' ? BinOp::add : BinOp::sub,
                       Func::sin, node, rhs);
    }
  }

  NodePtr parse_product() {
    NodePtr node = parse_unary();
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') return node;
      ++pos;
      NodePtr rhs = parse_unary();
      node = make_node(NodeKind::binary, c == '*' ? BinOp::mul : BinOp::div,
                       Func::sin, node, rhs);
    }
  }

  NodePtr parse_unary() {
    if (eat('-'))
      return make_node(NodeKind::negate, BinOp::add, Func::sin, parse_unary(),
                       nullptr);
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (eat('^')) {
      NodePtr expo = parse_unary();  // right-assoc, allows 2^-x
      return make_node(NodeKind::binary, BinOp::pow, Func::sin, base, expo);
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos >= src.size()) syntax_fail(pos, "unexpected end of input");
    char c = src[pos];
    if (c == '(') {
      std::size_t open = pos++;
      NodePtr inner = parse_sum();
      if (!eat(')')) syntax_fail(open, "unmatched '('");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_name();
    syntax_fail(pos, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = src.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) syntax_fail(pos, "malformed number");
    pos += static_cast<std::size_t>(end - begin);
    return make_number(v);
  }

  NodePtr parse_name() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '_'))
      ++pos;
    std::string name = src.substr(start, pos - start);
    if (name == "x")
      return make_node(NodeKind::variable, BinOp::add, Func::sin, nullptr,
                       nullptr);
    Func fn;
    if (name == "sin") fn = Func::sin;
    else if (name == "cos") fn = Func::cos;
    else if (name == "exp") fn = Func::exp;
    else if (name == "tanh") fn = Func::tanh;
    else if (name == "atan") fn = Func::atan;
    else if (name == "abs") fn = Func::abs;
    else
      fail(errc::unknown_identifier,
           "unknown identifier '" + name + "' at byte " + std::to_string(start));
    std::size_t open = pos;
    if (!eat('(')) syntax_fail(open, "expected '(' after function name");
    NodePtr arg = parse_sum();
    if (!eat(')')) syntax_fail(open, "unmatched '(' in function call");
    return make_node(NodeKind::call, BinOp::add, fn, arg, nullptr);
  }
};

double eval_node(const Node& n, double x) {
  switch (n.kind) {
    case NodeKind::number:
      return n.value;
    case NodeKind::variable:
      return x;
    case NodeKind::negate:
      return -eval_node(*n.lhs, x);
    case NodeKind::binary: {
      double a = eval_node(*n.lhs, x), b = eval_node(*n.rhs, x);
      switch (n.op) {
        case BinOp::add: return a + b;
        case BinOp::sub: return a - b;
        case BinOp::mul: return a * b;
        case BinOp::div: return a / b;
        case BinOp::pow: return std::pow(a, b);
      }
      return 0.0;
    }
    case NodeKind::call: {
      double a = eval_node(*n.lhs, x);
      switch (n.fn) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::exp: return std::exp(a);
        case Func::tanh: return std::tanh(a);
        case Func::atan: return std::atan(a);
        case Func::abs: return std::abs(a);
      }
      return 0.0;
    }
  }
  return 0.0;
}

// precedence levels used for minimal parenthesization: sum 1, product 2,
// unary minus 3, power 4, atoms 5
int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::binary:
      if (n.op == BinOp::add || n.op == BinOp::sub) return 1;
      if (n.op == BinOp::mul || n.op == BinOp::div) return 2;
      return 4;
    case NodeKind::negate:
      return 3;
    default:
      return 5;
  }
}

const char* func_name(Func fn) {
  switch (fn) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::tanh: return "tanh";
    case Func::atan: return "atan";
    case Func::abs: return "abs";
  }
  return "";
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  bool parens = precedence(child) < min_prec;
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case NodeKind::variable:
      out += 'x';
      return;
    case NodeKind::negate:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case NodeKind::binary: {
      int prec = precedence(n);
      const char* op = n.op == BinOp::add   ? " + "
                       : n.op == BinOp::sub ? " - "
                       : n.op == BinOp::mul ? "*"
                       : n.op == BinOp::div ? "/"
                                            : "^";
      if (n.op == BinOp::pow) {
        // right-associative: parenthesize a left child at the same level
        print_child(*n.lhs, prec + 1, out);
        out += op;
        print_child(*n.rhs, 3, out);  // unary minus allowed bare on the right
      } else {
        print_child(*n.lhs, prec, out);
        out += op;
        print_child(*n.rhs, prec + 1, out);
      }
      return;
    }
    case NodeKind::call:
      out += func_name(n.fn);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool same_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number:
      return a.value == b.value;
    case NodeKind::variable:
      return true;
    case NodeKind::negate:
      return same_node(*a.lhs, *b.lhs);
    case NodeKind::binary:
      return a.op == b.op && same_node(*a.lhs, *b.lhs) &&
             same_node(*a.rhs, *b.rhs);
    case NodeKind::call:
      return a.fn == b.fn && same_node(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace

double Expression::eval(double x) const { return eval_node(*root_, x); }

std::string Expression::pretty_print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expression::same_tree(const Expression& other) const {
  return same_node(*root_, *other.root_);
}

Expression parse_expression(const std::string& src) {
  Parser p{src};
  NodePtr root = p.parse_sum();
  p.skip_space();
  if (p.pos != src.size())
    syntax_fail(p.pos, "trailing characters after expression");
  Expression e;
  e.root_ = std::move(root);
  return e;
}

}  // namespace fpt
