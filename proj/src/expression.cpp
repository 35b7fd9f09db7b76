#include "specwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "specwave/errors.hpp"

namespace specwave {

struct Expression::Node {
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
  Kind kind{};
  double value = 0.0;  // Constant
  int func = -1;       // Call: index into kFuncs
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

constexpr const char* kFuncs[] = {"exp", "sin", "cos", "abs", "sqrt", "pow"};
constexpr int kFuncArity[] = {1, 1, 1, 1, 1, 2};

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, const std::string& var)
      : text_(text), var_(var) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input at position " + std::to_string(pos_));
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw PreconditionError("expression '" + text_ + "': " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(Node::Kind::Add, lhs, term());
      else if (eat('-'))
        lhs = make(Node::Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = make(Node::Kind::Mul, lhs, unary());
      else if (eat('/'))
        lhs = make(Node::Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    size_t end = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(pos_), &end);
    } catch (const std::exception&) {
      fail("malformed number at position " + std::to_string(pos_));
    }
    pos_ += end;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == var_) return make(Node::Kind::Variable);
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Constant;
      n->value = 3.14159265358979323846;
      return n;
    }
    for (int f = 0; f < static_cast<int>(std::size(kFuncs)); ++f) {
      if (name != kFuncs[f]) continue;
      if (!eat('(')) fail("expected '(' after " + name);
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->func = f;
      n->lhs = expr();
      if (kFuncArity[f] == 2) {
        if (!eat(',')) fail(name + " takes two arguments");
        n->rhs = expr();
      }
      if (!eat(')')) fail("expected ')' closing " + name);
      return n;
    }
    fail("unknown identifier '" + name + "' (variable is '" + var_ + "')");
  }

  const std::string& text_;
  const std::string& var_;
  size_t pos_ = 0;
};

double eval(const Node& n, double x) {
  switch (n.kind) {
    case Node::Kind::Constant: return n.value;
    case Node::Kind::Variable: return x;
    case Node::Kind::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Node::Kind::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Node::Kind::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Node::Kind::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Node::Kind::Pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
    case Node::Kind::Neg: return -eval(*n.lhs, x);
    case Node::Kind::Call: {
      double a = eval(*n.lhs, x);
      switch (n.func) {
        case 0: return std::exp(a);
        case 1: return std::sin(a);
        case 2: return std::cos(a);
        case 3: return std::abs(a);
        case 4: return std::sqrt(a);
        case 5: return std::pow(a, eval(*n.rhs, x));
      }
    }
  }
  return 0.0;  // unreachable
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::string& var) {
  Expression e;
  e.root_ = Parser(text, var).run();
  e.text_ = text;
  return e;
}

double Expression::operator()(double value) const {
  if (!root_) throw PreconditionError("evaluating empty expression");
  return eval(*root_, value);
}

}  // namespace specwave
