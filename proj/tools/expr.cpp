#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace sliceop_cli {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(double x, double y) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Const : Node {
  double v;
  explicit Const(double v) : v(v) {}
  double eval(double, double) const override { return v; }
};
struct VarX : Node {
  double eval(double x, double) const override { return x; }
};
struct VarY : Node {
  double eval(double, double y) const override { return y; }
};
struct Unary : Node {
  double (*fn)(double);
  NodePtr a;
  Unary(double (*fn)(double), NodePtr a) : fn(fn), a(std::move(a)) {}
  double eval(double x, double y) const override { return fn(a->eval(x, y)); }
};
struct Binary : Node {
  char op;
  NodePtr a, b;
  Binary(char op, NodePtr a, NodePtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
  double eval(double x, double y) const override {
    const double l = a->eval(x, y), r = b->eval(x, y);
    switch (op) {
      case '+': return l + r;
      case '-': return l - r;
      case '*': return l * r;
      case '/': return l / r;
      case '^': return std::pow(l, r);
    }
    return 0;
  }
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) + ": " +
                                what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (eat('+'))
        e = std::make_shared<Binary>('+', e, term());
      else if (eat('-'))
        e = std::make_shared<Binary>('-', e, term());
      else
        return e;
    }
  }
  NodePtr term() {
    NodePtr e = factor();
    while (true) {
      if (eat('*'))
        e = std::make_shared<Binary>('*', e, factor());
      else if (eat('/'))
        e = std::make_shared<Binary>('/', e, factor());
      else
        return e;
    }
  }
  NodePtr factor() {
    NodePtr base = unary();
    if (eat('^')) return std::make_shared<Binary>('^', base, factor());
    return base;
  }
  NodePtr unary() {
    if (eat('-')) return std::make_shared<Binary>('-', std::make_shared<Const>(0.0), unary());
    return primary();
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  NodePtr number() {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (...) {
      fail("bad number");
    }
    pos_ += used;
    return std::make_shared<Const>(v);
  }
  NodePtr name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "x") return std::make_shared<VarX>();
    if (id == "y") return std::make_shared<VarY>();
    double (*fn)(double) = nullptr;
    if (id == "exp")
      fn = [](double v) { return std::exp(v); };
    else if (id == "erf")
      fn = [](double v) { return std::erf(v); };
    else if (id == "sin")
      fn = [](double v) { return std::sin(v); };
    else if (id == "cos")
      fn = [](double v) { return std::cos(v); };
    else
      fail("unknown identifier '" + id + "'");
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!eat(')')) fail("expected ')'");
    return std::make_shared<Unary>(fn, arg);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double, double)> compile_expression(const std::string& text) {
  NodePtr root = Parser(text).parse();
  return [root](double x, double y) { return root->eval(x, y); };
}

}  // namespace sliceop_cli
