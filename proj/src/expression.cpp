#include "robinspec/expression.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace robinspec {

namespace {

enum class Op {
  kConst, kVar, kRadial,
  kAdd, kSub, kMul, kDiv, kNeg, kPow,
  kExp, kSin, kCos, kTan, kSinh, kCosh, kTanh, kSqrt, kLog, kAbs, kRe, kIm, kConj,
};

}  // namespace

struct Expression::Node {
  Op op = Op::kConst;
  cplx value{0, 0};
  int var = 0;  // for kVar: 0-based tangential axis
  std::unique_ptr<Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    auto n = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return n;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("expression: " + why + " at offset " + std::to_string(pos_) +
                                " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = make(Op::kAdd, std::move(lhs), term());
      } else if (eat('-')) {
        lhs = make(Op::kSub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = make(Op::kMul, std::move(lhs), unary());
      } else if (eat('/')) {
        lhs = make(Op::kDiv, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::kNeg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (eat('^')) return make(Op::kPow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      eat('(');
      auto n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    fail("expected a number, name, or '('");
  }

  NodePtr number() {
    skip_ws();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("bad number");
    }
    pos_ += used;
    auto n = make(Op::kConst);
    n->value = v;
    return n;
  }

  NodePtr ident() {
    skip_ws();
    std::size_t end = pos_;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])))) ++end;
    const std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;

    if (name == "i") {
      auto n = make(Op::kConst);
      n->value = cplx(0, 1);
      return n;
    }
    if (name == "pi") {
      auto n = make(Op::kConst);
      n->value = kPi;
      return n;
    }
    if (name == "r") return make(Op::kRadial);
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
      auto n = make(Op::kVar);
      n->var = name[1] - '1';
      return n;
    }

    static const std::pair<const char*, Op> funcs[] = {
        {"exp", Op::kExp},   {"sin", Op::kSin},   {"cos", Op::kCos},  {"tan", Op::kTan},
        {"sinh", Op::kSinh}, {"cosh", Op::kCosh}, {"tanh", Op::kTanh},{"sqrt", Op::kSqrt},
        {"log", Op::kLog},   {"abs", Op::kAbs},   {"re", Op::kRe},    {"im", Op::kIm},
        {"conj", Op::kConj},
    };
    for (const auto& [fname, op] : funcs) {
      if (name == fname) {
        if (!eat('(')) fail("expected '(' after function name");
        auto arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(op, std::move(arg));
      }
    }
    fail("unknown name '" + name + "'");
  }
};

cplx eval_node(const Node& n, const double* x, int nvars) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar:
      if (n.var >= nvars) {
        throw std::invalid_argument("expression: variable x" + std::to_string(n.var + 1) +
                                    " undefined for boundary dimension " + std::to_string(nvars));
      }
      return x[n.var];
    case Op::kRadial: {
      double s = 0;
      for (int a = 0; a < nvars; ++a) s += x[a] * x[a];
      return std::sqrt(s);
    }
    case Op::kAdd: return eval_node(*n.a, x, nvars) + eval_node(*n.b, x, nvars);
    case Op::kSub: return eval_node(*n.a, x, nvars) - eval_node(*n.b, x, nvars);
    case Op::kMul: return eval_node(*n.a, x, nvars) * eval_node(*n.b, x, nvars);
    case Op::kDiv: return eval_node(*n.a, x, nvars) / eval_node(*n.b, x, nvars);
    case Op::kNeg: return -eval_node(*n.a, x, nvars);
    case Op::kPow: return std::pow(eval_node(*n.a, x, nvars), eval_node(*n.b, x, nvars));
    case Op::kExp: return std::exp(eval_node(*n.a, x, nvars));
    case Op::kSin: return std::sin(eval_node(*n.a, x, nvars));
    case Op::kCos: return std::cos(eval_node(*n.a, x, nvars));
    case Op::kTan: return std::tan(eval_node(*n.a, x, nvars));
    case Op::kSinh: return std::sinh(eval_node(*n.a, x, nvars));
    case Op::kCosh: return std::cosh(eval_node(*n.a, x, nvars));
    case Op::kTanh: return std::tanh(eval_node(*n.a, x, nvars));
    case Op::kSqrt: return std::sqrt(eval_node(*n.a, x, nvars));
    case Op::kLog: return std::log(eval_node(*n.a, x, nvars));
    case Op::kAbs: return std::abs(eval_node(*n.a, x, nvars));
    case Op::kRe: return eval_node(*n.a, x, nvars).real();
    case Op::kIm: return eval_node(*n.a, x, nvars).imag();
    case Op::kConj: return std::conj(eval_node(*n.a, x, nvars));
  }
  return {};
}

}  // namespace

Expression::Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::~Expression() = default;

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

cplx Expression::eval(const double* x, int nvars) const {
  if (!root_) throw std::logic_error("expression: empty");
  return eval_node(*root_, x, nvars);
}

}  // namespace robinspec
