#pragma once

// Small arithmetic expression language for user-supplied surface patches.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// Identifiers: the parameters `u`, `v`, the constants `pi` and `e`, and any
// named constant supplied at parse time. Functions: sin cos tan exp log sqrt
// sinh cosh tanh sech atan asin acos abs. The parsed tree is evaluated for
// any scalar type (double or nested Dual), so patches get exact derivatives.

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dual.hpp"

namespace mframes {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Expression {
 public:
  static Expression parse(const std::string& text, const std::map<std::string, double>& constants = {}) {
    Expression e;
    Parser p{text, constants, e.nodes_};
    e.root_ = p.parse_all();
    return e;
  }

  template <class T>
  T operator()(const T& u, const T& v) const {
    return eval<T>(root_, u, v);
  }

 private:
  enum class Op { Const, U, V, Neg, Add, Sub, Mul, Div, IntPow, Pow, Func };
  enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Sech, Atan, Asin, Acos, Abs };

  struct Node {
    Op op;
    double value = 0.0;
    int lhs = -1;
    int rhs = -1;
    int exponent = 0;
    Fn fn = Fn::Sin;
  };

  std::vector<Node> nodes_;
  int root_ = -1;

  template <class T>
  T eval(int idx, const T& u, const T& v) const {
    using std::sin, std::cos, std::tan, std::exp, std::log, std::sqrt;
    using std::sinh, std::cosh, std::tanh, std::atan, std::asin, std::acos, std::abs;
    const Node& n = nodes_[idx];
    switch (n.op) {
      case Op::Const: return T(n.value);
      case Op::U: return u;
      case Op::V: return v;
      case Op::Neg: return -eval<T>(n.lhs, u, v);
      case Op::Add: return eval<T>(n.lhs, u, v) + eval<T>(n.rhs, u, v);
      case Op::Sub: return eval<T>(n.lhs, u, v) - eval<T>(n.rhs, u, v);
      case Op::Mul: return eval<T>(n.lhs, u, v) * eval<T>(n.rhs, u, v);
      case Op::Div: return eval<T>(n.lhs, u, v) / eval<T>(n.rhs, u, v);
      case Op::IntPow: return ipow(eval<T>(n.lhs, u, v), n.exponent);
      case Op::Pow: return exp(eval<T>(n.rhs, u, v) * log(eval<T>(n.lhs, u, v)));
      case Op::Func: {
        const T x = eval<T>(n.lhs, u, v);
        switch (n.fn) {
          case Fn::Sin: return sin(x);
          case Fn::Cos: return cos(x);
          case Fn::Tan: return tan(x);
          case Fn::Exp: return exp(x);
          case Fn::Log: return log(x);
          case Fn::Sqrt: return sqrt(x);
          case Fn::Sinh: return sinh(x);
          case Fn::Cosh: return cosh(x);
          case Fn::Tanh: return tanh(x);
          case Fn::Sech: return sech(x);
          case Fn::Atan: return atan(x);
          case Fn::Asin: return asin(x);
          case Fn::Acos: return acos(x);
          case Fn::Abs: return abs(x);
        }
      }
    }
    return T(0.0);
  }

  struct Parser {
    const std::string& src;
    const std::map<std::string, double>& constants;
    std::vector<Node>& nodes;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
      throw ExpressionError("expression '" + src + "': " + what + " at offset " + std::to_string(pos));
    }

    void skip() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool accept(char c) {
      skip();
      if (pos < src.size() && src[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    int push(Node n) {
      nodes.push_back(n);
      return static_cast<int>(nodes.size()) - 1;
    }

    int parse_all() {
      const int r = expr();
      skip();
      if (pos != src.size()) fail("unexpected character '" + std::string(1, src[pos]) + "'");
      return r;
    }

    int expr() {
      int lhs = term();
      for (;;) {
        if (accept('+')) lhs = push({Op::Add, 0.0, lhs, term()});
        else if (accept('-')) lhs = push({Op::Sub, 0.0, lhs, term()});
        else return lhs;
      }
    }
    int term() {
      int lhs = unary();
      for (;;) {
        if (accept('*')) lhs = push({Op::Mul, 0.0, lhs, unary()});
        else if (accept('/')) lhs = push({Op::Div, 0.0, lhs, unary()});
        else return lhs;
      }
    }
    int unary() {
      if (accept('-')) return push({Op::Neg, 0.0, unary()});
      if (accept('+')) return unary();
      return power();
    }
    int power() {
      const int base = atom();
      if (!accept('^')) return base;
      const int ex = unary();
      const Node& en = nodes[ex];
      if (en.op == Op::Const && std::nearbyint(en.value) == en.value && std::fabs(en.value) <= 64) {
        Node n{Op::IntPow, 0.0, base};
        n.exponent = static_cast<int>(en.value);
        return push(n);
      }
      return push({Op::Pow, 0.0, base, ex});
    }
    int atom() {
      skip();
      if (pos >= src.size()) fail("unexpected end of input");
      const char c = src[pos];
      if (c == '(') {
        ++pos;
        const int r = expr();
        if (!accept(')')) fail("expected ')'");
        return r;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t used = 0;
        double value = 0.0;
        try {
          value = std::stod(src.substr(pos), &used);
        } catch (const std::exception&) {
          fail("malformed number");
        }
        pos += used;
        return push({Op::Const, value});
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) ++pos;
        const std::string name = src.substr(start, pos - start);
        skip();
        if (pos < src.size() && src[pos] == '(') {
          ++pos;
          Node n{Op::Func, 0.0, expr()};
          n.fn = function(name);
          if (!accept(')')) fail("expected ')' after argument of " + name);
          return push(n);
        }
        if (name == "u") return push({Op::U});
        if (name == "v") return push({Op::V});
        if (auto it = constants.find(name); it != constants.end()) return push({Op::Const, it->second});
        if (name == "pi") return push({Op::Const, std::numbers::pi});
        if (name == "e") return push({Op::Const, std::numbers::e});
        pos = start;
        fail("unknown identifier '" + name + "'");
      }
      fail("unexpected character '" + std::string(1, c) + "'");
    }
    Fn function(const std::string& name) {
      static const std::map<std::string, Fn> table = {
          {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"exp", Fn::Exp},   {"log", Fn::Log},
          {"sqrt", Fn::Sqrt}, {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"sech", Fn::Sech},
          {"atan", Fn::Atan}, {"asin", Fn::Asin}, {"acos", Fn::Acos}, {"abs", Fn::Abs}};
      auto it = table.find(name);
      if (it == table.end()) fail("unknown function '" + name + "'");
      return it->second;
    }
  };
};

}  // namespace mframes
