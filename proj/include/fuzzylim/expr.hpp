#pragma once

// Expression trees over one variable x, evaluated in exact rational
// arithmetic. Grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'x' | '(' expr ')'
//            | ('abs' | 'sign' | 'floor' | 'recip') '(' expr ')'
//            | ('min' | 'max') '(' expr ',' expr ')'
//   number  := digits ['.' digits] | digits '/' digits
//
// Division and recip are undefined at 0, and so is sign; an undefined
// subexpression makes the whole expression undefined at that x.

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "fuzzylim/error.hpp"
#include "fuzzylim/scalar.hpp"

namespace fuzzylim {

class Expr {
 public:
  enum class Op { constant, var, add, sub, mul, div, neg, abs, sign, floor, recip, min, max };

  static Expr constant(Scalar c) { return Expr(std::make_shared<Node>(Node{Op::constant, std::move(c), {}, {}})); }
  static Expr var() { return Expr(std::make_shared<Node>(Node{Op::var, Scalar(0), {}, {}})); }
  static Expr unary(Op op, const Expr& e) { return Expr(std::make_shared<Node>(Node{op, Scalar(0), e.root_, {}})); }
  static Expr binary(Op op, const Expr& l, const Expr& r) {
    return Expr(std::make_shared<Node>(Node{op, Scalar(0), l.root_, r.root_}));
  }

  Op op() const { return root_->op; }

  std::optional<Scalar> evaluate(const Scalar& x) const { return eval(*root_, x); }

  /// Replaces every occurrence of x by `inner`.
  Expr substitute(const Expr& inner) const { return Expr(subst(root_, inner.root_)); }

  /// Fully parenthesized canonical text; parse(render()) reproduces the tree.
  std::string render() const { return render_node(*root_); }

  friend bool operator==(const Expr& a, const Expr& b) { return same(*a.root_, *b.root_); }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::div, a, b); }

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Op op;
    Scalar value;
    NodePtr lhs;
    NodePtr rhs;
  };

  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static std::optional<Scalar> eval(const Node& n, const Scalar& x) {
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::var: return x;
      default: break;
    }
    auto l = eval(*n.lhs, x);
    if (!l) return std::nullopt;
    switch (n.op) {
      case Op::neg: return Scalar(-*l);
      case Op::abs: return fuzzylim::abs(*l);
      case Op::floor: return fuzzylim::floor(*l);
      case Op::sign:
        if (*l == 0) return std::nullopt;
        return Scalar(*l > 0 ? 1 : -1);
      case Op::recip:
        if (*l == 0) return std::nullopt;
        return Scalar(1 / *l);
      default: break;
    }
    auto r = eval(*n.rhs, x);
    if (!r) return std::nullopt;
    switch (n.op) {
      case Op::add: return Scalar(*l + *r);
      case Op::sub: return Scalar(*l - *r);
      case Op::mul: return Scalar(*l * *r);
      case Op::div:
        if (*r == 0) return std::nullopt;
        return Scalar(*l / *r);
      case Op::min: return *r < *l ? *r : *l;
      case Op::max: return *l < *r ? *r : *l;
      default: break;
    }
    return std::nullopt;
  }

  static NodePtr subst(const NodePtr& n, const NodePtr& inner) {
    switch (n->op) {
      case Op::constant: return n;
      case Op::var: return inner;
      default: break;
    }
    NodePtr l = subst(n->lhs, inner);
    NodePtr r = n->rhs ? subst(n->rhs, inner) : nullptr;
    return std::make_shared<Node>(Node{n->op, n->value, std::move(l), std::move(r)});
  }

  static bool same(const Node& a, const Node& b) {
    if (a.op != b.op) return false;
    if (a.op == Op::constant) return a.value == b.value;
    if (a.op == Op::var) return true;
    if (!same(*a.lhs, *b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    return !a.rhs || same(*a.rhs, *b.rhs);
  }

  static std::string render_node(const Node& n) {
    switch (n.op) {
      case Op::constant: return n.value < 0 ? "(-" + to_string(Scalar(-n.value)) + ")" : to_string(n.value);
      case Op::var: return "x";
      case Op::neg:
        if (n.lhs->op == Op::constant) return "(-(" + render_node(*n.lhs) + "))";
        return "(-" + render_node(*n.lhs) + ")";
      case Op::abs: return "abs(" + render_node(*n.lhs) + ")";
      case Op::sign: return "sign(" + render_node(*n.lhs) + ")";
      case Op::floor: return "floor(" + render_node(*n.lhs) + ")";
      case Op::recip: return "recip(" + render_node(*n.lhs) + ")";
      case Op::min: return "min(" + render_node(*n.lhs) + ", " + render_node(*n.rhs) + ")";
      case Op::max: return "max(" + render_node(*n.lhs) + ", " + render_node(*n.rhs) + ")";
      case Op::add: return "(" + render_node(*n.lhs) + " + " + render_node(*n.rhs) + ")";
      case Op::sub: return "(" + render_node(*n.lhs) + " - " + render_node(*n.rhs) + ")";
      case Op::mul: return "(" + render_node(*n.lhs) + " * " + render_node(*n.rhs) + ")";
      case Op::div: return "(" + render_node(*n.lhs) + " / " + render_node(*n.rhs) + ")";
    }
    return "";
  }

  NodePtr root_;

  friend class ExprParser;
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::parse_error, "expression '" + std::string(text_) + "' at column " +
                                     std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
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
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+'))
        e = e + parse_product();
      else if (accept('-'))
        e = e - parse_product();
      else
        return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = e * parse_unary();
      else if (accept('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) {
      // "-3/4" is a literal; "-(3/4)" negates a literal.
      skip_space();
      if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        return Expr::constant(-parse_number().root_->value);
      return Expr::unary(Expr::Op::neg, parse_unary());
    }
    return parse_primary();
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    } else if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
               std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    auto v = try_parse_scalar(text_.substr(start, pos_ - start));
    if (!v) error("malformed number");
    return Expr::constant(*v);
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (accept('(')) {
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) error("unexpected '" + std::string(1, c) + "'");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);
    if (word == "x") return Expr::var();
    Expr::Op op;
    bool two_args = false;
    if (word == "abs")
      op = Expr::Op::abs;
    else if (word == "sign")
      op = Expr::Op::sign;
    else if (word == "floor")
      op = Expr::Op::floor;
    else if (word == "recip")
      op = Expr::Op::recip;
    else if (word == "min" || word == "max") {
      op = word == "min" ? Expr::Op::min : Expr::Op::max;
      two_args = true;
    } else {
      pos_ = start;
      error("unknown name '" + std::string(word) + "'");
    }
    expect('(');
    Expr first = parse_sum();
    if (two_args) {
      expect(',');
      Expr second = parse_sum();
      expect(')');
      return Expr::binary(op, first, second);
    }
    expect(')');
    return Expr::unary(op, first);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

}  // namespace fuzzylim
