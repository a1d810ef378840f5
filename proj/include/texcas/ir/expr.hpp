#pragma once

// CAS-neutral expression IR. Expressions are immutable, cheaply copyable
// handles; structurally equal trees compare equal.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace texcas::ir {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class ExprKind { Number, Constant, Variable, Add, Mul, Pow, Neg, Function, Derivative, BigOp };
enum class ConstantKind { ImaginaryUnit, EulerE, Pi, EulerGamma, Infinity };
enum class BigOpKind { Sum, Prod, Int, Lim, Antider };

std::string_view to_string(ConstantKind c);
std::string_view to_string(BigOpKind k);

struct ExprNode;

class Expr {
public:
  Expr();  // the number 0
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  ExprKind kind() const;
  const ExprNode& node() const { return *node_; }

  bool is(ExprKind k) const { return kind() == k; }
  bool is_number() const { return is(ExprKind::Number); }
  bool is_number(long v) const;
  bool is_integer() const;
  bool is_constant(ConstantKind c) const;
  bool is_variable(std::string_view name) const;
  bool is_function(std::string_view id) const;

  const Rational& value() const;        // Number
  ConstantKind constant() const;        // Constant
  const std::string& name() const;      // Variable name, Function id, Derivative/BigOp variable
  const std::vector<Expr>& children() const;  // Add/Mul operands
  const Expr& base() const;             // Pow
  const Expr& exponent() const;         // Pow
  const Expr& operand() const;          // Neg, Derivative body, BigOp body
  const std::vector<Expr>& params() const;    // Function
  const std::vector<Expr>& args() const;      // Function
  int order() const;                    // Derivative
  BigOpKind bigop() const;              // BigOp
  const std::optional<Expr>& lower() const;   // BigOp Sum/Prod/Int
  const std::optional<Expr>& upper() const;   // BigOp Sum/Prod/Int
  const std::optional<Expr>& target() const;  // BigOp Lim

  std::size_t hash() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  Rational value;
  ConstantKind constant = ConstantKind::Pi;
  std::string name;
  std::vector<Expr> children;  // Add/Mul operands, or [base, exponent] for Pow, [x] for Neg
  std::vector<Expr> params;
  std::vector<Expr> args;
  int order = 0;
  BigOpKind bigop = BigOpKind::Sum;
  std::optional<Expr> body;
  std::optional<Expr> lower;
  std::optional<Expr> upper;
  std::optional<Expr> target;
  std::size_t hash = 0;
};

// Total structural order: kind first, then payload.
int compare(const Expr& a, const Expr& b);
struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr num(const Rational& v);
Expr num(long v);
Expr num(long p, long q);
Expr constant(ConstantKind c);
Expr var(std::string name);
// add/mul flatten nested operands of the same kind; one operand is returned
// unchanged and no operands give 0 or 1.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr add(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr neg(const Expr& x);
Expr sub(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr fn(std::string id, std::vector<Expr> params, std::vector<Expr> args);
Expr fn(std::string id, std::vector<Expr> args);
Expr derivative(const Expr& body, std::string variable, int order);
Expr sum(const Expr& body, std::string binder, const Expr& lo, const Expr& hi);
Expr product(const Expr& body, std::string binder, const Expr& lo, const Expr& hi);
Expr integral(const Expr& body, std::string variable, const Expr& lo, const Expr& hi);
Expr limit(const Expr& body, std::string binder, const Expr& target);
Expr antiderivative(const Expr& body, std::string variable);

// Rebuilds `e` with every direct sub-expression replaced by f(sub).
template <class F>
Expr map_children(const Expr& e, F&& f);

std::set<std::string> free_variables(const Expr& e);
bool contains_variable(const Expr& e, std::string_view name);
// Replaces free occurrences of a variable.
Expr substitute(const Expr& e, std::string_view name, const Expr& value);

// Number of nodes in the tree.
std::size_t tree_size(const Expr& e);

enum class RelationKind { Eq, Lt, Gt, Ne, Le, Ge, To, Equiv };
std::string_view to_string(RelationKind k);

struct Relation {
  RelationKind kind = RelationKind::Eq;
  Expr lhs;
  Expr rhs;

  bool operator==(const Relation& o) const { return kind == o.kind && lhs == o.lhs && rhs == o.rhs; }
};

std::set<std::string> free_variables(const Relation& r);

// Generic rebuild helper used by map_children.
Expr rebuild(const Expr& e, std::vector<Expr> children, std::vector<Expr> params, std::vector<Expr> args,
             std::optional<Expr> body, std::optional<Expr> lower, std::optional<Expr> upper,
             std::optional<Expr> target);

template <class F>
Expr map_children(const Expr& e, F&& f) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Number:
    case ExprKind::Constant:
    case ExprKind::Variable: return e;
    default: break;
  }
  std::vector<Expr> ch, ps, as;
  ch.reserve(n.children.size());
  for (const auto& c : n.children) ch.push_back(f(c));
  for (const auto& c : n.params) ps.push_back(f(c));
  for (const auto& c : n.args) as.push_back(f(c));
  auto opt = [&](const std::optional<Expr>& o) -> std::optional<Expr> {
    if (!o) return std::nullopt;
    return f(*o);
  };
  return rebuild(e, std::move(ch), std::move(ps), std::move(as), opt(n.body), opt(n.lower), opt(n.upper),
                 opt(n.target));
}

}  // namespace texcas::ir
