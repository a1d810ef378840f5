#include "texcas/symbolic.hpp"

#include <functional>

namespace texcas::symbolic {

using ir::ConstantKind;
using ir::ExprKind;

namespace {

Expr one() { return ir::num(1); }

Expr sq(const Expr& u) { return ir::pow(u, ir::num(2)); }

Expr inv_sqrt(const Expr& u) { return ir::pow(u, ir::num(-1, 2)); }

Expr e_pow(const Expr& u) { return ir::pow(ir::constant(ConstantKind::EulerE), u); }

Expr f1(const char* id, const Expr& u) { return ir::fn(id, {u}); }

Expr shifted(const Expr& f, long k) {
  std::vector<Expr> ps = f.params();
  ps[0] = ir::add(ps[0], ir::num(k));
  return ir::fn(f.name(), ps, f.args());
}

// d f / d u for a function of one argument u (its last argument).
std::optional<Expr> outer_derivative(const Expr& f) {
  const std::string& id = f.name();
  const Expr& u = f.args().back();
  using Rule = std::function<Expr()>;
  static const std::map<std::string, int> unary = {
      {"sin", 0},  {"cos", 1},   {"tan", 2},    {"cot", 3},    {"sec", 4},    {"csc", 5},    {"sinh", 6},
      {"cosh", 7}, {"tanh", 8},  {"coth", 9},   {"sech", 10},  {"csch", 11},  {"asin", 12},  {"acos", 13},
      {"atan", 14}, {"asinh", 15}, {"acosh", 16}, {"atanh", 17}, {"log", 18},  {"erf", 19},   {"erfc", 20},
      {"GammaFn", 21}};
  if (auto it = unary.find(id); it != unary.end() && f.args().size() == 1 && f.params().empty()) {
    switch (it->second) {
      case 0: return f1("cos", u);
      case 1: return ir::neg(f1("sin", u));
      case 2: return ir::add(one(), sq(f));
      case 3: return ir::neg(ir::add(one(), sq(f)));
      case 4: return ir::mul(f, f1("tan", u));
      case 5: return ir::neg(ir::mul(f, f1("cot", u)));
      case 6: return f1("cosh", u);
      case 7: return f1("sinh", u);
      case 8: return ir::sub(one(), sq(f));
      case 9: return ir::sub(one(), sq(f));
      case 10: return ir::neg(ir::mul(f, f1("tanh", u)));
      case 11: return ir::neg(ir::mul(f, f1("coth", u)));
      case 12: return inv_sqrt(ir::sub(one(), sq(u)));
      case 13: return ir::neg(inv_sqrt(ir::sub(one(), sq(u))));
      case 14: return ir::pow(ir::add(one(), sq(u)), ir::num(-1));
      case 15: return inv_sqrt(ir::add(one(), sq(u)));
      case 16: return ir::mul(inv_sqrt(ir::sub(u, one())), inv_sqrt(ir::add(u, one())));
      case 17: return ir::pow(ir::sub(one(), sq(u)), ir::num(-1));
      case 18: return ir::pow(u, ir::num(-1));
      case 19:
      case 20: {
        Expr d = ir::mul({ir::num(2), inv_sqrt(ir::constant(ConstantKind::Pi)), e_pow(ir::neg(sq(u)))});
        return it->second == 19 ? d : ir::neg(d);
      }
      case 21: return ir::mul(f, f1("Digamma", u));
    }
  }
  if ((id == "BesselJ" || id == "BesselY" || id == "BesselI" || id == "BesselK") && f.params().size() == 1 &&
      f.args().size() == 1) {
    const Expr lo = shifted(f, -1), hi = shifted(f, 1);
    const Expr half = ir::num(1, 2);
    if (id == "BesselI") return ir::mul(half, ir::add(lo, hi));
    if (id == "BesselK") return ir::mul(ir::num(-1, 2), ir::add(lo, hi));
    return ir::mul(half, ir::sub(lo, hi));
  }
  if (id == "Hyp0F1" || id == "Hyp1F1" || id == "Hyp2F1" || id == "HypPFQ") {
    std::size_t p = 0, q = 0;
    if (id == "Hyp0F1") q = 1;
    if (id == "Hyp1F1") p = q = 1;
    if (id == "Hyp2F1") p = 2, q = 1;
    if (id == "HypPFQ") {
      const auto& ps = f.params();
      if (ps.size() != 2 || !ps[0].is_integer() || !ps[1].is_integer()) return std::nullopt;
      p = ps[0].value().convert_to<std::size_t>();
      q = ps[1].value().convert_to<std::size_t>();
    }
    const auto& as = f.args();
    if (as.size() != p + q + 1) return std::nullopt;
    std::vector<Expr> coeff, next;
    for (std::size_t k = 0; k < p + q; ++k) {
      coeff.push_back(k < p ? as[k] : ir::pow(as[k], ir::num(-1)));
      next.push_back(ir::add(as[k], one()));
    }
    next.push_back(u);
    coeff.push_back(ir::fn(id, f.params(), next));
    return ir::mul(std::move(coeff));
  }
  return std::nullopt;
}

Expr opaque(const Expr& e, const std::string& var) { return ir::derivative(e, var, 1); }

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
  if (!ir::contains_variable(e, var)) return ir::num(0);
  switch (e.kind()) {
    case ExprKind::Variable: return one();
    case ExprKind::Add: {
      std::vector<Expr> terms;
      for (const auto& c : e.children()) terms.push_back(differentiate(c, var));
      return ir::add(std::move(terms));
    }
    case ExprKind::Mul: {
      const auto& fs = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!ir::contains_variable(fs[i], var)) continue;
        std::vector<Expr> product = fs;
        product[i] = differentiate(fs[i], var);
        terms.push_back(ir::mul(std::move(product)));
      }
      return ir::add(std::move(terms));
    }
    case ExprKind::Neg: return ir::neg(differentiate(e.operand(), var));
    case ExprKind::Pow: {
      const Expr& b = e.base();
      const Expr& x = e.exponent();
      if (!ir::contains_variable(x, var))
        return ir::mul({x, ir::pow(b, ir::sub(x, one())), differentiate(b, var)});
      if (b.is_constant(ConstantKind::EulerE)) return ir::mul(e, differentiate(x, var));
      if (!ir::contains_variable(b, var)) return ir::mul({e, f1("log", b), differentiate(x, var)});
      return ir::mul(e, ir::add(ir::mul(differentiate(x, var), f1("log", b)),
                                ir::mul({x, differentiate(b, var), ir::pow(b, ir::num(-1))})));
    }
    case ExprKind::Function: {
      for (const auto& p : e.params())
        if (ir::contains_variable(p, var)) return opaque(e, var);
      const auto& as = e.args();
      if (as.empty()) return opaque(e, var);
      for (std::size_t i = 0; i + 1 < as.size(); ++i)
        if (ir::contains_variable(as[i], var)) return opaque(e, var);
      const auto outer = outer_derivative(e);
      if (!outer) return opaque(e, var);
      return ir::mul(*outer, differentiate(as.back(), var));
    }
    case ExprKind::BigOp: {
      const auto& n = e.node();
      if (n.name == var) return opaque(e, var);
      const bool bounds_free = (!n.lower || !ir::contains_variable(*n.lower, var)) &&
                               (!n.upper || !ir::contains_variable(*n.upper, var));
      if (n.bigop == ir::BigOpKind::Sum && bounds_free)
        return ir::rebuild(e, {}, {}, {}, differentiate(*n.body, var), n.lower, n.upper, n.target);
      if (n.bigop == ir::BigOpKind::Int && n.lower && n.upper) {
        std::vector<Expr> terms;
        terms.push_back(ir::rebuild(e, {}, {}, {}, differentiate(*n.body, var), n.lower, n.upper, n.target));
        terms.push_back(ir::mul(ir::substitute(*n.body, n.name, *n.upper), differentiate(*n.upper, var)));
        terms.push_back(ir::neg(ir::mul(ir::substitute(*n.body, n.name, *n.lower), differentiate(*n.lower, var))));
        return ir::add(std::move(terms));
      }
      return opaque(e, var);
    }
    default: return opaque(e, var);
  }
}

}  // namespace texcas::symbolic
