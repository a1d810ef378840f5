#include "texcas/ir/emit.hpp"
#include "texcas/ir/functions.hpp"

#include <cctype>
#include <set>

namespace texcas::ir {

NoDialectMapping::NoDialectMapping(std::string function_id)
    : std::runtime_error("no dialect mapping for " + function_id), id_(std::move(function_id)) {}

namespace {

enum Ctx { Top = 0, Factor = 1, Atom = 2 };

class Emitter {
public:
  explicit Emitter(Dialect d) : d_(d) {}

  std::string emit(const Expr& e, int ctx) {
    switch (e.kind()) {
      case ExprKind::Number: return number(e.value());
      case ExprKind::Constant: return constant_name(e.constant());
      case ExprKind::Variable: return variable(e.name());
      case ExprKind::Function: return function(e);
      case ExprKind::Derivative: return derivative(e);
      case ExprKind::BigOp: return bigop(e);
      case ExprKind::Pow: {
        if (d_ == Dialect::MapleSyntax && e.base().is_constant(ConstantKind::EulerE))
          return "exp(" + emit(e.exponent(), Top) + ")";
        std::string s = emit(e.base(), Atom) + "^" + emit(e.exponent(), Atom);
        return ctx >= Atom ? "(" + s + ")" : s;
      }
      case ExprKind::Neg: {
        const auto& x = e.operand();
        if (ctx >= Factor && x.is_number()) return "(-(" + number(x.value()) + "))";
        std::string core = "-" + (x.is(ExprKind::Add) ? "(" + emit(x, Top) + ")" : emit(x, Factor));
        return ctx >= Factor ? "(" + core + ")" : core;
      }
      case ExprKind::Mul: {
        std::string s;
        const auto& fs = e.children();
        for (std::size_t i = 0; i < fs.size(); ++i) {
          const auto& f = fs[i];
          // "/n" would read back as a rational literal inside parentheses
          if (i > 0 && f.is(ExprKind::Pow) && f.exponent().is_number(-1) && !f.base().is_number() &&
              !(d_ == Dialect::MapleSyntax && f.base().is_constant(ConstantKind::EulerE)))
            s += "/" + emit(f.base(), Atom);
          else
            s += (i > 0 ? "*" : "") + emit(f, Factor);
        }
        return ctx >= Atom ? "(" + s + ")" : s;
      }
      case ExprKind::Add: {
        std::string s;
        const auto& ts = e.children();
        for (std::size_t i = 0; i < ts.size(); ++i) {
          const auto& t = ts[i];
          if (i == 0) {
            s += emit(t, Top);
          } else if (t.is(ExprKind::Neg)) {
            const auto& u = t.operand();
            s += " - " + (u.is(ExprKind::Add) ? "(" + emit(u, Top) + ")" : emit(u, Factor));
          } else {
            s += " + " + emit(t, Top);
          }
        }
        return ctx >= Factor ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

private:
  Dialect d_;

  static std::string number(const Rational& v) {
    const auto s = v.str();
    if (v >= 0 && boost::multiprecision::denominator(v) == 1) return s;
    return "(" + s + ")";
  }

  std::string constant_name(ConstantKind c) const {
    const bool maple = d_ == Dialect::MapleSyntax;
    switch (c) {
      case ConstantKind::ImaginaryUnit: return maple ? "I" : "%i";
      case ConstantKind::EulerE: return maple ? "exp(1)" : "%e";
      case ConstantKind::Pi: return maple ? "Pi" : "%pi";
      case ConstantKind::EulerGamma: return maple ? "gamma" : "%gamma";
      case ConstantKind::Infinity: return maple ? "infinity" : "%inf";
    }
    return "?";
  }

  std::string variable(const std::string& name) const {
    if (d_ == Dialect::GenericInfix) return name;
    static const std::set<std::string> reserved = {"gamma", "I", "D", "Pi", "E", "O", "exp", "ln",
                                                   "sin", "cos", "sum", "diff", "int", "lambda"};
    if (reserved.contains(name) || name.find('\'') != std::string::npos) return "`" + name + "`";
    return name;
  }

  std::string list(const std::vector<Expr>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + emit(xs[i], Top);
    return s;
  }

  std::string function(const Expr& e) {
    if (d_ == Dialect::GenericInfix) {
      std::string s = e.name();
      if (!e.params().empty()) s += "[" + list(e.params()) + "]";
      return s + "(" + list(e.args()) + ")";
    }
    const auto* info = find_function(e.name());
    if (!info || info->maple.empty()) throw NoDialectMapping(e.name());
    if (e.name() == "HypPFQ") {
      if (e.params().size() != 2 || !e.params()[0].is_integer() || !e.params()[1].is_integer())
        throw NoDialectMapping(e.name());
      const auto p = static_cast<std::size_t>(e.params()[0].value());
      const auto q = static_cast<std::size_t>(e.params()[1].value());
      if (e.args().size() != p + q + 1) throw NoDialectMapping(e.name());
      std::vector<Expr> as(e.args().begin(), e.args().begin() + static_cast<std::ptrdiff_t>(p));
      std::vector<Expr> bs(e.args().begin() + static_cast<std::ptrdiff_t>(p), e.args().end() - 1);
      return "hypergeom([" + list(as) + "], [" + list(bs) + "], " + emit(e.args().back(), Top) + ")";
    }
    std::string out;
    const auto& t = info->maple;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const char c = t[i];
      if ((c == 'p' || c == 'a') && i + 1 < t.size() && std::isdigit(static_cast<unsigned char>(t[i + 1])) &&
          (i == 0 || !std::isalnum(static_cast<unsigned char>(t[i - 1])))) {
        const auto idx = static_cast<std::size_t>(t[i + 1] - '0');
        const auto& src = c == 'p' ? e.params() : e.args();
        if (idx >= src.size()) throw NoDialectMapping(e.name());
        out += emit(src[idx], Top);
        ++i;
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string derivative(const Expr& e) {
    const auto body = emit(e.operand(), Top);
    if (d_ == Dialect::GenericInfix)
      return "diff(" + body + ", " + e.name() + ", " + std::to_string(e.order()) + ")";
    return "diff(" + body + ", " + variable(e.name()) + "$" + std::to_string(e.order()) + ")";
  }

  std::string bigop(const Expr& e) {
    const auto body = emit(e.operand(), Top);
    const bool g = d_ == Dialect::GenericInfix;
    const auto v = g ? e.name() : variable(e.name());
    auto range = [&] {
      return g ? ", " + v + ", " + emit(*e.lower(), Top) + ", " + emit(*e.upper(), Top)
               : ", " + v + " = " + emit(*e.lower(), Top) + " .. " + emit(*e.upper(), Top);
    };
    switch (e.bigop()) {
      case BigOpKind::Sum: return "sum(" + body + range() + ")";
      case BigOpKind::Prod: return "product(" + body + range() + ")";
      case BigOpKind::Int: return "int(" + body + range() + ")";
      case BigOpKind::Lim:
        return g ? "limit(" + body + ", " + v + ", " + emit(*e.target(), Top) + ")"
                 : "limit(" + body + ", " + v + " = " + emit(*e.target(), Top) + ")";
      case BigOpKind::Antider: return (g ? "antider(" : "int(") + body + ", " + v + ")";
    }
    return "?";
  }
};

}  // namespace

std::string emit_cas(const Expr& e, Dialect dialect) { return Emitter(dialect).emit(e, Top); }

std::string emit_relation(const Relation& r, Dialect dialect) {
  std::string op;
  switch (r.kind) {
    case RelationKind::Eq: op = "="; break;
    case RelationKind::Lt: op = "<"; break;
    case RelationKind::Gt: op = ">"; break;
    case RelationKind::Ne: op = "<>"; break;
    case RelationKind::Le: op = "<="; break;
    case RelationKind::Ge: op = ">="; break;
    case RelationKind::To:
      if (dialect == Dialect::MapleSyntax) throw NoDialectMapping("->");
      op = "->";
      break;
    case RelationKind::Equiv: op = dialect == Dialect::MapleSyntax ? "=" : "=="; break;
  }
  return emit_cas(r.lhs, dialect) + " " + op + " " + emit_cas(r.rhs, dialect);
}

}  // namespace texcas::ir
