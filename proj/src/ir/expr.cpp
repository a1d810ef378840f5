#include "texcas/ir/expr.hpp"

#include <functional>
#include <stdexcept>

namespace texcas::ir {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

Expr finish(ExprNode n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  switch (n.kind) {
    case ExprKind::Number: h = mix(h, std::hash<std::string>{}(n.value.str())); break;
    case ExprKind::Constant: h = mix(h, static_cast<std::size_t>(n.constant)); break;
    default: break;
  }
  h = mix(h, std::hash<std::string>{}(n.name));
  for (const auto* list : {&n.children, &n.params, &n.args}) {
    h = mix(h, list->size());
    for (const auto& c : *list) h = mix(h, c.hash());
  }
  h = mix(h, static_cast<std::size_t>(n.order));
  h = mix(h, static_cast<std::size_t>(n.bigop));
  for (const auto* o : {&n.body, &n.lower, &n.upper, &n.target}) h = mix(h, *o ? (*o)->hash() : 17);
  n.hash = h;
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

const Expr& zero() {
  static const Expr z = [] {
    ExprNode n;
    n.kind = ExprKind::Number;
    n.value = 0;
    return finish(std::move(n));
  }();
  return z;
}

[[noreturn]] void wrong_kind(const char* what) { throw std::logic_error(std::string("Expr: not a ") + what); }

int cmp_list(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (int c = compare(a[i], b[i])) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int cmp_opt(const std::optional<Expr>& a, const std::optional<Expr>& b) {
  if (!a || !b) return a ? 1 : (b ? -1 : 0);
  return compare(*a, *b);
}

BigOpKind bigop_of(const ExprNode& n) { return n.bigop; }

}  // namespace

std::string_view to_string(ConstantKind c) {
  switch (c) {
    case ConstantKind::ImaginaryUnit: return "ImaginaryUnit";
    case ConstantKind::EulerE: return "EulerE";
    case ConstantKind::Pi: return "Pi";
    case ConstantKind::EulerGamma: return "EulerGamma";
    case ConstantKind::Infinity: return "Infinity";
  }
  return "?";
}

std::string_view to_string(BigOpKind k) {
  switch (k) {
    case BigOpKind::Sum: return "Sum";
    case BigOpKind::Prod: return "Prod";
    case BigOpKind::Int: return "Int";
    case BigOpKind::Lim: return "Lim";
    case BigOpKind::Antider: return "Antider";
  }
  return "?";
}

std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Eq: return "Eq";
    case RelationKind::Lt: return "Lt";
    case RelationKind::Gt: return "Gt";
    case RelationKind::Ne: return "Ne";
    case RelationKind::Le: return "Le";
    case RelationKind::Ge: return "Ge";
    case RelationKind::To: return "To";
    case RelationKind::Equiv: return "Equiv";
  }
  return "?";
}

Expr::Expr() : node_(zero().node_) {}

ExprKind Expr::kind() const { return node_->kind; }

bool Expr::is_number(long v) const { return is_number() && node_->value == v; }

bool Expr::is_integer() const {
  return is_number() && boost::multiprecision::denominator(node_->value) == 1;
}

bool Expr::is_constant(ConstantKind c) const { return is(ExprKind::Constant) && node_->constant == c; }
bool Expr::is_variable(std::string_view n) const { return is(ExprKind::Variable) && node_->name == n; }
bool Expr::is_function(std::string_view id) const { return is(ExprKind::Function) && node_->name == id; }

const Rational& Expr::value() const {
  if (!is_number()) wrong_kind("number");
  return node_->value;
}

ConstantKind Expr::constant() const {
  if (!is(ExprKind::Constant)) wrong_kind("constant");
  return node_->constant;
}

const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

const Expr& Expr::base() const {
  if (!is(ExprKind::Pow)) wrong_kind("power");
  return node_->children[0];
}

const Expr& Expr::exponent() const {
  if (!is(ExprKind::Pow)) wrong_kind("power");
  return node_->children[1];
}

const Expr& Expr::operand() const {
  if (is(ExprKind::Neg)) return node_->children[0];
  if (is(ExprKind::Derivative) || is(ExprKind::BigOp)) return *node_->body;
  wrong_kind("unary node");
}

const std::vector<Expr>& Expr::params() const { return node_->params; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
int Expr::order() const { return node_->order; }
BigOpKind Expr::bigop() const { return bigop_of(*node_); }
const std::optional<Expr>& Expr::lower() const { return node_->lower; }
const std::optional<Expr>& Expr::upper() const { return node_->upper; }
const std::optional<Expr>& Expr::target() const { return node_->target; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  return a.hash() == b.hash() && compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  const auto& x = a.node();
  const auto& y = b.node();
  switch (x.kind) {
    case ExprKind::Number: return x.value < y.value ? -1 : (x.value > y.value ? 1 : 0);
    case ExprKind::Constant: return x.constant < y.constant ? -1 : (x.constant > y.constant ? 1 : 0);
    case ExprKind::Variable: return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
    default: break;
  }
  if (x.name != y.name) return x.name < y.name ? -1 : 1;
  if (x.order != y.order) return x.order < y.order ? -1 : 1;
  if (x.bigop != y.bigop) return x.bigop < y.bigop ? -1 : 1;
  if (int c = cmp_list(x.children, y.children)) return c;
  if (int c = cmp_list(x.params, y.params)) return c;
  if (int c = cmp_list(x.args, y.args)) return c;
  if (int c = cmp_opt(x.body, y.body)) return c;
  if (int c = cmp_opt(x.lower, y.lower)) return c;
  if (int c = cmp_opt(x.upper, y.upper)) return c;
  return cmp_opt(x.target, y.target);
}

Expr num(const Rational& v) {
  ExprNode n;
  n.kind = ExprKind::Number;
  n.value = v;
  return finish(std::move(n));
}

Expr num(long v) { return num(Rational(v)); }
Expr num(long p, long q) { return num(Rational(p, q)); }

Expr constant(ConstantKind c) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.constant = c;
  return finish(std::move(n));
}

Expr var(std::string name) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.name = std::move(name);
  return finish(std::move(n));
}

namespace {

Expr nary(ExprKind kind, std::vector<Expr> items) {
  std::vector<Expr> flat;
  flat.reserve(items.size());
  for (auto& it : items) {
    if (it.kind() == kind)
      flat.insert(flat.end(), it.children().begin(), it.children().end());
    else
      flat.push_back(std::move(it));
  }
  if (flat.empty()) return num(kind == ExprKind::Add ? 0 : 1);
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = kind;
  n.children = std::move(flat);
  return finish(std::move(n));
}

}  // namespace

Expr add(std::vector<Expr> terms) { return nary(ExprKind::Add, std::move(terms)); }
Expr mul(std::vector<Expr> factors) { return nary(ExprKind::Mul, std::move(factors)); }
Expr add(const Expr& a, const Expr& b) { return add(std::vector<Expr>{a, b}); }
Expr mul(const Expr& a, const Expr& b) { return mul(std::vector<Expr>{a, b}); }

Expr pow(const Expr& base, const Expr& exponent) {
  ExprNode n;
  n.kind = ExprKind::Pow;
  n.children = {base, exponent};
  return finish(std::move(n));
}

Expr neg(const Expr& x) {
  ExprNode n;
  n.kind = ExprKind::Neg;
  n.children = {x};
  return finish(std::move(n));
}

Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }
Expr div(const Expr& a, const Expr& b) { return mul(a, pow(b, num(-1))); }

Expr fn(std::string id, std::vector<Expr> params, std::vector<Expr> args) {
  ExprNode n;
  n.kind = ExprKind::Function;
  n.name = std::move(id);
  n.params = std::move(params);
  n.args = std::move(args);
  return finish(std::move(n));
}

Expr fn(std::string id, std::vector<Expr> args) { return fn(std::move(id), {}, std::move(args)); }

Expr derivative(const Expr& body, std::string variable, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be at least 1");
  ExprNode n;
  n.kind = ExprKind::Derivative;
  n.name = std::move(variable);
  n.order = order;
  n.body = body;
  return finish(std::move(n));
}

namespace {

Expr big(BigOpKind k, const Expr& body, std::string v, std::optional<Expr> lo, std::optional<Expr> hi,
         std::optional<Expr> target) {
  ExprNode n;
  n.kind = ExprKind::BigOp;
  n.bigop = k;
  n.name = std::move(v);
  n.body = body;
  n.lower = std::move(lo);
  n.upper = std::move(hi);
  n.target = std::move(target);
  return finish(std::move(n));
}

}  // namespace

Expr sum(const Expr& body, std::string binder, const Expr& lo, const Expr& hi) {
  return big(BigOpKind::Sum, body, std::move(binder), lo, hi, std::nullopt);
}
Expr product(const Expr& body, std::string binder, const Expr& lo, const Expr& hi) {
  return big(BigOpKind::Prod, body, std::move(binder), lo, hi, std::nullopt);
}
Expr integral(const Expr& body, std::string variable, const Expr& lo, const Expr& hi) {
  return big(BigOpKind::Int, body, std::move(variable), lo, hi, std::nullopt);
}
Expr limit(const Expr& body, std::string binder, const Expr& target) {
  return big(BigOpKind::Lim, body, std::move(binder), std::nullopt, std::nullopt, target);
}
Expr antiderivative(const Expr& body, std::string variable) {
  return big(BigOpKind::Antider, body, std::move(variable), std::nullopt, std::nullopt, std::nullopt);
}

Expr rebuild(const Expr& e, std::vector<Expr> children, std::vector<Expr> params, std::vector<Expr> args,
             std::optional<Expr> body, std::optional<Expr> lower, std::optional<Expr> upper,
             std::optional<Expr> target) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Add: return add(std::move(children));
    case ExprKind::Mul: return mul(std::move(children));
    case ExprKind::Pow: return pow(children[0], children[1]);
    case ExprKind::Neg: return neg(children[0]);
    case ExprKind::Function: return fn(n.name, std::move(params), std::move(args));
    case ExprKind::Derivative: return derivative(*body, n.name, n.order);
    case ExprKind::BigOp: return big(n.bigop, *body, n.name, std::move(lower), std::move(upper), std::move(target));
    default: return e;
  }
}

namespace {

void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Variable:
      if (!bound.contains(n.name)) out.insert(n.name);
      return;
    case ExprKind::Derivative:
      if (!bound.contains(n.name)) out.insert(n.name);
      collect_free(*n.body, bound, out);
      return;
    case ExprKind::BigOp: {
      for (const auto* o : {&n.lower, &n.upper, &n.target})
        if (*o) collect_free(**o, bound, out);
      if (n.bigop == BigOpKind::Antider) {
        if (!bound.contains(n.name)) out.insert(n.name);
        collect_free(*n.body, bound, out);
        return;
      }
      const bool fresh = bound.insert(n.name).second;
      collect_free(*n.body, bound, out);
      if (fresh) bound.erase(n.name);
      return;
    }
    default: break;
  }
  for (const auto* list : {&n.children, &n.params, &n.args})
    for (const auto& c : *list) collect_free(c, bound, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> bound, out;
  collect_free(e, bound, out);
  return out;
}

std::set<std::string> free_variables(const Relation& r) {
  auto a = free_variables(r.lhs);
  auto b = free_variables(r.rhs);
  a.insert(b.begin(), b.end());
  return a;
}

bool contains_variable(const Expr& e, std::string_view name) {
  return free_variables(e).contains(std::string(name));
}

Expr substitute(const Expr& e, std::string_view name, const Expr& value) {
  const auto& n = e.node();
  if (n.kind == ExprKind::Variable) return n.name == name ? value : e;
  if (n.kind == ExprKind::BigOp && n.bigop != BigOpKind::Antider && n.name == name) {
    // only the bounds can mention the outer variable
    auto f = [&](const std::optional<Expr>& o) -> std::optional<Expr> {
      if (!o) return std::nullopt;
      return substitute(*o, name, value);
    };
    return rebuild(e, {}, {}, {}, n.body, f(n.lower), f(n.upper), f(n.target));
  }
  return map_children(e, [&](const Expr& c) { return substitute(c, name, value); });
}

std::size_t tree_size(const Expr& e) {
  std::size_t s = 1;
  const auto& n = e.node();
  for (const auto* list : {&n.children, &n.params, &n.args})
    for (const auto& c : *list) s += tree_size(c);
  for (const auto* o : {&n.body, &n.lower, &n.upper, &n.target})
    if (*o) s += tree_size(**o);
  return s;
}

}  // namespace texcas::ir
