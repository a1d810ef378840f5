#pragma once

// CAS-syntax emission and the GenericInfix reader.
//
// GenericInfix grammar (explicit `*`, `^` binds tightest):
//   numbers     3   (-3)   (1/2)   (-1/2)
//   constants   %i %e %pi %gamma %inf
//   functions   sin(x)   BesselJ[nu](z)   HypPFQ[2,1](a,b,c,z)
//   operators   diff(f, x, n)  sum(f, k, lo, hi)  product(f, k, lo, hi)
//               int(f, x, lo, hi)  limit(f, k, target)  antider(f, x)
//   relations   =  <  >  <>  <=  >=  ->  ==

#include "texcas/ir/expr.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace texcas::ir {

enum class Dialect { GenericInfix, MapleSyntax };

class NoDialectMapping : public std::runtime_error {
public:
  explicit NoDialectMapping(std::string function_id);
  const std::string& function_id() const { return id_; }

private:
  std::string id_;
};

std::string emit_cas(const Expr& e, Dialect dialect);
std::string emit_relation(const Relation& r, Dialect dialect);

class InfixParseError : public std::runtime_error {
public:
  InfixParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

Expr parse_infix(std::string_view text);
Relation parse_infix_relation(std::string_view text);

}  // namespace texcas::ir
