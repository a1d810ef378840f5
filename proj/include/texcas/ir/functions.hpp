#pragma once

// Registry of IR function ids: arity and dialect names.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace texcas::ir {

struct FunctionInfo {
  std::string id;
  int num_params = 0;  // -1: variable
  int num_args = 1;    // -1: variable
  // Maple rendering; `p0`, `p1`, ... and `a0`, `a1`, ... are replaced by the
  // emitted params and args. Empty when the dialect has no counterpart.
  std::string maple;
  std::string description;
};

const std::vector<FunctionInfo>& function_registry();
const FunctionInfo* find_function(std::string_view id);

}  // namespace texcas::ir
