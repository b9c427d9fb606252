#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>

#include "mathcast/expr.hpp"
#include "mathcast/special_functions.hpp"

namespace mathcast {

class MacroRegistry;

using Assignment = std::map<std::string, Complex>;
using Clock = std::chrono::steady_clock;

struct EvalOptions {
  std::optional<Clock::time_point> deadline;
  double quadrature_tolerance = 1e-9;
};

// Complex value of an arithmetic expression under `values`. Throws
// kUnsupportedFunction, kDomainError, or kTimeout past the deadline.
Complex evaluate(const ExprPtr& expr, const Assignment& values, const MacroRegistry& registry,
                 const EvalOptions& options = {});

// Truth value of a relation. Ordering comparisons against values with a
// non-zero imaginary part are false. nullopt when it cannot be evaluated.
std::optional<bool> evaluate_predicate(const ExprPtr& relation, const Assignment& values,
                                       const MacroRegistry& registry,
                                       const EvalOptions& options = {});

}  // namespace mathcast
