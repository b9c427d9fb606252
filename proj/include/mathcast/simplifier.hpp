#pragma once

#include <string>

#include "mathcast/expr.hpp"

namespace mathcast {

// Canonical form: sums of rational-coefficient monomials over atoms, with
// small integer powers of sums expanded and i^2 folded to -1. Atoms are
// non-arithmetic subtrees keyed by their canonical children. Throws
// kUnsupportedNotation when the form would grow past its size limits.
std::string canonical_form(const ExprPtr& expr);

// True when lhs - rhs normalizes to 0.
bool difference_is_zero(const ExprPtr& lhs, const ExprPtr& rhs);

}  // namespace mathcast
