#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mathcast/math_node.hpp"

namespace mathcast {

class MacroRegistry;

enum class LimitDirection { kNone, kTwoSided, kFromAbove, kFromBelow };
std::string_view limit_direction_name(LimitDirection d);

struct BoundSpec {
  std::vector<std::string> bound_vars;
  std::optional<MathNode> lower;
  std::optional<MathNode> upper;
  bool lower_inclusive = true;
  bool upper_inclusive = true;
  LimitDirection direction = LimitDirection::kNone;
  std::optional<MathNode> membership;
  // numL <= var1 < var2 <= numU: bound_vars = [var1, var2] with var1 < var2.
  bool chained = false;
};

enum class OperatorKind { kNone, kSum, kProduct, kIntegral, kLimit, kDerivative };

// Classifies a sibling as a MEOM operator (`\sum_{..}^{..}`, `\int`, ...).
OperatorKind operator_kind(const MathNode& item);
// The bare operator node beneath optional scripts.
const MathNode& operator_base(const MathNode& item);

struct ArgumentSpan {
  std::size_t operator_index = 0;
  // Inclusive range of included siblings.
  std::size_t first = 0;
  std::size_t last = 0;
  std::optional<std::size_t> terminator;
  // Derivative argument taken from the siblings before the operator.
  bool backward = false;

  std::vector<const MathNode*> included(const std::vector<MathNode>& siblings) const;
};

struct IntegralMeom {
  BoundSpec bounds;
  ArgumentSpan span;
  // When the differential sits in a fraction numerator: that fraction with
  // the differential replaced by `\cdot 1`.
  std::optional<MathNode> rewritten_fraction;
};

// Distinguished infinity nodes.
MathNode make_infinity(bool negative);
// +1 / -1 for an infinity node, 0 otherwise.
int infinity_sign(const MathNode& node);
// Integer literal value of a bound (`3`, `-2`), if it is one.
std::optional<long long> integer_literal(const MathNode& node);

BoundSpec match_blueprint(const MathNode& subscript, const MathNode* superscript,
                          const MacroRegistry& registry, bool limit = false);

std::vector<BoundSpec> split_multi_bound(const BoundSpec& spec);

constexpr std::size_t kToEnd = static_cast<std::size_t>(-1);

// `siblings[operator_index]` is a sum, product, limit or derivative operator.
// Only siblings in [begin, end) are considered.
ArgumentSpan extract_argument(const std::vector<MathNode>& siblings, std::size_t operator_index,
                              const std::vector<std::string>& bound_vars,
                              const MacroRegistry& registry, std::size_t begin = 0,
                              std::size_t end = kToEnd);

IntegralMeom extract_integral_meom(const std::vector<MathNode>& siblings,
                                   std::size_t operator_index, const MacroRegistry& registry,
                                   std::size_t end = kToEnd);

// Bound variables of a sibling operator (sum/product/limit/derivative via
// scripts; integrals via their differential).
std::vector<std::string> operator_bound_vars(const std::vector<MathNode>& siblings,
                                             std::size_t index, const MacroRegistry& registry,
                                             std::size_t end);

// BoundSpec for a sum/product/limit/derivative sibling.
BoundSpec operator_bounds(const MathNode& item, const MacroRegistry& registry);

bool contains_identifier(const MathNode& node, const std::vector<std::string>& names);

}  // namespace mathcast
