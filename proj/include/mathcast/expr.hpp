#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mathcast/math_node.hpp"
#include "mathcast/meom.hpp"

namespace mathcast {

class MacroRegistry;
struct MacroEntry;

enum class ExprKind {
  kNumber,
  kVariable,
  kConstant,  // text: pi | e | i | infinity
  kAdd,
  kMul,
  kDivide,
  kPower,
  kFactorial,
  kParen,
  kAbs,
  kCall,
  kBuiltin,  // text: sqrt | root | Re | Im
  kSum,
  kProduct,
  kIntegral,
  kLimit,
  kDerivative,
  kSet,
  kRelation,
  kTuple,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// One iteration variable of a sum, product, integral or limit. Exclusive
// symbolic bounds are already shifted to inclusive form (N-1, L+1).
struct ExprBound {
  std::string var;
  ExprPtr lower;
  ExprPtr upper;
  ExprPtr membership;
  LimitDirection direction = LimitDirection::kNone;
};

// Semantic expression built from a parse tree by precedence climbing.
struct Expr {
  ExprKind kind = ExprKind::kNumber;
  std::string text;
  std::vector<ExprPtr> args;
  // kAdd: sign per term ('+', '-', or 0 for an unsigned first term).
  // kMul: joiner per factor (0 first, ' ' juxtaposition, '*', '/').
  std::vector<char> ops;
  // kRelation: normalized relation symbols between operands.
  std::vector<std::string> relations;
  const MacroEntry* entry = nullptr;
  int primes = 0;
  int at_count = 0;
  // kVariable: name without subscript; args[0] is the subscript if any.
  std::string base;
  ExprBound bound;
  // kDerivative: order (null means 1), argument in args[0].
  ExprPtr order;
  double value = 0;
};

ExprPtr make_number(const std::string& literal);
ExprPtr make_variable(const std::string& name);
ExprPtr make_constant(const std::string& name);
ExprPtr make_expr(ExprKind kind, std::vector<ExprPtr> args);

// Builds the semantic expression. Relation chains become kRelation. MEOM
// errors surface as kMeomExtractionFailed, other notation as
// kUnsupportedNotation. `bindings` replace `$k` placeholders.
ExprPtr build_expr(const MathNode& node, const MacroRegistry& registry,
                   const std::vector<ExprPtr>& bindings = {});

// Variables that are not bound by any operator in the tree and are not
// constants. Subscripted identifiers are atomic names.
std::set<std::string> free_variables(const ExprPtr& expr);
std::set<std::string> bound_variables(const ExprPtr& expr);

bool is_greek(const std::string& name);

}  // namespace mathcast
