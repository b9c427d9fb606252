#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mathcast/expr.hpp"
#include "mathcast/math_node.hpp"

namespace mathcast {

class MacroRegistry;

// Templates use named slots: $arg $var $lo $hi $pt $dir $n $f $v $p $sub
// $inner $set $gc. A `$` not followed by a slot name is literal.
struct CasTarget {
  std::string id;
  bool bracket_calls = false;
  std::string sum_template;
  std::string sum_set_template;
  std::string product_template;
  std::string product_set_template;
  std::string integral_template;
  std::string indefinite_integral_template;
  std::string limit_template;
  std::string limit_from_above;
  std::string limit_from_below;
  std::string derivative_template;
  std::string prime_template;
  std::string substitution_template;
  // Whether the substitution form needs parentheses inside other operators.
  bool substitution_is_loose = false;

  static const CasTarget& maple();
  static const CasTarget& mathematica();
  // Throws kConfig for an unknown id.
  static const CasTarget& by_id(const std::string& id);
};

std::string fill_template(const std::string& templ, const std::map<std::string, std::string>& slots);

struct TranslateOptions {
  // Value of GenerateConditions for sums, products and integrals.
  std::string generate_conditions = "None";
};

struct TranslationOutput {
  std::string text;
  std::set<std::string> free_variables;
  std::set<std::string> packages;
  std::vector<std::string> notes;
};

TranslationOutput translate(const MathNode& tree, const CasTarget& target,
                            const MacroRegistry& registry, const TranslateOptions& options = {});
TranslationOutput translate_expr(const ExprPtr& expr, const CasTarget& target,
                                 const MacroRegistry& registry,
                                 const TranslateOptions& options = {});

// `call` is a primed macro call with a diff-slot.
std::string translate_prime(const MathNode& call, const CasTarget& target,
                            const MacroRegistry& registry);

// Variable of differentiation shared by the Wronskian elements.
std::string extract_wronskian_variable(const std::vector<ExprPtr>& elements);
std::string extract_wronskian_variable(const std::vector<MathNode>& elements,
                                       const MacroRegistry& registry);

// Target spelling of a dialect identifier (`\alpha` -> `\[Alpha]` / `alpha`).
std::string target_identifier(const std::string& name, const CasTarget& target);

}  // namespace mathcast
