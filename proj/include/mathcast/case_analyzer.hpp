#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mathcast/error.hpp"
#include "mathcast/math_node.hpp"

namespace mathcast {

class MacroRegistry;

struct SymbolUse {
  std::string symbol;
  std::optional<std::string> definition;
  std::optional<std::string> constraint;
};

struct CorpusLine {
  std::string id;
  std::string url;
  std::string latex;
  std::vector<std::string> constraints;
  std::vector<SymbolUse> symbols_used;
  std::vector<std::string> symbols_defined;
  // The line defines a symbol; `defines` names it (a macro name or symbol).
  bool is_definition = false;
  std::string defines;
  // Per-line GenerateConditions override (`False`); empty keeps the default.
  std::string generate_conditions;
};

CorpusLine corpus_line_from_json(const nlohmann::json& j);
nlohmann::json corpus_line_to_json(const CorpusLine& line);
// Throws kIoFailure when unreadable, kConfig on malformed lines.
std::vector<CorpusLine> load_corpus(const std::string& path);

enum class SkipReason {
  kNone,
  kNoSemanticMath,
  kEllipsisApproxAsymptotic,
  kNonMacroDefinition,
  kNoRelation,
};
std::string_view skip_reason_name(SkipReason r);

struct FilterVerdict {
  bool kept = true;
  SkipReason reason = SkipReason::kNone;
};

struct TestCase {
  std::string id;  // <line id>#<split index>
  std::string line_id;
  int split_index = 0;
  MathNode lhs;
  MathNode rhs;
  // One of = \neq < \leq > \geq; empty for a skipped no-relation case.
  std::string relation;
  std::vector<MathNode> constraints;
  std::vector<std::pair<std::string, std::string>> substitutions;
  FilterVerdict verdict;

  // lhs relation rhs as one relation-chain tree.
  MathNode relation_tree() const;
};

// Adjacent operand pairs only. Throws kNoRelation for fewer than 2 operands.
std::vector<TestCase> split_relations(const MathNode& tree, const std::string& line_id = {});

// Two cases with all \pm -> + / \mp -> - and the opposite; unchanged otherwise.
std::vector<TestCase> split_plus_minus(const TestCase& c);
bool contains_plus_minus(const MathNode& node);

// Throws kCyclicDefinition past 32 rounds.
TestCase substitute_definitions(const TestCase& c, const CorpusLine& line,
                                const MacroRegistry& registry);

// Appends instantiated registry constraints of every macro call (recursing
// through alternatives and definitions) that mention a case variable.
TestCase collect_constraints(const TestCase& c, const MacroRegistry& registry);

// Instantiates a slot template (`\Re{$0} > 0`) with argument sequences.
MathNode instantiate_template(const std::string& templ, const std::vector<MathNode>& args,
                              const MacroRegistry& registry);

FilterVerdict filter_case(const MathNode& tree, const CorpusLine& line,
                          const MacroRegistry& registry);

bool has_semantic_macro(const MathNode& node, const MacroRegistry& registry);

// Free identifiers of a case (bound variables of its operators excluded).
std::vector<std::string> case_variables(const TestCase& c, const MacroRegistry& registry);

struct LineAnalysis {
  CorpusLine line;
  FilterVerdict verdict;
  std::vector<TestCase> cases;
  // Set when the line itself fails to parse or analyze.
  std::optional<ErrorCode> error;
  std::string error_message;
};

LineAnalysis analyze_line(const CorpusLine& line, const MacroRegistry& registry);

// Order-insensitive key for additive terms, used to deduplicate constraints.
std::string normalized_key(const MathNode& node);

}  // namespace mathcast
