#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mathcast {

enum class NodeKind {
  kMacroCall,
  kIdentifier,
  kNumber,
  kGroup,
  kRelationChain,
  kOperator,
  kFraction,
  kBinomial,
  kSubSup,
  kDifferential,
  kSequence,
  kPlaceholder,
};

enum class Delimiter { kNone, kBrace, kParen, kBracket, kSetBrace, kAbs };

std::string_view node_kind_name(NodeKind kind);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
};

// Parse-tree node. Layout of `children` by kind:
//   macro-call     parameters then arguments, each a sequence
//   identifier     [subscript sequence] when folded from v_s
//   group          [content] (sequence or relation-chain)
//   relation-chain operand, relation, operand, ... (relations are operators)
//   operator       none, or for `\deriv`: [variable, order, function?]
//   fraction       [numerator, denominator]
//   binomial       [top, bottom]
//   sub-sup        [base, sub?, sup?] as flagged by has_sub / has_sup
//   differential   [order] when has_sup
//   sequence       items
struct MathNode {
  NodeKind kind = NodeKind::kSequence;
  // Macro name without backslash, identifier name (`z_1`, `\alpha`),
  // number literal, operator/relation symbol, fraction command,
  // differential variable, or placeholder index.
  std::string text;
  std::vector<MathNode> children;
  int depth = 0;
  Span span;
  Delimiter delimiter = Delimiter::kNone;
  int primes = 0;
  int at_count = 0;
  int param_count = 0;
  bool has_sub = false;
  bool has_sup = false;
  // Builtin grammar call (\sqrt, \Re, \Im) rather than a registry macro.
  bool builtin = false;
  // A power written between the macro name and `@` (\sin^2@{x}).
  bool power_on_call = false;
  // The first parameter is a bracketed optional parameter.
  bool optional_param = false;

  const MathNode* sub() const { return has_sub ? &children[1] : nullptr; }
  const MathNode* sup() const {
    return has_sup ? &children[has_sub ? 2 : 1] : nullptr;
  }
  bool is_operator(std::string_view symbol) const {
    return kind == NodeKind::kOperator && text == symbol;
  }
};

MathNode make_node(NodeKind kind, std::string text = {});
MathNode make_sequence(std::vector<MathNode> items);

// Recomputes depth from `base` downward.
void assign_depths(MathNode& node, int base = 0);

// Renders a tree back to dialect text that reparses to the same structure.
std::string render(const MathNode& node);

// Structural equality ignoring spans and depths.
bool structurally_equal(const MathNode& a, const MathNode& b);

// Debug form such as (seq (id x) (op +) (num 1)).
std::string debug_string(const MathNode& node);

bool is_relation_symbol(std::string_view symbol);
// `\le` -> `\leq`, `\ne` -> `\neq` and similar.
std::string normalize_relation(std::string_view symbol);

}  // namespace mathcast
