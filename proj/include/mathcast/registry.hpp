#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mathcast {

// Target-syntax template with $0..$k placeholders. `$(k)` marks a
// placeholder whose argument is wrapped in parentheses when compound.
class TranslationPattern {
 public:
  TranslationPattern() = default;
  // Throws Error(kBadPlaceholder) when an index reaches `slot_count` or the
  // used indices are not contiguous from $0.
  TranslationPattern(std::string text, int slot_count);

  const std::string& text() const { return text_; }
  // Highest placeholder index + 1.
  int placeholder_count() const { return placeholder_count_; }
  bool wraps(int index) const;

  // `compound[i]` tells whether args[i] needs parentheses under `$(i)`.
  std::string instantiate(const std::vector<std::string>& args,
                          const std::vector<bool>& compound) const;

 private:
  struct Piece {
    std::string literal;
    int index = -1;
    bool wrap = false;
  };
  std::string text_;
  std::vector<Piece> pieces_;
  int placeholder_count_ = 0;
};

struct ConstraintTemplate {
  // Dialect relation over slots, e.g. `\Re{$0} > 0`.
  std::string expression;
};

struct MacroEntry {
  std::string name;
  int param_count = 0;
  int arg_count = 0;
  std::map<std::string, TranslationPattern> translations;
  // 1-based index among the arguments after `@`.
  std::optional<int> diff_slot;
  std::map<std::string, std::string> packages;
  std::vector<ConstraintTemplate> constraints;
  // Dialect expression over slots used for targets without a translation.
  std::optional<std::string> alternative;
  // Defining expression; only harvested for recursive constraints.
  std::optional<std::string> definition;
  // Formal slot names, used for display (`\nu,z`).
  std::vector<std::string> formals;
  // Built-in evaluator function id.
  std::string eval;
  // When set, the first parameter is optional `[...]` with this default.
  std::optional<std::string> optional_default;
  // "" for ordinary functions, or derivative | wronskian | constant.
  std::string kind;
  // False for grammar helpers (binom) that do not count as semantic math.
  bool semantic = true;
  std::string branch_cut_note;

  int slot_count() const { return param_count + arg_count; }
  // Placeholder index of the diff-slot argument.
  int diff_slot_index() const { return param_count + *diff_slot - 1; }
  bool has_translation(const std::string& cas) const {
    return translations.count(cas) > 0;
  }
  // Substitutes `formals` into a slot template (for display).
  std::string with_formals(const std::string& templ) const;
};

enum class BlueprintKind { kBounds, kLimit };

struct Blueprint {
  std::string pattern;
  BlueprintKind kind = BlueprintKind::kBounds;
  // Whitespace-separated pattern items.
  std::vector<std::string> items;
};

class MacroRegistry {
 public:
  const MacroEntry& lookup(std::string_view name) const;
  const MacroEntry* find(std::string_view name) const;
  void add(MacroEntry entry);
  void add_blueprint(Blueprint blueprint);
  void set_rule(const std::string& name, bool on) { rules_[name] = on; }
  bool rule_enabled(std::string_view name) const;

  const std::vector<Blueprint>& blueprints() const { return blueprints_; }
  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }

  // Throws kMissingTranslation when some macro has neither a translation
  // nor an alternative definition for one of `targets`.
  void require_targets(const std::vector<std::string>& targets) const;

 private:
  std::map<std::string, MacroEntry, std::less<>> entries_;
  std::vector<Blueprint> blueprints_;
  std::map<std::string, bool, std::less<>> rules_;
};

MacroRegistry parse_registry(std::string_view text,
                             const std::vector<std::string>& required_targets = {});
MacroRegistry load_registry(const std::string& path,
                            const std::vector<std::string>& required_targets = {});

// Path from, in order: explicit flag value, MATHCAST_REGISTRY, built-in default.
std::string resolve_registry_path(const std::string& flag_value);

}  // namespace mathcast
