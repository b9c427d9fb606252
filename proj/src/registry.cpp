#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mathcast/error.hpp"
#include "mathcast/registry.hpp"

#ifndef MATHCAST_DEFAULT_REGISTRY
#define MATHCAST_DEFAULT_REGISTRY "data/registry.txt"
#endif

namespace mathcast {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = line.find(" | ", start);
    if (at == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, at - start)));
    start = at + 3;
  }
}

// Indices of `$k` / `$(k)` occurrences in a dialect template.
std::vector<int> placeholder_indices(std::string_view text) {
  std::vector<int> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '$') continue;
    std::size_t p = i + 1;
    if (p < text.size() && text[p] == '(') ++p;
    std::size_t d = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (p > d) out.push_back(std::stoi(std::string(text.substr(d, p - d))));
  }
  return out;
}

void check_slots(const std::string& what, std::string_view text, int slots) {
  for (int idx : placeholder_indices(text)) {
    if (idx >= slots) {
      throw Error(ErrorCode::kBadPlaceholder,
                  what + " uses $" + std::to_string(idx) + " but has " + std::to_string(slots) +
                      " slot(s)");
    }
  }
}

int parse_int(const std::string& field, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(field, &used);
    if (used == field.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kRegistryFormat, "bad " + what + " '" + field + "'");
}

void apply_meta(MacroEntry& entry, const std::string& key, const std::string& value) {
  if (key == "diff-slot") {
    int slot = parse_int(value, "diff-slot");
    if (slot < 1 || slot > entry.arg_count) {
      throw Error(ErrorCode::kRegistryFormat,
                  entry.name + ": diff-slot " + value + " is not an argument index");
    }
    entry.diff_slot = slot;
  } else if (key.rfind("package.", 0) == 0) {
    entry.packages[key.substr(8)] = value;
  } else if (key == "constraint") {
    check_slots(entry.name + " constraint", value, entry.slot_count());
    entry.constraints.push_back({value});
  } else if (key == "alternative") {
    check_slots(entry.name + " alternative", value, entry.slot_count());
    entry.alternative = value;
  } else if (key == "definition") {
    check_slots(entry.name + " definition", value, entry.slot_count());
    entry.definition = value;
  } else if (key == "formals") {
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) entry.formals.push_back(trim(item));
  } else if (key == "eval") {
    entry.eval = value;
  } else if (key == "optional") {
    entry.optional_default = value;
  } else if (key == "kind") {
    entry.kind = value;
  } else if (key == "semantic") {
    entry.semantic = value != "false";
  } else if (key == "branch-cut") {
    entry.branch_cut_note = value;
  } else {
    throw Error(ErrorCode::kRegistryFormat, entry.name + ": unknown meta key '" + key + "'");
  }
}

MacroEntry parse_macro_record(const std::vector<std::string>& fields) {
  if (fields.size() < 3) throw Error(ErrorCode::kRegistryFormat, "macro record needs name | params | args");
  MacroEntry entry;
  entry.name = fields[0];
  entry.param_count = parse_int(fields[1], "param count");
  entry.arg_count = parse_int(fields[2], "arg count");
  for (std::size_t i = 3; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    std::size_t colon = f.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::kRegistryFormat, "field without ':' in " + entry.name);
    std::string key = f.substr(0, colon);
    std::string value = f.substr(colon + 1);
    if (key == "meta") {
      std::size_t eq = value.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kRegistryFormat, "meta without '=' in " + entry.name);
      apply_meta(entry, value.substr(0, eq), value.substr(eq + 1));
    } else {
      if (entry.translations.count(key)) {
        throw Error(ErrorCode::kRegistryFormat, entry.name + ": duplicate template for " + key);
      }
      entry.translations.emplace(key, TranslationPattern(value, entry.slot_count()));
    }
  }
  if (entry.optional_default && entry.param_count == 0) {
    throw Error(ErrorCode::kRegistryFormat, entry.name + ": optional parameter without parameters");
  }
  return entry;
}

}  // namespace

TranslationPattern::TranslationPattern(std::string text, int slot_count) : text_(std::move(text)) {
  if (text_.empty()) throw Error(ErrorCode::kBadPlaceholder, "empty template");
  std::vector<bool> used;
  std::string lit;
  for (std::size_t i = 0; i < text_.size(); ++i) {
    char c = text_[i];
    std::size_t p = i + 1;
    bool wrap = p < text_.size() && text_[p] == '(';
    if (wrap) ++p;
    std::size_t d = p;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
    if (c != '$' || p == d || (wrap && (p >= text_.size() || text_[p] != ')'))) {
      lit += c;
      continue;
    }
    int idx = std::stoi(text_.substr(d, p - d));
    if (idx >= slot_count) {
      throw Error(ErrorCode::kBadPlaceholder, "template '" + text_ + "' uses $" +
                                                  std::to_string(idx) + " with " +
                                                  std::to_string(slot_count) + " slot(s)");
    }
    if (!lit.empty()) pieces_.push_back({lit, -1, false});
    lit.clear();
    pieces_.push_back({"", idx, wrap});
    if (static_cast<int>(used.size()) <= idx) used.resize(idx + 1, false);
    used[idx] = true;
    i = wrap ? p : p - 1;
  }
  if (!lit.empty()) pieces_.push_back({lit, -1, false});
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (!used[k]) {
      throw Error(ErrorCode::kBadPlaceholder,
                  "template '" + text_ + "' skips $" + std::to_string(k));
    }
  }
  placeholder_count_ = static_cast<int>(used.size());
}

bool TranslationPattern::wraps(int index) const {
  for (const Piece& p : pieces_) {
    if (p.index == index && p.wrap) return true;
  }
  return false;
}

std::string TranslationPattern::instantiate(const std::vector<std::string>& args,
                                            const std::vector<bool>& compound) const {
  std::string out;
  for (const Piece& p : pieces_) {
    if (p.index < 0) {
      out += p.literal;
      continue;
    }
    const std::string& a = args.at(p.index);
    bool paren = p.wrap && p.index < static_cast<int>(compound.size()) && compound[p.index];
    out += paren ? "(" + a + ")" : a;
  }
  return out;
}

std::string MacroEntry::with_formals(const std::string& templ) const {
  std::string out;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] == '$') {
      std::size_t p = i + 1;
      bool wrap = p < templ.size() && templ[p] == '(';
      if (wrap) ++p;
      std::size_t d = p;
      while (p < templ.size() && std::isdigit(static_cast<unsigned char>(templ[p]))) ++p;
      if (p > d) {
        int idx = std::stoi(templ.substr(d, p - d));
        out += idx < static_cast<int>(formals.size()) ? formals[idx] : templ.substr(i, p - i);
        i = (wrap && p < templ.size() && templ[p] == ')') ? p : p - 1;
        continue;
      }
    }
    out += templ[i];
  }
  return out;
}

const MacroEntry& MacroRegistry::lookup(std::string_view name) const {
  const MacroEntry* e = find(name);
  if (!e) throw Error(ErrorCode::kNotFound, "no macro named '" + std::string(name) + "'");
  return *e;
}

const MacroEntry* MacroRegistry::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

void MacroRegistry::add(MacroEntry entry) {
  if (entries_.count(entry.name)) {
    throw Error(ErrorCode::kDuplicateMacro, "macro '" + entry.name + "' defined twice");
  }
  std::string key = entry.name;
  entries_.emplace(std::move(key), std::move(entry));
}

void MacroRegistry::add_blueprint(Blueprint blueprint) {
  std::stringstream ss(blueprint.pattern);
  std::string item;
  blueprint.items.clear();
  while (ss >> item) blueprint.items.push_back(item);
  blueprints_.push_back(std::move(blueprint));
}

bool MacroRegistry::rule_enabled(std::string_view name) const {
  auto it = rules_.find(name);
  return it != rules_.end() && it->second;
}

std::vector<std::string> MacroRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

void MacroRegistry::require_targets(const std::vector<std::string>& targets) const {
  for (const auto& [name, entry] : entries_) {
    if (entry.kind == "wronskian" || entry.alternative) continue;
    for (const std::string& cas : targets) {
      if (!entry.has_translation(cas)) {
        throw Error(ErrorCode::kMissingTranslation,
                    "macro '" + name + "' has no " + cas + " translation or alternative");
      }
    }
  }
}

MacroRegistry parse_registry(std::string_view text, const std::vector<std::string>& required_targets) {
  MacroRegistry reg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    try {
      std::vector<std::string> fields = split_fields(line);
      if (fields[0] == "blueprint") {
        if (fields.size() != 3) throw Error(ErrorCode::kRegistryFormat, "blueprint | pattern | kind");
        Blueprint bp;
        bp.pattern = fields[1];
        if (fields[2] == "bounds") {
          bp.kind = BlueprintKind::kBounds;
        } else if (fields[2] == "limit") {
          bp.kind = BlueprintKind::kLimit;
        } else {
          throw Error(ErrorCode::kRegistryFormat, "unknown blueprint kind '" + fields[2] + "'");
        }
        reg.add_blueprint(std::move(bp));
      } else if (fields[0] == "rule") {
        if (fields.size() != 3 || (fields[2] != "on" && fields[2] != "off")) {
          throw Error(ErrorCode::kRegistryFormat, "rule | name | on|off");
        }
        reg.set_rule(fields[1], fields[2] == "on");
      } else {
        reg.add(parse_macro_record(fields));
      }
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  reg.require_targets(required_targets);
  return reg;
}

MacroRegistry load_registry(const std::string& path, const std::vector<std::string>& required_targets) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read registry '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_registry(ss.str(), required_targets);
}

std::string resolve_registry_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MATHCAST_REGISTRY"); env && *env) return env;
  return MATHCAST_DEFAULT_REGISTRY;
}

}  // namespace mathcast
