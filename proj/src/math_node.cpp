#include <cctype>
#include <map>

#include "mathcast/math_node.hpp"

namespace mathcast {
namespace {

bool ends_with_command_word(const std::string& s) {
  std::size_t i = s.size();
  while (i > 0 && std::isalpha(static_cast<unsigned char>(s[i - 1]))) --i;
  return i < s.size() && i > 0 && s[i - 1] == '\\';
}

// Concatenates, inserting a space where tokens would otherwise merge.
void append(std::string& out, const std::string& piece) {
  if (piece.empty()) return;
  if (!out.empty()) {
    char next = piece.front();
    bool letter = std::isalpha(static_cast<unsigned char>(next));
    bool digit = std::isdigit(static_cast<unsigned char>(next)) || next == '.';
    if ((letter && ends_with_command_word(out)) ||
        (digit && std::isdigit(static_cast<unsigned char>(out.back())))) {
      out += ' ';
    }
  }
  out += piece;
}

std::string braced(const MathNode& node) { return "{" + render(node) + "}"; }

std::string render_call_head(const MathNode& node, const MathNode* power) {
  std::string out = "\\" + node.text;
  if (node.builtin) {
    if (node.param_count == 1) out += "[" + render(node.children[0]) + "]";
    out += braced(node.children.back());
    return out;
  }
  out += std::string(node.primes, '\'');
  if (power) out += "^" + braced(*power);
  std::size_t i = 0;
  if (node.optional_param) out += "[" + render(node.children[i++]) + "]";
  for (; i < static_cast<std::size_t>(node.param_count); ++i) {
    out += braced(node.children[i]);
  }
  std::size_t args = node.children.size() - i;
  if (node.at_count > 0) {
    out += std::string(node.at_count, '@');
    for (; i < node.children.size(); ++i) out += braced(node.children[i]);
  } else if (args == 1) {
    out += braced(node.children[i]);
  } else if (args > 1) {
    out += "(";
    for (std::size_t k = i; k < node.children.size(); ++k) {
      if (k > i) out += ",";
      out += render(node.children[k]);
    }
    out += ")";
  }
  return out;
}

}  // namespace

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kMacroCall: return "macro-call";
    case NodeKind::kIdentifier: return "identifier";
    case NodeKind::kNumber: return "number";
    case NodeKind::kGroup: return "group";
    case NodeKind::kRelationChain: return "relation-chain";
    case NodeKind::kOperator: return "operator";
    case NodeKind::kFraction: return "fraction";
    case NodeKind::kBinomial: return "binomial";
    case NodeKind::kSubSup: return "sub-sup";
    case NodeKind::kDifferential: return "differential";
    case NodeKind::kSequence: return "sequence";
    case NodeKind::kPlaceholder: return "placeholder";
  }
  return "?";
}

MathNode make_node(NodeKind kind, std::string text) {
  MathNode node;
  node.kind = kind;
  node.text = std::move(text);
  return node;
}

MathNode make_sequence(std::vector<MathNode> items) {
  MathNode node = make_node(NodeKind::kSequence);
  if (!items.empty()) {
    node.span = {items.front().span.begin, items.back().span.end};
  }
  node.children = std::move(items);
  return node;
}

void assign_depths(MathNode& node, int base) {
  node.depth = base;
  for (MathNode& child : node.children) assign_depths(child, base + 1);
}

std::string render(const MathNode& node) {
  switch (node.kind) {
    case NodeKind::kSequence:
    case NodeKind::kRelationChain: {
      std::string out;
      for (const MathNode& child : node.children) append(out, render(child));
      return out;
    }
    case NodeKind::kIdentifier:
    case NodeKind::kNumber:
    case NodeKind::kPlaceholder:
      return node.text + std::string(node.primes, '\'');
    case NodeKind::kOperator:
      if (node.text == "\\deriv") {
        std::string out = "\\deriv";
        if (!node.children[1].children.empty()) out += "[" + render(node.children[1]) + "]";
        out += node.children.size() > 2 ? braced(node.children[2]) : "{}";
        out += braced(node.children[0]);
        return out;
      }
      return node.text;
    case NodeKind::kGroup: {
      static const std::map<Delimiter, std::pair<std::string, std::string>> kDelims = {
          {Delimiter::kNone, {"{", "}"}},      {Delimiter::kBrace, {"{", "}"}},
          {Delimiter::kParen, {"(", ")"}},     {Delimiter::kBracket, {"[", "]"}},
          {Delimiter::kSetBrace, {"\\{", "\\}"}}, {Delimiter::kAbs, {"|", "|"}},
      };
      const auto& d = kDelims.at(node.delimiter);
      return d.first + render(node.children[0]) + d.second;
    }
    case NodeKind::kFraction:
      return node.text + braced(node.children[0]) + braced(node.children[1]);
    case NodeKind::kBinomial:
      return "\\binom" + braced(node.children[0]) + braced(node.children[1]);
    case NodeKind::kSubSup: {
      if (node.power_on_call) return render_call_head(node.children[0], node.sup());
      std::string out = render(node.children[0]);
      if (node.has_sub) out += "_" + braced(*node.sub());
      if (node.has_sup) out += "^" + braced(*node.sup());
      return out;
    }
    case NodeKind::kDifferential:
      return node.text.empty() ? "\\mathrm{d}" : "\\mathrm{d}" + node.text;
    case NodeKind::kMacroCall:
      return render_call_head(node, nullptr);
  }
  return {};
}

bool structurally_equal(const MathNode& a, const MathNode& b) {
  if (a.kind != b.kind || a.text != b.text || a.delimiter != b.delimiter ||
      a.primes != b.primes || a.at_count != b.at_count ||
      a.param_count != b.param_count || a.has_sub != b.has_sub ||
      a.has_sup != b.has_sup || a.builtin != b.builtin ||
      a.power_on_call != b.power_on_call || a.optional_param != b.optional_param || a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

std::string debug_string(const MathNode& node) {
  std::string out = "(" + std::string(node_kind_name(node.kind));
  if (!node.text.empty()) out += " " + node.text;
  if (node.primes) out += " primes=" + std::to_string(node.primes);
  for (const MathNode& child : node.children) out += " " + debug_string(child);
  return out + ")";
}

bool is_relation_symbol(std::string_view symbol) {
  static const char* kSymbols[] = {
      "=",     "<",      ">",        "\\leq",     "\\le",      "\\geq",    "\\ge",
      "\\neq", "\\ne",   "\\in",     "\\notin",   "\\to",      "\\downarrow",
      "\\uparrow", "\\searrow", "\\nearrow", "\\approx", "\\sim", "\\simeq",
      "\\equiv", "\\ll", "\\gg", "\\subset", "\\subseteq",
  };
  for (const char* s : kSymbols) {
    if (symbol == s) return true;
  }
  return false;
}

std::string normalize_relation(std::string_view symbol) {
  if (symbol == "\\le") return "\\leq";
  if (symbol == "\\ge") return "\\geq";
  if (symbol == "\\ne") return "\\neq";
  return std::string(symbol);
}

}  // namespace mathcast
