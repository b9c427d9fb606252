#include "mathcast/case_analyzer.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mathcast/expr.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {
namespace {

constexpr int kMaxSubstitutionRounds = 32;
constexpr int kMaxConstraintDepth = 8;

const std::set<std::string> kCaseRelations = {"=", "\\neq", "<", "\\leq", ">", "\\geq"};

void visit(const MathNode& node, const std::function<void(const MathNode&)>& fn) {
  fn(node);
  for (const MathNode& c : node.children) visit(c, fn);
}

bool any_of_nodes(const MathNode& node, const std::function<bool(const MathNode&)>& pred) {
  if (pred(node)) return true;
  for (const MathNode& c : node.children) {
    if (any_of_nodes(c, pred)) return true;
  }
  return false;
}

MathNode as_sequence(const MathNode& n) {
  if (n.kind == NodeKind::kSequence) return n;
  return make_sequence({n});
}

MathNode paren_group(const MathNode& seq) {
  MathNode g = make_node(NodeKind::kGroup);
  g.delimiter = Delimiter::kParen;
  g.children.push_back(seq);
  return g;
}

MathNode as_item(const MathNode& seq) {
  if (seq.kind == NodeKind::kSequence && seq.children.size() == 1) return seq.children[0];
  return paren_group(as_sequence(seq));
}

std::set<std::string> identifiers(const MathNode& node) {
  std::set<std::string> out;
  visit(node, [&](const MathNode& n) {
    if (n.kind == NodeKind::kIdentifier) out.insert(n.text);
    if (n.kind == NodeKind::kDifferential) out.insert(n.text);
  });
  return out;
}

std::size_t placeholder_index(const MathNode& n) {
  std::string digits;
  for (char c : n.text) {
    if (c >= '0' && c <= '9') digits += c;
  }
  return std::stoul(digits);
}

void substitute_placeholders(MathNode& node, const std::vector<MathNode>& args) {
  std::vector<MathNode> out;
  bool seq = node.kind == NodeKind::kSequence;
  const std::size_t n = node.children.size();
  for (std::size_t i = 0; i < n; ++i) {
    MathNode& c = node.children[i];
    if (c.kind != NodeKind::kPlaceholder) {
      substitute_placeholders(c, args);
      out.push_back(std::move(c));
      continue;
    }
    std::size_t idx = placeholder_index(c);
    if (idx >= args.size()) {
      throw Error(ErrorCode::kBadPlaceholder, "template slot $" + std::to_string(idx) + " unbound");
    }
    MathNode arg = as_sequence(args[idx]);
    if (!seq) {
      out.push_back(as_item(arg));
      continue;
    }
    const MathNode& prev = i == 0 ? node : node.children[i - 1];
    bool additive = (i == 0 || prev.is_operator("+")) &&
                    (i + 1 == n || node.children[i + 1].is_operator("+") ||
                     node.children[i + 1].is_operator("-"));
    if (additive || arg.children.size() == 1) {
      for (const MathNode& item : arg.children) out.push_back(item);
    } else {
      out.push_back(paren_group(arg));
    }
  }
  node.children = std::move(out);
}

MathNode resolve_pm(const MathNode& node, bool first) {
  MathNode out = node;
  if (out.kind == NodeKind::kOperator) {
    if (out.text == "\\pm") out.text = first ? "+" : "-";
    else if (out.text == "\\mp") out.text = first ? "-" : "+";
  }
  for (MathNode& c : out.children) c = resolve_pm(c, first);
  return out;
}

// Replaces identifier `symbol`; returns whether anything changed.
bool replace_symbol(MathNode& node, const std::string& symbol, const MathNode& replacement) {
  bool changed = false;
  if (node.kind == NodeKind::kSequence && node.children.size() == 1) {
    const MathNode& only = node.children[0];
    if (only.kind == NodeKind::kIdentifier && only.text == symbol && only.primes == 0 &&
        only.children.empty()) {
      node.children = replacement.children;
      return true;
    }
  }
  for (MathNode& c : node.children) {
    if (c.kind == NodeKind::kIdentifier && c.text == symbol && c.primes == 0 &&
        c.children.empty()) {
      c = as_item(replacement);
      changed = true;
    } else {
      changed = replace_symbol(c, symbol, replacement) || changed;
    }
  }
  return changed;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c != ' ') out += c;
  }
  return out;
}

std::string term_key(const std::vector<const MathNode*>& items) {
  std::string s;
  for (const MathNode* n : items) s += normalized_key(*n) + " ";
  return s;
}

}  // namespace

std::string_view skip_reason_name(SkipReason r) {
  switch (r) {
    case SkipReason::kNone: return "";
    case SkipReason::kNoSemanticMath: return "no-semantic-math";
    case SkipReason::kEllipsisApproxAsymptotic: return "ellipsis-approx-asymptotic";
    case SkipReason::kNonMacroDefinition: return "non-macro-definition";
    case SkipReason::kNoRelation: return "no-relation";
  }
  return "";
}

CorpusLine corpus_line_from_json(const nlohmann::json& j) {
  CorpusLine line;
  line.id = j.at("id").get<std::string>();
  line.url = j.value("url", "");
  line.latex = j.at("latex").get<std::string>();
  line.constraints = j.value("constraints", std::vector<std::string>{});
  if (j.contains("symbols_used")) {
    for (const auto& s : j.at("symbols_used")) {
      SymbolUse use;
      use.symbol = s.at("symbol").get<std::string>();
      if (s.contains("definition")) use.definition = s.at("definition").get<std::string>();
      if (s.contains("constraint")) use.constraint = s.at("constraint").get<std::string>();
      line.symbols_used.push_back(use);
    }
  }
  line.symbols_defined = j.value("symbols_defined", std::vector<std::string>{});
  line.is_definition = j.value("is_definition", false);
  line.defines = j.value("defines", "");
  line.generate_conditions = j.value("generate_conditions", "");
  return line;
}

nlohmann::json corpus_line_to_json(const CorpusLine& line) {
  nlohmann::json j{{"id", line.id}, {"url", line.url}, {"latex", line.latex}};
  if (!line.constraints.empty()) j["constraints"] = line.constraints;
  if (!line.symbols_used.empty()) {
    nlohmann::json uses = nlohmann::json::array();
    for (const SymbolUse& s : line.symbols_used) {
      nlohmann::json u{{"symbol", s.symbol}};
      if (s.definition) u["definition"] = *s.definition;
      if (s.constraint) u["constraint"] = *s.constraint;
      uses.push_back(u);
    }
    j["symbols_used"] = uses;
  }
  if (!line.symbols_defined.empty()) j["symbols_defined"] = line.symbols_defined;
  if (line.is_definition) {
    j["is_definition"] = true;
    j["defines"] = line.defines;
  }
  if (!line.generate_conditions.empty()) j["generate_conditions"] = line.generate_conditions;
  return j;
}

std::vector<CorpusLine> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read corpus " + path);
  std::vector<CorpusLine> lines;
  std::string text;
  int number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lines.push_back(corpus_line_from_json(nlohmann::json::parse(text)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kConfig,
                  path + ":" + std::to_string(number) + ": malformed corpus line: " + e.what());
    }
  }
  return lines;
}

MathNode TestCase::relation_tree() const {
  if (relation.empty()) return lhs;
  MathNode chain = make_node(NodeKind::kRelationChain);
  chain.children = {as_sequence(lhs), make_node(NodeKind::kOperator, relation), as_sequence(rhs)};
  return chain;
}

std::vector<TestCase> split_relations(const MathNode& tree, const std::string& line_id) {
  const MathNode* chain = &tree;
  if (chain->kind == NodeKind::kSequence && chain->children.size() == 1 &&
      chain->children[0].kind == NodeKind::kRelationChain) {
    chain = &chain->children[0];
  }
  if (chain->kind != NodeKind::kRelationChain || chain->children.size() < 3) {
    throw Error(ErrorCode::kNoRelation, "expression has no relation");
  }
  std::vector<TestCase> cases;
  for (std::size_t i = 0; i + 2 < chain->children.size(); i += 2) {
    TestCase c;
    c.line_id = line_id;
    c.lhs = chain->children[i];
    c.relation = normalize_relation(chain->children[i + 1].text);
    c.rhs = chain->children[i + 2];
    cases.push_back(std::move(c));
  }
  return cases;
}

bool contains_plus_minus(const MathNode& node) {
  return any_of_nodes(node, [](const MathNode& n) {
    return n.is_operator("\\pm") || n.is_operator("\\mp");
  });
}

std::vector<TestCase> split_plus_minus(const TestCase& c) {
  bool any = contains_plus_minus(c.lhs) || contains_plus_minus(c.rhs);
  for (const MathNode& k : c.constraints) any = any || contains_plus_minus(k);
  if (!any) return {c};
  std::vector<TestCase> out;
  for (bool first : {true, false}) {
    TestCase v = c;
    v.lhs = resolve_pm(c.lhs, first);
    v.rhs = resolve_pm(c.rhs, first);
    for (MathNode& k : v.constraints) k = resolve_pm(k, first);
    out.push_back(std::move(v));
  }
  return out;
}

TestCase substitute_definitions(const TestCase& c, const CorpusLine& line,
                                const MacroRegistry& registry) {
  std::vector<std::pair<std::string, MathNode>> defs;
  for (const SymbolUse& use : line.symbols_used) {
    if (!use.definition) continue;
    MathNode tree = parse_latex(*use.definition, registry);
    if (tree.kind != NodeKind::kRelationChain || tree.children.size() != 3 ||
        tree.children[1].text != "=") {
      continue;
    }
    const MathNode& lhs = tree.children[0];
    std::string symbol = strip_spaces(use.symbol);
    if (lhs.children.size() != 1 || lhs.children[0].kind != NodeKind::kIdentifier ||
        lhs.children[0].text != symbol || !lhs.children[0].children.empty()) {
      continue;
    }
    defs.emplace_back(symbol, as_sequence(tree.children[2]));
  }
  TestCase out = c;
  if (defs.empty()) return out;
  std::set<std::string> applied;
  for (int round = 0;; ++round) {
    bool changed = false;
    for (const auto& [symbol, rhs] : defs) {
      bool hit = replace_symbol(out.lhs, symbol, rhs);
      hit = replace_symbol(out.rhs, symbol, rhs) || hit;
      for (MathNode& k : out.constraints) hit = replace_symbol(k, symbol, rhs) || hit;
      if (hit && applied.insert(symbol).second) out.substitutions.emplace_back(symbol, render(rhs));
      changed = changed || hit;
    }
    if (!changed) break;
    if (round + 1 >= kMaxSubstitutionRounds) {
      throw Error(ErrorCode::kCyclicDefinition, "definitions do not reach a fixpoint");
    }
  }
  assign_depths(out.lhs);
  assign_depths(out.rhs);
  return out;
}

MathNode instantiate_template(const std::string& templ, const std::vector<MathNode>& args,
                              const MacroRegistry& registry) {
  MathNode tree = parse_latex(templ, registry, ParseOptions{true});
  if (tree.kind == NodeKind::kPlaceholder) tree = make_sequence({tree});
  substitute_placeholders(tree, args);
  assign_depths(tree);
  return tree;
}

std::vector<std::string> case_variables(const TestCase& c, const MacroRegistry& registry) {
  MathNode tree = c.relation_tree();
  try {
    std::set<std::string> vars = free_variables(build_expr(tree, registry));
    return {vars.begin(), vars.end()};
  } catch (const Error&) {
    std::set<std::string> ids = identifiers(tree);
    ids.erase("e");
    return {ids.begin(), ids.end()};
  }
}

TestCase collect_constraints(const TestCase& c, const MacroRegistry& registry) {
  TestCase out = c;
  std::vector<std::string> var_list = case_variables(c, registry);
  std::set<std::string> vars(var_list.begin(), var_list.end());
  std::set<std::string> keys;
  for (const MathNode& k : out.constraints) keys.insert(normalized_key(k));
  std::set<std::string> visited;

  std::function<void(const MathNode&, int)> walk = [&](const MathNode& n, int depth) {
    if (n.kind == NodeKind::kMacroCall && !n.builtin) {
      const MacroEntry* entry = registry.find(n.text);
      if (entry && visited.insert(render(n)).second) {
        for (const ConstraintTemplate& t : entry->constraints) {
          MathNode k;
          try {
            k = instantiate_template(t.expression, n.children, registry);
          } catch (const Error&) {
            continue;
          }
          std::set<std::string> ids = identifiers(k);
          bool relevant = std::any_of(ids.begin(), ids.end(),
                                      [&](const std::string& id) { return vars.count(id) > 0; });
          if (relevant && keys.insert(normalized_key(k)).second) out.constraints.push_back(k);
        }
        if (depth < kMaxConstraintDepth) {
          for (const std::optional<std::string>* body : {&entry->alternative, &entry->definition}) {
            if (!*body) continue;
            try {
              walk(instantiate_template(**body, n.children, registry), depth + 1);
            } catch (const Error&) {
            }
          }
        }
      }
    }
    for (const MathNode& ch : n.children) walk(ch, depth);
  };
  walk(c.lhs, 0);
  walk(c.rhs, 0);
  return out;
}

bool has_semantic_macro(const MathNode& node, const MacroRegistry& registry) {
  return any_of_nodes(node, [&](const MathNode& n) {
    if (n.kind != NodeKind::kMacroCall || n.builtin) return false;
    const MacroEntry* e = registry.find(n.text);
    return e && e->semantic;
  });
}

FilterVerdict filter_case(const MathNode& tree, const CorpusLine& line,
                          const MacroRegistry& registry) {
  bool approx = any_of_nodes(tree, [](const MathNode& n) {
    if (n.kind == NodeKind::kOperator) {
      return n.text == "\\cdots" || n.text == "\\dots" || n.text == "\\ldots" ||
             n.text == "\\approx" || n.text == "\\sim" || n.text == "\\simeq";
    }
    if (n.kind == NodeKind::kSequence) {
      for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
        const MathNode& a = n.children[i];
        const MathNode& b = n.children[i + 1];
        if (a.kind == NodeKind::kIdentifier && a.text == "O" && b.kind == NodeKind::kGroup &&
            b.delimiter == Delimiter::kParen) {
          return true;
        }
      }
    }
    return false;
  });
  if (approx) return {false, SkipReason::kEllipsisApproxAsymptotic};
  if (line.is_definition) {
    std::string name = line.defines;
    if (!name.empty() && name[0] == '\\') name.erase(0, 1);
    if (name.empty() || !registry.find(name)) return {false, SkipReason::kNonMacroDefinition};
  }
  const MathNode* top = &tree;
  if (top->kind == NodeKind::kSequence && top->children.size() == 1) top = &top->children[0];
  if (top->kind != NodeKind::kRelationChain) return {false, SkipReason::kNoRelation};
  if (!has_semantic_macro(tree, registry)) return {false, SkipReason::kNoSemanticMath};
  return {};
}

LineAnalysis analyze_line(const CorpusLine& line, const MacroRegistry& registry) {
  LineAnalysis a;
  a.line = line;
  MathNode tree;
  std::vector<MathNode> attached;
  try {
    tree = parse_latex(line.latex, registry);
    for (const std::string& k : line.constraints) attached.push_back(parse_latex(k, registry));
    for (const SymbolUse& use : line.symbols_used) {
      if (use.constraint) attached.push_back(parse_latex(*use.constraint, registry));
    }
  } catch (const Error& e) {
    a.error = e.code();
    a.error_message = e.what();
    a.verdict = {false, SkipReason::kNone};
    return a;
  }
  a.verdict = filter_case(tree, line, registry);

  std::vector<TestCase> pairs;
  try {
    pairs = split_relations(tree, line.id);
  } catch (const Error&) {
    TestCase c;
    c.line_id = line.id;
    c.lhs = tree;
    pairs.push_back(std::move(c));
  }
  int index = 0;
  for (TestCase& p : pairs) {
    p.constraints = attached;
    for (TestCase& c : split_plus_minus(p)) {
      c.split_index = index++;
      c.id = line.id + "#" + std::to_string(c.split_index);
      if (c.relation.empty()) {
        c.verdict = {false, SkipReason::kNoRelation};
      } else {
        c.verdict = a.verdict;
      }
      if (c.verdict.kept) {
        try {
          c = collect_constraints(substitute_definitions(c, line, registry), registry);
        } catch (const Error& e) {
          a.error = e.code();
          a.error_message = e.what();
        }
      }
      a.cases.push_back(std::move(c));
    }
  }
  return a;
}

std::string normalized_key(const MathNode& node) {
  if (node.kind == NodeKind::kSequence) {
    std::vector<std::string> terms;
    std::vector<const MathNode*> current;
    char sign = '+';
    auto flush = [&] {
      if (!current.empty()) terms.push_back(std::string(1, sign) + term_key(current));
      current.clear();
    };
    for (const MathNode& c : node.children) {
      if (c.is_operator("+") || c.is_operator("-")) {
        flush();
        sign = c.text[0];
        continue;
      }
      current.push_back(&c);
    }
    flush();
    std::sort(terms.begin(), terms.end());
    std::string s = "[";
    for (const std::string& t : terms) s += t;
    return s + "]";
  }
  std::ostringstream os;
  os << node_kind_name(node.kind) << ':' << node.text << ':' << node.primes << ':'
     << static_cast<int>(node.delimiter) << '(';
  for (const MathNode& c : node.children) os << normalized_key(c) << ',';
  os << ')';
  return os.str();
}

}  // namespace mathcast
