#include <algorithm>

#include "mathcast/error.hpp"
#include "mathcast/meom.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {
namespace {

MathNode as_sequence(const MathNode& node) {
  if (node.kind == NodeKind::kSequence) return node;
  MathNode seq = make_sequence({node});
  seq.span = node.span;
  return seq;
}

MathNode integer_node(long long v) {
  MathNode num = make_node(NodeKind::kNumber, std::to_string(v < 0 ? -v : v));
  if (v >= 0) return make_sequence({num});
  return make_sequence({make_node(NodeKind::kOperator, "-"), num});
}

std::optional<std::string> single_identifier(const MathNode& operand) {
  const MathNode* n = &operand;
  if (n->kind == NodeKind::kSequence) {
    if (n->children.size() != 1) return std::nullopt;
    n = &n->children[0];
  }
  if (n->kind != NodeKind::kIdentifier || n->primes != 0) return std::nullopt;
  return n->text;
}

std::optional<std::vector<std::string>> identifier_list(const MathNode& operand) {
  if (auto one = single_identifier(operand)) return std::vector<std::string>{*one};
  if (operand.kind != NodeKind::kSequence || operand.children.size() % 2 == 0) return std::nullopt;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < operand.children.size(); ++i) {
    const MathNode& c = operand.children[i];
    if (i % 2 == 1) {
      if (!c.is_operator(",")) return std::nullopt;
      continue;
    }
    if (c.kind != NodeKind::kIdentifier || c.primes != 0) return std::nullopt;
    out.push_back(c.text);
  }
  return out;
}

MathNode normalized_bound(const MathNode& operand) {
  int sign = infinity_sign(operand);
  if (sign != 0) return make_infinity(sign < 0);
  return as_sequence(operand);
}

MathNode add_one(const MathNode& bound) {
  if (auto v = integer_literal(bound)) return integer_node(*v + 1);
  MathNode seq = as_sequence(bound);
  std::vector<MathNode> items;
  if (seq.children.size() == 1) {
    items.push_back(seq.children[0]);
  } else {
    MathNode group = make_node(NodeKind::kGroup);
    group.delimiter = Delimiter::kParen;
    group.children.push_back(seq);
    items.push_back(group);
  }
  items.push_back(make_node(NodeKind::kOperator, "+"));
  items.push_back(make_node(NodeKind::kNumber, "1"));
  return make_sequence(std::move(items));
}

// Strips a one-sided suffix (`0+`, `0^+`) from a limit point.
MathNode limit_point(const MathNode& operand, LimitDirection& direction) {
  direction = LimitDirection::kTwoSided;
  MathNode seq = as_sequence(operand);
  if (seq.children.size() >= 2) {
    const MathNode& last = seq.children.back();
    if (last.is_operator("+") || last.is_operator("-")) {
      direction = last.text == "+" ? LimitDirection::kFromAbove : LimitDirection::kFromBelow;
      seq.children.pop_back();
      return normalized_bound(seq);
    }
  }
  if (!seq.children.empty()) {
    MathNode& last = seq.children.back();
    if (last.kind == NodeKind::kSubSup && !last.has_sub && last.has_sup && !last.power_on_call) {
      const MathNode& sup = *last.sup();
      if (sup.kind == NodeKind::kSequence && sup.children.size() == 1 &&
          (sup.children[0].is_operator("+") || sup.children[0].is_operator("-"))) {
        direction = sup.children[0].text == "+" ? LimitDirection::kFromAbove
                                                : LimitDirection::kFromBelow;
        MathNode base = last.children[0];
        last = base;
      }
    }
  }
  return normalized_bound(seq);
}

bool is_wildcard(const std::string& item) {
  return item == "var1" || item == "var2" || item == "varN" || item == "numL1" ||
         item == "numU1" || item == "numL*";
}

struct Match {
  std::vector<std::string> vars;
  int var_operand = -1;
  int var2_operand = -1;
};

std::optional<Match> match_pattern(const Blueprint& bp, const std::vector<const MathNode*>& operands,
                                   const std::vector<std::string>& rels) {
  if (bp.items.size() != 2 * operands.size() - 1) return std::nullopt;
  Match m;
  for (std::size_t k = 0; k < rels.size(); ++k) {
    if (normalize_relation(bp.items[2 * k + 1]) != rels[k]) return std::nullopt;
  }
  for (std::size_t k = 0; k < operands.size(); ++k) {
    const std::string& item = bp.items[2 * k];
    const MathNode& op = *operands[k];
    if (item == "var1" || item == "var2") {
      auto id = single_identifier(op);
      if (!id) return std::nullopt;
      m.vars.push_back(*id);
      (item == "var1" ? m.var_operand : m.var2_operand) = static_cast<int>(k);
    } else if (item == "varN") {
      auto ids = identifier_list(op);
      if (!ids) return std::nullopt;
      m.vars.insert(m.vars.end(), ids->begin(), ids->end());
      m.var_operand = static_cast<int>(k);
    } else if (is_wildcard(item)) {
      if (op.kind == NodeKind::kSequence && op.children.empty()) return std::nullopt;
    } else if (render(op) != item) {
      return std::nullopt;
    }
  }
  if (m.var_operand < 0) return std::nullopt;
  return m;
}

void shift_integer_bounds(BoundSpec& spec) {
  if (spec.lower) {
    if (infinity_sign(*spec.lower) != 0) {
      spec.lower_inclusive = true;
    } else if (!spec.lower_inclusive) {
      if (auto v = integer_literal(*spec.lower)) {
        spec.lower = integer_node(*v + 1);
        spec.lower_inclusive = true;
      }
    }
  }
  if (spec.upper) {
    if (infinity_sign(*spec.upper) != 0) {
      spec.upper_inclusive = true;
    } else if (!spec.upper_inclusive) {
      if (auto v = integer_literal(*spec.upper)) {
        spec.upper = integer_node(*v - 1);
        spec.upper_inclusive = true;
      }
    }
  }
}

bool is_sign(const MathNode& n) {
  return n.is_operator("+") || n.is_operator("-") || n.is_operator("\\pm") ||
         n.is_operator("\\mp");
}

bool is_terminator(const MathNode& n) {
  return n.kind == NodeKind::kOperator && (is_relation_symbol(n.text) || n.text == ",");
}

bool intersects(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const std::string& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

bool range_contains(const std::vector<MathNode>& sibs, std::size_t first, std::size_t last,
                    const std::vector<std::string>& vars) {
  for (std::size_t i = first; i <= last; ++i) {
    if (contains_identifier(sibs[i], vars)) return true;
  }
  return false;
}

bool is_d_pair(const std::vector<MathNode>& sibs, std::size_t j, std::size_t end) {
  if (j + 1 >= end) return false;
  const MathNode& d = sibs[j];
  const MathNode& v = sibs[j + 1];
  return d.kind == NodeKind::kIdentifier && d.text == "d" && d.children.empty() &&
         d.primes == 0 && v.kind == NodeKind::kIdentifier && v.primes == 0 &&
         d.span.end == v.span.begin;
}

bool is_differential_at(const std::vector<MathNode>& sibs, std::size_t j, std::size_t end) {
  return (sibs[j].kind == NodeKind::kDifferential && !sibs[j].text.empty()) ||
         is_d_pair(sibs, j, end);
}

// Finds a single top-level differential in a sequence. Returns its index.
std::optional<std::size_t> find_differential(const MathNode& seq, std::string& var) {
  if (seq.kind != NodeKind::kSequence) return std::nullopt;
  std::optional<std::size_t> found;
  const auto& items = seq.children;
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (!is_differential_at(items, j, items.size())) continue;
    if (found) throw Error(ErrorCode::kMultipleDifferentials, "two differentials in " + render(seq));
    found = j;
    var = items[j].kind == NodeKind::kDifferential ? items[j].text : items[j + 1].text;
    if (items[j].kind != NodeKind::kDifferential) ++j;
  }
  return found;
}

}  // namespace

std::string_view limit_direction_name(LimitDirection d) {
  switch (d) {
    case LimitDirection::kNone: return "none";
    case LimitDirection::kTwoSided: return "two-sided";
    case LimitDirection::kFromAbove: return "from-above";
    case LimitDirection::kFromBelow: return "from-below";
  }
  return "none";
}

MathNode make_infinity(bool negative) {
  MathNode inf = make_node(NodeKind::kIdentifier, "\\infty");
  if (!negative) return make_sequence({inf});
  return make_sequence({make_node(NodeKind::kOperator, "-"), inf});
}

int infinity_sign(const MathNode& node) {
  const MathNode* n = &node;
  std::vector<const MathNode*> items;
  if (n->kind == NodeKind::kSequence) {
    for (const MathNode& c : n->children) items.push_back(&c);
  } else {
    items.push_back(n);
  }
  auto is_inf = [](const MathNode* x) {
    return x->kind == NodeKind::kIdentifier && x->text == "\\infty";
  };
  if (items.size() == 1 && is_inf(items[0])) return 1;
  if (items.size() == 2 && is_inf(items[1])) {
    if (items[0]->is_operator("+")) return 1;
    if (items[0]->is_operator("-")) return -1;
  }
  return 0;
}

std::optional<long long> integer_literal(const MathNode& node) {
  std::vector<const MathNode*> items;
  if (node.kind == NodeKind::kSequence) {
    for (const MathNode& c : node.children) items.push_back(&c);
  } else {
    items.push_back(&node);
  }
  bool negative = false;
  if (items.size() == 2 && items[0]->is_operator("-")) {
    negative = true;
    items.erase(items.begin());
  }
  if (items.size() != 1 || items[0]->kind != NodeKind::kNumber) return std::nullopt;
  const std::string& t = items[0]->text;
  if (t.find('.') != std::string::npos || t.size() > 15) return std::nullopt;
  long long v = std::stoll(t);
  return negative ? -v : v;
}

OperatorKind operator_kind(const MathNode& item) {
  const MathNode& base = operator_base(item);
  if (base.kind != NodeKind::kOperator) return OperatorKind::kNone;
  if (base.text == "\\sum") return OperatorKind::kSum;
  if (base.text == "\\prod") return OperatorKind::kProduct;
  if (base.text == "\\int" || base.text == "\\iint" || base.text == "\\oint") return OperatorKind::kIntegral;
  if (base.text == "\\lim" || base.text == "\\limsup" || base.text == "\\liminf") return OperatorKind::kLimit;
  if (base.text == "\\deriv") return OperatorKind::kDerivative;
  return OperatorKind::kNone;
}

const MathNode& operator_base(const MathNode& item) {
  if (item.kind == NodeKind::kSubSup && !item.power_on_call) return item.children[0];
  return item;
}

std::vector<const MathNode*> ArgumentSpan::included(const std::vector<MathNode>& siblings) const {
  std::vector<const MathNode*> out;
  for (std::size_t i = first; i <= last && i < siblings.size(); ++i) out.push_back(&siblings[i]);
  return out;
}

bool contains_identifier(const MathNode& node, const std::vector<std::string>& names) {
  if (node.kind == NodeKind::kIdentifier || node.kind == NodeKind::kDifferential) {
    if (std::find(names.begin(), names.end(), node.text) != names.end()) return true;
  }
  if (node.kind == NodeKind::kOperator && node.text == "\\deriv" &&
      std::find(names.begin(), names.end(), node.children[0].text) != names.end()) {
    return true;
  }
  for (const MathNode& c : node.children) {
    if (contains_identifier(c, names)) return true;
  }
  return false;
}

BoundSpec match_blueprint(const MathNode& subscript, const MathNode* superscript,
                          const MacroRegistry& registry, bool limit) {
  std::vector<const MathNode*> operands;
  std::vector<std::string> rels;
  if (subscript.kind == NodeKind::kRelationChain) {
    for (std::size_t i = 0; i < subscript.children.size(); ++i) {
      if (i % 2 == 0) {
        operands.push_back(&subscript.children[i]);
      } else {
        rels.push_back(normalize_relation(subscript.children[i].text));
      }
    }
  } else {
    operands.push_back(&subscript);
  }
  BlueprintKind want = limit ? BlueprintKind::kLimit : BlueprintKind::kBounds;
  for (const Blueprint& bp : registry.blueprints()) {
    if (bp.kind != want) continue;
    auto m = match_pattern(bp, operands, rels);
    if (!m) continue;
    BoundSpec spec;
    spec.bound_vars = m->vars;
    if (m->var2_operand >= 0) {
      spec.chained = true;
      spec.lower = normalized_bound(*operands[0]);
      spec.lower_inclusive = rels[0] == "\\leq";
      spec.upper = normalized_bound(*operands[3]);
      spec.upper_inclusive = rels[2] == "\\leq";
      shift_integer_bounds(spec);
      return spec;
    }
    int p = m->var_operand;
    if (p > 0) {
      const std::string& rel = rels[p - 1];
      spec.lower = normalized_bound(*operands[p - 1]);
      spec.lower_inclusive = rel != "<";
    }
    if (p + 1 < static_cast<int>(operands.size())) {
      const std::string& rel = rels[p];
      const MathNode& r = *operands[p + 1];
      if (rel == "<" || rel == "\\leq") {
        spec.upper = normalized_bound(r);
        spec.upper_inclusive = rel == "\\leq";
      } else if (rel == "=") {
        spec.lower = normalized_bound(r);
        spec.lower_inclusive = true;
      } else if (rel == "\\in") {
        spec.membership = as_sequence(r);
      } else if (rel == "\\to") {
        spec.lower = limit_point(r, spec.direction);
      } else if (rel == "\\downarrow" || rel == "\\searrow") {
        spec.lower = normalized_bound(r);
        spec.direction = LimitDirection::kFromAbove;
      } else if (rel == "\\uparrow" || rel == "\\nearrow") {
        spec.lower = normalized_bound(r);
        spec.direction = LimitDirection::kFromBelow;
      }
    }
    if (!limit && !spec.membership) {
      if (!spec.lower) spec.lower = make_infinity(true);
      if (!spec.upper) spec.upper = superscript ? normalized_bound(*superscript) : make_infinity(false);
      shift_integer_bounds(spec);
    }
    return spec;
  }
  throw Error(ErrorCode::kNoBlueprintMatch, "no blueprint matches '" + render(subscript) + "'");
}

std::vector<BoundSpec> split_multi_bound(const BoundSpec& spec) {
  std::vector<BoundSpec> out;
  if (spec.chained && spec.bound_vars.size() == 2) {
    BoundSpec outer = spec;
    outer.chained = false;
    outer.bound_vars = {spec.bound_vars[1]};
    outer.lower = add_one(*spec.lower);
    BoundSpec inner = spec;
    inner.chained = false;
    inner.bound_vars = {spec.bound_vars[0]};
    inner.upper = make_sequence({make_node(NodeKind::kIdentifier, spec.bound_vars[1])});
    inner.upper_inclusive = false;
    out.push_back(std::move(outer));
    out.push_back(std::move(inner));
    return out;
  }
  for (const std::string& v : spec.bound_vars) {
    BoundSpec one = spec;
    one.bound_vars = {v};
    out.push_back(std::move(one));
  }
  return out;
}

BoundSpec operator_bounds(const MathNode& item, const MacroRegistry& registry) {
  const MathNode& base = operator_base(item);
  OperatorKind kind = operator_kind(item);
  if (kind == OperatorKind::kDerivative) {
    BoundSpec spec;
    spec.bound_vars = {base.children[0].text};
    return spec;
  }
  const MathNode* sub = item.kind == NodeKind::kSubSup ? item.sub() : nullptr;
  const MathNode* sup = item.kind == NodeKind::kSubSup ? item.sup() : nullptr;
  if (!sub) {
    throw Error(ErrorCode::kNoBlueprintMatch, "operator " + base.text + " has no subscript");
  }
  return match_blueprint(*sub, sup, registry, kind == OperatorKind::kLimit);
}

std::vector<std::string> operator_bound_vars(const std::vector<MathNode>& siblings,
                                             std::size_t index, const MacroRegistry& registry,
                                             std::size_t end) {
  if (operator_kind(siblings[index]) == OperatorKind::kIntegral) {
    return extract_integral_meom(siblings, index, registry, end).bounds.bound_vars;
  }
  return operator_bounds(siblings[index], registry).bound_vars;
}

ArgumentSpan extract_argument(const std::vector<MathNode>& siblings, std::size_t operator_index,
                              const std::vector<std::string>& bound_vars,
                              const MacroRegistry& registry, std::size_t begin, std::size_t end) {
  end = std::min(end, siblings.size());
  bool derivative = operator_kind(siblings[operator_index]) == OperatorKind::kDerivative;
  ArgumentSpan span;
  span.operator_index = operator_index;

  std::vector<std::pair<std::size_t, std::size_t>> summands;
  std::optional<std::size_t> terminator;
  std::size_t cur = operator_index + 1;
  std::size_t j = cur;
  while (j < end) {
    const MathNode& item = siblings[j];
    if (is_terminator(item)) {
      terminator = j;
      break;
    }
    OperatorKind kind = operator_kind(item);
    if (kind != OperatorKind::kNone) {
      std::vector<std::string> nested_vars = operator_bound_vars(siblings, j, registry, end);
      if (intersects(nested_vars, bound_vars)) {
        terminator = j;
        break;
      }
      if (kind == OperatorKind::kIntegral) {
        j = extract_integral_meom(siblings, j, registry, end).span.last + 1;
        continue;
      }
      const MathNode& base = operator_base(item);
      if (kind == OperatorKind::kDerivative && base.children.size() > 2) {
        ++j;
        continue;
      }
      ArgumentSpan nested = extract_argument(siblings, j, nested_vars, registry, j, end);
      j = nested.backward ? j + 1 : nested.last + 1;
      continue;
    }
    if (is_sign(item) && j > cur) {
      summands.push_back({cur, j - 1});
      cur = j;
    }
    ++j;
  }
  if (cur < j) summands.push_back({cur, j - 1});

  int last_with = -1;
  for (std::size_t s = 0; s < summands.size(); ++s) {
    if (range_contains(siblings, summands[s].first, summands[s].second, bound_vars)) {
      last_with = static_cast<int>(s);
    }
  }

  if (derivative && last_with < 0 && operator_index > begin) {
    std::vector<std::pair<std::size_t, std::size_t>> back;
    std::size_t lo = begin;
    for (std::size_t k = operator_index; k > begin; --k) {
      if (is_terminator(siblings[k - 1])) {
        lo = k;
        break;
      }
    }
    std::size_t cur_end = operator_index;  // exclusive
    for (std::size_t k = operator_index; k > lo; --k) {
      std::size_t idx = k - 1;
      if (is_sign(siblings[idx]) && idx > lo) {
        if (idx + 1 < cur_end) back.push_back({idx + 1, cur_end - 1});
        cur_end = idx;
      }
    }
    if (lo < cur_end) back.push_back({lo, cur_end - 1});
    if (!back.empty()) {
      int far = 0;
      for (std::size_t s = 0; s < back.size(); ++s) {
        if (range_contains(siblings, back[s].first, back[s].second, bound_vars)) {
          far = static_cast<int>(s);
        }
      }
      if (range_contains(siblings, back[far].first, operator_index - 1, bound_vars)) {
        span.backward = true;
        span.first = back[far].first;
        span.last = operator_index - 1;
        return span;
      }
    }
  }

  if (summands.empty()) {
    throw Error(ErrorCode::kMeomExtractionFailed,
                "operator " + operator_base(siblings[operator_index]).text + " has no argument");
  }
  std::size_t inc = last_with < 0 ? 0 : static_cast<std::size_t>(last_with);
  span.first = summands[0].first;
  span.last = summands[inc].second;
  if (inc + 1 == summands.size()) span.terminator = terminator;
  return span;
}

IntegralMeom extract_integral_meom(const std::vector<MathNode>& siblings,
                                   std::size_t operator_index, const MacroRegistry& registry,
                                   std::size_t end) {
  end = std::min(end, siblings.size());
  const MathNode& item = siblings[operator_index];
  IntegralMeom out;
  out.span.operator_index = operator_index;
  std::size_t start = operator_index + 1;
  std::string var;
  std::optional<std::size_t> diff_last;
  std::size_t diff_first = 0;
  std::size_t j = start;
  while (j < end) {
    const MathNode& it = siblings[j];
    if (is_terminator(it)) break;
    if (operator_kind(it) == OperatorKind::kIntegral) {
      j = extract_integral_meom(siblings, j, registry, end).span.last + 1;
      continue;
    }
    if (is_differential_at(siblings, j, end)) {
      bool pair = it.kind != NodeKind::kDifferential;
      var = pair ? siblings[j + 1].text : it.text;
      diff_first = j;
      diff_last = pair ? j + 1 : j;
      std::size_t after = *diff_last + 1;
      if (after < end && is_differential_at(siblings, after, end)) {
        throw Error(ErrorCode::kMultipleDifferentials, "consecutive differentials after " +
                                                           operator_base(item).text);
      }
      break;
    }
    if (it.kind == NodeKind::kFraction) {
      std::string fvar;
      if (auto at = find_differential(it.children[0], fvar)) {
        MathNode frac = it;
        auto& num = frac.children[0].children;
        bool pair = num[*at].kind != NodeKind::kDifferential;
        num.erase(num.begin() + *at, num.begin() + *at + (pair ? 2 : 1));
        std::vector<MathNode> one;
        if (*at > 0) one.push_back(make_node(NodeKind::kOperator, "\\cdot"));
        one.push_back(make_node(NodeKind::kNumber, "1"));
        num.insert(num.begin() + *at, one.begin(), one.end());
        out.rewritten_fraction = std::move(frac);
        var = fvar;
        diff_last = j;
        break;
      }
    }
    ++j;
  }
  if (!diff_last) {
    throw Error(ErrorCode::kMissingDifferential, "no differential closes " + render(item));
  }
  if (!out.rewritten_fraction && diff_first == start) {
    throw Error(ErrorCode::kMeomExtractionFailed, "differential precedes the integrand");
  }
  out.span.first = start;
  out.span.last = *diff_last;
  out.bounds.bound_vars = {var};
  if (item.kind == NodeKind::kSubSup) {
    if (item.sub()) out.bounds.lower = normalized_bound(*item.sub());
    if (item.sup()) out.bounds.upper = normalized_bound(*item.sup());
  }
  return out;
}

}  // namespace mathcast
