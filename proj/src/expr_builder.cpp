#include <deque>

#include "mathcast/error.hpp"
#include "mathcast/expr.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {
namespace {

[[noreturn]] void unsupported(const std::string& what) {
  throw Error(ErrorCode::kUnsupportedNotation, what);
}

bool is_op(const MathNode* n, std::string_view text) { return n && n->is_operator(text); }

struct Unit {
  const MathNode* node = nullptr;
  ExprPtr expr;
  std::size_t start = 0;
};

std::shared_ptr<Expr> fresh(ExprKind kind) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  return e;
}

ExprPtr join(ExprKind kind, const ExprPtr& lhs, char op, const ExprPtr& rhs) {
  auto e = fresh(kind);
  if (lhs->kind == kind && !(kind == ExprKind::kAdd && lhs->args.empty())) {
    *e = *lhs;
  } else {
    e->args.push_back(lhs);
    e->ops.push_back(0);
  }
  e->args.push_back(rhs);
  e->ops.push_back(op);
  return e;
}

ExprPtr shifted(const ExprPtr& bound, char sign) {
  auto e = fresh(ExprKind::kAdd);
  e->args = {bound, make_number("1")};
  e->ops = {0, sign};
  return e;
}

class Builder {
 public:
  Builder(const MacroRegistry& reg, const std::vector<ExprPtr>& bindings)
      : reg_(reg), bindings_(bindings) {}

  ExprPtr build(const MathNode& node) {
    switch (node.kind) {
      case NodeKind::kSequence:
        return build_range(node.children, 0, node.children.size());
      case NodeKind::kRelationChain: {
        auto e = fresh(ExprKind::kRelation);
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          if (i % 2 == 0) {
            e->args.push_back(build(node.children[i]));
          } else {
            e->relations.push_back(normalize_relation(node.children[i].text));
          }
        }
        return e;
      }
      default: {
        std::vector<Unit> units{Unit{&node, nullptr, 0}};
        return parse_units(units);
      }
    }
  }

  ExprPtr build_range(const std::vector<MathNode>& items, std::size_t begin, std::size_t end) {
    std::vector<Unit> units = group_units(items, begin, end);
    return parse_units(units);
  }

  ExprPtr primary(const MathNode& node);

 private:
  ExprBound to_bound(const BoundSpec& spec) {
    ExprBound b;
    b.var = spec.bound_vars.at(0);
    b.direction = spec.direction;
    if (spec.lower) {
      b.lower = build(*spec.lower);
      if (!spec.lower_inclusive && infinity_sign(*spec.lower) == 0) b.lower = shifted(b.lower, '+');
    }
    if (spec.upper) {
      b.upper = build(*spec.upper);
      if (!spec.upper_inclusive && infinity_sign(*spec.upper) == 0) b.upper = shifted(b.upper, '-');
    }
    if (spec.membership) b.membership = build(*spec.membership);
    return b;
  }

  std::vector<Unit> group_units(const std::vector<MathNode>& items, std::size_t begin,
                                std::size_t end) {
    std::vector<Unit> units;
    std::size_t j = begin;
    while (j < end) {
      const MathNode& item = items[j];
      OperatorKind kind = operator_kind(item);
      if (kind == OperatorKind::kNone) {
        units.push_back(Unit{&item, nullptr, j});
        ++j;
        continue;
      }
      try {
        j = group_operator(items, j, begin, end, kind, units);
      } catch (const Error& e) {
        switch (e.code()) {
          case ErrorCode::kNoBlueprintMatch:
          case ErrorCode::kMissingDifferential:
          case ErrorCode::kMultipleDifferentials:
            throw Error(ErrorCode::kMeomExtractionFailed, e.detail(), e.position());
          default:
            throw;
        }
      }
    }
    return units;
  }

  std::size_t group_operator(const std::vector<MathNode>& items, std::size_t j, std::size_t begin,
                             std::size_t end, OperatorKind kind, std::vector<Unit>& units) {
    const MathNode& item = items[j];
    const MathNode& base = operator_base(item);
    if (kind == OperatorKind::kIntegral) {
      IntegralMeom meom = extract_integral_meom(items, j, reg_, end);
      std::size_t stop = meom.span.last;
      if (!meom.rewritten_fraction && items[stop].kind != NodeKind::kDifferential) --stop;
      std::vector<Unit> arg_units = group_units(items, meom.span.first, stop);
      if (meom.rewritten_fraction) {
        storage_.push_back(*meom.rewritten_fraction);
        arg_units.push_back(Unit{&storage_.back(), nullptr, stop});
      }
      auto e = fresh(ExprKind::kIntegral);
      e->bound = to_bound(meom.bounds);
      e->args.push_back(parse_units(arg_units));
      units.push_back(Unit{nullptr, e, j});
      return meom.span.last + 1;
    }
    if (kind == OperatorKind::kDerivative) {
      auto e = fresh(ExprKind::kDerivative);
      e->bound.var = base.children[0].text;
      if (!base.children[1].children.empty()) e->order = build(base.children[1]);
      if (base.children.size() > 2) {
        e->args.push_back(build(base.children[2]));
        units.push_back(Unit{nullptr, e, j});
        return j + 1;
      }
      ArgumentSpan span = extract_argument(items, j, {e->bound.var}, reg_, begin, end);
      if (span.backward) {
        std::vector<Unit> taken;
        while (!units.empty() && units.back().start >= span.first) {
          taken.insert(taken.begin(), units.back());
          units.pop_back();
        }
        e->args.push_back(parse_units(taken));
        units.push_back(Unit{nullptr, e, span.first});
        return j + 1;
      }
      e->args.push_back(build_range(items, span.first, span.last + 1));
      units.push_back(Unit{nullptr, e, j});
      return span.last + 1;
    }
    BoundSpec spec = operator_bounds(item, reg_);
    ArgumentSpan span = extract_argument(items, j, spec.bound_vars, reg_, begin, end);
    ExprPtr arg = build_range(items, span.first, span.last + 1);
    std::vector<BoundSpec> specs = split_multi_bound(spec);
    ExprKind ek = kind == OperatorKind::kSum       ? ExprKind::kSum
                  : kind == OperatorKind::kProduct ? ExprKind::kProduct
                                                   : ExprKind::kLimit;
    for (auto it = specs.rbegin(); it != specs.rend(); ++it) {
      auto e = fresh(ek);
      e->bound = to_bound(*it);
      e->args.push_back(arg);
      arg = e;
    }
    units.push_back(Unit{nullptr, arg, j});
    return span.last + 1;
  }

  class UnitParser {
   public:
    UnitParser(Builder& b, const std::vector<Unit>& units) : b_(b), u_(units) {}

    ExprPtr run() {
      if (u_.empty()) unsupported("empty expression");
      ExprPtr e = parse(0);
      if (pos_ < u_.size()) unsupported("unexpected trailing notation");
      return e;
    }

   private:
    const MathNode* op_at(std::size_t i) const {
      if (i >= u_.size() || u_[i].expr) return nullptr;
      const MathNode* n = u_[i].node;
      return n->kind == NodeKind::kOperator && n->text != "\\deriv" ? n : nullptr;
    }

    ExprPtr parse(int min_bp) {
      ExprPtr lhs = prefix();
      while (pos_ < u_.size()) {
        const MathNode* op = op_at(pos_);
        if (is_op(op, "+") || is_op(op, "-")) {
          if (10 < min_bp) break;
          ++pos_;
          lhs = join(ExprKind::kAdd, lhs, op->text[0], parse(11));
        } else if (is_op(op, ",")) {
          if (5 < min_bp) break;
          ++pos_;
          lhs = join(ExprKind::kTuple, lhs, ',', parse(6));
        } else if (is_op(op, "\\cdot") || is_op(op, "\\times") || is_op(op, "*") ||
                   is_op(op, "/") || is_op(op, "\\div")) {
          if (20 < min_bp) break;
          ++pos_;
          char j = (op->text == "/" || op->text == "\\div") ? '/' : '*';
          lhs = join(ExprKind::kMul, lhs, j, parse(21));
        } else if (is_op(op, "!")) {
          if (40 < min_bp) break;
          ++pos_;
          lhs = make_expr(ExprKind::kFactorial, {lhs});
        } else if (op) {
          if (op->text == "\\pm" || op->text == "\\mp") unsupported("unresolved " + op->text);
          unsupported("operator " + op->text + " is not supported here");
        } else {
          if (20 < min_bp) break;
          lhs = join(ExprKind::kMul, lhs, ' ', parse(21));
        }
      }
      return lhs;
    }

    ExprPtr prefix() {
      if (pos_ >= u_.size()) unsupported("missing operand");
      const MathNode* op = op_at(pos_);
      if (is_op(op, "+") || is_op(op, "-")) {
        ++pos_;
        auto e = fresh(ExprKind::kAdd);
        e->args.push_back(parse(20));
        e->ops.push_back(op->text[0]);
        return e;
      }
      if (op) {
        if (op->text == "\\pm" || op->text == "\\mp") unsupported("unresolved " + op->text);
        unsupported("operator " + op->text + " without operand");
      }
      const Unit& unit = u_[pos_++];
      if (unit.expr) return unit.expr;
      return b_.primary(*unit.node);
    }

    Builder& b_;
    const std::vector<Unit>& u_;
    std::size_t pos_ = 0;
  };

  ExprPtr parse_units(const std::vector<Unit>& units) { return UnitParser(*this, units).run(); }

  ExprPtr call(const MathNode& node);

  const MacroRegistry& reg_;
  const std::vector<ExprPtr>& bindings_;
  std::deque<MathNode> storage_;
};

ExprPtr Builder::call(const MathNode& node) {
  auto e = fresh(node.builtin ? ExprKind::kBuiltin : ExprKind::kCall);
  e->text = node.text;
  if (node.builtin) {
    if (node.text == "sqrt" && node.param_count == 1) e->text = "root";
    for (const MathNode& c : node.children) e->args.push_back(build(c));
    return e;
  }
  e->entry = reg_.find(node.text);
  if (!e->entry) throw Error(ErrorCode::kUnknownMacro, "unknown macro " + node.text);
  if (e->entry->kind == "constant") return make_constant(e->entry->eval);
  e->primes = node.primes;
  e->at_count = node.at_count;
  for (const MathNode& c : node.children) e->args.push_back(build(c));
  return e;
}

ExprPtr Builder::primary(const MathNode& node) {
  switch (node.kind) {
    case NodeKind::kNumber:
      return make_number(node.text);
    case NodeKind::kIdentifier: {
      if (node.children.empty() && node.primes == 0) {
        if (node.text == "e") return make_constant("e");
        if (node.text == "\\pi") return make_constant("pi");
        if (node.text == "\\infty") return make_constant("infinity");
      }
      auto e = fresh(ExprKind::kVariable);
      e->text = node.text;
      e->primes = node.primes;
      if (!node.children.empty()) {
        e->base = node.text.substr(0, node.text.find('_'));
        e->args.push_back(build(node.children[0]));
      } else {
        e->base = node.text;
      }
      return e;
    }
    case NodeKind::kPlaceholder: {
      std::string digits;
      for (char c : node.text) {
        if (c >= '0' && c <= '9') digits += c;
      }
      std::size_t idx = std::stoul(digits);
      if (idx >= bindings_.size()) unsupported("unbound placeholder " + node.text);
      return bindings_[idx];
    }
    case NodeKind::kGroup: {
      const MathNode& content = node.children[0];
      if (node.delimiter == Delimiter::kBrace || node.delimiter == Delimiter::kNone) {
        return build(content);
      }
      if (node.delimiter == Delimiter::kSetBrace) {
        auto e = fresh(ExprKind::kSet);
        if (content.kind == NodeKind::kSequence && !content.children.empty()) {
          ExprPtr inner = build(content);
          if (inner->kind == ExprKind::kTuple) {
            e->args = inner->args;
          } else {
            e->args.push_back(inner);
          }
        }
        return e;
      }
      ExprKind kind = node.delimiter == Delimiter::kAbs ? ExprKind::kAbs : ExprKind::kParen;
      return make_expr(kind, {build(content)});
    }
    case NodeKind::kFraction:
      return make_expr(ExprKind::kDivide, {build(node.children[0]), build(node.children[1])});
    case NodeKind::kBinomial: {
      auto e = fresh(ExprKind::kCall);
      e->entry = reg_.find("binom");
      if (!e->entry) throw Error(ErrorCode::kUnknownMacro, "registry lacks binom");
      e->text = "binom";
      e->args = {build(node.children[0]), build(node.children[1])};
      return e;
    }
    case NodeKind::kSubSup: {
      if (node.power_on_call) {
        return make_expr(ExprKind::kPower, {call(node.children[0]), build(*node.sup())});
      }
      if (node.has_sub) unsupported("subscript on " + render(node.children[0]));
      return make_expr(ExprKind::kPower, {primary(node.children[0]), build(*node.sup())});
    }
    case NodeKind::kMacroCall:
      return call(node);
    case NodeKind::kRelationChain:
    case NodeKind::kSequence:
      return build(node);
    case NodeKind::kDifferential:
      unsupported("differential outside an integral");
    case NodeKind::kOperator:
      unsupported("operator " + node.text + " is not supported here");
  }
  unsupported("unsupported node");
}

void collect(const ExprPtr& e, std::set<std::string>& vars, std::set<std::string>& bound) {
  if (!e) return;
  switch (e->kind) {
    case ExprKind::kVariable:
      vars.insert(e->text);
      return;
    case ExprKind::kSum:
    case ExprKind::kProduct:
    case ExprKind::kIntegral:
    case ExprKind::kLimit:
      bound.insert(e->bound.var);
      break;
    default:
      break;
  }
  for (const ExprPtr& a : e->args) collect(a, vars, bound);
  collect(e->bound.lower, vars, bound);
  collect(e->bound.upper, vars, bound);
  collect(e->bound.membership, vars, bound);
  collect(e->order, vars, bound);
}

}  // namespace

ExprPtr make_number(const std::string& literal) {
  auto e = fresh(ExprKind::kNumber);
  e->text = literal;
  e->value = std::stod(literal);
  return e;
}

ExprPtr make_variable(const std::string& name) {
  auto e = fresh(ExprKind::kVariable);
  e->text = name;
  e->base = name;
  return e;
}

ExprPtr make_constant(const std::string& name) {
  auto e = fresh(ExprKind::kConstant);
  e->text = name;
  return e;
}

ExprPtr make_expr(ExprKind kind, std::vector<ExprPtr> args) {
  auto e = fresh(kind);
  e->args = std::move(args);
  return e;
}

ExprPtr build_expr(const MathNode& node, const MacroRegistry& registry,
                   const std::vector<ExprPtr>& bindings) {
  Builder b(registry, bindings);
  return b.build(node);
}

std::set<std::string> free_variables(const ExprPtr& expr) {
  std::set<std::string> vars, bound;
  collect(expr, vars, bound);
  std::set<std::string> out;
  for (const std::string& v : vars) {
    if (!bound.count(v)) out.insert(v);
  }
  return out;
}

std::set<std::string> bound_variables(const ExprPtr& expr) {
  std::set<std::string> vars, bound;
  collect(expr, vars, bound);
  return bound;
}

bool is_greek(const std::string& name) { return !name.empty() && name[0] == '\\'; }

}  // namespace mathcast
