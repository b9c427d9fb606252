#include "mathcast/translator.hpp"

#include <cctype>

#include "mathcast/error.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {

const CasTarget& CasTarget::maple() {
  static const CasTarget t = [] {
    CasTarget c;
    c.id = "maple";
    c.sum_template = "sum($arg, $var = $lo..$hi)";
    c.sum_set_template = "add($arg, $var in $set)";
    c.product_template = "product($arg, $var = $lo..$hi)";
    c.product_set_template = "mul($arg, $var in $set)";
    c.integral_template = "int($arg, $var = $lo..$hi)";
    c.indefinite_integral_template = "int($arg, $var)";
    c.limit_template = "limit($arg, $var = $pt$dir)";
    c.limit_from_above = ", right";
    c.limit_from_below = ", left";
    c.derivative_template = "diff( $arg, [$var$($n)] )";
    c.prime_template = "diff($f,$v$($p))";
    c.substitution_template = "subs(temp=$sub,$inner)";
    return c;
  }();
  return t;
}

const CasTarget& CasTarget::mathematica() {
  static const CasTarget t = [] {
    CasTarget c;
    c.id = "mathematica";
    c.bracket_calls = true;
    c.sum_template = "Sum[$arg,{$var,$lo,$hi},GenerateConditions->$gc]";
    c.sum_set_template = "Sum[$arg,{$var,$set},GenerateConditions->$gc]";
    c.product_template = "Product[$arg,{$var,$lo,$hi},GenerateConditions->$gc]";
    c.product_set_template = "Product[$arg,{$var,$set},GenerateConditions->$gc]";
    c.integral_template = "Integrate[$arg,{$var,$lo,$hi},GenerateConditions->$gc]";
    c.indefinite_integral_template = "Integrate[$arg,$var,GenerateConditions->$gc]";
    c.limit_template = "Limit[$arg,$var->$pt$dir]";
    c.limit_from_above = ",Direction->\"FromAbove\"";
    c.limit_from_below = ",Direction->\"FromBelow\"";
    c.derivative_template = "D[$arg,{$var,$n}]";
    c.prime_template = "D[$f,{$v,$p}]";
    c.substitution_template = "$inner/.temp->$sub";
    c.substitution_is_loose = true;
    return c;
  }();
  return t;
}

const CasTarget& CasTarget::by_id(const std::string& id) {
  if (id == "maple") return maple();
  if (id == "mathematica") return mathematica();
  throw Error(ErrorCode::kConfig, "unknown CAS target '" + id + "'");
}

std::string fill_template(const std::string& templ,
                          const std::map<std::string, std::string>& slots) {
  std::string out;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] != '$') {
      out += templ[i];
      continue;
    }
    std::size_t j = i + 1;
    while (j < templ.size() && std::islower(static_cast<unsigned char>(templ[j]))) ++j;
    std::string name = templ.substr(i + 1, j - i - 1);
    if (name.empty()) {
      out += '$';
      continue;
    }
    auto it = slots.find(name);
    if (it == slots.end()) throw Error(ErrorCode::kConfig, "template slot $" + name + " is unset");
    out += it->second;
    i = j - 1;
  }
  return out;
}

namespace {

constexpr int kRel = 0;
constexpr int kTup = 1;
constexpr int kAdd = 2;
constexpr int kMul = 3;
constexpr int kPow = 5;
constexpr int kAtom = 7;
constexpr int kMaxAlternativeDepth = 16;

struct Printed {
  std::string text;
  int prec = kAtom;
  bool unary = false;
};

std::string paren(const std::string& s) { return "(" + s + ")"; }

bool top_level_sign(const std::string& text) {
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth == 0 && (c == '+' || c == '-')) return true;
  }
  return false;
}

const Expr* strip_paren(const Expr* e) {
  while (e->kind == ExprKind::kParen) e = e->args[0].get();
  return e;
}

class Printer {
 public:
  Printer(const CasTarget& target, const MacroRegistry& registry, const TranslateOptions& options,
          TranslationOutput& out)
      : t_(target), reg_(registry), opt_(options), out_(out) {}

  Printed print(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::kNumber:
        return {e->text};
      case ExprKind::kVariable:
        return variable(*e);
      case ExprKind::kConstant:
        return {constant(e->text)};
      case ExprKind::kAdd:
        return add(*e);
      case ExprKind::kMul:
        return mul(*e);
      case ExprKind::kDivide:
        if (t_.bracket_calls) return {"Divide[" + str(e->args[0]) + "," + str(e->args[1]) + "]"};
        return {paren(str(e->args[0])) + "/" + paren(str(e->args[1])), kMul};
      case ExprKind::kPower:
        return power(*e);
      case ExprKind::kFactorial:
        return {fn("Factorial", "factorial", str(e->args[0]))};
      case ExprKind::kParen:
        return {paren(str(e->args[0]))};
      case ExprKind::kAbs:
        return {fn("Abs", "abs", str(e->args[0]))};
      case ExprKind::kCall:
        return call(*e);
      case ExprKind::kBuiltin:
        return builtin(*e);
      case ExprKind::kSum:
      case ExprKind::kProduct:
      case ExprKind::kIntegral:
        return big_operator(*e);
      case ExprKind::kLimit:
        return limit(*e);
      case ExprKind::kDerivative:
        return derivative(*e);
      case ExprKind::kSet: {
        std::string s = "{";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          if (i) s += ",";
          s += str(e->args[i]);
        }
        return {s + "}"};
      }
      case ExprKind::kTuple: {
        std::string s;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          if (i) s += ",";
          Printed p = print(e->args[i]);
          s += p.prec <= kTup ? paren(p.text) : p.text;
        }
        return {s, kTup};
      }
      case ExprKind::kRelation:
        return relation(*e);
    }
    throw Error(ErrorCode::kUnsupportedNotation, "unprintable expression");
  }

  std::string str(const ExprPtr& e) { return print(e).text; }

 private:
  std::string fn(const std::string& mma, const std::string& maple, const std::string& arg) const {
    return t_.bracket_calls ? mma + "[" + arg + "]" : maple + "(" + arg + ")";
  }

  std::string constant(const std::string& name) const {
    bool m = t_.bracket_calls;
    if (name == "pi") return "Pi";
    if (name == "e") return m ? "E" : "exp(1)";
    if (name == "i") return "I";
    if (name == "eulergamma") return m ? "EulerGamma" : "gamma";
    if (name == "infinity") return m ? "Infinity" : "infinity";
    throw Error(ErrorCode::kMissingTranslation, "no translation for constant " + name);
  }

  Printed variable(const Expr& e) {
    if (e.primes > 0) {
      throw Error(ErrorCode::kPrimeWithoutSlot,
                  "prime on " + e.text + " does not denote a differentiation");
    }
    std::string base = target_identifier(e.base, t_);
    if (e.args.empty()) return {base};
    std::string sub = str(e.args[0]);
    if (t_.bracket_calls) return {"Subscript[" + base + "," + sub + "]"};
    return {base + "[" + sub + "]"};
  }

  Printed add(const Expr& e) {
    std::string s;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (e.ops[i]) s += e.ops[i];
      Printed p = print(e.args[i]);
      s += p.prec <= kAdd ? paren(p.text) : p.text;
    }
    return {s, kAdd, e.args.size() == 1 && e.ops[0] == '-'};
  }

  Printed mul(const Expr& e) {
    std::string s;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      Printed p = print(e.args[i]);
      bool wrap;
      if (i == 0) {
        wrap = p.prec < kAdd || (p.prec == kAdd && !p.unary);
      } else if (e.ops[i] == '/') {
        s += "/";
        wrap = p.prec <= kMul;
      } else {
        s += "*";
        wrap = p.prec < kMul;
      }
      s += wrap ? paren(p.text) : p.text;
    }
    return {s, kMul};
  }

  Printed power(const Expr& e) {
    const ExprPtr& base = e.args[0];
    const ExprPtr& expo = e.args[1];
    if (base->kind == ExprKind::kConstant && base->text == "e") {
      bool saved = minimal_;
      minimal_ = true;
      std::string inner = str(expo);
      minimal_ = saved;
      return {fn("Exp", "exp", inner)};
    }
    Printed b = print(base);
    Printed x = print(expo);
    std::string bs, xs;
    if (minimal_) {
      bs = b.prec == kAtom ? b.text : paren(b.text);
      xs = x.prec == kAtom ? x.text : paren(x.text);
    } else {
      bs = base->kind == ExprKind::kParen ? b.text : paren(b.text);
      bool greek = expo->kind == ExprKind::kVariable && expo->args.empty() && is_greek(expo->text);
      xs = greek ? x.text : paren(x.text);
    }
    return {bs + "^" + xs, kPow};
  }

  Printed builtin(const Expr& e) {
    if (e.text == "sqrt") return {fn("Sqrt", "sqrt", str(e.args[0]))};
    if (e.text == "root") {
      return {paren(str(e.args[1])) + "^" + paren("1/" + paren(str(e.args[0]))), kPow};
    }
    return {fn(e.text, e.text, str(e.args[0]))};
  }

  std::string gc() const { return opt_.generate_conditions; }

  Printed big_operator(const Expr& e) {
    std::map<std::string, std::string> slots{{"arg", str(e.args[0])},
                                             {"var", target_identifier(e.bound.var, t_)},
                                             {"gc", gc()}};
    std::string templ;
    if (e.kind == ExprKind::kIntegral) {
      if (e.bound.lower && e.bound.upper) {
        templ = t_.integral_template;
      } else {
        templ = t_.indefinite_integral_template;
      }
    } else if (e.bound.membership) {
      templ = e.kind == ExprKind::kSum ? t_.sum_set_template : t_.product_set_template;
      slots["set"] = str(e.bound.membership);
    } else {
      templ = e.kind == ExprKind::kSum ? t_.sum_template : t_.product_template;
    }
    if (e.bound.lower) slots["lo"] = str(e.bound.lower);
    if (e.bound.upper) slots["hi"] = str(e.bound.upper);
    if (templ.find("$lo") != std::string::npos && (!e.bound.lower || !e.bound.upper)) {
      throw Error(ErrorCode::kMeomExtractionFailed,
                  "operator over " + e.bound.var + " lacks a bound");
    }
    return {fill_template(templ, slots)};
  }

  Printed limit(const Expr& e) {
    std::string dir;
    if (e.bound.direction == LimitDirection::kFromAbove) dir = t_.limit_from_above;
    if (e.bound.direction == LimitDirection::kFromBelow) dir = t_.limit_from_below;
    if (!e.bound.lower) {
      throw Error(ErrorCode::kMeomExtractionFailed, "limit over " + e.bound.var + " lacks a point");
    }
    return {fill_template(t_.limit_template, {{"arg", str(e.args[0])},
                                              {"var", target_identifier(e.bound.var, t_)},
                                              {"pt", str(e.bound.lower)},
                                              {"dir", dir}})};
  }

  Printed derivative(const Expr& e) {
    const Expr* arg = strip_paren(e.args[0].get());
    ExprPtr holder(e.args[0], arg);
    return {fill_template(t_.derivative_template,
                          {{"arg", str(holder)},
                           {"var", target_identifier(e.bound.var, t_)},
                           {"n", e.order ? str(e.order) : "1"}})};
  }

  Printed relation(const Expr& e) {
    std::string s = str(e.args[0]);
    for (std::size_t i = 0; i < e.relations.size(); ++i) {
      s += relation_symbol(e.relations[i]);
      Printed p = print(e.args[i + 1]);
      s += p.prec <= kRel ? paren(p.text) : p.text;
    }
    return {s, kRel};
  }

  std::string relation_symbol(const std::string& r) const {
    static const std::map<std::string, std::pair<std::string, std::string>> table{
        {"=", {"==", " = "}},      {"\\neq", {"!=", " <> "}}, {"<", {"<", " < "}},
        {"\\leq", {"<=", " <= "}}, {">", {">", " > "}},       {"\\geq", {">=", " >= "}},
    };
    auto it = table.find(r);
    if (it == table.end()) {
      throw Error(ErrorCode::kUnsupportedNotation, "relation " + r + " has no CAS counterpart");
    }
    return t_.bracket_calls ? it->second.first : it->second.second;
  }

  Printed call(const Expr& e) {
    const MacroEntry& entry = *e.entry;
    if (entry.kind == "wronskian") return wronskian(e);
    if (e.primes > 0) return prime(e);
    return plain_call(entry, e.args);
  }

  Printed plain_call(const MacroEntry& entry, const std::vector<ExprPtr>& args) {
    auto tr = entry.translations.find(t_.id);
    if (tr != entry.translations.end()) {
      std::vector<std::string> texts;
      std::vector<bool> compound;
      for (const ExprPtr& a : args) {
        Printed p = print(a);
        texts.push_back(p.text);
        compound.push_back(p.prec < kAtom);
      }
      auto pkg = entry.packages.find(t_.id);
      if (pkg != entry.packages.end()) out_.packages.insert(pkg->second);
      std::string text = tr->second.instantiate(texts, compound);
      return {text, top_level_sign(text) ? kAdd : kAtom};
    }
    if (entry.alternative) {
      if (alt_depth_ >= kMaxAlternativeDepth) {
        throw Error(ErrorCode::kMissingTranslation,
                    "alternative definitions of \\" + entry.name + " do not terminate");
      }
      MathNode tree = parse_latex(*entry.alternative, reg_, ParseOptions{true});
      ExprPtr expanded = build_expr(tree, reg_, args);
      std::string note = "alternative definition used for \\" + entry.name;
      bool seen = false;
      for (const std::string& n : out_.notes) seen = seen || n == note;
      if (!seen) out_.notes.push_back(note);
      ++alt_depth_;
      Printed p = print(expanded);
      --alt_depth_;
      return p;
    }
    throw Error(ErrorCode::kMissingTranslation,
                "no " + t_.id + " translation for \\" + entry.name);
  }

  Printed prime(const Expr& e) {
    const MacroEntry& entry = *e.entry;
    if (!entry.diff_slot) {
      throw Error(ErrorCode::kPrimeWithoutSlot,
                  "\\" + entry.name + " has no differentiation slot for its prime");
    }
    std::size_t idx = static_cast<std::size_t>(entry.diff_slot_index());
    if (idx >= e.args.size()) {
      throw Error(ErrorCode::kPrimeWithoutSlot, "prime on \\" + entry.name + " without arguments");
    }
    const ExprPtr& slot = e.args[idx];
    std::string p = std::to_string(e.primes);
    if (slot->kind == ExprKind::kVariable) {
      return {fill_template(t_.prime_template,
                            {{"f", plain_call(entry, e.args).text}, {"v", str(slot)}, {"p", p}})};
    }
    std::vector<ExprPtr> args = e.args;
    args[idx] = make_variable("temp");
    std::string inner = fill_template(
        t_.prime_template, {{"f", plain_call(entry, args).text}, {"v", "temp"}, {"p", p}});
    Printed sub = print(slot);
    std::string text = fill_template(t_.substitution_template,
                                     {{"sub", sub.text}, {"inner", inner}});
    return {text, t_.substitution_is_loose ? kRel : kAtom};
  }

  Printed wronskian(const Expr& e) {
    if (e.args.size() != 2) {
      throw Error(ErrorCode::kArityMismatch, "Wronskian expects two elements");
    }
    std::string v = target_identifier(extract_wronskian_variable(e.args), t_);
    Printed f = print(e.args[0]);
    Printed g = print(e.args[1]);
    if (t_.bracket_calls) return {"Wronskian[{" + f.text + "," + g.text + "}," + v + "]"};
    auto factor = [](const Printed& p) { return p.prec < kMul ? paren(p.text) : p.text; };
    std::string d = "$(1)";
    return {factor(f) + "*diff(" + g.text + "," + v + d + ")-diff(" + f.text + "," + v + d +
                ")*" + factor(g),
            kAdd};
  }

  const CasTarget& t_;
  const MacroRegistry& reg_;
  const TranslateOptions& opt_;
  TranslationOutput& out_;
  bool minimal_ = false;
  int alt_depth_ = 0;
};

std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  for (const std::string& s : a) {
    if (b.count(s)) out.insert(s);
  }
  return out;
}

}  // namespace

std::string target_identifier(const std::string& name, const CasTarget& target) {
  if (!is_greek(name)) return name;
  std::string word = name.substr(1);
  if (!target.bracket_calls) return word;
  static const std::map<std::string, std::string> special{
      {"ell", "ScriptL"},         {"varepsilon", "CurlyEpsilon"}, {"vartheta", "CurlyTheta"},
      {"varphi", "CurlyPhi"},     {"varrho", "CurlyRho"},         {"varpi", "CurlyPi"},
      {"varsigma", "FinalSigma"},
  };
  auto it = special.find(word);
  if (it != special.end()) return "\\[" + it->second + "]";
  if (!word.empty() && std::isupper(static_cast<unsigned char>(word[0]))) {
    return "\\[Capital" + word + "]";
  }
  word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
  return "\\[" + word + "]";
}

TranslationOutput translate_expr(const ExprPtr& expr, const CasTarget& target,
                                 const MacroRegistry& registry, const TranslateOptions& options) {
  TranslationOutput out;
  Printer printer(target, registry, options, out);
  out.text = printer.str(expr);
  if (out.text.empty()) throw Error(ErrorCode::kUnsupportedNotation, "empty translation");
  out.free_variables = free_variables(expr);
  return out;
}

TranslationOutput translate(const MathNode& tree, const CasTarget& target,
                            const MacroRegistry& registry, const TranslateOptions& options) {
  return translate_expr(build_expr(tree, registry), target, registry, options);
}

std::string translate_prime(const MathNode& call, const CasTarget& target,
                            const MacroRegistry& registry) {
  ExprPtr e = build_expr(call, registry);
  if (e->kind != ExprKind::kCall || e->primes == 0) {
    throw Error(ErrorCode::kPrimeWithoutSlot, "expression is not a primed macro call");
  }
  return translate_expr(e, target, registry).text;
}

std::string extract_wronskian_variable(const std::vector<ExprPtr>& elements) {
  std::optional<std::set<std::string>> common;
  for (const ExprPtr& el : elements) {
    const Expr* x = strip_paren(el.get());
    std::set<std::string> candidates;
    if (x->kind == ExprKind::kCall && x->entry && x->entry->diff_slot &&
        static_cast<std::size_t>(x->entry->diff_slot_index()) < x->args.size()) {
      candidates = free_variables(x->args[x->entry->diff_slot_index()]);
    } else {
      candidates = free_variables(el);
    }
    common = common ? intersect(*common, candidates) : candidates;
  }
  if (!common || common->empty()) {
    throw Error(ErrorCode::kNoWronskianVariable, "Wronskian elements share no variable");
  }
  if (common->size() > 1) {
    std::string names;
    for (const std::string& s : *common) names += (names.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::kAmbiguousWronskianVariable,
                "Wronskian variable is ambiguous among " + names);
  }
  return *common->begin();
}

std::string extract_wronskian_variable(const std::vector<MathNode>& elements,
                                       const MacroRegistry& registry) {
  std::vector<ExprPtr> exprs;
  for (const MathNode& n : elements) exprs.push_back(build_expr(n, registry));
  return extract_wronskian_variable(exprs);
}

}  // namespace mathcast
