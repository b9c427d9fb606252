#include "mathcast/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "mathcast/error.hpp"
#include "mathcast/registry.hpp"
#include "mathcast/simplifier.hpp"

namespace mathcast {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kFullScanLimit = 100000;
constexpr std::size_t kMaxRecordedFailures = 20;

std::string rational_text(long long num, long long den) {
  std::string s = std::to_string(num);
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

// `i*pi/6`-style angle text with the given spellings of i and pi.
std::string angle_text(long long num, long long den, const std::string& i, const std::string& pi) {
  std::string s = num < 0 ? "-" : "";
  long long a = std::llabs(num);
  if (a != 1) s += std::to_string(a) + "*";
  s += i + "*" + pi;
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

std::string target_variable(const std::string& var, const CasTarget& target) {
  std::size_t us = var.find('_');
  if (us == std::string::npos) return target_identifier(var, target);
  std::string base = target_identifier(var.substr(0, us), target);
  std::string sub = var.substr(us + 1);
  sub.erase(std::remove(sub.begin(), sub.end(), '{'), sub.end());
  sub.erase(std::remove(sub.begin(), sub.end(), '}'), sub.end());
  if (target.bracket_calls) return "Subscript[" + base + "," + sub + "]";
  return base + "[" + sub + "]";
}

std::optional<bool> compare(const std::string& r, Complex a, Complex b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  bool eq = std::abs(a - b) < 1e-12 * scale;
  if (r == "=") return eq;
  if (r == "\\neq") return !eq;
  if (std::abs(a.imag()) > 1e-12 * scale || std::abs(b.imag()) > 1e-12 * scale) return false;
  double x = a.real(), y = b.real();
  if (r == "<") return x < y;
  if (r == "\\leq") return x <= y;
  if (r == ">") return x > y;
  if (r == "\\geq") return x >= y;
  return std::nullopt;
}

std::string relation_text(const std::string& r, const CasTarget& t) {
  if (r == "=") return t.bracket_calls ? "==" : "=";
  if (r == "\\neq") return t.bracket_calls ? "!=" : "<>";
  if (r == "\\leq") return "<=";
  if (r == "\\geq") return ">=";
  return r;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Complex TestValue::value() const {
  double q = static_cast<double>(num) / static_cast<double>(den);
  if (!circle) return q;
  // Snap components that are exact halves (cos(2pi/3) = -1/2) so strict
  // constraints like Re(v + 1/2) > 0 are not decided by rounding noise.
  auto snap = [](double v) {
    double half = std::round(2 * v) / 2;
    return std::abs(v - half) < 1e-12 ? half : v;
  };
  Complex p = std::polar(1.0, kPi * q);
  return {snap(p.real()), snap(p.imag())};
}

std::string TestValue::label() const {
  if (!circle) return rational_text(num, den);
  return "e^(" + angle_text(num, den, "i", "pi") + ")";
}

std::string TestValue::text(const CasTarget& target) const {
  if (!circle) return rational_text(num, den);
  std::string angle = angle_text(num, den, "I", "Pi");
  return target.bracket_calls ? "Exp[" + angle + "]" : "exp(" + angle + ")";
}

TestValueConfig TestValueConfig::defaults() {
  TestValueConfig c;
  c.general_values = {{-2, 1},         {-3, 2},        {-1, 2},        {1, 2},
                      {3, 2},          {2, 1},         {1, 6, true},   {2, 3, true},
                      {-1, 3, true},   {-5, 6, true}};
  c.special_variables = {"n", "m", "k", "\\ell", "l", "i", "j", "\\epsilon", "\\varepsilon"};
  c.special_values = {{1, 1}, {2, 1}, {3, 1}};
  c.positive_variables = {"x", "\\alpha", "\\beta"};
  c.real_variables = {"x", "y", "a", "b", "c", "r", "s", "t", "\\alpha", "\\beta"};
  c.phase_variables = {"z"};
  return c;
}

std::vector<TestValue> TestValueConfig::values_for(const std::string& var) const {
  if (special_variables.count(var)) return special_values;
  std::vector<TestValue> out;
  bool real = real_variables.count(var) > 0;
  bool positive = positive_variables.count(var) > 0;
  for (const TestValue& v : general_values) {
    if ((real || positive) && !v.is_real()) continue;
    if (positive && v.value().real() <= 0) continue;
    out.push_back(v);
  }
  return out;
}

Assignment TestAssignment::numeric() const {
  Assignment a;
  for (const auto& [var, v] : values) a[var] = v.value();
  return a;
}

std::string TestAssignment::label() const {
  std::string s;
  for (const auto& [var, v] : values) {
    if (!s.empty()) s += ", ";
    s += var + "=" + v.label();
  }
  return s;
}

AssignmentSet generate_assignments(const std::vector<std::string>& variables,
                                   const std::vector<ExprPtr>& constraints,
                                   const TestValueConfig& config, const MacroRegistry& registry) {
  if (variables.empty()) throw Error(ErrorCode::kNoFreeVariables, "case has no free variables");
  AssignmentSet set;
  set.variables = variables;
  std::sort(set.variables.begin(), set.variables.end());
  std::vector<std::vector<TestValue>> values;
  set.raw_count = 1;
  for (const std::string& v : set.variables) {
    values.push_back(config.values_for(v));
    set.raw_count *= values.back().size();
  }
  if (set.raw_count == 0) return set;
  std::vector<std::size_t> index(values.size(), 0);
  for (;;) {
    TestAssignment a;
    for (std::size_t i = 0; i < values.size(); ++i) {
      a.values.emplace_back(set.variables[i], values[i][index[i]]);
    }
    bool ok = true;
    for (const auto& [var, v] : a.values) {
      if (config.phase_variables.count(var) && v.is_real() && v.value().real() < 0) ok = false;
    }
    if (ok) {
      Assignment numeric = a.numeric();
      for (const ExprPtr& k : constraints) {
        std::optional<bool> truth = evaluate_predicate(k, numeric, registry);
        if (truth && !*truth) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      ++set.filtered_count;
      if (set.assignments.size() < config.combo_cap) {
        set.assignments.push_back(std::move(a));
      } else {
        set.truncated = true;
        if (set.raw_count > kFullScanLimit) break;
      }
    }
    std::size_t pos = values.size();
    while (pos > 0) {
      --pos;
      if (++index[pos] < values[pos].size()) break;
      index[pos] = 0;
      if (pos == 0) return set;
    }
  }
  return set;
}

std::string_view numeric_status_name(NumericStatus s) {
  switch (s) {
    case NumericStatus::kVerified: return "verified";
    case NumericStatus::kPartialFail: return "partial-fail";
    case NumericStatus::kTotalFail: return "total-fail";
    case NumericStatus::kSkipped: return "skipped";
    case NumericStatus::kError: return "error";
    case NumericStatus::kTimeout: return "timeout";
  }
  return "";
}

std::string_view symbolic_status_name(SymbolicStatus s) {
  switch (s) {
    case SymbolicStatus::kSimplifiedZero: return "simplified-zero";
    case SymbolicStatus::kConditionalZero: return "conditional-zero";
    case SymbolicStatus::kNotSimplified: return "not-simplified";
    case SymbolicStatus::kError: return "error";
  }
  return "";
}

CaseForm make_case_form(const TestCase& c, const CasTarget& target, const MacroRegistry& registry,
                        const TranslateOptions& options) {
  CaseForm f;
  f.id = c.id;
  f.target = &target;
  f.relation = c.relation;
  f.lhs = build_expr(c.lhs, registry);
  f.rhs = build_expr(c.rhs, registry);
  TranslationOutput lo = translate_expr(f.lhs, target, registry, options);
  TranslationOutput ro = translate_expr(f.rhs, target, registry, options);
  f.lhs_text = lo.text;
  f.rhs_text = ro.text;
  f.packages = lo.packages;
  f.packages.insert(ro.packages.begin(), ro.packages.end());
  auto rel = std::make_shared<Expr>();
  rel->kind = ExprKind::kRelation;
  rel->args = {f.lhs, f.rhs};
  rel->relations = {c.relation};
  std::set<std::string> vars = free_variables(rel);
  f.variables.assign(vars.begin(), vars.end());
  for (const MathNode& k : c.constraints) {
    try {
      ExprPtr e = build_expr(k, registry);
      if (e->kind != ExprKind::kRelation) continue;
      f.constraints.push_back(e);
      f.constraint_texts.push_back(translate_expr(e, target, registry, options).text);
    } catch (const Error&) {
    }
  }
  return f;
}

EvalReply BuiltinBackend::evaluate(const CaseForm& form, const TestAssignment& assignment,
                                   Clock::time_point deadline) {
  EvalReply reply;
  EvalOptions options;
  options.deadline = deadline;
  try {
    Assignment values = assignment.numeric();
    Complex l = mathcast::evaluate(form.lhs, values, registry_, options);
    Complex r = mathcast::evaluate(form.rhs, values, registry_, options);
    if (form.relation == "=") {
      reply.kind = EvalReply::Kind::kValue;
      reply.value = l - r;
      return reply;
    }
    std::optional<bool> truth = compare(form.relation, l, r);
    if (!truth) {
      reply.tag = "unsupported relation " + form.relation;
      return reply;
    }
    reply.kind = EvalReply::Kind::kTruth;
    reply.truth = *truth;
  } catch (const Error& e) {
    reply.kind = e.code() == ErrorCode::kTimeout ? EvalReply::Kind::kTimeout : EvalReply::Kind::kError;
    reply.tag = std::string(error_code_name(e.code()));
  }
  return reply;
}

SymbolicOutcome BuiltinBackend::simplify(const CaseForm& form, Clock::time_point) {
  SymbolicOutcome out;
  if (form.relation != "=") {
    out.message = "only equations are simplified";
    return out;
  }
  try {
    if (difference_is_zero(form.lhs, form.rhs)) out.status = SymbolicStatus::kSimplifiedZero;
  } catch (const Error& e) {
    out.message = e.what();
  }
  return out;
}

std::string numeric_command(const CaseForm& form, const TestAssignment& assignment) {
  const CasTarget& t = *form.target;
  std::string rules;
  for (const auto& [var, v] : assignment.values) {
    if (!rules.empty()) rules += t.bracket_calls ? "," : ", ";
    rules += target_variable(var, t) + (t.bracket_calls ? "->" : "=") + v.text(t);
  }
  std::string l = "(" + form.lhs_text + ")", r = "(" + form.rhs_text + ")";
  if (t.bracket_calls) {
    if (form.relation == "=") return "N[Normal[" + l + "-" + r + "]/.{" + rules + "}]";
    return "N[" + l + relation_text(form.relation, t) + r + "/.{" + rules + "}]";
  }
  if (form.relation == "=") return "evalf(subs({" + rules + "}, " + l + "-" + r + "))";
  return "evalb(evalf(subs({" + rules + "}, " + l + " " + relation_text(form.relation, t) + " " +
         r + ")))";
}

std::string symbolic_command(const CaseForm& form) {
  const CasTarget& t = *form.target;
  std::string diff = "(" + form.lhs_text + ")-(" + form.rhs_text + ")";
  if (t.bracket_calls) {
    std::string assume =
        "Element[x|y,Reals]&&Element[k|n|m,Integers]&&k>=0&&n>=0&&m>=0";
    for (const std::string& k : form.constraint_texts) assume += "&&" + k;
    return "FullSimplify[" + diff + ", Assumptions -> " + assume + "]";
  }
  std::string assume = "x::real, y::real, k::nonnegint, n::nonnegint, m::nonnegint";
  for (const std::string& k : form.constraint_texts) assume += ", " + k;
  bool q = form.packages.count("QDifferenceEquations") > 0;
  return std::string(q ? "QSimplify(" : "simplify(") + diff + ") assuming " + assume;
}

SymbolicOutcome parse_symbolic_reply(const std::string& raw) {
  SymbolicOutcome out;
  std::string reply = trim(raw);
  if (reply.rfind("ERROR", 0) == 0) {
    out.status = SymbolicStatus::kError;
    out.message = trim(reply.substr(5));
    return out;
  }
  if (reply == "0" || reply == "0." || reply == "0.0") {
    out.status = SymbolicStatus::kSimplifiedZero;
    return out;
  }
  const std::string prefix = "ConditionalExpression[";
  if (reply.rfind(prefix, 0) == 0 && reply.back() == ']') {
    std::string body = reply.substr(prefix.size(), reply.size() - prefix.size() - 1);
    std::size_t comma = body.find(',');
    if (comma != std::string::npos && trim(body.substr(0, comma)) == "0") {
      out.status = SymbolicStatus::kConditionalZero;
      out.condition = trim(body.substr(comma + 1));
      return out;
    }
  }
  // Maple: piecewise(cond, 0) with no otherwise branch
  const std::string pw = "piecewise(";
  if (reply.rfind(pw, 0) == 0 && reply.back() == ')') {
    std::string body = reply.substr(pw.size(), reply.size() - pw.size() - 1);
    std::vector<std::size_t> commas;
    int depth = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
      char c = body[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      else if (c == ')' || c == ']' || c == '}') --depth;
      else if (c == ',' && depth == 0) commas.push_back(i);
    }
    if (commas.size() == 1 && trim(body.substr(commas[0] + 1)) == "0") {
      out.status = SymbolicStatus::kConditionalZero;
      out.condition = trim(body.substr(0, commas[0]));
      return out;
    }
  }
  out.message = reply;
  return out;
}

NumericOutcome numeric_verify(const CaseForm& form, Backend& backend, const TestValueConfig& config,
                              const MacroRegistry& registry) {
  NumericOutcome out;
  if (!backend.can_evaluate()) {
    out.message = "backend cannot evaluate numerically";
    return out;
  }
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(config.timeout_seconds));
  AssignmentSet set;
  try {
    set = generate_assignments(form.variables, form.constraints, config, registry);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoFreeVariables) throw;
    set.assignments.push_back({});
    set.raw_count = set.filtered_count = 1;
  }
  out.raw_combos = set.raw_count;
  out.filtered_combos = set.filtered_count;
  if (set.assignments.empty()) {
    out.message = "no test values satisfy the constraints";
    return out;
  }
  std::size_t errors = 0;
  auto fail = [&](const TestAssignment& a, std::optional<double> d, const std::string& tag) {
    if (out.failures.size() < kMaxRecordedFailures) out.failures.push_back({a.label(), d, tag});
  };
  for (const TestAssignment& a : set.assignments) {
    if (Clock::now() > deadline) {
      out.status = NumericStatus::kTimeout;
      return out;
    }
    EvalReply reply = backend.evaluate(form, a, deadline);
    if (reply.kind == EvalReply::Kind::kTimeout) {
      out.status = NumericStatus::kTimeout;
      out.message = "case exceeded the time budget";
      return out;
    }
    ++out.tested;
    switch (reply.kind) {
      case EvalReply::Kind::kValue: {
        double d = std::abs(reply.value);
        if (!std::isfinite(d)) {
          fail(a, std::nullopt, "non-finite");
        } else if (d < config.threshold) {
          ++out.passed;
        } else {
          fail(a, d, "");
        }
        break;
      }
      case EvalReply::Kind::kTruth:
        if (reply.truth) {
          ++out.passed;
        } else {
          fail(a, std::nullopt, "false");
        }
        break;
      default:
        ++errors;
        fail(a, std::nullopt, reply.tag);
        break;
    }
  }
  if (errors == out.tested) {
    out.status = NumericStatus::kError;
    out.message = out.failures.empty() ? "" : out.failures.front().tag;
  } else if (out.passed == out.tested) {
    out.status = NumericStatus::kVerified;
  } else if (out.passed == 0) {
    out.status = NumericStatus::kTotalFail;
  } else {
    out.status = NumericStatus::kPartialFail;
  }
  return out;
}

SymbolicOutcome symbolic_verify(const CaseForm& form, Backend& backend,
                                const TestValueConfig& config) {
  if (!backend.can_simplify()) {
    SymbolicOutcome out;
    out.message = "backend cannot simplify";
    return out;
  }
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(config.timeout_seconds));
  return backend.simplify(form, deadline);
}

}  // namespace mathcast
