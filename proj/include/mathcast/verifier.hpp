#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mathcast/case_analyzer.hpp"
#include "mathcast/evaluator.hpp"
#include "mathcast/translator.hpp"

namespace mathcast {

class MacroRegistry;

// A test value kept in exact form: p/q, or e^{i pi p/q} on the unit circle.
struct TestValue {
  long long num = 0;
  long long den = 1;
  bool circle = false;

  Complex value() const;
  std::string label() const;
  // Target syntax (`Exp[I*Pi/6]`, `exp(I*Pi/6)`, `-3/2`).
  std::string text(const CasTarget& target) const;
  bool is_real() const { return !circle || den == 1; }
};

struct TestValueConfig {
  std::vector<TestValue> general_values;
  std::set<std::string> special_variables;
  std::vector<TestValue> special_values;
  std::set<std::string> positive_variables;
  std::set<std::string> real_variables;
  // Variables held to -pi < ph(v) < pi.
  std::set<std::string> phase_variables;
  std::size_t combo_cap = 300;
  double timeout_seconds = 30;
  double threshold = 0.001;

  static TestValueConfig defaults();
  // Candidate values of one variable before constraint filtering.
  std::vector<TestValue> values_for(const std::string& var) const;
};

struct TestAssignment {
  std::vector<std::pair<std::string, TestValue>> values;

  Assignment numeric() const;
  std::string label() const;
};

struct AssignmentSet {
  std::vector<std::string> variables;
  std::size_t raw_count = 0;
  std::size_t filtered_count = 0;
  bool truncated = false;
  std::vector<TestAssignment> assignments;
};

// Cartesian product (variables sorted, first varies slowest), filtered by
// the constraints that evaluate to a truth value, truncated to the cap.
// Throws kNoFreeVariables for an empty variable list.
AssignmentSet generate_assignments(const std::vector<std::string>& variables,
                                   const std::vector<ExprPtr>& constraints,
                                   const TestValueConfig& config, const MacroRegistry& registry);

enum class NumericStatus { kVerified, kPartialFail, kTotalFail, kSkipped, kError, kTimeout };
std::string_view numeric_status_name(NumericStatus s);

struct NumericFailure {
  std::string assignment;
  std::optional<double> difference;
  std::string tag;
};

struct NumericOutcome {
  NumericStatus status = NumericStatus::kSkipped;
  std::size_t tested = 0;
  std::size_t passed = 0;
  std::size_t raw_combos = 0;
  std::size_t filtered_combos = 0;
  std::vector<NumericFailure> failures;
  std::string message;
};

enum class SymbolicStatus { kSimplifiedZero, kConditionalZero, kNotSimplified, kError };
std::string_view symbolic_status_name(SymbolicStatus s);

struct SymbolicOutcome {
  SymbolicStatus status = SymbolicStatus::kNotSimplified;
  std::optional<std::string> condition;
  std::string message;
};

// Everything a backend needs about one case, in tree and target form.
struct CaseForm {
  std::string id;
  const CasTarget* target = nullptr;
  std::string relation;
  ExprPtr lhs;
  ExprPtr rhs;
  std::string lhs_text;
  std::string rhs_text;
  std::vector<ExprPtr> constraints;
  std::vector<std::string> constraint_texts;
  std::set<std::string> packages;
  std::vector<std::string> variables;
};

// Throws translation errors for the case itself; constraints that fail to
// translate are dropped.
CaseForm make_case_form(const TestCase& c, const CasTarget& target, const MacroRegistry& registry,
                        const TranslateOptions& options = {});

struct EvalReply {
  enum class Kind { kValue, kTruth, kError, kTimeout } kind = Kind::kError;
  Complex value;
  bool truth = false;
  std::string tag;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual bool can_evaluate() const { return true; }
  virtual bool can_simplify() const { return true; }
  // lhs - rhs for equations, the relation's truth value otherwise.
  virtual EvalReply evaluate(const CaseForm& form, const TestAssignment& assignment,
                             Clock::time_point deadline) = 0;
  virtual SymbolicOutcome simplify(const CaseForm& form, Clock::time_point deadline) = 0;
};

class BuiltinBackend : public Backend {
 public:
  explicit BuiltinBackend(const MacroRegistry& registry) : registry_(registry) {}
  std::string id() const override { return "builtin"; }
  EvalReply evaluate(const CaseForm& form, const TestAssignment& assignment,
                     Clock::time_point deadline) override;
  SymbolicOutcome simplify(const CaseForm& form, Clock::time_point deadline) override;

 private:
  const MacroRegistry& registry_;
};

// Target commands sent to an external CAS.
std::string numeric_command(const CaseForm& form, const TestAssignment& assignment);
std::string symbolic_command(const CaseForm& form);
// `0`, `ConditionalExpression[0, cond]`, `piecewise(cond, 0)`, or anything
// else (not simplified). `ERROR ...` maps to kError.
SymbolicOutcome parse_symbolic_reply(const std::string& reply);

NumericOutcome numeric_verify(const CaseForm& form, Backend& backend,
                              const TestValueConfig& config, const MacroRegistry& registry);
SymbolicOutcome symbolic_verify(const CaseForm& form, Backend& backend,
                                const TestValueConfig& config);

}  // namespace mathcast
