#pragma once

#include "mathcast/verifier.hpp"
#include "support.hpp"

namespace mathcast::testing {

inline CaseForm form_of(const std::string& id, std::size_t index = 0,
                        const CasTarget& target = CasTarget::mathematica()) {
  LineAnalysis a = analyze_line(fixture(id), registry());
  return make_case_form(a.cases.at(index), target, registry());
}

inline const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = {
      "id-gamma-recurrence", "id-trig-pythagoras",   "id-binomial-theorem",
      "id-pochhammer-product", "id-exp-addition",    "id-log-square",
      "id-sine-double",      "id-hyperbolic",        "id-gamma-half",
      "id-erf-erfc",         "id-gamma-reflection",  "id-beta-gamma",
      "id-bessel-recurrence", "id-hurwitz-riemann",  "id-legendre-two",
      "id-tangent",          "id-imag-power",        "id-geometric-sum",
      "id-digamma-recurrence", "id-euler-identity"};
  return ids;
}

inline const std::vector<std::string>& corrupted_ids() {
  static const std::vector<std::string> ids = {"bad-gamma-recurrence", "bad-trig-pythagoras",
                                               "bad-exp-addition", "bad-erf-erfc",
                                               "bad-pochhammer-product"};
  return ids;
}

}  // namespace mathcast::testing
