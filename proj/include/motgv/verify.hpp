#pragma once

#include <string>
#include <vector>

namespace motgv {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

SuiteResult suite_conjugate_calculus();    // biconjugation, Young
SuiteResult suite_conjugate_closed_form(); // closed form vs numeric oracle
SuiteResult suite_adjointness();
SuiteResult suite_seminorm();              // norm axioms, semimodular, sandwich
SuiteResult suite_tgv_duality();
SuiteResult suite_tgv_kernel();
SuiteResult suite_decomposition();

// All seven, in order.
std::vector<SuiteResult> run_verification_suites();

}  // namespace motgv
