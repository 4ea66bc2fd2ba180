#pragma once

#include <string>
#include <vector>

namespace lsk::verify {

struct CheckResult {
    int index = 0;
    std::string name;
    bool pass = false;
    double measured = 0;  // worst observed value of the criterion's metric
    double tolerance = 0;
    double runtime_s = 0;
    std::string detail;
};

/// Run the acceptance checks (all of them, or the listed indices).
std::vector<CheckResult> run_acceptance(const std::vector<int>& only = {});

bool all_passed(const std::vector<CheckResult>& results);
std::string results_json(const std::vector<CheckResult>& results);

CheckResult check_glide_curvature();      // 1
CheckResult check_parabolic_identity();   // 2
CheckResult check_finite_length();        // 3
CheckResult check_asymptotic_direction(); // 4
CheckResult check_glide_support();        // 5
CheckResult check_holder_barrier();       // 6
CheckResult check_criterion_table();      // 7
CheckResult check_null_line_equivalence();// 8
CheckResult check_geodesic_diagnostics(); // 9
CheckResult check_strip_bound();          // 10

} // namespace lsk::verify
