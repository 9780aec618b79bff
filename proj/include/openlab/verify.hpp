// verify.hpp: invariant suite over all modules

#pragma once

#include <string>
#include <vector>

#include "openlab/model.hpp"

namespace openlab {

struct CheckResult {
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    bool pass{false};
    bool minimum{false};  // tolerance is a lower bound (convergence ratios)
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> skipped;  // checks whose preconditions the parameters do not meet

    bool ok() const;
    double worst_ratio() const;  // max value / tolerance over upper-bound checks
    // {check-name: {value, tolerance, pass}}
    std::string to_json() const;
};

enum class Suite { fast, all };

Suite parse_suite(const std::string& s);

// Checks that need a feature the parameters switch off (lambda, f) run on a copy
// with that feature set to a reference value.
VerifyReport run_verify(const EnvParams& p, Suite suite);

}  // namespace openlab
