#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kerrqfi {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Mutation fixture hook: perturbs one constant of the transcribed
    /// analytic minimum so the equivalence checks must trip.
    double appendix_mutation = 0.0;
};

enum class VerifySuite { all, loss, dephasing, oracle };

VerifySuite suite_from_string(const std::string& name);

std::vector<CheckResult> run_loss_suite(const VerifyOptions& options = {});
std::vector<CheckResult> run_dephasing_suite(const VerifyOptions& options = {});
std::vector<CheckResult> run_oracle_suite(const VerifyOptions& options = {});

/// Runs the requested suite(s), printing one pass/fail line per check to
/// `out`. Returns true iff every check passed.
bool run_verification(VerifySuite suite, std::ostream& out, const VerifyOptions& options = {});

}  // namespace kerrqfi
