#pragma once

// Monte-Carlo verification suites: each suite checks one analytical result
// (martingale neutrality, one-step drift, the full drift decomposition, the
// pseudo-count norm identity, accumulated-drift bounds, the l1 lemma, the
// correlated vote bound, the correlation estimator, compound/marginal
// equivalence, and the rise-then-fall demonstration) against simulation at
// pinned parameters, reporting predicted value, empirical value and
// standard error per check.

#include <cstdint>
#include <string>
#include <vector>

namespace debatelab {

struct CheckResult {
    std::string name;
    double predicted = 0.0;
    double empirical = 0.0;
    double se = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const;
};

struct VerifyOptions {
    std::uint64_t seed = 0x5eedULL;
    // replicate counts are scaled by this percentage; 100 runs the pinned
    // acceptance-level sizes, smaller values give fast smoke runs
    int replicate_scale_percent = 100;
    int threads = 0;
};

/// Suites in canonical order.
std::vector<std::string> verification_suite_names();

/// Runs one suite by name; throws ConfigError for unknown names.
SuiteReport run_verification_suite(const std::string& name, const VerifyOptions& options);

/// Runs the named suites (all of them when `selectors` is empty).
std::vector<SuiteReport> run_verification_suites(const std::vector<std::string>& selectors,
                                                 const VerifyOptions& options);

}  // namespace debatelab
