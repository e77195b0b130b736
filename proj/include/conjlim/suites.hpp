#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conjlim/matrix_io.hpp"

namespace conjlim {

struct SuiteCase {
    std::string name;
    bool pass = false;
    double metric = 0.0;
    std::string anchor;
};

struct SuiteReport {
    std::string suite_id;
    std::vector<SuiteCase> cases; // sorted by name
    std::uint64_t seed = 0;
    double wall_time = 0.0; // seconds

    bool passed() const;
    std::size_t failures() const;
};

struct SuiteConfig {
    int cases = 0; // 0 keeps the suite's default instance count
    Tolerance tol;
};

const std::vector<std::string>& suite_ids();

/// Runs one verification suite. Throws UnknownSuite for unrecognized ids.
SuiteReport run_suite(const std::string& suite_id, std::uint64_t seed, const SuiteConfig& config = {});

json suite_report_to_json(const SuiteReport& rep);

/// Random element of the span of a matrix list with complex Gaussian weights.
Matrix random_combination(Rng& rng, const std::vector<Matrix>& basis);

} // namespace conjlim
