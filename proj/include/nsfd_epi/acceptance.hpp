#pragma once

#include "nsfd_epi/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace nsfd_epi {

struct AcceptanceOptions {
    /// Radius for matching run limits against the reference equilibrium values.
    double tol_eq = 1e-3;
    std::uint64_t seed = 0x5eedULL;
};

struct CriterionInfo {
    int id = 0;
    std::string name;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

const std::vector<CriterionInfo>& acceptance_criteria();

/// Throws std::out_of_range for an unknown id.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// Random parameters satisfying strict-mode validation, with every rate
/// bounded away from zero.
HostParams random_strict_params(std::mt19937_64& rng);

} // namespace nsfd_epi
