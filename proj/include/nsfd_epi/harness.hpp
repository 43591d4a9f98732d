#pragma once

#include "nsfd_epi/convergence.hpp"
#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/model.hpp"
#include "nsfd_epi/stability.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nsfd_epi {

/// The five reference initial points I1..I5.
std::vector<State> reference_initial_points();

/// Resolves a named initial-point preset (`paper-initials`).
std::vector<State> initial_point_preset(const std::string& name);

/// Fig.-style parameter sets: b_x = 0.6, b_y = 0.4, u_x = 0.1, u_y = 0.2 with
/// K = 1, e = 0.02 (general) or K = 1.2, e = 0 (perfect vertical transmission).
HostParams general_reference_params(double beta);
HostParams perfect_vertical_reference_params(double beta);

struct Scenario {
    std::string id;
    Model model;
    State expected;        ///< limit all runs should reach (reported to 4 decimals)
    EquilibriumKind expected_kind;
    std::vector<State> initial_points;
};

/// The six reference scenarios: general beta 0.1 / 0.3, horizontal beta
/// 0.1 / 0.3 / 0.42 and vertical-only.
std::vector<Scenario> reference_scenarios();

struct ContinuousOptions {
    double dt = 0.01;
    double t_max = 2000.0;
};

struct RunOutcome {
    std::optional<Verdict> verdict; ///< empty when the run threw
    State final_state;
    std::size_t steps = 0;
    std::string error;

    bool converged() const noexcept { return verdict && verdict->converged(); }
};

struct DiscreteCell {
    double h = 0.0;
    RunOutcome outcome;
    bool agree = false;
};

struct ConsistencyCell {
    State initial;
    RunOutcome continuous;
    std::vector<DiscreteCell> discrete;
    bool agree = false;
};

struct ConsistencyReport {
    std::string scenario_id;
    std::vector<ConsistencyCell> cells;
    bool verdict = false;
};

/// Runs RK4 once and the positive map once per h for every initial point.
/// A cell agrees when both runs converge to the same equilibrium (matched
/// points within tol_eq). Failed runs are recorded in the cell, not thrown.
/// Cells run concurrently; the report is assembled in input order.
ConsistencyReport consistency_experiment(const Model& model, const std::vector<State>& initial_points,
    const std::vector<double>& hs, const ConvergenceSettings& settings = {}, ContinuousOptions continuous = {},
    std::size_t n_max_discrete = 100000, std::string scenario_id = {});

struct SweepRow {
    double h = 0.0;
    Eigenpair eigenvalues{};
    Classification classification = Classification::Nonhyperbolic;
};

struct SweepResult {
    EquilibriumKind equilibrium = EquilibriumKind::Trivial;
    Classification continuous = Classification::Nonhyperbolic;
    std::vector<SweepRow> rows;
    bool identical = false;          ///< same discrete class at every h
    bool matches_continuous = false; ///< identical and equal to the continuous class
};

/// Requires eq.exists.
SweepResult step_size_sweep(const Model& model, const Equilibrium& eq, const std::vector<double>& hs);

inline const std::vector<double> kReferenceStepSizes {0.01, 0.1, 1.0, 10.0, 50.0};

struct PositivityDemo {
    std::optional<std::size_t> euler_first_negative;
    std::optional<std::size_t> nsfd_first_negative;
};

/// Iterates forward Euler and the positive map side by side from s0 for up
/// to max_steps steps and reports the first index with a negative component.
PositivityDemo euler_failure_demo(const Model& model, State s0, double h, std::size_t max_steps = 10000);

} // namespace nsfd_epi
