#pragma once

#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nsfd_epi {

struct ConvergenceSettings {
    double tol_step = 1e-10;        ///< per-step infinity-norm movement counted as quiet
    std::size_t window = 50;        ///< consecutive quiet steps required
    double tol_eq = 1e-3;           ///< match radius to a known equilibrium
    std::size_t max_steps = 1000000;

    friend bool operator==(const ConvergenceSettings&, const ConvergenceSettings&) = default;
};

/// Throws DomainError unless every field is positive and window >= 1.
void check_settings(const ConvergenceSettings& settings);

enum class VerdictKind { ConvergedTo, MaxStepsReached, Diverged };

struct Verdict {
    VerdictKind kind = VerdictKind::MaxStepsReached;
    /// Set for ConvergedTo: the equilibrium the run settled on.
    std::optional<EquilibriumKind> equilibrium;
    State point; ///< the matched equilibrium point (ConvergedTo) or last state

    bool converged() const noexcept { return kind == VerdictKind::ConvergedTo; }
};

/// e.g. `converged:E1:0.8333333333333334,0`, `max-steps`, `diverged`.
std::string describe(const Verdict& v);

struct Trajectory {
    double step = 0.0; ///< h (discrete) or dt (continuous)
    std::vector<std::size_t> indices; ///< step index of each recorded state
    std::vector<State> states;
    Verdict verdict;

    /// Time of the i-th recorded state, indices[i] * step.
    double time(std::size_t i) const { return static_cast<double>(indices.at(i)) * step; }
    const State& final_state() const { return states.back(); }
    std::size_t steps_taken() const { return indices.empty() ? 0 : indices.back(); }

    void record(std::size_t n, State s)
    {
        indices.push_back(n);
        states.push_back(s);
    }
};

/// Incremental limit detector.
///
/// Feed states in order; `update` returns a terminal verdict as soon as the
/// run has been quiet for `window` steps while sitting within `tol_eq` of a
/// known equilibrium, or has left the 1e6 K box.
class LimitDetector {
public:
    LimitDetector(const ConvergenceSettings& settings, std::vector<Equilibrium> known, double K);

    std::optional<Verdict> update(State s);

private:
    ConvergenceSettings settings_;
    std::vector<Equilibrium> known_;
    double divergence_radius_;
    std::optional<State> previous_;
    std::size_t quiet_ = 0;
};

/// Batch verdict over a full state sequence. Sequences with fewer than
/// window + 1 states can only be Diverged or MaxStepsReached.
Verdict detect_limit(std::span<const State> states, const ConvergenceSettings& settings,
    const std::vector<Equilibrium>& known, double K);

/// Existing equilibria of the model (all others dropped).
std::vector<Equilibrium> known_equilibria(const Model& model);

} // namespace nsfd_epi
