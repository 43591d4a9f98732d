#pragma once

#include "nsfd_epi/convergence.hpp"
#include "nsfd_epi/model.hpp"

namespace nsfd_epi {

/// Classical fixed-step fourth-order Runge-Kutta step of the continuous
/// model. Positivity is not preserved; a non-finite result throws BlowUpError.
State rk4_step(const Model& model, State s, double dt);

/// s + dt f(s). May leave the nonnegative quadrant for large dt.
State euler_step(const Model& model, State s, double dt);

struct ContinuousRun {
    double dt = 0.0;
    double t_max = 0.0;
    Trajectory trajectory; ///< sampled every dt
};

/// RK4 from s0 until the limit detector fires or t_max is reached.
/// Requires dt > 0 and t_max >= dt.
ContinuousRun simulate_continuous(const Model& model, State s0, double dt, double t_max,
    const ConvergenceSettings& settings = {});

/// Forward-Euler iteration with the same stopping rules as `iterate`, used
/// to contrast with the positive maps. Stops on a non-finite state.
Trajectory iterate_euler(const Model& model, double h, State s0, std::size_t n_max,
    const ConvergenceSettings& settings = {});

} // namespace nsfd_epi
