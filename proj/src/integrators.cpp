#include "nsfd_epi/integrators.hpp"

#include "nsfd_epi/errors.hpp"

#include <cmath>

namespace nsfd_epi {

namespace {

void require_step(double dt, const char* where)
{
    if (!std::isfinite(dt) || !(dt > 0.0))
        throw DomainError(std::string(where) + ": step must be finite and > 0");
}

State axpy(State s, double a, State k)
{
    return {s.X + a * k.X, s.Y + a * k.Y};
}

} // namespace

State rk4_step(const Model& model, State s, double dt)
{
    require_step(dt, "rk4_step");
    // Stages that overflow are a blow-up of the step, not bad caller input.
    const auto stage = [&](State at) {
        if (!is_finite(at))
            throw BlowUpError("rk4_step: non-finite intermediate stage");
        return vector_field(model, at);
    };
    const State k1 = vector_field(model, s);
    const State k2 = stage(axpy(s, 0.5 * dt, k1));
    const State k3 = stage(axpy(s, 0.5 * dt, k2));
    const State k4 = stage(axpy(s, dt, k3));
    const State out {
        s.X + dt / 6.0 * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X),
        s.Y + dt / 6.0 * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y),
    };
    if (!is_finite(out))
        throw BlowUpError("rk4_step: non-finite state");
    return out;
}

State euler_step(const Model& model, State s, double dt)
{
    require_step(dt, "euler_step");
    return axpy(s, dt, vector_field(model, s));
}

ContinuousRun simulate_continuous(const Model& model, State s0, double dt, double t_max,
    const ConvergenceSettings& settings)
{
    require_step(dt, "simulate_continuous");
    if (!(t_max >= dt))
        throw DomainError("simulate_continuous: t_max must be >= dt");
    if (!is_finite(s0))
        throw DomainError("simulate_continuous: non-finite initial state");

    ContinuousRun run;
    run.dt = dt;
    run.t_max = t_max;
    auto& traj = run.trajectory;
    traj.step = dt;
    traj.record(0, s0);

    const auto n_max = static_cast<std::size_t>(std::llround(t_max / dt));
    LimitDetector detector(settings, known_equilibria(model), model.params().K);
    std::optional<Verdict> verdict = detector.update(s0);
    State s = s0;
    for (std::size_t n = 1; !verdict && n <= n_max; ++n) {
        s = rk4_step(model, s, dt);
        traj.record(n, s);
        verdict = detector.update(s);
    }
    traj.verdict = verdict ? *verdict : Verdict{VerdictKind::MaxStepsReached, std::nullopt, s};
    return run;
}

Trajectory iterate_euler(const Model& model, double h, State s0, std::size_t n_max,
    const ConvergenceSettings& settings)
{
    require_step(h, "iterate_euler");
    Trajectory traj;
    traj.step = h;
    traj.record(0, s0);
    LimitDetector detector(settings, known_equilibria(model), model.params().K);
    std::optional<Verdict> verdict = detector.update(s0);
    State s = s0;
    for (std::size_t n = 1; !verdict && n <= n_max; ++n) {
        s = euler_step(model, s, h);
        traj.record(n, s);
        verdict = detector.update(s);
    }
    traj.verdict = verdict ? *verdict : Verdict{VerdictKind::MaxStepsReached, std::nullopt, s};
    return traj;
}

} // namespace nsfd_epi
