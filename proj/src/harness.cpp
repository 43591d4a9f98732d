#include "nsfd_epi/harness.hpp"

#include "nsfd_epi/errors.hpp"
#include "nsfd_epi/integrators.hpp"
#include "nsfd_epi/nsfd.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace nsfd_epi {

std::vector<State> reference_initial_points()
{
    return {{0.1, 0.1}, {0.2, 0.4}, {0.7, 0.6}, {1.0, 0.4}, {1.2, 0.15}};
}

std::vector<State> initial_point_preset(const std::string& name)
{
    if (name == "paper-initials")
        return reference_initial_points();
    throw std::invalid_argument("unknown initial-point preset '" + name + "'");
}

HostParams general_reference_params(double beta)
{
    return {0.6, 0.4, 0.1, 0.2, 1.0, 0.02, beta};
}

HostParams perfect_vertical_reference_params(double beta)
{
    return {0.6, 0.4, 0.1, 0.2, 1.2, 0.0, beta};
}

std::vector<Scenario> reference_scenarios()
{
    using enum EquilibriumKind;
    const auto general = ModelVariant::General;
    const auto horizontal = ModelVariant::HorizontalPerfectVertical;
    const auto init = reference_initial_points();
    return {
        {"general-beta0.1", Model(general_reference_params(0.1), general), {0.8333, 0.0}, DiseaseFree, init},
        {"general-beta0.3", Model(general_reference_params(0.3), general), {0.1818, 0.4545}, Interior, init},
        {"horizontal-beta0.1", Model(perfect_vertical_reference_params(0.1), horizontal), {1.0, 0.0}, DiseaseFree, init},
        {"horizontal-beta0.3", Model(perfect_vertical_reference_params(0.3), horizontal), {0.0476, 0.5952}, Interior, init},
        {"horizontal-beta0.42", Model(perfect_vertical_reference_params(0.42), horizontal), {0.0, 0.6}, SusceptibleFree,
            init},
        {"vertical-beta0", Model(perfect_vertical_reference_params(0.0), ModelVariant::PerfectVerticalOnly), {1.0, 0.0},
            DiseaseFree, init},
    };
}

namespace {

template <typename Run>
RunOutcome capture(Run&& run)
{
    RunOutcome out;
    try {
        const Trajectory traj = run();
        out.verdict = traj.verdict;
        out.final_state = traj.final_state();
        out.steps = traj.steps_taken();
    } catch (const std::exception& err) {
        out.error = err.what();
    }
    return out;
}

bool same_limit(const RunOutcome& a, const RunOutcome& b, double tol)
{
    return a.converged() && b.converged() && a.verdict->equilibrium == b.verdict->equilibrium
        && distance(a.verdict->point, b.verdict->point) <= tol;
}

ConsistencyCell run_cell(const Model& model, State s0, const std::vector<double>& hs,
    const ConvergenceSettings& settings, const ContinuousOptions& continuous, std::size_t n_max)
{
    ConsistencyCell cell;
    cell.initial = s0;
    cell.continuous = capture([&] { return simulate_continuous(model, s0, continuous.dt, continuous.t_max, settings).trajectory; });
    cell.agree = true;
    for (double h : hs) {
        DiscreteCell d;
        d.h = h;
        d.outcome = capture([&] { return iterate(model, StepSize(h), s0, n_max, settings); });
        d.agree = same_limit(cell.continuous, d.outcome, settings.tol_eq);
        cell.agree = cell.agree && d.agree;
        cell.discrete.push_back(std::move(d));
    }
    if (hs.empty())
        cell.agree = cell.continuous.converged();
    return cell;
}

} // namespace

ConsistencyReport consistency_experiment(const Model& model, const std::vector<State>& initial_points,
    const std::vector<double>& hs, const ConvergenceSettings& settings, ContinuousOptions continuous,
    std::size_t n_max_discrete, std::string scenario_id)
{
    check_settings(settings);
    std::vector<std::future<ConsistencyCell>> pending;
    pending.reserve(initial_points.size());
    for (const auto& s0 : initial_points) {
        pending.push_back(std::async(std::launch::async,
            [&, s0] { return run_cell(model, s0, hs, settings, continuous, n_max_discrete); }));
    }

    ConsistencyReport report;
    report.scenario_id = std::move(scenario_id);
    for (auto& f : pending)
        report.cells.push_back(f.get());
    report.verdict = !report.cells.empty()
        && std::all_of(report.cells.begin(), report.cells.end(), [](const auto& c) { return c.agree; });
    return report;
}

SweepResult step_size_sweep(const Model& model, const Equilibrium& eq, const std::vector<double>& hs)
{
    if (!eq.exists)
        throw DomainError("step_size_sweep: equilibrium does not exist");
    SweepResult out;
    out.equilibrium = eq.kind;
    out.continuous = analyze_stability(model, eq, Regime::continuous()).classification;
    for (double h : hs) {
        SweepRow row;
        row.h = h;
        row.eigenvalues = eigenvalues2(discrete_jacobian(model, eq.point, StepSize(h)));
        row.classification = classify(row.eigenvalues, Regime::discrete_step(h));
        out.rows.push_back(row);
    }
    out.identical = std::all_of(out.rows.begin(), out.rows.end(),
        [&](const SweepRow& r) { return r.classification == out.rows.front().classification; });
    out.matches_continuous = out.identical && !out.rows.empty() && out.rows.front().classification == out.continuous;
    return out;
}

PositivityDemo euler_failure_demo(const Model& model, State s0, double h, std::size_t max_steps)
{
    const auto negative = [](State s) { return s.X < 0.0 || s.Y < 0.0; };
    PositivityDemo demo;

    State s = s0;
    for (std::size_t n = 1; n <= max_steps; ++n) {
        s = euler_step(model, s, h);
        if (negative(s)) {
            demo.euler_first_negative = n;
            break;
        }
        if (!is_finite(s))
            break;
    }

    const StepSize step(h);
    s = s0;
    for (std::size_t n = 1; n <= max_steps; ++n) {
        s = nsfd_step(model, step, s);
        if (negative(s)) {
            demo.nsfd_first_negative = n;
            break;
        }
    }
    return demo;
}

} // namespace nsfd_epi
