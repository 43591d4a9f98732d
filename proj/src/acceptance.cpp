#include "nsfd_epi/acceptance.hpp"

#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/format.hpp"
#include "nsfd_epi/harness.hpp"
#include "nsfd_epi/integrators.hpp"
#include "nsfd_epi/nsfd.hpp"
#include "nsfd_epi/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsfd_epi {

namespace {

// Reference values reported to four decimals; matched within options.tol_eq.
constexpr double kR0Beta01 = 0.75;
constexpr double kR0Beta03 = 1.58333;
constexpr State kHorizontalInterior6dp {0.047619, 0.595238};

constexpr std::size_t kPositivityTrials = 10000;
constexpr std::size_t kPositivitySteps = 50;
constexpr std::size_t kJuryTrials = 100000;
constexpr std::size_t kTheoremDraws = 1000;
constexpr double kTheoremMargin = 1e-6;

std::string fmt(double v)
{
    return format_number(v);
}

CriterionResult scenario_reproduction(int id, const std::string& name, const std::vector<std::string>& scenario_ids,
    const AcceptanceOptions& opt)
{
    CriterionResult r {id, name, true, {}};
    std::ostringstream detail;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    for (const auto& sc : reference_scenarios()) {
        if (std::find(scenario_ids.begin(), scenario_ids.end(), sc.id) == scenario_ids.end())
            continue;
        const auto report = consistency_experiment(sc.model, sc.initial_points, {0.1}, {}, {0.01, 2000.0}, 100000, sc.id);
        for (const auto& cell : report.cells) {
            std::vector<const RunOutcome*> outcomes {&cell.continuous};
            for (const auto& d : cell.discrete)
                outcomes.push_back(&d.outcome);
            for (const RunOutcome* o : outcomes) {
                ++runs;
                const double dist = o->converged() ? distance(o->final_state, sc.expected) : INFINITY;
                worst = std::max(worst, dist);
                if (!o->converged() || o->verdict->equilibrium != sc.expected_kind || dist > opt.tol_eq) {
                    r.passed = false;
                    if (++failures > 3)
                        continue;
                    detail << sc.id << " from (" << fmt(cell.initial.X) << "," << fmt(cell.initial.Y)
                           << ") ended at (" << fmt(o->final_state.X) << "," << fmt(o->final_state.Y) << ") "
                           << (o->error.empty() ? "" : o->error) << "; ";
                }
            }
        }
    }
    if (failures > 3)
        detail << "(" << failures - 3 << " more failing runs) ";
    detail << runs << " runs, worst distance to reference " << fmt(worst) << " (tol " << fmt(opt.tol_eq) << ")";
    r.detail = detail.str();
    return r;
}

CriterionResult interior_algebra(const AcceptanceOptions&)
{
    CriterionResult r {4, "interior-equilibrium algebra", true, {}};
    const Model general(general_reference_params(0.3), ModelVariant::General);
    const auto c = interior_coefficients(general.params());
    const auto eq = interior_equilibrium(general);
    const double x = eq.point.X;
    const double quad = std::abs(c.A * x * x + c.B * x + c.C);
    const double quad_tol = 1e-10 * std::max({std::abs(c.A), std::abs(c.B), std::abs(c.C)});
    const double field = equilibrium_residual(general, eq);

    const Model horizontal(perfect_vertical_reference_params(0.3), ModelVariant::HorizontalPerfectVertical);
    const auto eh = interior_equilibrium(horizontal);
    const double dh = distance(eh.point, kHorizontalInterior6dp);

    r.passed = eq.exists && quad <= quad_tol && field <= 1e-9 && eh.exists && dh <= 5e-7;
    r.detail = "quadratic residual " + fmt(quad) + " (tol " + fmt(quad_tol) + "), field residual " + fmt(field)
        + ", E_H* = (" + fmt(eh.point.X) + "," + fmt(eh.point.Y) + ")";
    return r;
}

CriterionResult r0_gate(const AcceptanceOptions&)
{
    CriterionResult r {5, "R0 gate", true, {}};
    const Model low(general_reference_params(0.1), ModelVariant::General);
    const Model high(general_reference_params(0.3), ModelVariant::General);
    const double r_low = reproduction_numbers(low.params()).R0;
    const double r_high = reproduction_numbers(high.params()).R0;

    const auto e1_low = disease_free_equilibrium(low.params());
    const auto e1_high = disease_free_equilibrium(high.params());
    const auto low_c = analyze_stability(low, e1_low, Regime::continuous());
    const auto low_d = analyze_stability(low, e1_low, Regime::discrete_step(0.1));
    const auto high_c = analyze_stability(high, e1_high, Regime::continuous());
    const auto high_d = analyze_stability(high, e1_high, Regime::discrete_step(0.1));
    const bool interior_exists = interior_equilibrium(high).exists;

    r.passed = std::abs(r_low - kR0Beta01) <= 1e-12 && std::abs(r_high - kR0Beta03) <= 5e-6
        && low_c.classification == Classification::Stable && low_d.classification == Classification::Stable
        && low_c.theorem.prediction == Prediction::Stable && high_c.theorem.prediction == Prediction::Unstable
        && high_c.classification != Classification::Stable && high_d.classification != Classification::Stable
        && interior_exists;
    r.detail = "R0(0.1) = " + fmt(r_low) + " E1 " + std::string(to_string(low_c.classification)) + "; R0(0.3) = "
        + fmt(r_high) + " E1 " + std::string(to_string(high_c.classification))
        + (interior_exists ? ", E* exists" : ", E* missing");
    return r;
}

CriterionResult positivity(const AcceptanceOptions& opt)
{
    CriterionResult r {6, "positivity", true, {}};
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t failures = 0;
    std::size_t iterates = 0;
    for (std::size_t trial = 0; trial < kPositivityTrials; ++trial) {
        HostParams p = random_strict_params(rng);
        const auto variant = static_cast<ModelVariant>(trial % 3);
        if (variant != ModelVariant::General)
            p.e = 0.0;
        if (variant == ModelVariant::PerfectVerticalOnly)
            p.beta = 0.0;
        const Model model(p, variant);
        const StepSize h(100.0 * (1.0 - unit(rng))); // (0, 100]
        State s {2.0 * p.K * (1.0 - unit(rng)), 2.0 * p.K * (1.0 - unit(rng))};
        for (std::size_t n = 0; n < kPositivitySteps; ++n) {
            s = nsfd_step(model, h, s);
            ++iterates;
            if (!is_finite(s) || !(s.X > 0.0) || s.Y < 0.0) {
                ++failures;
                break;
            }
        }
    }
    const Model reference(general_reference_params(0.3), ModelVariant::General);
    const auto demo = euler_failure_demo(reference, {0.1, 0.9}, 10.0);
    r.passed = failures == 0 && demo.euler_first_negative == std::size_t {1} && !demo.nsfd_first_negative;
    r.detail = std::to_string(iterates) + " positive-map iterates, " + std::to_string(failures)
        + " failures; Euler first negative at step "
        + (demo.euler_first_negative ? std::to_string(*demo.euler_first_negative) : "none") + ", positive map "
        + (demo.nsfd_first_negative ? std::to_string(*demo.nsfd_first_negative) : "none");
    return r;
}

CriterionResult step_size_independence(const AcceptanceOptions&)
{
    CriterionResult r {7, "step-size independence", true, {}};
    std::size_t checked = 0;
    std::ostringstream bad;
    for (const auto& sc : reference_scenarios()) {
        for (const auto& eq : all_equilibria(sc.model)) {
            if (!eq.exists)
                continue;
            ++checked;
            const auto sweep = step_size_sweep(sc.model, eq, kReferenceStepSizes);
            if (!sweep.matches_continuous) {
                r.passed = false;
                bad << sc.id << "/" << label(eq.kind) << "; ";
            }
        }
    }
    r.detail = std::to_string(checked) + " equilibria x " + std::to_string(kReferenceStepSizes.size()) + " step sizes"
        + (bad.str().empty() ? "" : ", mismatched: " + bad.str());
    return r;
}

CriterionResult jury_oracle(const AcceptanceOptions& opt)
{
    CriterionResult r {8, "Jury-eigenvalue oracle", true, {}};
    std::mt19937_64 rng(opt.seed + 8);
    std::uniform_real_distribution<double> off(-2.0, 2.0);
    std::uniform_real_distribution<double> diag(0.0, 1.0);
    std::size_t skipped = 0;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < kJuryTrials; ++i) {
        Matrix2 m {diag(rng), off(rng), off(rng), diag(rng)};
        if (m.a11 == 0.0 || m.a22 == 0.0)
            continue;
        const auto eigs = eigenvalues2(m);
        const double r0 = std::abs(eigs[0]);
        const double r1 = std::abs(eigs[1]);
        if (std::abs(r0 - 1.0) <= kHyperbolicityTolerance || std::abs(r1 - 1.0) <= kHyperbolicityTolerance) {
            ++skipped;
            continue;
        }
        if (jury_conditions(m).verdict != (r0 < 1.0 && r1 < 1.0))
            ++mismatches;
    }
    r.passed = mismatches == 0;
    r.detail = std::to_string(kJuryTrials) + " matrices, " + std::to_string(mismatches) + " mismatches, "
        + std::to_string(skipped) + " within 1e-9 of the unit circle";
    return r;
}

bool margins_clear(const std::vector<Condition>& cs)
{
    return std::all_of(cs.begin(), cs.end(), [](const Condition& c) { return std::abs(c.margin) > kTheoremMargin; });
}

CriterionResult theorem_cross_check(const AcceptanceOptions& opt)
{
    CriterionResult r {9, "theorem cross-check", true, {}};
    std::mt19937_64 rng(opt.seed + 9);
    std::uniform_real_distribution<double> log_h(std::log(1e-3), std::log(100.0));
    std::size_t covered = 0;
    std::size_t disagreements = 0;
    std::ostringstream bad;
    for (std::size_t draw = 0; draw < kTheoremDraws; ++draw) {
        const HostParams base = random_strict_params(rng);
        const double h = std::exp(log_h(rng));
        for (int v = 0; v < 3; ++v) {
            HostParams p = base;
            const auto variant = static_cast<ModelVariant>(v);
            if (variant != ModelVariant::General)
                p.e = 0.0;
            if (variant == ModelVariant::PerfectVerticalOnly)
                p.beta = 0.0;
            const Model model(p, variant);
            for (const auto& eq : all_equilibria(model)) {
                if (!eq.exists || !margins_clear(eq.conditions))
                    continue;
                for (const Regime regime : {Regime::continuous(), Regime::discrete_step(h)}) {
                    const auto report = analyze_stability(model, eq, regime);
                    if (report.theorem.prediction == Prediction::NotCovered || !margins_clear(report.theorem.hypotheses))
                        continue;
                    ++covered;
                    if (!*report.agree) {
                        ++disagreements;
                        if (disagreements <= 3)
                            bad << to_string(variant) << "/" << label(eq.kind) << " " << describe(regime) << " predicted "
                                << to_string(report.theorem.prediction) << " got "
                                << to_string(report.classification) << "; ";
                    }
                }
            }
        }
    }
    r.passed = covered > 0 && disagreements == 0;
    r.detail = std::to_string(covered) + " covered cases, " + std::to_string(disagreements) + " disagreements"
        + (bad.str().empty() ? "" : ": " + bad.str());
    return r;
}

double one_step_defect(const Model& model, State s, double h)
{
    const auto d = denominators(model, StepSize(h));
    const State next = nsfd_step(model, StepSize(h), s);
    const State f = vector_field(model, s);
    return std::max(std::abs((next.X - s.X) / d.phi1 - f.X), std::abs((next.Y - s.Y) / d.phi2 - f.Y));
}

State rk4_to(const Model& model, State s, double dt, double t_end)
{
    const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t i = 0; i < n; ++i)
        s = rk4_step(model, s, dt);
    return s;
}

CriterionResult consistency_order(const AcceptanceOptions&)
{
    CriterionResult r {10, "consistency order", true, {}};
    const std::vector<Model> models {
        Model(general_reference_params(0.3), ModelVariant::General),
        Model(perfect_vertical_reference_params(0.3), ModelVariant::HorizontalPerfectVertical),
        Model(perfect_vertical_reference_params(0.0), ModelVariant::PerfectVerticalOnly),
    };
    const std::vector<State> grid {{0.2, 0.3}, {0.5, 0.2}, {0.8, 0.6}, {0.1, 0.9}, {1.1, 0.05}};
    const double hs[] = {1e-2, 1e-3, 1e-4};
    double lo = INFINITY;
    double hi = 0.0;
    for (const auto& model : models) {
        for (const auto& s : grid) {
            double prev = one_step_defect(model, s, hs[0]);
            for (std::size_t k = 1; k < 3; ++k) {
                const double cur = one_step_defect(model, s, hs[k]);
                const double ratio = cur / prev;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                prev = cur;
            }
        }
    }
    const bool linear = lo >= 1.0 / 30.0 && hi <= 1.0 / 3.0;

    const Model reference(general_reference_params(0.1), ModelVariant::General);
    const State s0 {0.1, 0.1};
    constexpr double t_end = 10.0;
    const State ref = rk4_to(reference, s0, 1e-4, t_end);
    const double err_coarse = distance(rk4_to(reference, s0, 0.1, t_end), ref);
    const double err_fine = distance(rk4_to(reference, s0, 0.05, t_end), ref);
    const double richardson = err_coarse / err_fine;
    const bool fourth_order = richardson >= 12.0 && richardson <= 20.0;

    r.passed = linear && fourth_order;
    r.detail = "defect ratios in [" + fmt(lo) + ", " + fmt(hi) + "] (band [1/30, 1/3]); RK4 Richardson ratio "
        + fmt(richardson) + " (band [12, 20])";
    return r;
}

} // namespace

HostParams random_strict_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HostParams p;
    p.ux = 0.01 + 1.5 * u(rng);
    p.uy = p.ux + 0.01 + u(rng);
    p.e = 0.2 * u(rng);
    p.by = 0.01 + 2.0 * u(rng);
    p.bx = p.by + p.e + 1.5 * u(rng);
    p.K = 0.2 + 4.8 * u(rng);
    p.beta = u(rng);
    return p;
}

const std::vector<CriterionInfo>& acceptance_criteria()
{
    static const std::vector<CriterionInfo> list {
        {1, "general model reference runs (beta 0.1, 0.3)"},
        {2, "horizontal model reference runs (beta 0.1, 0.3, 0.42)"},
        {3, "vertical-only model reference runs"},
        {4, "interior-equilibrium algebra"},
        {5, "R0 gate"},
        {6, "positivity"},
        {7, "step-size independence"},
        {8, "Jury-eigenvalue oracle"},
        {9, "theorem cross-check"},
        {10, "consistency order"},
    };
    return list;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt)
{
    const auto& list = acceptance_criteria();
    if (id < 1 || id > static_cast<int>(list.size()))
        throw std::out_of_range("no acceptance criterion " + std::to_string(id));
    const std::string& name = list[static_cast<std::size_t>(id - 1)].name;
    switch (id) {
    case 1:
        return scenario_reproduction(1, name, {"general-beta0.1", "general-beta0.3"}, opt);
    case 2:
        return scenario_reproduction(2, name, {"horizontal-beta0.1", "horizontal-beta0.3", "horizontal-beta0.42"}, opt);
    case 3:
        return scenario_reproduction(3, name, {"vertical-beta0"}, opt);
    case 4:
        return interior_algebra(opt);
    case 5:
        return r0_gate(opt);
    case 6:
        return positivity(opt);
    case 7:
        return step_size_independence(opt);
    case 8:
        return jury_oracle(opt);
    case 9:
        return theorem_cross_check(opt);
    default:
        return consistency_order(opt);
    }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt)
{
    std::vector<CriterionResult> out;
    for (const auto& c : acceptance_criteria())
        out.push_back(run_criterion(c.id, opt));
    return out;
}

} // namespace nsfd_epi
