#include "nsfd_epi/stability.hpp"

#include "nsfd_epi/errors.hpp"
#include "nsfd_epi/format.hpp"

#include <algorithm>
#include <cmath>

namespace nsfd_epi {

Matrix2 continuous_jacobian(const Model& model, State pt)
{
    if (!is_finite(pt))
        throw DomainError("continuous_jacobian: non-finite point");
    const auto& p = model.params();
    const double X = pt.X;
    const double Y = pt.Y;
    const double crowding = 1.0 - (X + Y) / p.K;
    return {
        p.bx * crowding - p.bx * X / p.K - p.ux - p.beta * Y - p.e * Y / p.K,
        -p.bx * X / p.K - p.beta * X + p.e * crowding - p.e * Y / p.K,
        -p.by * Y / p.K + p.beta * Y,
        p.by * crowding - p.by * Y / p.K - p.uy + p.beta * X,
    };
}

Matrix2 discrete_jacobian(const Model& model, State pt, StepSize h)
{
    if (!is_finite(pt))
        throw DomainError("discrete_jacobian: non-finite point");
    const auto& p = model.params();
    const bool has_e = model.variant() == ModelVariant::General && p.e != 0.0;
    // On the X-axis the Y/X terms vanish, which also covers E0.
    if (has_e && !(pt.X > 0.0) && pt.Y != 0.0)
        throw DomainError("discrete_jacobian: the general map needs X > 0 off the X-axis");

    const auto [phi1, phi2] = denominators(model, h);
    const double X = pt.X;
    const double Y = pt.Y;
    const double e = has_e ? p.e : 0.0;
    const double beta = model.variant() == ModelVariant::PerfectVerticalOnly ? 0.0 : p.beta;

    // X map: N1 / D1
    double rates1 = p.bx / p.K * X + p.bx / p.K * Y + p.ux + beta * Y;
    double dD1_dX = p.bx / p.K;
    double dD1_dY = p.bx / p.K + beta;
    if (has_e) {
        const double ratio = Y == 0.0 ? 0.0 : Y / X;
        rates1 += e / p.K * Y + e / p.K * Y * ratio;
        dD1_dX -= e / p.K * ratio * ratio;
        dD1_dY += e / p.K + 2.0 * e / p.K * ratio;
    }
    const double N1 = X * (1.0 + phi1 * p.bx) + phi1 * e * Y;
    const double D1 = 1.0 + phi1 * rates1;

    // Y map: N2 / D2
    const double N2 = Y * (1.0 + phi2 * (p.by + beta * X));
    const double D2 = 1.0 + phi2 * (p.by / p.K * X + p.by / p.K * Y + p.uy);
    const double tail2 = N2 * phi2 * p.by / p.K / (D2 * D2);

    return {
        (1.0 + phi1 * p.bx) / D1 - N1 * phi1 * dD1_dX / (D1 * D1),
        phi1 * e / D1 - N1 * phi1 * dD1_dY / (D1 * D1),
        phi2 * beta * Y / D2 - tail2,
        (1.0 + phi2 * (p.by + beta * X)) / D2 - tail2,
    };
}

Eigenpair eigenvalues2(const Matrix2& m)
{
    const double half_tr = 0.5 * m.trace();
    const double det = m.det();
    const double disc = half_tr * half_tr - det;

    Eigenpair eigs;
    if (disc >= 0.0) {
        const double q = half_tr + std::copysign(std::sqrt(disc), half_tr);
        eigs = {std::complex<double>(q, 0.0), std::complex<double>(q != 0.0 ? det / q : 0.0, 0.0)};
    } else {
        const double im = std::sqrt(-disc);
        eigs = {std::complex<double>(half_tr, im), std::complex<double>(half_tr, -im)};
    }
    const auto before = [](const std::complex<double>& a, const std::complex<double>& b) {
        if (std::abs(a) != std::abs(b))
            return std::abs(a) > std::abs(b);
        if (a.real() != b.real())
            return a.real() > b.real();
        return a.imag() > b.imag();
    };
    if (before(eigs[1], eigs[0]))
        std::swap(eigs[0], eigs[1]);
    return eigs;
}

std::string_view to_string(Classification c) noexcept
{
    switch (c) {
    case Classification::Stable:
        return "stable";
    case Classification::Saddle:
        return "saddle";
    case Classification::Source:
        return "source";
    case Classification::Nonhyperbolic:
        return "nonhyperbolic";
    }
    return "unknown";
}

std::string_view to_string(Prediction p) noexcept
{
    switch (p) {
    case Prediction::Stable:
        return "stable";
    case Prediction::Unstable:
        return "unstable";
    case Prediction::NotCovered:
        return "not-covered";
    }
    return "unknown";
}

std::string describe(const Regime& r)
{
    return r.discrete ? "discrete(h=" + format_number(r.h) + ")" : "continuous";
}

Classification classify(const Eigenpair& eigs, const Regime& regime, double eps_hyp)
{
    int inside = 0;
    int outside = 0;
    const double scale = std::max({1.0, std::abs(eigs[0]), std::abs(eigs[1])});
    for (const auto& l : eigs) {
        // Signed distance from the boundary, negative on the stable side.
        const double offset = regime.discrete ? std::abs(l) - 1.0 : l.real();
        if (std::abs(offset) <= eps_hyp * scale)
            return Classification::Nonhyperbolic;
        (offset < 0.0 ? inside : outside)++;
    }
    if (inside == 2)
        return Classification::Stable;
    if (outside == 2)
        return Classification::Source;
    return Classification::Saddle;
}

JuryResult jury_conditions(const Matrix2& m)
{
    JuryResult r;
    r.one_minus_det = 1.0 - m.det();
    r.one_minus_trace_plus_det = 1.0 - m.trace() + m.det();
    r.a11 = m.a11;
    r.a22 = m.a22;
    r.verdict = r.one_minus_det > 0.0 && r.one_minus_trace_plus_det > 0.0 && m.a11 > 0.0 && m.a11 < 1.0
        && m.a22 > 0.0 && m.a22 < 1.0;
    return r;
}

namespace {

Condition cond(std::string name, double margin)
{
    return {std::move(name), margin > 0.0, margin};
}

bool all_hold(const std::vector<Condition>& cs)
{
    return std::all_of(cs.begin(), cs.end(), [](const Condition& c) { return c.holds; });
}

TheoremVerdict stable_if(std::string clause, std::vector<Condition> hyps)
{
    TheoremVerdict v;
    v.clause = std::move(clause);
    v.hypotheses = std::move(hyps);
    v.prediction = all_hold(v.hypotheses) ? Prediction::Stable : Prediction::NotCovered;
    return v;
}

TheoremVerdict trivial_clause(const HostParams& p, std::string_view variant)
{
    return stable_if(std::string(variant) + "/E0: b_x < u_x and b_y < u_y",
        {cond("b_x < u_x", p.ux - p.bx), cond("b_y < u_y", p.uy - p.by)});
}

double invasion_margin(const HostParams& p)
{
    // b_x u_y / b_y > u_x + beta K (1 - u_y / b_y), positive when infected hosts
    // cannot hold the susceptibles out.
    return p.bx * p.uy / p.by - (p.ux + p.beta * p.K * (1.0 - p.uy / p.by));
}

TheoremVerdict general_clause(const HostParams& p, const Equilibrium& eq)
{
    switch (eq.kind) {
    case EquilibriumKind::Trivial:
        return trivial_clause(p, "general");
    case EquilibriumKind::DiseaseFree: {
        const double R0 = reproduction_numbers(p).R0;
        auto v = stable_if("general/E1: b_x > u_x and R0 < 1", {cond("b_x > u_x", p.bx - p.ux), cond("R0 < 1", 1.0 - R0)});
        if (p.bx > p.ux && R0 > 1.0) {
            v.clause = "general/E1: unstable whenever R0 > 1";
            v.hypotheses = {cond("b_x > u_x", p.bx - p.ux), cond("R0 > 1", R0 - 1.0)};
            v.prediction = Prediction::Unstable;
        }
        return v;
    }
    case EquilibriumKind::Interior: {
        const double xs = eq.point.X;
        auto v = stable_if("general/E*: b_x > u_x, b_y > u_y, b_y > beta K, K/X* > (b_y - beta K)/(b_y - u_y)",
            {cond("b_x > u_x", p.bx - p.ux), cond("b_y > u_y", p.by - p.uy), cond("b_y > beta K", p.by - p.beta * p.K),
                cond("K/X* > (b_y - beta K)/(b_y - u_y)", p.K / xs - (p.by - p.beta * p.K) / (p.by - p.uy))});
        const double ordering = p.bx - p.by - p.e;
        v.side_conditions.push_back({"b_x >= b_y + e", ordering >= 0.0, ordering});
        if (ordering < 0.0)
            v.notes.push_back("b_x >= b_y + e fails: positive determinant at E* is not guaranteed");
        return v;
    }
    case EquilibriumKind::SusceptibleFree:
        break;
    }
    TheoremVerdict v;
    v.clause = "general/E2: no clause (e = 0 under the general variant)";
    return v;
}

TheoremVerdict horizontal_clause(const HostParams& p, const Equilibrium& eq, const Regime& regime)
{
    switch (eq.kind) {
    case EquilibriumKind::Trivial:
        return trivial_clause(p, "horizontal");
    case EquilibriumKind::DiseaseFree:
        return stable_if("horizontal/E1: b_x > u_x and R0 < 1",
            {cond("b_x > u_x", p.bx - p.ux), cond("R0 < 1", 1.0 - reproduction_numbers(p).R0)});
    case EquilibriumKind::SusceptibleFree:
        return stable_if("horizontal/E2: b_y > u_y and b_x u_y/b_y < u_x + beta K (1 - u_y/b_y)",
            {cond("b_y > u_y", p.by - p.uy), cond("b_x u_y/b_y < u_x + beta K (1 - u_y/b_y)", -invasion_margin(p))});
    case EquilibriumKind::Interior: {
        auto v = stable_if("horizontal/E*: b_x > u_x, b_y > u_y, b_x u_y/b_y > u_x + beta K (1 - u_y/b_y), R0 > 1",
            {cond("b_x > u_x", p.bx - p.ux), cond("b_y > u_y", p.by - p.uy),
                cond("b_x u_y/b_y > u_x + beta K (1 - u_y/b_y)", invasion_margin(p)),
                cond("R0 > 1", reproduction_numbers(p).R0 - 1.0)});
        if (regime.discrete)
            v.notes.push_back("evaluated with the u_y/b_y form of the invasion threshold; the u_x/b_x form "
                              "is inconsistent with X* > 0");
        return v;
    }
    }
    return {};
}

TheoremVerdict vertical_clause(const HostParams& p, const Equilibrium& eq)
{
    switch (eq.kind) {
    case EquilibriumKind::Trivial:
        return trivial_clause(p, "vertical");
    case EquilibriumKind::DiseaseFree:
        return stable_if("vertical/E1: b_x > u_x and b_y/u_y < b_x/u_x",
            {cond("b_x > u_x", p.bx - p.ux), cond("b_y/u_y < b_x/u_x", p.bx / p.ux - p.by / p.uy)});
    case EquilibriumKind::SusceptibleFree: {
        TheoremVerdict v;
        v.clause = "vertical/E2: always unstable";
        v.prediction = Prediction::Unstable;
        return v;
    }
    case EquilibriumKind::Interior:
        break;
    }
    TheoremVerdict v;
    v.clause = "vertical/E*: no interior equilibrium";
    return v;
}

} // namespace

TheoremVerdict theorem_prediction(const Model& model, const Equilibrium& eq, const Regime& regime)
{
    if (!eq.exists) {
        TheoremVerdict v;
        v.clause = std::string(label(eq.kind)) + " does not exist";
        return v;
    }
    const auto& p = model.params();
    switch (model.variant()) {
    case ModelVariant::General:
        return general_clause(p, eq);
    case ModelVariant::HorizontalPerfectVertical:
        return horizontal_clause(p, eq, regime);
    case ModelVariant::PerfectVerticalOnly:
        return vertical_clause(p, eq);
    }
    return {};
}

bool prediction_matches(Prediction p, Classification c) noexcept
{
    switch (p) {
    case Prediction::Stable:
        return c == Classification::Stable;
    case Prediction::Unstable:
        return c == Classification::Saddle || c == Classification::Source;
    case Prediction::NotCovered:
        return false;
    }
    return false;
}

StabilityReport analyze_stability(const Model& model, const Equilibrium& eq, const Regime& regime)
{
    StabilityReport r;
    r.regime = regime;
    const Matrix2 J = regime.discrete ? discrete_jacobian(model, eq.point, StepSize(regime.h))
                                      : continuous_jacobian(model, eq.point);
    r.eigenvalues = eigenvalues2(J);
    r.classification = classify(r.eigenvalues, regime);
    r.theorem = theorem_prediction(model, eq, regime);
    if (r.theorem.prediction != Prediction::NotCovered)
        r.agree = prediction_matches(r.theorem.prediction, r.classification);
    return r;
}

} // namespace nsfd_epi
