#include "nsfd_epi/equilibria.hpp"

#include "nsfd_epi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsfd_epi {

namespace {

Condition make_condition(std::string name, double margin, const ConditionOptions& opt)
{
    return {std::move(name), margin > opt.eps_cond, margin};
}

bool all_hold(const std::vector<Condition>& cs)
{
    return std::all_of(cs.begin(), cs.end(), [](const Condition& c) { return c.holds; });
}

} // namespace

std::string_view to_string(EquilibriumKind k) noexcept
{
    switch (k) {
    case EquilibriumKind::Trivial:
        return "trivial";
    case EquilibriumKind::DiseaseFree:
        return "disease-free";
    case EquilibriumKind::SusceptibleFree:
        return "susceptible-free";
    case EquilibriumKind::Interior:
        return "interior";
    }
    return "unknown";
}

std::string_view label(EquilibriumKind k) noexcept
{
    switch (k) {
    case EquilibriumKind::Trivial:
        return "E0";
    case EquilibriumKind::DiseaseFree:
        return "E1";
    case EquilibriumKind::SusceptibleFree:
        return "E2";
    case EquilibriumKind::Interior:
        return "E*";
    }
    return "?";
}

ReproductionNumbers reproduction_numbers(const HostParams& p)
{
    if (p.bx == 0.0)
        throw DomainError("reproduction_numbers: b_x must be nonzero");
    if (p.uy == 0.0)
        throw DomainError("reproduction_numbers: u_y must be nonzero");
    ReproductionNumbers r;
    const double density_fraction = 1.0 - p.ux / p.bx;
    r.V0 = (p.by / p.bx) * (p.ux / p.uy);
    r.H0 = (p.beta / p.uy) * p.K * density_fraction;
    r.R0 = r.V0 + r.H0;
    r.negative_disease_free_density = density_fraction < 0.0;
    return r;
}

Equilibrium trivial_equilibrium()
{
    return {State{0.0, 0.0}, EquilibriumKind::Trivial, true, {}, {}};
}

Equilibrium disease_free_equilibrium(const HostParams& p, ConditionOptions opt)
{
    if (p.bx == 0.0)
        throw DomainError("disease_free_equilibrium: b_x must be nonzero");
    Equilibrium eq;
    eq.kind = EquilibriumKind::DiseaseFree;
    eq.point = {p.K * (1.0 - p.ux / p.bx), 0.0};
    eq.conditions.push_back(make_condition("b_x > u_x", p.bx - p.ux, opt));
    eq.exists = all_hold(eq.conditions);
    if (p.bx == p.ux)
        eq.note = "coincides with E0";
    return eq;
}

Equilibrium susceptible_free_equilibrium(const Model& model, ConditionOptions opt)
{
    const auto& p = model.params();
    if (!model.has_invariant_y_axis())
        throw NotAnEquilibriumError("susceptible-free point requires e = 0 (Y-axis is not invariant)");
    if (p.by == 0.0)
        throw DomainError("susceptible_free_equilibrium: b_y must be nonzero");
    Equilibrium eq;
    eq.kind = EquilibriumKind::SusceptibleFree;
    eq.point = {0.0, p.K * (1.0 - p.uy / p.by)};
    eq.conditions.push_back(make_condition("b_y > u_y", p.by - p.uy, opt));
    eq.exists = all_hold(eq.conditions);
    if (p.by == p.uy)
        eq.note = "coincides with E0";
    return eq;
}

InteriorCoefficients interior_coefficients(const HostParams& p)
{
    if (p.by == 0.0)
        throw DomainError("interior_coefficients: b_y must be nonzero");
    const double bK = p.beta * p.K;
    const double by2 = p.by * p.by;
    const double infected_growth = (p.by - p.uy) / p.by;

    InteriorCoefficients c;
    c.A = bK / by2 * (p.by * (p.bx - p.by - p.e) + bK * (p.by + p.e));
    c.B = -p.K * (p.bx - p.ux) + p.K * (p.bx + bK + p.e) * infected_growth
        + 2.0 * p.e * p.K * (bK - p.by) * (p.by - p.uy) / by2 - p.e * p.K * (bK - p.by) / p.by;
    c.C = -p.e * p.K * p.K * (p.by - p.uy) * p.uy / by2;
    return c;
}

double positive_branch_root(const InteriorCoefficients& c)
{
    const double disc = c.B * c.B - 4.0 * c.A * c.C;
    if (disc < 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double sq = std::sqrt(disc);
    // (-B + sq) / 2A; when B > 0 the numerator cancels, use the conjugate form.
    if (c.B <= 0.0)
        return (-c.B + sq) / (2.0 * c.A);
    return (2.0 * c.C) / (-c.B - sq);
}

namespace {

Equilibrium general_interior(const HostParams& p, const ConditionOptions& opt)
{
    const auto coeffs = interior_coefficients(p);
    if (coeffs.A == 0.0)
        throw DegenerateQuadraticError(
            "interior quadratic is degenerate (A = 0); use the horizontal or vertical variant for beta = 0");

    Equilibrium eq;
    eq.kind = EquilibriumKind::Interior;
    const double disc = coeffs.B * coeffs.B - 4.0 * coeffs.A * coeffs.C;
    eq.conditions.push_back(make_condition("B^2 - 4AC >= 0", disc, {}));
    if (disc < 0.0) {
        eq.conditions.back().holds = false;
        eq.note = "no real root";
        return eq;
    }
    eq.conditions.back().holds = true;

    const double xs = positive_branch_root(coeffs);
    const double ys = (p.beta * p.K - p.by) * xs / p.by + p.K * (p.by - p.uy) / p.by;
    eq.point = {xs, ys};

    eq.conditions.push_back(make_condition("0 < X* < K", std::min(xs, p.K - xs), opt));
    eq.conditions.push_back(make_condition("b_x > u_x", p.bx - p.ux, opt));
    eq.conditions.push_back(make_condition("b_y > u_y", p.by - p.uy, opt));
    eq.conditions.push_back(make_condition("b_y > beta K", p.by - p.beta * p.K, opt));
    const double ratio_margin = (xs > 0.0 && p.by != p.uy)
        ? p.K / xs - (p.by - p.beta * p.K) / (p.by - p.uy)
        : -std::numeric_limits<double>::infinity();
    eq.conditions.push_back(make_condition("K/X* > (b_y - beta K)/(b_y - u_y)", ratio_margin, opt));
    eq.exists = all_hold(eq.conditions);
    return eq;
}

Equilibrium horizontal_interior(const HostParams& p, const ConditionOptions& opt)
{
    if (p.by == 0.0)
        throw DomainError("interior_equilibrium: b_y must be nonzero");
    const double denom = p.beta * (p.beta * p.K + p.bx - p.by);
    if (denom == 0.0)
        throw DegenerateQuadraticError("interior closed form is degenerate: beta (beta K + b_x - b_y) = 0");

    Equilibrium eq;
    eq.kind = EquilibriumKind::Interior;
    eq.point = {
        (p.bx * p.uy - p.by * p.ux - p.beta * p.K * (p.by - p.uy)) / denom,
        (p.by * p.ux - p.bx * p.uy + p.beta * p.K * (p.bx - p.ux)) / denom,
    };
    const auto r = reproduction_numbers(p);
    eq.conditions.push_back(make_condition("b_x > u_x", p.bx - p.ux, opt));
    eq.conditions.push_back(make_condition("b_y > u_y", p.by - p.uy, opt));
    eq.conditions.push_back(make_condition("b_x u_y / b_y > u_x + beta K (1 - u_y/b_y)",
        p.bx * p.uy / p.by - (p.ux + p.beta * p.K * (1.0 - p.uy / p.by)), opt));
    eq.conditions.push_back(make_condition("R0 > 1", r.R0 - 1.0, opt));
    eq.exists = all_hold(eq.conditions);
    return eq;
}

} // namespace

Equilibrium interior_equilibrium(const Model& model, ConditionOptions opt)
{
    switch (model.variant()) {
    case ModelVariant::General:
        return general_interior(model.params(), opt);
    case ModelVariant::HorizontalPerfectVertical:
        return horizontal_interior(model.params(), opt);
    case ModelVariant::PerfectVerticalOnly:
        break;
    }
    throw NotAnEquilibriumError("the vertical-only model has no interior equilibrium");
}

std::vector<Equilibrium> all_equilibria(const Model& model, ConditionOptions opt)
{
    std::vector<Equilibrium> out;
    out.push_back(trivial_equilibrium());
    out.push_back(disease_free_equilibrium(model.params(), opt));
    if (model.has_invariant_y_axis())
        out.push_back(susceptible_free_equilibrium(model, opt));
    if (model.variant() != ModelVariant::PerfectVerticalOnly) {
        try {
            out.push_back(interior_equilibrium(model, opt));
        } catch (const DegenerateQuadraticError& err) {
            Equilibrium eq;
            eq.kind = EquilibriumKind::Interior;
            eq.note = err.what();
            out.push_back(std::move(eq));
        }
    }
    return out;
}

double equilibrium_residual(const Model& model, const Equilibrium& eq)
{
    return max_norm(vector_field(model, eq.point));
}

} // namespace nsfd_epi
