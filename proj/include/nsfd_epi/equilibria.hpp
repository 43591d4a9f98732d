#pragma once

#include "nsfd_epi/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nsfd_epi {

enum class EquilibriumKind { Trivial, DiseaseFree, SusceptibleFree, Interior };

std::string_view to_string(EquilibriumKind k) noexcept;
/// Short label used in reports: E0, E1, E2, E*.
std::string_view label(EquilibriumKind k) noexcept;

/// One evaluated inequality. `margin` is the signed distance from the
/// boundary, positive when the strict inequality holds.
struct Condition {
    std::string name;
    bool holds = false;
    double margin = 0.0;
};

struct Equilibrium {
    State point;
    EquilibriumKind kind = EquilibriumKind::Trivial;
    bool exists = false;
    std::vector<Condition> conditions;
    std::string note;
};

/// Coefficients of A X^2 + B X + C = 0 whose positive root is X*.
struct InteriorCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

struct ReproductionNumbers {
    double V0 = 0.0; ///< vertical component
    double H0 = 0.0; ///< horizontal component
    double R0 = 0.0; ///< V0 + H0
    /// Set when b_x < u_x, i.e. the disease-free density 1 - u_x/b_x is negative.
    bool negative_disease_free_density = false;
};

/// Strict inequalities hold when margin > eps_cond.
struct ConditionOptions {
    double eps_cond = 0.0;
};

ReproductionNumbers reproduction_numbers(const HostParams& p);

Equilibrium trivial_equilibrium();
Equilibrium disease_free_equilibrium(const HostParams& p, ConditionOptions opt = {});
/// Throws NotAnEquilibriumError when e > 0 (the Y-axis is not invariant).
Equilibrium susceptible_free_equilibrium(const Model& model, ConditionOptions opt = {});

InteriorCoefficients interior_coefficients(const HostParams& p);

/// Positive ("+ sqrt") root of A x^2 + B x + C, evaluated without
/// subtractive cancellation. Returns NaN when the discriminant is negative.
double positive_branch_root(const InteriorCoefficients& c);

/// Interior (coexistence) equilibrium.
///
/// General: root of the interior quadratic; throws DegenerateQuadraticError
/// when A == 0. HorizontalPerfectVertical: closed form; throws
/// DegenerateQuadraticError when beta (beta K + b_x - b_y) == 0.
/// PerfectVerticalOnly has no interior equilibrium (NotAnEquilibriumError).
Equilibrium interior_equilibrium(const Model& model, ConditionOptions opt = {});

/// Every equilibrium the variant admits, existing or not, in the order
/// E0, E1, [E2], [E*]. A degenerate interior is reported with exists = false
/// and an explanatory note instead of throwing.
std::vector<Equilibrium> all_equilibria(const Model& model, ConditionOptions opt = {});

/// ||f(point)||_inf for the continuous model.
double equilibrium_residual(const Model& model, const Equilibrium& eq);

} // namespace nsfd_epi
