#pragma once

#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/model.hpp"
#include "nsfd_epi/nsfd.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nsfd_epi {

struct Matrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    double trace() const noexcept { return a11 + a22; }
    double det() const noexcept { return a11 * a22 - a12 * a21; }
};

using Eigenpair = std::array<std::complex<double>, 2>;

/// Linearisation of the continuous vector field at `point`.
Matrix2 continuous_jacobian(const Model& model, State point);

/// Linearisation of the variant's positive map at `point` for step h.
/// The general map needs point.X > 0 unless point.Y == 0, where the Y/X
/// terms are taken as their limit 0 along the X-axis.
Matrix2 discrete_jacobian(const Model& model, State point, StepSize h);

/// Roots of l^2 - tr l + det, ordered by descending modulus, then by
/// descending real part, then by descending imaginary part.
Eigenpair eigenvalues2(const Matrix2& m);

enum class Classification { Stable, Saddle, Source, Nonhyperbolic };
enum class Prediction { Stable, Unstable, NotCovered };

std::string_view to_string(Classification c) noexcept;
std::string_view to_string(Prediction p) noexcept;

/// Continuous-time or discrete-time (with its step) linear stability regime.
struct Regime {
    bool discrete = false;
    double h = 0.0;

    static Regime continuous() noexcept { return {false, 0.0}; }
    static Regime discrete_step(double h) noexcept { return {true, h}; }
};

std::string describe(const Regime& r);

/// Relative tolerance for placing an eigenvalue on the stability boundary.
inline constexpr double kHyperbolicityTolerance = 1e-9;

/// Continuous: sign of the real parts. Discrete: moduli against 1.
Classification classify(const Eigenpair& eigs, const Regime& regime, double eps_hyp = kHyperbolicityTolerance);

struct JuryResult {
    double one_minus_det = 0.0;
    double one_minus_trace_plus_det = 0.0;
    double a11 = 0.0;
    double a22 = 0.0;
    bool verdict = false;
};

/// 1 - det > 0, 1 - tr + det > 0, 0 < a11 < 1 and 0 < a22 < 1.
JuryResult jury_conditions(const Matrix2& m);

struct TheoremVerdict {
    Prediction prediction = Prediction::NotCovered;
    std::string clause; ///< e.g. "general/E1: b_x > u_x and R0 < 1"
    /// Hypotheses of the clause, margins positive when satisfied.
    std::vector<Condition> hypotheses;
    /// Assumptions used by the argument but not part of the clause.
    std::vector<Condition> side_conditions;
    std::vector<std::string> notes;
};

/// Evaluates the stability theorem clause matching (variant, equilibrium).
/// The hypotheses are the same for both regimes. Non-existent equilibria
/// are NotCovered.
TheoremVerdict theorem_prediction(const Model& model, const Equilibrium& eq, const Regime& regime);

/// True iff the prediction is covered and consistent with the class
/// (Unstable matches Saddle or Source).
bool prediction_matches(Prediction p, Classification c) noexcept;

struct StabilityReport {
    Eigenpair eigenvalues{};
    Classification classification = Classification::Nonhyperbolic;
    Regime regime;
    TheoremVerdict theorem;
    /// Empty when the theorem does not cover the equilibrium.
    std::optional<bool> agree;
};

StabilityReport analyze_stability(const Model& model, const Equilibrium& eq, const Regime& regime);

} // namespace nsfd_epi
