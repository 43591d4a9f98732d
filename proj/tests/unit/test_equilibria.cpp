#include "support.hpp"

#include "nsfd_epi/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace nsfd_epi;
using namespace nsfd_epi::test;

namespace {

/// Interior point of the e = 0 model from the two nullclines, solved here
/// directly: the Y-nullcline fixes the total density S = (X+Y)/K as a linear
/// function of X, which turns the X-nullcline into a linear equation in X.
State horizontal_interior_oracle(const HostParams& p)
{
    const double S0 = 1.0 - p.uy / p.by;  // S at X = 0
    const double dS = p.beta / p.by;       // dS/dX along the Y-nullcline
    // b_x (1 - S) - u_x - beta (K S - X) = 0 with S = S0 + dS X
    const double constant = p.bx * (1.0 - S0) - p.ux - p.beta * p.K * S0;
    const double slope = -p.bx * dS - p.beta * p.K * dS + p.beta;
    const double X = -constant / slope;
    return {X, p.K * (S0 + dS * X) - X};
}

double field_norm(const Model& m, State s)
{
    return max_norm(vector_field(m, s));
}

} // namespace

TEST(ReproductionNumbers, ReferenceValues)
{
    const auto low = reproduction_numbers(general_set(0.1));
    EXPECT_NEAR(low.V0, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(low.H0, 5.0 / 12.0, 1e-15);
    EXPECT_NEAR(low.R0, 0.75, 1e-15);
    EXPECT_NEAR(reproduction_numbers(general_set(0.3)).R0, 1.0 / 3.0 + 1.25, 1e-14);
}

TEST(ReproductionNumbers, NoHorizontalTermWithoutBeta)
{
    const auto r = reproduction_numbers(general_set(0.0));
    EXPECT_EQ(r.H0, 0.0);
    EXPECT_EQ(r.R0, r.V0);
}

TEST(ReproductionNumbers, DomainErrors)
{
    auto p = general_set(0.1);
    p.bx = 0.0;
    EXPECT_THROW(reproduction_numbers(p), DomainError);
    p = general_set(0.1);
    p.uy = 0.0;
    EXPECT_THROW(reproduction_numbers(p), DomainError);
}

TEST(ReproductionNumbers, NegativeDensityIsFlagged)
{
    auto p = general_set(0.1);
    p.ux = 0.7;
    EXPECT_TRUE(reproduction_numbers(p).negative_disease_free_density);
    EXPECT_FALSE(reproduction_numbers(general_set(0.1)).negative_disease_free_density);
}

TEST(ReproductionNumbersProperty, SumIsExact)
{
    std::mt19937 rng(3);
    for (int i = 0; i < 5000; ++i) {
        const auto p = strict_params(rng);
        const auto r = reproduction_numbers(p);
        EXPECT_GE(r.V0, 0.0);
        EXPECT_EQ(r.R0, r.V0 + r.H0);
        // H0 carries the factor 1 - u_x/b_x, negative exactly when flagged.
        EXPECT_EQ(r.H0 < 0.0, r.negative_disease_free_density && p.beta > 0.0);
    }
}

TEST(BoundaryEquilibria, Trivial)
{
    const auto e0 = trivial_equilibrium();
    EXPECT_TRUE(e0.exists);
    EXPECT_EQ(e0.point.X, 0.0);
    EXPECT_EQ(e0.point.Y, 0.0);
    EXPECT_EQ(e0.kind, EquilibriumKind::Trivial);
}

TEST(BoundaryEquilibria, DiseaseFree)
{
    const auto e1 = disease_free_equilibrium(general_set(0.1));
    EXPECT_TRUE(e1.exists);
    EXPECT_NEAR(e1.point.X, 0.8333, 5e-5);
    EXPECT_EQ(e1.point.Y, 0.0);
    EXPECT_NEAR(disease_free_equilibrium(perfect_vertical_set(0.1)).point.X, 1.0, 1e-15);

    auto p = general_set(0.1);
    p.ux = p.bx;
    const auto degenerate = disease_free_equilibrium(p);
    EXPECT_FALSE(degenerate.exists);
    EXPECT_EQ(degenerate.point.X, 0.0);

    p.bx = 0.0;
    EXPECT_THROW(disease_free_equilibrium(p), DomainError);
}

TEST(BoundaryEquilibria, SusceptibleFree)
{
    const auto e2 = susceptible_free_equilibrium(horizontal(0.42));
    EXPECT_TRUE(e2.exists);
    EXPECT_EQ(e2.point.X, 0.0);
    EXPECT_NEAR(e2.point.Y, 0.6, 1e-15);

    auto p = perfect_vertical_set(0.1);
    p.uy = p.by;
    EXPECT_FALSE(susceptible_free_equilibrium(Model(p, ModelVariant::HorizontalPerfectVertical)).exists);
    EXPECT_THROW(susceptible_free_equilibrium(general(0.1)), NotAnEquilibriumError);
}

TEST(InteriorCoefficients, HandEvaluated)
{
    const auto c = interior_coefficients(general_set(0.3));
    EXPECT_NEAR(c.A, 0.37125, 1e-14);
    EXPECT_NEAR(c.B, -0.04, 1e-14);
    EXPECT_NEAR(c.C, -0.005, 1e-14);
}

TEST(InteriorCoefficients, LimitingCases)
{
    auto p = general_set(0.3);
    p.e = 0.0;
    EXPECT_EQ(interior_coefficients(p).C, 0.0);
    EXPECT_EQ(interior_coefficients(general_set(0.0)).A, 0.0);
}

TEST(InteriorCoefficientsProperty, ConstantTermIsNonPositive)
{
    std::mt19937 rng(5);
    for (int i = 0; i < 5000; ++i) {
        auto p = strict_params(rng);
        if (p.e > 0.0 && p.by > p.uy) {
            EXPECT_LE(interior_coefficients(p).C, 0.0);
        }
    }
}

TEST(PositiveRoot, MatchesTextbookFormulaAndAvoidsCancellation)
{
    const InteriorCoefficients c {0.37125, -0.04, -0.005};
    const double textbook = (-c.B + std::sqrt(c.B * c.B - 4 * c.A * c.C)) / (2 * c.A);
    EXPECT_NEAR(positive_branch_root(c), textbook, 1e-15);

    // B >> 0 and tiny AC: the naive formula loses every digit.
    const InteriorCoefficients tiny {1.0, 1e8, -1.0};
    EXPECT_NEAR(positive_branch_root(tiny), 1e-8, 1e-20);
    EXPECT_TRUE(std::isnan(positive_branch_root({1.0, 0.0, 1.0})));
}

TEST(Interior, GeneralReferencePoint)
{
    const auto eq = interior_equilibrium(general(0.3));
    ASSERT_TRUE(eq.exists);
    EXPECT_NEAR(eq.point.X, 0.1818, 5e-5);
    EXPECT_NEAR(eq.point.Y, 0.4545, 5e-5);
    EXPECT_LE(field_norm(general(0.3), eq.point), 1e-12);
    EXPECT_EQ(eq.kind, EquilibriumKind::Interior);
}

TEST(Interior, HorizontalReferencePoint)
{
    const auto eq = interior_equilibrium(horizontal(0.3));
    ASSERT_TRUE(eq.exists);
    const State oracle = horizontal_interior_oracle(perfect_vertical_set(0.3));
    EXPECT_NEAR(eq.point.X, oracle.X, 1e-14);
    EXPECT_NEAR(eq.point.Y, oracle.Y, 1e-14);
    EXPECT_NEAR(eq.point.X, 0.0476, 5e-5);
    EXPECT_NEAR(eq.point.Y, 0.5952, 5e-5);
}

TEST(Interior, HorizontalAbsentWhenSusceptiblesCannotInvade)
{
    const auto eq = interior_equilibrium(horizontal(0.42));
    EXPECT_FALSE(eq.exists);
    const auto it = std::find_if(eq.conditions.begin(), eq.conditions.end(),
        [](const Condition& c) { return c.name.find("beta K (1 - u_y/b_y)") != std::string::npos; });
    ASSERT_NE(it, eq.conditions.end());
    EXPECT_FALSE(it->holds);
    EXPECT_NEAR(it->margin, 0.3 - (0.1 + 0.252), 1e-14);
}

TEST(Interior, ErrorPaths)
{
    EXPECT_THROW(interior_equilibrium(general(0.0)), DegenerateQuadraticError);
    EXPECT_THROW(interior_equilibrium(horizontal(0.0)), DegenerateQuadraticError);
    EXPECT_THROW(interior_equilibrium(vertical()), NotAnEquilibriumError);
}

TEST(Interior, GeneralAbsentBelowThreshold)
{
    const auto eq = interior_equilibrium(general(0.1));
    EXPECT_FALSE(eq.exists);
}

TEST(AllEquilibria, ListsPerVariant)
{
    const auto g = all_equilibria(general(0.3));
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0].kind, EquilibriumKind::Trivial);
    EXPECT_EQ(g[1].kind, EquilibriumKind::DiseaseFree);
    EXPECT_EQ(g[2].kind, EquilibriumKind::Interior);

    const auto h = all_equilibria(horizontal(0.3));
    ASSERT_EQ(h.size(), 4u);
    EXPECT_EQ(h[2].kind, EquilibriumKind::SusceptibleFree);

    const auto v = all_equilibria(vertical());
    ASSERT_EQ(v.size(), 3u);
    for (const auto& e : v)
        EXPECT_NE(e.kind, EquilibriumKind::Interior);

    // beta = 0 under the general variant: the interior is reported, not thrown.
    const auto degenerate = all_equilibria(general(0.0));
    EXPECT_FALSE(find(degenerate, EquilibriumKind::Interior).exists);
    EXPECT_FALSE(find(degenerate, EquilibriumKind::Interior).note.empty());
}

TEST(EquilibriaProperty, ResidualAndShapeInvariants)
{
    std::mt19937 rng(11);
    std::size_t interiors = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto p = strict_params(rng);
        for (auto v : {ModelVariant::General, ModelVariant::HorizontalPerfectVertical, ModelVariant::PerfectVerticalOnly}) {
            const Model m = with_variant(p, v);
            if (m.params().beta == 0.0 && v != ModelVariant::PerfectVerticalOnly)
                continue;
            for (const auto& eq : all_equilibria(m)) {
                if (!eq.exists)
                    continue;
                EXPECT_LE(field_norm(m, eq.point), 1e-9 * (1.0 + max_norm(eq.point)));
                EXPECT_DOUBLE_EQ(equilibrium_residual(m, eq), field_norm(m, eq.point));
                switch (eq.kind) {
                case EquilibriumKind::Trivial:
                    EXPECT_EQ(eq.point.X, 0.0);
                    EXPECT_EQ(eq.point.Y, 0.0);
                    break;
                case EquilibriumKind::DiseaseFree:
                    EXPECT_EQ(eq.point.Y, 0.0);
                    break;
                case EquilibriumKind::SusceptibleFree:
                    EXPECT_EQ(eq.point.X, 0.0);
                    break;
                case EquilibriumKind::Interior:
                    ++interiors;
                    EXPECT_GT(eq.point.X, 0.0);
                    EXPECT_GT(eq.point.Y, 0.0);
                    break;
                }
            }
        }
    }
    EXPECT_GT(interiors, 100u);
}

TEST(EquilibriaProperty, QuadraticResidual)
{
    std::mt19937 rng(13);
    for (int i = 0; i < 5000; ++i) {
        auto p = strict_params(rng);
        p.beta = uniform(rng, 0.01, 1.0);
        const auto c = interior_coefficients(p);
        const double x = positive_branch_root(c);
        if (std::isnan(x))
            continue;
        const double scale = std::max({std::abs(c.A), std::abs(c.B), std::abs(c.C)});
        const double residual = (c.A * x + c.B) * x + c.C;
        EXPECT_LE(std::abs(residual), 1e-10 * scale * std::max(1.0, x * x));
    }
}

TEST(EquilibriaProperty, VanishingVerticalRateRecoversClosedForm)
{
    const State target = interior_equilibrium(horizontal(0.3)).point;
    double previous = INFINITY;
    for (int k = 4; k <= 8; ++k) {
        auto p = perfect_vertical_set(0.3);
        p.e = std::pow(10.0, -k);
        const auto eq = interior_equilibrium(Model(p, ModelVariant::General));
        ASSERT_TRUE(eq.exists);
        const double d = distance(eq.point, target);
        EXPECT_LT(d, previous);
        previous = d;
    }
    EXPECT_LT(previous, 1e-6);
}

TEST(EquilibriaProperty, ReproductionThresholdMatchesInfectedDensitySign)
{
    std::mt19937 rng(17);
    std::size_t checked = 0;
    for (int i = 0; i < 20000; ++i) {
        auto p = strict_params(rng);
        p.e = 0.0;
        p.beta = uniform(rng, 0.01, 1.0);
        if (!(p.bx > p.ux && p.by > p.uy))
            continue;
        // Keep the closed form well defined and its sign meaningful.
        if (p.bx + p.beta * p.K - p.by <= 1e-6)
            continue;
        const double R0 = reproduction_numbers(p).R0;
        if (std::abs(R0 - 1.0) < 1e-9)
            continue;
        const State oracle = horizontal_interior_oracle(p);
        const auto eq = interior_equilibrium(Model(p, ModelVariant::HorizontalPerfectVertical));
        EXPECT_NEAR(eq.point.Y, oracle.Y, 1e-9 * (1.0 + std::abs(oracle.Y)));
        EXPECT_EQ(R0 > 1.0, eq.point.Y > 0.0) << "R0=" << R0 << " Y=" << eq.point.Y;
        ++checked;
    }
    EXPECT_GT(checked, 1000u);
}
