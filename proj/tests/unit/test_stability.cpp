#include "support.hpp"

#include "nsfd_epi/errors.hpp"
#include "nsfd_epi/nsfd.hpp"
#include "nsfd_epi/stability.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace nsfd_epi;
using namespace nsfd_epi::test;

namespace {

/// Central-difference Jacobian of the positive map.
Matrix2 finite_difference_jacobian(const Model& m, State s, StepSize h)
{
    const double dx = 1e-6 * std::max(1.0, std::abs(s.X));
    const double dy = 1e-6 * std::max(1.0, std::abs(s.Y));
    const State xp = nsfd_step(m, h, {s.X + dx, s.Y});
    const State xm = nsfd_step(m, h, {s.X - dx, s.Y});
    const State yp = nsfd_step(m, h, {s.X, s.Y + dy});
    const State ym = nsfd_step(m, h, {s.X, s.Y - dy});
    return {(xp.X - xm.X) / (2 * dx), (yp.X - ym.X) / (2 * dy), (xp.Y - xm.Y) / (2 * dx), (yp.Y - ym.Y) / (2 * dy)};
}

double max_entry(const Matrix2& m)
{
    return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}

bool inside_unit_circle(const Matrix2& m)
{
    // Closed-form moduli, computed here independently of eigenvalues2.
    const double tr = m.a11 + m.a22;
    const double det = m.a11 * m.a22 - m.a12 * m.a21;
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        return std::abs(tr / 2.0 + r) < 1.0 && std::abs(tr / 2.0 - r) < 1.0;
    }
    return det < 1.0; // |lambda|^2 = det for a complex pair
}

double distance_to_unit_circle(const Matrix2& m)
{
    const double tr = m.a11 + m.a22;
    const double det = m.a11 * m.a22 - m.a12 * m.a21;
    const std::complex<double> r = std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
    return std::min(std::abs(std::abs(tr / 2.0 + r) - 1.0), std::abs(std::abs(tr / 2.0 - r) - 1.0));
}

} // namespace

TEST(Jacobian, ContinuousAtOrigin)
{
    const auto J = continuous_jacobian(general(0.1), {0.0, 0.0});
    EXPECT_NEAR(J.a11, 0.5, 1e-15);
    EXPECT_NEAR(J.a12, 0.02, 1e-15);
    EXPECT_EQ(J.a21, 0.0);
    EXPECT_NEAR(J.a22, 0.2, 1e-15);
    const auto eigs = eigenvalues2(J);
    EXPECT_NEAR(eigs[0].real(), 0.5, 1e-15);
    EXPECT_NEAR(eigs[1].real(), 0.2, 1e-15);
}

TEST(Jacobian, DiscreteAtOrigin)
{
    const double phi1 = 0.0997504;
    const auto eigs = eigenvalues2(discrete_jacobian(general(0.1), {0.0, 0.0}, StepSize(0.1)));
    EXPECT_NEAR(eigs[0].real(), (1 + phi1 * 0.6) / (1 + phi1 * 0.1), 1e-7);
    EXPECT_NEAR(eigs[0].real(), 1.04938, 5e-6);
    EXPECT_NEAR(eigs[1].real(), 1.01961, 5e-6);
    EXPECT_EQ(classify(eigs, Regime::discrete_step(0.1)), Classification::Source);
}

TEST(Jacobian, GeneralMapRefusesYAxis)
{
    EXPECT_THROW(discrete_jacobian(general(0.3), {0.0, 0.4}, StepSize(0.1)), DomainError);
}

TEST(JacobianProperty, MatchesFiniteDifferences)
{
    std::mt19937 rng(37);
    for (int i = 0; i < 3000; ++i) {
        const auto p = strict_params(rng);
        const auto v = static_cast<ModelVariant>(i % 3);
        const Model m = with_variant(p, v);
        const StepSize h(std::exp(uniform(rng, std::log(1e-3), std::log(50.0))));
        const State s {uniform(rng, 0.05, 2.0) * p.K, uniform(rng, 0.05, 2.0) * p.K};
        const Matrix2 J = discrete_jacobian(m, s, h);
        const Matrix2 fd = finite_difference_jacobian(m, s, h);
        const double scale = std::max(1.0, max_entry(J));
        EXPECT_NEAR(J.a11, fd.a11, 1e-6 * scale);
        EXPECT_NEAR(J.a12, fd.a12, 1e-6 * scale);
        EXPECT_NEAR(J.a21, fd.a21, 1e-6 * scale);
        EXPECT_NEAR(J.a22, fd.a22, 1e-6 * scale);
    }
}

TEST(Eigenvalues, SimpleMatrices)
{
    const auto id = eigenvalues2({1, 0, 0, 1});
    EXPECT_EQ(id[0], std::complex<double>(1.0, 0.0));
    EXPECT_EQ(id[1], std::complex<double>(1.0, 0.0));

    const auto rot = eigenvalues2({0, -1, 1, 0});
    EXPECT_NEAR(rot[0].real(), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rot[0].imag()), 1.0, 1e-15);
    EXPECT_NEAR(rot[0].imag(), -rot[1].imag(), 1e-15);

    const auto tri = eigenvalues2({0.5, 0, 3, -0.05});
    EXPECT_NEAR(tri[0].real(), 0.5, 1e-15);
    EXPECT_NEAR(tri[1].real(), -0.05, 1e-15);
}

TEST(EigenvaluesProperty, ReproduceTraceAndDeterminant)
{
    std::mt19937 rng(41);
    for (int i = 0; i < 20000; ++i) {
        const Matrix2 m {uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5)};
        const auto eigs = eigenvalues2(m);
        const double scale = 1.0 + max_entry(m) * max_entry(m);
        EXPECT_NEAR((eigs[0] + eigs[1]).real(), m.trace(), 1e-12 * scale);
        EXPECT_NEAR((eigs[0] * eigs[1]).real(), m.det(), 1e-12 * scale);
        EXPECT_GE(std::abs(eigs[0]), std::abs(eigs[1]));
    }
}

TEST(Classify, Regimes)
{
    using C = std::complex<double>;
    EXPECT_EQ(classify({C(0.9), C(0.5)}, Regime::discrete_step(1)), Classification::Stable);
    EXPECT_EQ(classify({C(1.2), C(0.5)}, Regime::discrete_step(1)), Classification::Saddle);
    EXPECT_EQ(classify({C(1.2), C(-1.5)}, Regime::discrete_step(1)), Classification::Source);
    EXPECT_EQ(classify({C(-0.5), C(-0.05)}, Regime::continuous()), Classification::Stable);
    EXPECT_EQ(classify({C(0.3), C(-0.05)}, Regime::continuous()), Classification::Saddle);
    EXPECT_EQ(classify({C(0.0, 1.0), C(0.0, -1.0)}, Regime::continuous()), Classification::Nonhyperbolic);
    EXPECT_EQ(classify({C(0.6, 0.8), C(0.6, -0.8)}, Regime::discrete_step(1)), Classification::Nonhyperbolic);
    EXPECT_EQ(classify({C(1.0 + 1e-12), C(0.5)}, Regime::discrete_step(1)), Classification::Nonhyperbolic);
    EXPECT_EQ(classify({C(1.0 + 1e-6), C(0.5)}, Regime::discrete_step(1)), Classification::Saddle);
}

TEST(Jury, DiagonalCases)
{
    const auto ok = jury_conditions({0.5, 0, 0, 0.5});
    EXPECT_DOUBLE_EQ(ok.one_minus_det, 0.75);
    EXPECT_DOUBLE_EQ(ok.one_minus_trace_plus_det, 0.25);
    EXPECT_EQ(ok.a11, 0.5);
    EXPECT_EQ(ok.a22, 0.5);
    EXPECT_TRUE(ok.verdict);
    EXPECT_FALSE(jury_conditions({1.2, 0, 0, 0.5}).verdict);
}

TEST(Jury, InteriorPointOfDiscreteMap)
{
    const auto m = general(0.3);
    const auto eq = interior_equilibrium(m);
    const auto J = discrete_jacobian(m, eq.point, StepSize(0.1));
    EXPECT_TRUE(jury_conditions(J).verdict);
    EXPECT_TRUE(inside_unit_circle(J));
}

TEST(JuryProperty, AgreesWithEigenvalueModuli)
{
    std::mt19937 rng(43);
    std::size_t checked = 0;
    for (int i = 0; i < 100000; ++i) {
        const Matrix2 m {uniform(rng, 1e-12, 1.0), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, 1e-12, 1.0)};
        if (distance_to_unit_circle(m) <= kHyperbolicityTolerance)
            continue;
        ++checked;
        ASSERT_EQ(jury_conditions(m).verdict, inside_unit_circle(m))
            << m.a11 << " " << m.a12 << " " << m.a21 << " " << m.a22;
    }
    EXPECT_GT(checked, 99000u);
}

TEST(Theorems, ReferencePredictions)
{
    const auto low = general(0.1);
    const auto e1_low = disease_free_equilibrium(low.params());
    for (const auto& r : {Regime::continuous(), Regime::discrete_step(0.1)}) {
        const auto rep = analyze_stability(low, e1_low, r);
        EXPECT_EQ(rep.theorem.prediction, Prediction::Stable);
        EXPECT_EQ(rep.classification, Classification::Stable);
        EXPECT_EQ(rep.agree, true);
    }

    const auto high = general(0.3);
    const auto rep = analyze_stability(high, disease_free_equilibrium(high.params()), Regime::continuous());
    EXPECT_EQ(rep.theorem.prediction, Prediction::Unstable);
    EXPECT_EQ(rep.classification, Classification::Saddle);

    const auto star = analyze_stability(high, interior_equilibrium(high), Regime::discrete_step(0.1));
    EXPECT_EQ(star.theorem.prediction, Prediction::Stable);
    ASSERT_EQ(star.theorem.side_conditions.size(), 1u);
    EXPECT_TRUE(star.theorem.side_conditions[0].holds);

    const auto v = vertical();
    const auto e2 = susceptible_free_equilibrium(v);
    const auto vrep = analyze_stability(v, e2, Regime::discrete_step(0.1));
    EXPECT_EQ(vrep.theorem.prediction, Prediction::Unstable);
    EXPECT_EQ(vrep.agree, true);
}

TEST(Theorems, HorizontalInteriorCarriesThresholdNote)
{
    const auto m = horizontal(0.3);
    const auto rep = analyze_stability(m, interior_equilibrium(m), Regime::discrete_step(0.1));
    EXPECT_EQ(rep.theorem.prediction, Prediction::Stable);
    EXPECT_FALSE(rep.theorem.notes.empty());
}

TEST(Theorems, AbsentEquilibriaAreNotCovered)
{
    const auto m = general(0.1);
    const auto eq = interior_equilibrium(m);
    ASSERT_FALSE(eq.exists);
    EXPECT_EQ(theorem_prediction(m, eq, Regime::continuous()).prediction, Prediction::NotCovered);
}

TEST(Theorems, PredictionMatching)
{
    EXPECT_TRUE(prediction_matches(Prediction::Stable, Classification::Stable));
    EXPECT_TRUE(prediction_matches(Prediction::Unstable, Classification::Saddle));
    EXPECT_TRUE(prediction_matches(Prediction::Unstable, Classification::Source));
    EXPECT_FALSE(prediction_matches(Prediction::Unstable, Classification::Stable));
    EXPECT_FALSE(prediction_matches(Prediction::NotCovered, Classification::Stable));
}

TEST(TheoremProperty, CoveredPredictionsMatchEigenvaluesAndEveryClauseIsExercised)
{
    std::mt19937 rng(47);
    std::set<std::string> covered;
    std::size_t compared = 0;
    for (int i = 0; i < 6000; ++i) {
        // Wider than strict mode so the trivial-equilibrium clauses are reached too.
        HostParams p;
        p.ux = uniform(rng, 0.01, 1.0);
        p.uy = p.ux + uniform(rng, 0.01, 1.0);
        p.by = uniform(rng, 0.01, 2.0);
        p.e = uniform(rng, 0.0, 0.3);
        p.bx = p.by + p.e + uniform(rng, 0.0, 2.0);
        p.K = uniform(rng, 0.2, 5.0);
        p.beta = uniform(rng, 0.01, 1.0);
        const auto v = static_cast<ModelVariant>(i % 3);
        const Model m = with_variant(p, v);
        const double h = std::exp(uniform(rng, std::log(1e-3), std::log(100.0)));
        for (const auto& eq : all_equilibria(m)) {
            if (!eq.exists)
                continue;
            for (const auto& regime : {Regime::continuous(), Regime::discrete_step(h)}) {
                const auto rep = analyze_stability(m, eq, regime);
                if (rep.theorem.prediction == Prediction::NotCovered)
                    continue;
                bool near_boundary = false;
                for (const auto& c : rep.theorem.hypotheses)
                    near_boundary = near_boundary || std::abs(c.margin) <= 1e-6;
                for (const auto& c : rep.theorem.side_conditions)
                    near_boundary = near_boundary || !c.holds;
                if (near_boundary || rep.classification == Classification::Nonhyperbolic)
                    continue;
                covered.insert(rep.theorem.clause);
                ++compared;
                EXPECT_TRUE(prediction_matches(rep.theorem.prediction, rep.classification))
                    << rep.theorem.clause << " in " << describe(regime) << ": " << to_string(rep.classification);
                ASSERT_TRUE(rep.agree.has_value());
                EXPECT_TRUE(*rep.agree);
            }
        }
    }
    EXPECT_GT(compared, 1000u);
    const std::set<std::string> expected_prefixes {"general/E0", "general/E1: b_x", "general/E1: unstable",
        "general/E*", "horizontal/E0", "horizontal/E1", "horizontal/E2", "horizontal/E*", "vertical/E0",
        "vertical/E1", "vertical/E2"};
    for (const auto& prefix : expected_prefixes) {
        const bool seen = std::any_of(covered.begin(), covered.end(),
            [&](const std::string& c) { return c.rfind(prefix, 0) == 0; });
        EXPECT_TRUE(seen) << "clause never exercised: " << prefix;
    }
}
