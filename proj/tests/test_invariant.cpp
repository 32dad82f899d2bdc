#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace ncosc;
using fixtures::figure;
using fixtures::mild;

namespace {

const ScenarioKind kAll[] = {ScenarioKind::SetIa, ScenarioKind::SetIb, ScenarioKind::SetIc, ScenarioKind::SetII,
                             ScenarioKind::SetIII};

}

TEST(Invariant, CoefficientValues) {
    for (auto kind : {ScenarioKind::SetIa, ScenarioKind::SetIb, ScenarioKind::SetIc}) {
        const InvariantCoeffs c = invariant_coefficients(figure(kind), 0.0);
        EXPECT_EQ(c.alpha, 1.0);
        EXPECT_DOUBLE_EQ(c.gamma, 1e-7);
        EXPECT_DOUBLE_EQ(c.beta, 1.0 + 0.25e-14);
    }
    const InvariantCoeffs iii = invariant_coefficients(figure(ScenarioKind::SetIII), 0.0);
    EXPECT_EQ(iii.alpha, 1.0);
    EXPECT_DOUBLE_EQ(iii.gamma, -2e-7);
}

TEST(Invariant, DiscriminantIdentity) {
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        for (double t : {0.0, 0.7, 1.9, 5.0})
            EXPECT_LE(invariant_identity_residual(invariant_coefficients(sc, t), sc.constants.xi), 1e-14);
    }
    ScenarioSpec s = fixtures::figure_spec(ScenarioKind::SetIII);
    s.constants.xi = 3.0;
    s.constants.mu = std::pow(9.0, 0.25);
    const Scenario sc = build_scenario(s);
    EXPECT_LE(invariant_identity_residual(invariant_coefficients(sc, 1.0), 3.0), 1e-14);
}

TEST(Invariant, ClosesOnFamilyCoefficients) {
    EXPECT_LE(invariant_ode_residuals(figure(ScenarioKind::SetIb), 1.0).worst(), 1e-6);
    EXPECT_LE(invariant_ode_residuals(figure(ScenarioKind::SetII), 0.5).worst(), 1e-6);
    for (auto kind : kAll) {
        const Scenario sc = mild(kind);
        for (double t : {0.2, 1.0, 3.0}) EXPECT_LE(invariant_ode_residuals(sc, t).worst(), 1e-6) << to_string(kind);
    }
}

TEST(Invariant, ClosesAcrossFigureGrid) {
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        for (int i = 0; i < 100; ++i) {
            const double t = 1e-4 + 5.0 * i / 99.0;
            EXPECT_LE(invariant_ode_residuals(sc, t).worst(), 1e-6) << to_string(kind) << " t=" << t;
        }
    }
}

// With γ replaced by −γ the γ̇ equation is still satisfied (β is computed
// from ρ on its own), so the failure shows up in the α̇ and β̇ equations.
TEST(Invariant, WrongGammaSignIsDetected) {
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        auto flipped = [&](double t) {
            InvariantCoeffs c = invariant_coefficients(sc, t);
            c.gamma = -c.gamma;
            return c;
        };
        const InvariantODEResiduals r = invariant_ode_residuals(flipped, sc, 0.5);
        EXPECT_GE(r.alpha, 1.0) << to_string(kind);
        EXPECT_GE(r.beta, 1.0) << to_string(kind);
    }
}

TEST(Invariant, RejectsNonPositiveStep) {
    EXPECT_THROW(invariant_ode_residuals(figure(ScenarioKind::SetIb), 1.0, 0.0), DomainError);
}
