#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace ncosc;
using fixtures::figure;
using fixtures::rel;

namespace {

const ScenarioKind kAll[] = {ScenarioKind::SetIa, ScenarioKind::SetIb, ScenarioKind::SetIc, ScenarioKind::SetII,
                             ScenarioKind::SetIII};

double interior_end(const Scenario& sc) {
    double end = 10.0;
    if (auto h = nc_horizons(sc).tightest()) end = std::min(end, 0.9 * *h);
    return end;
}

}  // namespace

TEST(Profiles, DampingAndFrequency) {
    const Scenario ib = figure(ScenarioKind::SetIb);
    EXPECT_EQ(damping_factor(ib, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(damping_factor(ib, 1.0), std::exp(-1.0));
    EXPECT_EQ(frequency(ib, 4.0), 1e3);
    const Scenario iii = figure(ScenarioKind::SetIII);
    EXPECT_EQ(damping_factor(iii, 9.0), 1.0);
    EXPECT_EQ(frequency(iii, 1.0), 500.0);
}

TEST(Coefficients, SetIaAtOrigin) {
    const Scenario ia = figure(ScenarioKind::SetIa);
    const HamCoeffs h = coefficients(ia, 0.0);
    EXPECT_EQ(h.a, 1e7);
    EXPECT_EQ(h.b, 1e7);
    // 40-digit reference: 3000 + 1000·√(1e7 − 1)
    EXPECT_NEAR(h.c, 3165277.5020544923707, 1e-8);
    EXPECT_NEAR(c_generic_complex(ia, 0.0).real(), 3165277.5020544923707, 1e-8);
}

TEST(NCParameters, FigureValuesAtOrigin) {
    for (auto kind : {ScenarioKind::SetIa, ScenarioKind::SetIb, ScenarioKind::SetIc, ScenarioKind::SetIII}) {
        const NCParams p = nc_parameters(figure(kind), 0.0);
        EXPECT_NEAR(p.theta_nc, 6.3245550041089847415, 1e-14) << to_string(kind);
    }
    // Set-II: a(0) = 4σ, so θ = 2√(4e7 − 1)/ω0
    EXPECT_NEAR(nc_parameters(figure(ScenarioKind::SetII), 0.0).theta_nc, 12.649110482559633, 1e-13);
    for (auto kind : {ScenarioKind::SetIa, ScenarioKind::SetIb, ScenarioKind::SetIc, ScenarioKind::SetIII})
        EXPECT_NEAR(nc_parameters(figure(kind), 0.0).omega_nc, 6000.0, 1e-9) << to_string(kind);
    // Set-II at t=0: 2√(Δ − ω0²)
    EXPECT_NEAR(nc_parameters(figure(ScenarioKind::SetII), 0.0).omega_nc, 6000.0, 1e-9);
}

TEST(NCParameters, SetIIIThetaGrowsLinearly) {
    const Scenario sc = figure(ScenarioKind::SetIII);
    const double th0 = nc_parameters(sc, 0.0).theta_nc;
    EXPECT_NEAR(nc_parameters(sc, 1.0).theta_nc / th0, 2.0, 1e-14);
}

TEST(NCParameters, ThrowsOutsideWindowWithHorizon) {
    const Scenario ia = figure(ScenarioKind::SetIa);
    try {
        nc_parameters(ia, 17.0);
        FAIL();
    } catch (const OutsideRealityWindow& e) {
        EXPECT_NEAR(e.horizon(), 16.118095650958319788, 1e-10);
        EXPECT_NE(std::string(e.what()).find("theta_nc"), std::string::npos);
    }
    const Scenario iii = figure(ScenarioKind::SetIII);
    try {
        nc_parameters(iii, 3.0);
        FAIL();
    } catch (const OutsideRealityWindow& e) {
        EXPECT_NEAR(e.horizon(), 2.162277660168379332, 1e-10);
    }
    EXPECT_THROW(coefficients(iii, 3.0), OutsideRealityWindow);
}

TEST(NCParameters, ComplexContinuationBeyondWindow) {
    const NCParamsComplex p = nc_parameters_complex(figure(ScenarioKind::SetIa), 17.0);
    EXPECT_EQ(p.theta_nc.real(), 0.0);
    EXPECT_GT(p.theta_nc.imag(), 0.0);
    EXPECT_GT(p.omega_nc.real(), 0.0);
}

TEST(NCParameters, HorizonsPerQuantity) {
    const NCHorizons ia = nc_horizons(figure(ScenarioKind::SetIa));
    ASSERT_TRUE(ia.theta);
    EXPECT_FALSE(ia.omega);
    EXPECT_NEAR(*ia.theta, std::log(1e7), 1e-10);
    const NCHorizons ii = nc_horizons(figure(ScenarioKind::SetII));
    ASSERT_TRUE(ii.theta);
    EXPECT_NEAR(*ii.theta, 6323.555320336758664, 1e-10 * 6323.6);
    const NCHorizons ib = nc_horizons(figure(ScenarioKind::SetIb));
    EXPECT_FALSE(ib.tightest());
}

TEST(NCParameters, CommutativeLimit) {
    ScenarioSpec s;
    s.kind = ScenarioKind::SetIb;
    s.constants.M = 1.0;
    s.constants.sigma = 1.0;
    s.constants.omega0 = 2.0;
    s.constants.Delta = 4.0;
    s.constants.Gamma = 1.0;
    s.constants.vartheta = 1.0;
    s.constants.mu = std::pow(1.0 / 3.75, 0.25);
    const Scenario sc = build_scenario(s);
    for (double t : {0.0, 0.5, 2.0}) {
        const NCParams p = nc_parameters(sc, t);
        EXPECT_NEAR(p.theta_nc, 0.0, 1e-6);
        EXPECT_NEAR(p.omega_nc, 0.0, 1e-6);
        EXPECT_NEAR(coefficients(sc, t).c, 0.0, 1e-6);
        EXPECT_NEAR(p.commutator_factor(), 1.0, 1e-12);
    }
}

TEST(NCParameters, RoundTripRebuildsFamilyCoefficients) {
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        const double end = interior_end(sc);
        for (int i = 0; i <= 20; ++i) {
            const double t = end * i / 20.0;
            const auto [a, b] = coefficients_from_nc(sc, nc_parameters(sc, t));
            const FamilyCoeffs fc = family_coefficients(sc, t);
            EXPECT_LE(std::abs(a - fc.a) / fc.a, 1e-12) << to_string(kind) << " t=" << t;
            EXPECT_LE(std::abs(b - fc.b) / fc.b, 1e-12) << to_string(kind) << " t=" << t;
        }
    }
}

TEST(NCParameters, ClosedFormAgreesWithInversionInside) {
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        const double end = interior_end(sc);
        for (int i = 0; i <= 20; ++i) {
            const double t = end * i / 20.0;
            const NCParamsComplex g = nc_parameters_complex(sc, t);
            const NCParamsComplex c = nc_parameters_closed_form_complex(sc, t);
            EXPECT_LE(rel(g.theta_nc, c.theta_nc), 1e-10) << to_string(kind) << " t=" << t;
            EXPECT_LE(rel(g.omega_nc, c.omega_nc), 1e-10) << to_string(kind) << " t=" << t;
            EXPECT_LE(rel(c_generic_complex(sc, t), c_closed_form_complex(sc, t)), 1e-10) << to_string(kind);
        }
    }
}

TEST(NCParameters, SetIbCouplingIsConstant) {
    const Scenario sc = figure(ScenarioKind::SetIb);
    const double c0 = coefficients(sc, 0.0).c;
    for (double t : {1.0, 3.0, 8.0}) EXPECT_LE(std::abs(c_generic_complex(sc, t).real() - c0) / c0, 1e-10);
}

TEST(NCParameters, ClosedFormRefusedForUnequalRates) {
    ScenarioSpec s = fixtures::figure_spec(ScenarioKind::SetIc);
    s.constants.vartheta = 2.0;
    const Scenario sc = build_scenario(s, Validation::Unchecked);
    EXPECT_FALSE(has_closed_form_c(sc));
    EXPECT_THROW(c_closed_form_complex(sc, 0.1), OutOfValidatedDomain);
}

TEST(NCParameters, CommutatorFactor) {
    const NCParams p = nc_parameters(figure(ScenarioKind::SetIb), 0.0);
    EXPECT_NEAR(p.commutator_factor(), 9487.832506163477, 1e-8);
}

TEST(Symbol, BoppFormEqualsABCForm) {
    const PhaseSpacePoint origin{};
    const PhaseSpacePoint x1{1.0, 0.0, 0.0, 0.0};
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        EXPECT_EQ(classical_symbol(sc, 0.0, origin, SymbolForm::BoppShifted), 0.0);
        EXPECT_EQ(classical_symbol(sc, 0.0, origin, SymbolForm::ABCForm), 0.0);
        const double b = family_coefficients(sc, 0.5 * interior_end(sc)).b;
        EXPECT_LE(std::abs(classical_symbol(sc, 0.5 * interior_end(sc), x1, SymbolForm::BoppShifted) - 0.5 * b) / b, 1e-12);
    }
}

TEST(Symbol, RandomPointsAndTimes) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto kind : kAll) {
        const Scenario sc = figure(kind);
        const double end = interior_end(sc);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const double t = end * k / 10.0;
            for (int i = 0; i < 1000; ++i) {
                const PhaseSpacePoint pt{u(rng), u(rng), u(rng), u(rng)};
                const double l = classical_symbol(sc, t, pt, SymbolForm::BoppShifted);
                const double r = classical_symbol(sc, t, pt, SymbolForm::ABCForm);
                worst = std::max(worst, std::abs(l - r) / classical_symbol_scale(sc, t, pt));
            }
        }
        EXPECT_LE(worst, 1e-10) << to_string(kind);
    }
}
