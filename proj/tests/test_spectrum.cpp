#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"

using namespace ncosc;
using fixtures::figure;
using fixtures::rel;

namespace {

constexpr double kPi = std::numbers::pi;

}

TEST(Labels, Validation) {
    EXPECT_THROW(StateLabel(-1, 0), InvalidLabel);
    EXPECT_THROW(StateLabel(0, -1), InvalidLabel);
    EXPECT_THROW(StateLabel::from_nl(2, -3), InvalidLabel);
    const StateLabel s = StateLabel::from_nl(2, -1);
    EXPECT_EQ(s.m, 1);
    EXPECT_EQ(s.l(), -1);
}

TEST(Eigenfunction, GroundStateNormalisation) {
    EXPECT_DOUBLE_EQ(eigen_normalization(0, 1.0), 1.0 / std::sqrt(kPi));
    EXPECT_DOUBLE_EQ(eigen_normalization(2, 4.0), 1.0 / std::sqrt(kPi * 2.0 * 64.0));
    const Scenario ib = figure(ScenarioKind::SetIb);
    const cplx psi = eigenfunction(ib, 0.0, {0, 0}, {0.0, 0.0});
    EXPECT_NEAR(std::norm(psi), 1.0 / kPi, 1e-15);
    EXPECT_THROW(eigenfunction(ib, 0.0, {0, 0}, {-1.0, 0.0}), DomainError);
}

TEST(Eigenfunction, DirectAndRegularisedRadialFormsAgree) {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 4; ++m)
            for (double r : {0.3, 1.0, 2.2}) {
                const double a = radial_factor(n, m, r, 1.7, RadialForm::Regularized);
                const double b = radial_factor(n, m, r, 1.7, RadialForm::Direct);
                EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(b))) << n << " " << m << " " << r;
            }
    // the regularised form is finite at the origin
    EXPECT_EQ(radial_factor(0, 2, 0.0, 1.0), 0.0);
}

TEST(Eigenfunction, Orthonormality) {
    for (auto sc : {figure(ScenarioKind::SetIb), figure(ScenarioKind::SetIII), fixtures::mild(ScenarioKind::SetII)}) {
        PolarOracle oracle(sc, 0.7);
        for (int n1 = 0; n1 <= 3; ++n1)
            for (int m1 = 0; m1 <= 3; ++m1)
                for (int n2 = 0; n2 <= 3; ++n2)
                    for (int m2 = 0; m2 <= 3; ++m2) {
                        const cplx v = oracle.overlap({n1, m1}, {n2, m2});
                        const double expect = (n1 == n2 && m1 == m2) ? 1.0 : 0.0;
                        EXPECT_LE(std::abs(v - expect), 1e-10) << to_string(sc.kind) << " " << n1 << m1 << n2 << m2;
                    }
    }
}

TEST(Phase, VanishesAtOrigin) {
    for (auto kind : {ScenarioKind::SetIa, ScenarioKind::SetIb, ScenarioKind::SetIc, ScenarioKind::SetII,
                      ScenarioKind::SetIII}) {
        EXPECT_EQ(phase(figure(kind), {0, 1}, 0.0).value, cplx(0.0));
        EXPECT_EQ(phase_quadrature(figure(kind), {0, 1}, 0.0).value, cplx(0.0));
    }
    EXPECT_EQ(phase(fixtures::moderate_Ia(), {1, 3}, 0.0).value, cplx(0.0));
}

TEST(Phase, SetIbShortTime) {
    const PhaseResult r = phase(figure(ScenarioKind::SetIb), {0, 1}, 1e-6);
    EXPECT_EQ(r.method, PhaseMethod::ClosedForm);
    EXPECT_NEAR(r.value.real(), -6.8347224979455076, 1e-12);
    EXPECT_EQ(r.value.imag(), 0.0);
    // Θ scales with m only
    EXPECT_NEAR(phase(figure(ScenarioKind::SetIb), {3, 2}, 1e-6).value.real(), 2.0 * -6.8347224979455076, 1e-11);
    EXPECT_EQ(phase(figure(ScenarioKind::SetIb), {4, 0}, 1e-6).value, cplx(0.0));
}

// References: 40-digit quadrature of c − a/ρ².
TEST(Phase, FrozenUnitPhases) {
    struct Case {
        ScenarioKind kind;
        double t;
        cplx J;
    };
    const Case cases[] = {
        {ScenarioKind::SetIa, 1.0, {-7997039.5849161746239, 0.0}},
        {ScenarioKind::SetIc, 0.3, {-2118133.1653431604142, 0.0}},
        {ScenarioKind::SetII, 0.5, {-5999589.6240057485742, 0.0}},
        {ScenarioKind::SetIII, 1.0, {-2806663.9788227791823, 0.0}},
        {ScenarioKind::SetIII, 3.0, {-3114401.5763779621595, 100.33603583951176738}},
        {ScenarioKind::SetIa, 17.0, {-135760428.98013297405, 0.11994104349185943199}},
    };
    for (const Case& c : cases) {
        const cplx J = phase_unit(figure(c.kind), c.t);
        // quadrature error is bounded relative to |J|, not per component
        EXPECT_LE(std::abs(J - c.J), 1e-12 * std::abs(c.J)) << to_string(c.kind) << " " << c.t;
    }
    const cplx Jm = phase_unit(fixtures::moderate_Ia(), 3.0);
    EXPECT_NEAR(Jm.real(), 21.227821314238698846, 1e-9);
    EXPECT_NEAR(Jm.imag(), 5.0752379113777205671, 1e-9);
}

TEST(Phase, ClosedFormMatchesQuadrature) {
    struct Case {
        Scenario sc;
        double t_end;
    };
    const Case cases[] = {{figure(ScenarioKind::SetIb), 10.0}, {figure(ScenarioKind::SetIc), 10.0},
                          {figure(ScenarioKind::SetII), 10.0}, {figure(ScenarioKind::SetIII), 2.1},
                          {fixtures::moderate_Ia(), 10.0}};
    for (const Case& c : cases) {
        for (int i = 1; i <= 10; ++i) {
            const double t = c.t_end * i / 10.0;
            const PhaseResult cf = phase_closed_form(c.sc, {0, 1}, t);
            const PhaseResult q = phase_quadrature(c.sc, {0, 1}, t);
            EXPECT_LE(rel(cf.value, q.value), 1e-10) << to_string(c.sc.kind) << " t=" << t;
        }
    }
}

TEST(Phase, RefusalsFallBackToQuadrature) {
    // 2F1 argument Δe^{2Γt}/(Mω0²) = 10 for the figure Set-Ia
    EXPECT_THROW(phase_closed_form(figure(ScenarioKind::SetIa), {0, 1}, 1.0), OutOfValidatedDomain);
    const PhaseResult r = phase(figure(ScenarioKind::SetIa), {0, 1}, 1.0);
    EXPECT_EQ(r.method, PhaseMethod::Quadrature);
    EXPECT_FALSE(r.note.empty());

    ScenarioSpec s = fixtures::figure_spec(ScenarioKind::SetII);
    s.k_exp = 3;
    const Scenario k3 = build_scenario(s, Validation::Unchecked);
    EXPECT_THROW(phase_closed_form(k3, {0, 1}, 0.5), UnsupportedK);
    EXPECT_EQ(phase(k3, {0, 1}, 0.5).method, PhaseMethod::Quadrature);

    ScenarioSpec u = fixtures::figure_spec(ScenarioKind::SetIb);
    u.constants.vartheta = 2.0;
    const Scenario unequal = build_scenario(u, Validation::Unchecked);
    EXPECT_THROW(phase_closed_form(unequal, {0, 1}, 0.5), OutOfValidatedDomain);
    EXPECT_EQ(phase(unequal, {0, 1}, 0.5).method, PhaseMethod::Quadrature);

    EXPECT_EQ(phase(figure(ScenarioKind::SetIII), {0, 1}, 3.0).method, PhaseMethod::Quadrature);
    EXPECT_THROW(phase_closed_form(figure(ScenarioKind::SetIb), {0, 1}, -1.0), DomainError);
}

TEST(HamiltonianEigenfunction, ReducesToInvariantEigenfunction) {
    const Scenario ib = figure(ScenarioKind::SetIb);
    const PolarPoint pt{0.7, 0.4};
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m) {
            EXPECT_EQ(hamiltonian_eigenfunction(ib, 0.0, {n, m}, pt), eigenfunction(ib, 0.0, {n, m}, pt));
            const cplx psi = hamiltonian_eigenfunction(ib, 0.3, {n, m}, pt);
            const cplx phi = eigenfunction(ib, 0.3, {n, m}, pt);
            EXPECT_NEAR(std::abs(psi), std::abs(phi), 1e-12 * std::max(1e-300, std::abs(phi)));
        }
}

TEST(HamiltonianEigenfunction, ComplexPhaseChangesModulusBeyondWindow) {
    const Scenario ia = figure(ScenarioKind::SetIa);
    const PolarPoint pt{0.5 * rho_eval(ia, 17.0).rho, 0.0};
    const cplx psi = hamiltonian_eigenfunction(ia, 17.0, {0, 2}, pt);
    const cplx phi = eigenfunction(ia, 17.0, {0, 2}, pt);
    ASSERT_GT(std::abs(phi), 0.0);
    const double ratio = std::abs(psi) / std::abs(phi);
    EXPECT_NEAR(ratio, std::exp(-2.0 * phase_unit(ia, 17.0).imag()), 1e-12);
    EXPECT_NEAR(ratio, std::exp(-2.0 * 0.11994104349185943199), 1e-5);
}

TEST(MatrixElements, DiagonalSecondMoment) {
    const Scenario iii = figure(ScenarioKind::SetIII);
    const cplx v = matrix_element_x_pow(iii, 0.5, 1, 2, 2, 2);
    EXPECT_NEAR(v.real(), 4.5, 1e-12);
    EXPECT_EQ(v.imag(), 0.0);
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m) {
            const double x2 = quadratic_expectations(iii, 0.5, {n, m}).x2;
            EXPECT_NEAR(matrix_element_x_pow(iii, 0.5, n, m, m, 2).real(), x2, 1e-12 * x2);
            EXPECT_NEAR(matrix_element_y_pow(iii, 0.5, n, m, m, 2).real(), x2, 1e-12 * x2);
        }
}

TEST(MatrixElements, SelectionRulesGiveExactZero) {
    const Scenario ib = figure(ScenarioKind::SetIb);
    EXPECT_EQ(matrix_element_x_pow(ib, 0.2, 1, 1, 1, 1), cplx(0.0));  // odd k, m' = m
    EXPECT_EQ(matrix_element_x_pow(ib, 0.2, 1, 0, 3, 1), cplx(0.0));  // |m' − m| > k
    EXPECT_EQ(matrix_element_y_pow(ib, 0.2, 2, 2, 3, 2), cplx(0.0));  // parity mismatch
    EXPECT_EQ(matrix_element_x_pow(ib, 0.2, 0, 0, 0, 0), cplx(1.0));
}

TEST(MatrixElements, Hermitian) {
    const Scenario ii = figure(ScenarioKind::SetII);
    for (auto coord : {Coordinate::X, Coordinate::Y})
        for (int n = 0; n <= 2; ++n)
            for (int m = 0; m <= 3; ++m)
                for (int mp = 0; mp <= 3; ++mp)
                    for (int k = 0; k <= 3; ++k) {
                        const cplx a = matrix_element_pow(ii, 0.5, coord, n, m, mp, k);
                        const cplx b = matrix_element_pow(ii, 0.5, coord, n, mp, m, k);
                        EXPECT_LE(std::abs(a - std::conj(b)), 1e-12 * std::max(1.0, std::abs(a)));
                    }
}

TEST(MatrixElements, InvariantBasisDropsPhase) {
    const Scenario ib = figure(ScenarioKind::SetIb);
    const double t = 0.2;
    const cplx J = phase_unit(ib, t);
    const cplx h = matrix_element_pow(ib, t, Coordinate::X, 1, 0, 1, 1);
    const cplx inv = matrix_element_pow(ib, t, Coordinate::X, 1, 0, 1, 1, Basis::Invariant);
    EXPECT_LE(std::abs(h - std::exp(cplx(0.0, 1.0) * J) * inv), 1e-12 * std::abs(h));
    EXPECT_EQ(matrix_element_pow_with_phase(ib, t, Coordinate::X, 1, 0, 1, 1, J), h);
}

TEST(MatrixElements, AgreeWithPolarQuadrature) {
    struct Case {
        Scenario sc;
        double t;
    };
    const Case cases[] = {{figure(ScenarioKind::SetIb), 0.5}, {figure(ScenarioKind::SetII), 0.5},
                          {figure(ScenarioKind::SetIII), 0.5}, {fixtures::moderate_Ia(), 1.0}};
    for (const Case& c : cases) {
        PolarOracle oracle(c.sc, c.t);
        const cplx J = phase_unit(c.sc, c.t);
        for (auto coord : {Coordinate::X, Coordinate::Y})
            for (int n = 0; n <= 2; ++n)
                for (int m = 0; m <= 2; ++m)
                    for (int mp = 0; mp <= 2; ++mp)
                        for (int k = 0; k <= 2; ++k) {
                            const cplx cf = matrix_element_pow_with_phase(c.sc, c.t, coord, n, m, mp, k, J);
                            const cplx orc = oracle.matrix_element(n, m, mp, k, coord);
                            const double scale = std::max({1.0, std::abs(cf), std::abs(orc)});
                            EXPECT_LE(std::abs(cf - orc) / scale, 1e-9)
                                << to_string(c.sc.kind) << " n=" << n << " m=" << m << " m'=" << mp << " k=" << k;
                        }
    }
}

TEST(MatrixElements, NegativeArgumentsRejected) {
    const Scenario ib = figure(ScenarioKind::SetIb);
    EXPECT_THROW(matrix_element_x_pow(ib, 0.0, -1, 0, 0, 1), InvalidLabel);
    EXPECT_THROW(matrix_element_x_pow(ib, 0.0, 0, 0, 0, -1), InvalidLabel);
    EXPECT_THROW(matrix_element_oracle(ib, 0.0, 0, -2, 0, 1, Coordinate::X), InvalidLabel);
}
