#pragma once

// Coefficients of the quadratic Lewis invariant and numerical checks of the
// ODE system they satisfy.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "config.hpp"
#include "ermakov.hpp"

namespace ncosc {

struct InvariantCoeffs {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double t = 0.0;
};

/// α = ρ², γ = −2ρρ̇/a, β = ρ̇²/a² + ξ²/ρ².
inline InvariantCoeffs invariant_coefficients(const Scenario& sc, double t) {
    const RhoEval r = rho_eval(sc, t);
    const double a = family_coefficients(sc, t).a;
    const double xi = sc.constants.xi;
    InvariantCoeffs c;
    c.t = t;
    c.alpha = r.rho * r.rho;
    c.gamma = -2.0 * r.rho * r.rho_dot / a;
    c.beta = r.rho_dot * r.rho_dot / (a * a) + xi * xi / (r.rho * r.rho);
    return c;
}

/// Relative residual of 4αβ − γ² = 4ξ².
inline double invariant_identity_residual(const InvariantCoeffs& c, double xi) {
    const double lhs = 4.0 * c.alpha * c.beta - c.gamma * c.gamma;
    const double rhs = 4.0 * xi * xi;
    const double scale = std::max({4.0 * c.alpha * c.beta, c.gamma * c.gamma, rhs});
    return std::abs(lhs - rhs) / scale;
}

struct InvariantODEResiduals {
    double alpha = 0.0;  // α̇ + aγ
    double beta = 0.0;   // β̇ − bγ
    double gamma = 0.0;  // γ̇ − 2(bα − βa)

    double worst() const { return std::max({alpha, beta, gamma}); }
};

using InvariantProvider = std::function<InvariantCoeffs(double)>;

/// Central differences of the provided coefficients against
/// α̇ = −aγ, β̇ = bγ, γ̇ = 2(bα − βa). Each residual is divided by the largest
/// magnitude among the terms it compares.
inline InvariantODEResiduals invariant_ode_residuals(const InvariantProvider& coeffs, const Scenario& sc, double t,
                                                     double h = 1e-5) {
    if (!(h > 0.0)) throw DomainError("difference step must be positive");
    const InvariantCoeffs lo = coeffs(t - h), mid = coeffs(t), hi = coeffs(t + h);
    const FamilyCoeffs fc = family_coefficients(sc, t);
    const double da = (hi.alpha - lo.alpha) / (2.0 * h);
    const double db = (hi.beta - lo.beta) / (2.0 * h);
    const double dg = (hi.gamma - lo.gamma) / (2.0 * h);
    auto rel = [](double diff, double scale) {
        return std::abs(diff) / std::max(scale, std::numeric_limits<double>::min());
    };
    InvariantODEResiduals r;
    const double ag = fc.a * mid.gamma;
    r.alpha = rel(da + ag, std::max(std::abs(da), std::abs(ag)));
    const double bg = fc.b * mid.gamma;
    r.beta = rel(db - bg, std::max(std::abs(db), std::abs(bg)));
    const double ba = fc.b * mid.alpha, bb = mid.beta * fc.a;
    r.gamma = rel(dg - 2.0 * (ba - bb), std::max({std::abs(dg), 2.0 * std::abs(ba), 2.0 * std::abs(bb)}));
    return r;
}

inline InvariantODEResiduals invariant_ode_residuals(const Scenario& sc, double t, double h = 1e-5) {
    return invariant_ode_residuals([&](double x) { return invariant_coefficients(sc, x); }, sc, t, h);
}

}  // namespace ncosc
