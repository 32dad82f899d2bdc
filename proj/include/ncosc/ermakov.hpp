#pragma once

// The three analytic Ermakov–Pinney families: ρ(t) with derivatives, the
// coefficient functions a(t), b(t) they are paired with, the EP residual and
// a fixed-step RK4 integrator used as an independent oracle.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"

namespace ncosc {

struct RhoEval {
    double rho = 0.0;
    double rho_dot = 0.0;
    double rho_ddot = 0.0;
    double t = 0.0;
};

/// a(t), ȧ(t), b(t) of the family the scenario is bound to.
struct FamilyCoeffs {
    double a = 0.0;
    double a_dot = 0.0;
    double b = 0.0;
};

namespace detail {

inline double shifted_time(const Scenario& sc, double t) {
    const double s = sc.constants.Gamma * t + sc.constants.chi;
    if (!(s > 0.0)) throw DomainError("Gamma*t + chi must be positive (got " + std::to_string(s) + ")");
    return s;
}

}  // namespace detail

inline FamilyCoeffs family_coefficients(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    FamilyCoeffs out;
    switch (sc.family()) {
        case Family::Exponential: {
            const double e = std::exp(-pc.vartheta * t);
            out.a = pc.sigma * e;
            out.a_dot = -pc.vartheta * out.a;
            out.b = pc.Delta / e;
            break;
        }
        case Family::Rational: {
            const double s = detail::shifted_time(sc, t);
            const double k = sc.k_exp;
            const double x = (k + 2.0) / (k * s);
            out.a = pc.sigma * std::pow(x, (k + 2.0) / k);
            out.a_dot = -pc.Gamma * (k + 2.0) / k * out.a / s;
            out.b = pc.Delta * std::pow(x, (k - 2.0) / k);
            break;
        }
        case Family::Elementary: {
            const double s = detail::shifted_time(sc, t);
            out.a = pc.sigma;
            out.a_dot = 0.0;
            out.b = pc.Delta / (s * s * s * s);
            break;
        }
    }
    return out;
}

inline RhoEval rho_eval(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    RhoEval r;
    r.t = t;
    switch (sc.family()) {
        case Family::Exponential: {
            r.rho = pc.mu * std::exp(-0.5 * pc.vartheta * t);
            r.rho_dot = -0.5 * pc.vartheta * r.rho;
            r.rho_ddot = 0.25 * pc.vartheta * pc.vartheta * r.rho;
            break;
        }
        case Family::Rational: {
            const double s = detail::shifted_time(sc, t);
            const double k = sc.k_exp;
            const double G = pc.Gamma;
            r.rho = pc.mu * std::pow((k + 2.0) / (k * s), 1.0 / k);
            r.rho_dot = -(G / k) * r.rho / s;
            r.rho_ddot = G * G * (k + 1.0) / (k * k) * r.rho / (s * s);
            break;
        }
        case Family::Elementary: {
            const double s = detail::shifted_time(sc, t);
            r.rho = pc.mu * s;
            r.rho_dot = pc.mu * pc.Gamma;
            r.rho_ddot = 0.0;
            break;
        }
    }
    return r;
}

struct EPResidual {
    double value = 0.0;
    double scale = 0.0;  // largest magnitude among the four terms
    double relative() const { return std::abs(value) / std::max(scale, 1.0); }
};

/// ρ̈ − (ȧ/a)ρ̇ + abρ − ξ²a²/ρ³ with the family's analytic ρ, a, b.
inline EPResidual ep_residual(const Scenario& sc, double t) {
    const RhoEval r = rho_eval(sc, t);
    const FamilyCoeffs c = family_coefficients(sc, t);
    const double xi = sc.constants.xi;
    const double t1 = r.rho_ddot;
    const double t2 = (c.a_dot / c.a) * r.rho_dot;
    const double t3 = c.a * c.b * r.rho;
    const double t4 = xi * xi * c.a * c.a / (r.rho * r.rho * r.rho);
    EPResidual e;
    e.value = t1 - t2 + t3 - t4;
    e.scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    return e;
}

inline ConstraintResidual constraint_check(const Scenario& sc) {
    return family_constraint(sc.constants, sc.kind, sc.k_exp);
}

/// Fixed-step RK4 on (ρ, ρ̇) for ρ̈ = (ȧ/a)ρ̇ − abρ + ξ²a²/ρ³, starting from
/// the analytic values at t0. Returns steps+1 samples; rho_ddot is the
/// right-hand side evaluated on the numerical state.
inline std::vector<RhoEval> integrate_ep_numeric(const Scenario& sc, double t0, double t1, int steps) {
    if (steps < 100) throw DomainError("integrate_ep_numeric requires steps >= 100");
    if (!(t1 > t0)) throw DomainError("integrate_ep_numeric requires t1 > t0");
    const double xi2 = sc.constants.xi * sc.constants.xi;
    auto accel = [&](double t, double rho, double rho_dot) {
        const FamilyCoeffs c = family_coefficients(sc, t);
        return (c.a_dot / c.a) * rho_dot - c.a * c.b * rho + xi2 * c.a * c.a / (rho * rho * rho);
    };
    const RhoEval start = rho_eval(sc, t0);
    const double floor = 1e-12 * start.rho;
    auto guard = [&](double rho, double t) {
        if (!(rho > floor) || !std::isfinite(rho))
            throw StepUnderflow("rho collapsed towards zero near t = " + std::to_string(t));
    };

    const double h = (t1 - t0) / steps;
    double y = start.rho, v = start.rho_dot;
    std::vector<RhoEval> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back({y, v, accel(t0, y, v), t0});
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * h;
        const double k1y = v, k1v = accel(t, y, v);
        const double y2 = y + 0.5 * h * k1y, v2 = v + 0.5 * h * k1v;
        guard(y2, t);
        const double k2y = v2, k2v = accel(t + 0.5 * h, y2, v2);
        const double y3 = y + 0.5 * h * k2y, v3 = v + 0.5 * h * k2v;
        guard(y3, t);
        const double k3y = v3, k3v = accel(t + 0.5 * h, y3, v3);
        const double y4 = y + h * k3y, v4 = v + h * k3v;
        guard(y4, t);
        const double k4y = v4, k4v = accel(t + h, y4, v4);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        guard(y, t + h);
        const double tn = (i + 1 == steps) ? t1 : t0 + (i + 1) * h;
        out.push_back({y, v, accel(tn, y, v), tn});
    }
    return out;
}

}  // namespace ncosc
