#pragma once

// Hamiltonian coefficients a, b, c, the noncommutative parameters θ_nc and
// Ω_nc obtained by inverting the Bopp-shifted coefficients, and the classical
// symbol in its two equivalent forms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "config.hpp"
#include "ermakov.hpp"
#include "errors.hpp"
#include "specfun.hpp"

namespace ncosc {

inline double damping_factor(const Scenario& sc, double t) { return sc.f(t); }
inline double frequency(const Scenario& sc, double t) { return sc.omega(t); }

struct HamCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double t = 0.0;
};

struct NCParams {
    double theta_nc = 0.0;
    double omega_nc = 0.0;
    double t = 0.0;

    double commutator_factor() const { return 1.0 + 0.25 * theta_nc * omega_nc; }
};

struct NCParamsComplex {
    cplx theta_nc;
    cplx omega_nc;
    double t = 0.0;
};

/// The two radicands whose signs decide whether θ_nc and Ω_nc are real:
/// θ ~ √(f(Ma − f)), Ω ~ √(M(bf − Mω²)).
struct NCRadicands {
    double theta = 0.0;
    double omega = 0.0;
    double theta_scale = 0.0;
    double omega_scale = 0.0;
};

inline NCRadicands nc_radicands(const Scenario& sc, double t) {
    const FamilyCoeffs fc = family_coefficients(sc, t);
    const double M = sc.constants.M, f = sc.f(t), w = sc.omega(t);
    NCRadicands r;
    const double ma = M * fc.a, bf = fc.b * f, mw2 = M * w * w;
    r.theta = ma - f;
    r.theta_scale = std::max(std::abs(ma), f);
    r.omega = bf - mw2;
    r.omega_scale = std::max(std::abs(bf), mw2);
    return r;
}

namespace detail {

// radicands within -1e-12*scale of zero are boundary noise
inline double clamp_radicand(double value, double scale) {
    if (value < 0.0 && value >= -1e-12 * scale) return 0.0;
    return value;
}

// First time in [0, t_end] at which `g` changes sign; radicands here are
// monotone in t so a single bisection is enough.
template <class G>
std::optional<double> sign_change(G&& g, double t_end) {
    const double g0 = g(0.0), g1 = g(t_end);
    if ((g0 >= 0.0) == (g1 >= 0.0)) return std::nullopt;
    double lo = 0.0, hi = t_end;
    const bool start_nonneg = g0 >= 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) >= 0.0) == start_nonneg)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double horizon_search_end(const Scenario& sc) {
    const PhysicalConstants& pc = sc.constants;
    if (sc.family() == Family::Exponential) return 600.0 / std::max(pc.Gamma, pc.vartheta);
    return 1e7 / pc.Gamma;
}

}  // namespace detail

/// Per-quantity reality horizons: the time where the θ_nc or Ω_nc radicand
/// changes sign (nullopt when it never does on the searched range).
struct NCHorizons {
    std::optional<double> theta;
    std::optional<double> omega;

    std::optional<double> tightest() const {
        if (theta && omega) return std::min(*theta, *omega);
        return theta ? theta : omega;
    }
};

inline NCHorizons nc_horizons(const Scenario& sc) {
    const double end = detail::horizon_search_end(sc);
    NCHorizons h;
    h.theta = detail::sign_change(
        [&](double t) {
            const NCRadicands r = nc_radicands(sc, t);
            return detail::clamp_radicand(r.theta, r.theta_scale);
        },
        end);
    h.omega = detail::sign_change(
        [&](double t) {
            const NCRadicands r = nc_radicands(sc, t);
            return detail::clamp_radicand(r.omega, r.omega_scale);
        },
        end);
    return h;
}

/// True when both NC radicands are nonnegative (after boundary clamping).
inline bool nc_in_window(const Scenario& sc, double t, bool* theta_ok = nullptr, bool* omega_ok = nullptr) {
    const NCRadicands r = nc_radicands(sc, t);
    const bool th = detail::clamp_radicand(r.theta, r.theta_scale) >= 0.0;
    const bool om = detail::clamp_radicand(r.omega, r.omega_scale) >= 0.0;
    if (theta_ok) *theta_ok = th;
    if (omega_ok) *omega_ok = om;
    return th && om;
}

/// Generic inversion with principal complex roots; real inside the window.
inline NCParamsComplex nc_parameters_complex(const Scenario& sc, double t) {
    const NCRadicands r = nc_radicands(sc, t);
    const double M = sc.constants.M, f = sc.f(t), w = sc.omega(t);
    NCParamsComplex p;
    p.t = t;
    p.theta_nc = 2.0 * csqrt(f * detail::clamp_radicand(r.theta, r.theta_scale)) / (M * w);
    p.omega_nc = 2.0 * csqrt(M * detail::clamp_radicand(r.omega, r.omega_scale)) / f;
    return p;
}

namespace detail {

[[noreturn]] inline void throw_outside(const Scenario& sc, double t, bool theta_bad, bool omega_bad) {
    const NCHorizons h = nc_horizons(sc);
    std::string which = theta_bad && omega_bad ? "theta_nc and Omega_nc" : theta_bad ? "theta_nc" : "Omega_nc";
    std::optional<double> hz = theta_bad && omega_bad ? h.tightest() : theta_bad ? h.theta : h.omega;
    const double horizon = hz.value_or(0.0);
    throw OutsideRealityWindow(which + " complex at t = " + std::to_string(t) + " (radicand changes sign at t = " +
                                   std::to_string(horizon) + ")",
                               horizon);
}

}  // namespace detail

/// θ_nc = √(4f(Ma − f))/(Mω), Ω_nc = √(4M(bf − Mω²))/f.
inline NCParams nc_parameters(const Scenario& sc, double t) {
    bool th = true, om = true;
    if (!nc_in_window(sc, t, &th, &om)) detail::throw_outside(sc, t, !th, !om);
    const NCParamsComplex p = nc_parameters_complex(sc, t);
    return {p.theta_nc.real(), p.omega_nc.real(), t};
}

/// θ_nc and Ω_nc from the per-family published expressions (complex roots).
inline NCParamsComplex nc_parameters_closed_form_complex(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M, w0 = pc.omega0, G = pc.Gamma, vt = pc.vartheta;
    const double sig = pc.sigma, D = pc.Delta;
    NCParamsComplex p;
    p.t = t;
    switch (sc.kind) {
        case ScenarioKind::SetIa:
            p.theta_nc = (2.0 / (M * w0)) * std::exp(0.5 * G * t) * csqrt(M * sig * std::exp(-vt * t) - 1.0);
            p.omega_nc = 2.0 * csqrt(M * (D * std::exp(vt * t) - M * w0 * w0 * std::exp(-G * t)));
            break;
        case ScenarioKind::SetIb:
            p.theta_nc = (2.0 / (M * w0)) * csqrt(M * sig * std::exp(-vt * t) - std::exp(-G * t)) *
                         std::exp(-0.5 * G * t);
            p.omega_nc = 2.0 * std::exp(G * t) * csqrt(M * (D * std::exp((vt - G) * t) - M * w0 * w0));
            break;
        case ScenarioKind::SetIc:
            p.theta_nc = (2.0 / (M * w0)) * csqrt(M * sig * std::exp(-(vt - G) * t) - 1.0) *
                         std::exp(-0.5 * G * t);
            p.omega_nc = 2.0 * csqrt(M * (D * std::exp(vt * t) - M * w0 * w0)) * std::exp(0.5 * G * t);
            break;
        case ScenarioKind::SetII: {
            const double s = detail::shifted_time(sc, t);
            const double k = sc.k_exp;
            const double x = (k + 2.0) / (k * s);
            p.theta_nc = 2.0 * s / (M * w0) * csqrt(M * sig * std::pow(x, (k + 2.0) / k) - 1.0);
            p.omega_nc = 2.0 * csqrt(M * D * std::pow(x, (k - 2.0) / k) - M * M * w0 * w0 / (s * s));
            break;
        }
        case ScenarioKind::SetIII: {
            const double s = detail::shifted_time(sc, t);
            p.theta_nc = 2.0 * s * csqrt(M * sig - 1.0) / (w0 * M);
            p.omega_nc = 2.0 * csqrt(M * D / (s * s * s * s) - M * M * w0 * w0 / (s * s));
            break;
        }
    }
    return p;
}

/// c = ½[fΩ/M + Mω²θ/f] from the generic inversion; complex beyond the window.
inline cplx c_generic_complex(const Scenario& sc, double t) {
    const NCParamsComplex p = nc_parameters_complex(sc, t);
    const double M = sc.constants.M, f = sc.f(t), w = sc.omega(t);
    return 0.5 * (f * p.omega_nc / M + M * w * w * p.theta_nc / f);
}

inline bool has_closed_form_c(const Scenario& sc) {
    if (sc.family() == Family::Exponential) return sc.constants.vartheta == sc.constants.Gamma;
    return true;
}

/// Published c(t) per scenario (principal complex roots). Set-I forms exist
/// only for ϑ = Γ; Set-II uses the closed θ, Ω for k ≠ 2.
inline cplx c_closed_form_complex(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M, w0 = pc.omega0, G = pc.Gamma, sig = pc.sigma, D = pc.Delta;
    if (!has_closed_form_c(sc))
        throw OutOfValidatedDomain("closed-form c(t) for Set-I is only available when vartheta = Gamma");
    switch (sc.kind) {
        case ScenarioKind::SetIa:
            return csqrt((D * std::exp(G * t) - M * w0 * w0 * std::exp(-G * t)) / M) +
                   w0 * std::exp(-0.5 * G * t) * csqrt(M * sig * std::exp(-G * t) - 1.0);
        case ScenarioKind::SetIb:
            return csqrt((D - M * w0 * w0) / M) + w0 * csqrt(M * sig - 1.0);
        case ScenarioKind::SetIc:
            return csqrt((D - M * w0 * w0 * std::exp(-G * t)) / M) +
                   w0 * std::exp(-0.5 * G * t) * csqrt(M * sig - 1.0);
        case ScenarioKind::SetII: {
            const double s = detail::shifted_time(sc, t);
            if (sc.k_exp == 2)
                return (w0 / s) * csqrt(4.0 * sig * M / (s * s) - 1.0) + csqrt(D / M - w0 * w0 / (s * s));
            const NCParamsComplex p = nc_parameters_closed_form_complex(sc, t);
            const double w = w0 / s;
            return 0.5 * (p.omega_nc / M + M * w * w * p.theta_nc);
        }
        case ScenarioKind::SetIII: {
            const double s = detail::shifted_time(sc, t);
            return csqrt(D / (M * s * s * s * s) - w0 * w0 / (s * s)) + (w0 / s) * csqrt(M * sig - 1.0);
        }
    }
    return 0.0;
}

/// (a, b, c) at t. a and b come from the EP family; c from the scenario's
/// closed form where one exists, otherwise from the generic inversion.
inline HamCoeffs coefficients(const Scenario& sc, double t) {
    bool th = true, om = true;
    if (!nc_in_window(sc, t, &th, &om)) detail::throw_outside(sc, t, !th, !om);
    const FamilyCoeffs fc = family_coefficients(sc, t);
    HamCoeffs h;
    h.t = t;
    h.a = fc.a;
    h.b = fc.b;
    h.c = has_closed_form_c(sc) ? c_closed_form_complex(sc, t).real() : c_generic_complex(sc, t).real();
    return h;
}

/// a and b rebuilt from (f, ω, θ, Ω): a = f/M + Mω²θ²/(4f), b = Mω²/f + fΩ²/(4M).
inline std::pair<double, double> coefficients_from_nc(const Scenario& sc, const NCParams& p) {
    const double M = sc.constants.M, f = sc.f(p.t), w = sc.omega(p.t);
    const double a = f / M + M * w * w * p.theta_nc * p.theta_nc / (4.0 * f);
    const double b = M * w * w / f + f * p.omega_nc * p.omega_nc / (4.0 * M);
    return {a, b};
}

struct PhaseSpacePoint {
    double x1 = 0.0, x2 = 0.0, p1 = 0.0, p2 = 0.0;
};

enum class SymbolForm { BoppShifted, ABCForm };

inline double classical_symbol(const Scenario& sc, double t, const PhaseSpacePoint& pt, SymbolForm form) {
    const NCParams nc = nc_parameters(sc, t);
    if (form == SymbolForm::BoppShifted) {
        const double M = sc.constants.M, f = sc.f(t), w = sc.omega(t);
        const double th = nc.theta_nc, Om = nc.omega_nc;
        const double P1 = pt.p1 + 0.5 * Om * pt.x2, P2 = pt.p2 - 0.5 * Om * pt.x1;
        const double X1 = pt.x1 - 0.5 * th * pt.p2, X2 = pt.x2 + 0.5 * th * pt.p1;
        return f / (2.0 * M) * (P1 * P1 + P2 * P2) + M * w * w / (2.0 * f) * (X1 * X1 + X2 * X2);
    }
    const FamilyCoeffs fc = family_coefficients(sc, t);
    const double c = c_generic_complex(sc, t).real();
    return 0.5 * fc.a * (pt.p1 * pt.p1 + pt.p2 * pt.p2) + 0.5 * fc.b * (pt.x1 * pt.x1 + pt.x2 * pt.x2) +
           c * (pt.p1 * pt.x2 - pt.p2 * pt.x1);
}

/// Magnitude scale for comparing the two symbol forms at a point.
inline double classical_symbol_scale(const Scenario& sc, double t, const PhaseSpacePoint& pt) {
    const FamilyCoeffs fc = family_coefficients(sc, t);
    const double c = std::abs(c_generic_complex(sc, t));
    const double p2 = pt.p1 * pt.p1 + pt.p2 * pt.p2, x2 = pt.x1 * pt.x1 + pt.x2 * pt.x2;
    return std::max({0.5 * fc.a * p2, 0.5 * fc.b * x2, c * std::abs(pt.p1 * pt.x2),
                     c * std::abs(pt.p2 * pt.x1), 1e-300});
}

}  // namespace ncosc
