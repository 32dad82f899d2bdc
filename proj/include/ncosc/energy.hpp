#pragma once

// Expectation values of x², p², x p and of the Hamiltonian in its
// eigenstates, per-family closed forms and the reality horizons.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "ermakov.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "spectrum.hpp"

namespace ncosc {

struct QuadraticExpectations {
    double x2 = 0.0;    // ⟨x_j²⟩, same for j = 1, 2
    double p2 = 0.0;    // ⟨p_j²⟩
    double x1p2 = 0.0;  // ⟨x_1 p_2⟩ = ħ(m−n)/2
    double x2p1 = 0.0;  // ⟨x_2 p_1⟩ = −ħ(m−n)/2
};

inline QuadraticExpectations quadratic_expectations(const Scenario& sc, double t, const StateLabel& s) {
    const RhoEval r = rho_eval(sc, t);
    const double a = family_coefficients(sc, t).a;
    const double hbar = sc.constants.hbar;
    const double level = 0.5 * (s.n + s.m + 1);
    QuadraticExpectations q;
    q.x2 = hbar * r.rho * r.rho * level;
    q.p2 = hbar * (1.0 / (r.rho * r.rho) + r.rho_dot * r.rho_dot / (a * a)) * level;
    q.x1p2 = 0.5 * hbar * (s.m - s.n);
    q.x2p1 = -q.x1p2;
    return q;
}

/// Published bound on t for a real energy: ln(Mσ)/ϑ for Set-Ia,
/// (2√(Mσ) − χ)/Γ for Set-II (k = 2; the θ_nc bound for other k),
/// ((1/ω₀)√(Δ/M) − χ)/Γ for Set-III. Set-Ib/Ic have none when Δ ≥ Mω₀² and
/// Mσ ≥ 1; otherwise 0 is returned (never real).
inline std::optional<double> reality_horizon(const Scenario& sc) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M;
    switch (sc.kind) {
        case ScenarioKind::SetIa: return std::log(M * pc.sigma) / pc.vartheta;
        case ScenarioKind::SetIb:
        case ScenarioKind::SetIc:
            if (pc.Delta - M * pc.omega0 * pc.omega0 >= 0.0 && M * pc.sigma >= 1.0) return std::nullopt;
            return 0.0;
        case ScenarioKind::SetII: {
            const double k = sc.k_exp;
            const double s_max = k == 2 ? 2.0 * std::sqrt(M * pc.sigma)
                                        : (k + 2.0) / k * std::pow(M * pc.sigma, k / (k + 2.0));
            return (s_max - pc.chi) / pc.Gamma;
        }
        case ScenarioKind::SetIII:
            return (std::sqrt(pc.Delta / M) / pc.omega0 - pc.chi) / pc.Gamma;
    }
    return std::nullopt;
}

inline std::optional<double> reality_horizon(const Scenario& sc, const StateLabel&) { return reality_horizon(sc); }

/// Inside the published horizon and with both NC radicands nonnegative.
inline bool energy_in_window(const Scenario& sc, double t) {
    const auto h = reality_horizon(sc);
    if (h && !(t < *h)) return false;
    return nc_in_window(sc, t);
}

/// ħ[(n+m+1)/2·(bρ² + a/ρ² + ρ̇²/a) + (n−m)c] with the generic complex c.
inline cplx energy_assembled(const Scenario& sc, double t, const StateLabel& s) {
    const RhoEval r = rho_eval(sc, t);
    const FamilyCoeffs fc = family_coefficients(sc, t);
    const double rho2 = r.rho * r.rho;
    const double bracket = fc.b * rho2 + fc.a / rho2 + r.rho_dot * r.rho_dot / fc.a;
    const cplx c = c_generic_complex(sc, t);
    return sc.constants.hbar * (0.5 * (s.n + s.m + 1) * bracket + static_cast<double>(s.n - s.m) * c);
}

/// Per-family reduced form. Set-I uses (n+m+1)μ²Δ, which needs ξ = 1.
inline cplx energy_closed_form(const Scenario& sc, double t, const StateLabel& s) {
    const PhysicalConstants& pc = sc.constants;
    const double mu2 = pc.mu * pc.mu, G = pc.Gamma;
    const double nm1 = s.n + s.m + 1.0, dn = s.n - s.m;
    switch (sc.family()) {
        case Family::Exponential: {
            if (pc.xi != 1.0) throw ConstraintGuard("Set-I reduced energy assumes xi = 1");
            return pc.hbar * (nm1 * mu2 * pc.Delta + dn * c_closed_form_complex(sc, t));
        }
        case Family::Rational: {
            if (sc.k_exp != 2) throw UnsupportedK("closed-form Set-II energy is only available for k = 2");
            const double sft = detail::shifted_time(sc, t);
            const double bracket = 2.0 * (pc.sigma / mu2 + pc.Delta * mu2) + mu2 * G * G / (8.0 * pc.sigma);
            return pc.hbar * (nm1 / (2.0 * sft) * bracket + dn * c_closed_form_complex(sc, t));
        }
        case Family::Elementary: {
            const double sft = detail::shifted_time(sc, t);
            const double bracket = (pc.Delta * mu2 + pc.sigma / mu2) / (sft * sft) + mu2 * G * G / pc.sigma;
            return pc.hbar * (0.5 * nm1 * bracket + dn * c_closed_form_complex(sc, t));
        }
    }
    return 0.0;
}

/// Set-III under Δμ⁴ = ξ²σ: ½(n+m+1)[2σ/(μ²s²) + μ²Γ²/σ] + (n−m)c.
inline cplx energy_closed_form_elementary_reduced(const Scenario& sc, double t, const StateLabel& s) {
    if (sc.kind != ScenarioKind::SetIII) throw DomainError("reduced elementary energy applies to Set-III only");
    const PhysicalConstants& pc = sc.constants;
    const double mu2 = pc.mu * pc.mu;
    const double sft = detail::shifted_time(sc, t);
    const double bracket = 2.0 * pc.sigma / (mu2 * sft * sft) + mu2 * pc.Gamma * pc.Gamma / pc.sigma;
    return pc.hbar * (0.5 * (s.n + s.m + 1) * bracket + static_cast<double>(s.n - s.m) * c_closed_form_complex(sc, t));
}

struct EnergyResult {
    cplx value;
    double t = 0.0;
    std::optional<double> real_horizon;
    StateLabel state;
    bool in_window = false;
    bool closed_form_checked = false;
    double closed_form_residual = 0.0;  // relative, when checked
};

inline constexpr double kEnergyAgreement = 1e-10;

/// Assembled value; inside the window it is also compared against the
/// family closed form (ToleranceNotMet on disagreement).
inline EnergyResult energy_expectation(const Scenario& sc, double t, const StateLabel& s) {
    if (t < 0.0) throw DomainError("energy requested at negative time");
    EnergyResult r;
    r.t = t;
    r.state = s;
    r.real_horizon = reality_horizon(sc);
    r.value = energy_assembled(sc, t, s);
    r.in_window = energy_in_window(sc, t);
    const bool closed_available = has_closed_form_c(sc) && (sc.family() != Family::Exponential || sc.constants.xi == 1.0) &&
                                  (sc.family() != Family::Rational || sc.k_exp == 2);
    if (r.in_window && closed_available) {
        const cplx closed = energy_closed_form(sc, t, s);
        const double scale = std::max({std::abs(r.value), std::abs(closed), 1e-300});
        r.closed_form_residual = std::abs(r.value - closed) / scale;
        r.closed_form_checked = true;
        if (r.closed_form_residual > kEnergyAgreement)
            throw ToleranceNotMet("assembled energy disagrees with the family closed form", r.closed_form_residual);
    }
    return r;
}

struct EnergyRow {
    double t = 0.0;
    double gamma_t = 0.0;
    double e_re_scaled = 0.0;
    double e_im_scaled = 0.0;
    bool in_window = false;
};

/// Energy divided by ω₀ on a sorted, nonnegative grid.
inline std::vector<EnergyRow> energy_series(const Scenario& sc, const StateLabel& s, const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw DomainError("energy grid must be nonnegative");
        if (i > 0 && grid[i] < grid[i - 1]) throw DomainError("energy grid must be sorted");
    }
    std::vector<EnergyRow> rows;
    rows.reserve(grid.size());
    const double w0 = sc.constants.omega0;
    for (double t : grid) {
        const EnergyResult e = energy_expectation(sc, t, s);
        rows.push_back({t, sc.constants.Gamma * t, e.value.real() / w0, e.value.imag() / w0, e.in_window});
    }
    return rows;
}

}  // namespace ncosc
