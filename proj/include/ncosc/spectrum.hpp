#pragma once

// Invariant eigenfunctions, phase factors, Hamiltonian eigenfunctions and the
// matrix elements of x^k, y^k, each with a quadrature oracle.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "ermakov.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "specfun.hpp"

namespace ncosc {

/// Quantum numbers (n, m) with l = m − n. Both n and m must be nonnegative.
struct StateLabel {
    int n = 0;
    int m = 0;

    StateLabel() = default;
    StateLabel(int n_, int m_) : n(n_), m(m_) {
        if (n < 0 || m < 0)
            throw InvalidLabel("state label needs n >= 0 and m = n + l >= 0 (got n=" + std::to_string(n) +
                               ", m=" + std::to_string(m) + ")");
    }
    static StateLabel from_nl(int n, int l) { return StateLabel(n, n + l); }

    int l() const { return m - n; }
    bool operator==(const StateLabel&) const = default;
    auto operator<=>(const StateLabel&) const = default;
};

struct PolarPoint {
    double r = 0.0;
    double angle = 0.0;
};

// ---------------------------------------------------------------------------
// Eigenfunctions of the invariant

enum class RadialForm { Regularized, Direct };

/// r^{n−m} U(−m, 1−m+n, r²/(ħρ²)). For n < m the Regularized form uses
/// U(−m, b, w) = w^{1−b} U(−n, 2−b, w), which removes the r^{n−m} pole.
inline double radial_factor(int n, int m, double r, double hbar_rho2, RadialForm form = RadialForm::Regularized) {
    const double w = r * r / hbar_rho2;
    if (n < m && form == RadialForm::Regularized) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * static_cast<double>(factorial(n)) * std::pow(hbar_rho2, n - m) * std::pow(r, m - n) *
               laguerre(n, m - n, w);
    }
    return std::pow(r, n - m) * tricomi_u_poly(m, 1.0 - m + n, w);
}

/// λ_n = 1/√(π n! (ħρ²)^{1+n}), taken positive.
inline double eigen_normalization(int n, double hbar_rho2) {
    return 1.0 / std::sqrt(std::numbers::pi * static_cast<double>(factorial(n)) * std::pow(hbar_rho2, 1.0 + n));
}

namespace detail {

struct EigenContext {
    double rho, rho_dot, a, hbar, hr2;
};

inline EigenContext eigen_context(const Scenario& sc, double t) {
    const RhoEval r = rho_eval(sc, t);
    const double a = family_coefficients(sc, t).a;
    const double hbar = sc.constants.hbar;
    return {r.rho, r.rho_dot, a, hbar, hbar * r.rho * r.rho};
}

inline cplx eigenfunction_at(const EigenContext& c, const StateLabel& s, const PolarPoint& pt, RadialForm form) {
    const int n = s.n, m = s.m;
    const double lam = eigen_normalization(n, c.hr2);
    // (i √ħ ρ)^m / √(m!)
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const double amp = std::pow(std::sqrt(c.hbar) * c.rho, m) / std::sqrt(static_cast<double>(factorial(m)));
    const double r2 = pt.r * pt.r;
    // −(a − iρρ̇) r²/(2aħρ²)
    const cplx gauss = std::exp(cplx(-0.5 * r2 / c.hr2, c.rho * c.rho_dot * r2 / (2.0 * c.a * c.hr2)));
    const cplx ang = std::polar(1.0, pt.angle * (m - n));
    return lam * ipow[m % 4] * amp * radial_factor(n, m, pt.r, c.hr2, form) * ang * gauss;
}

}  // namespace detail

inline cplx eigenfunction(const Scenario& sc, double t, const StateLabel& s, const PolarPoint& pt,
                          RadialForm form = RadialForm::Regularized) {
    if (pt.r < 0.0) throw DomainError("polar radius must be nonnegative");
    return detail::eigenfunction_at(detail::eigen_context(sc, t), s, pt, form);
}

// ---------------------------------------------------------------------------
// Phase Θ_{n,l}(t) = (n+l) ∫_0^t (c − a/ρ²) dT

enum class PhaseMethod { ClosedForm, Quadrature };

inline const char* to_string(PhaseMethod m) { return m == PhaseMethod::ClosedForm ? "closed_form" : "quadrature"; }

struct PhaseResult {
    cplx value;
    PhaseMethod method = PhaseMethod::Quadrature;
    double t = 0.0;
    std::string note;  // set when the closed form was refused
};

/// c(T) − a(T)/ρ(T)², complex beyond the reality window.
inline cplx phase_rate(const Scenario& sc, double t) {
    const double rho = rho_eval(sc, t).rho;
    return c_generic_complex(sc, t) - family_coefficients(sc, t).a / (rho * rho);
}

inline cplx phase_integral_quadrature(const Scenario& sc, double t, double abs_tol = 1e-10, double rel_tol = 1e-13) {
    if (t == 0.0) return 0.0;
    return integrate_adaptive_ex([&](double x) { return phase_rate(sc, x); }, 0.0, t, abs_tol, rel_tol, 20000).value;
}

namespace detail {

inline cplx phase_integral_Ia(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M, w0 = pc.omega0, G = pc.Gamma, D = pc.Delta;
    const double A = M * pc.sigma;
    const double z0 = D / (M * w0 * w0);
    const double zt = D * std::exp(2.0 * G * t) / (M * w0 * w0);
    if (!(zt < 1.0))
        throw OutOfValidatedDomain("Set-Ia closed-form phase needs the 2F1 argument below 1 (z = " +
                                   std::to_string(zt) + ")");
    if (A * std::exp(-G * t) < 1.0)
        throw OutOfValidatedDomain("Set-Ia closed-form phase is only validated inside the theta_nc window");
    auto X = [&](double x) { return std::exp(G * x) - 2.0 * A - 2.0 * csqrt(A * (A - std::exp(G * x))); };
    const cplx part1 = w0 / (2.0 * std::sqrt(A) * G) *
                       (clog(X(t) / X(0.0)) - G * t -
                        2.0 * csqrt(A * (A * std::exp(-2.0 * G * t) - std::exp(-G * t))) +
                        2.0 * csqrt(A * (A - 1.0)));
    const cplx F0 = gauss_2f1(-0.25, 0.5, 0.75, z0);
    const cplx Ft = gauss_2f1(-0.25, 0.5, 0.75, zt);
    const cplx I(0.0, 1.0);
    const cplx part2 = (2.0 / G) * (csqrt(D * std::exp(G * t) / M - w0 * w0 * std::exp(-G * t)) -
                                    csqrt(D / M - w0 * w0) - 2.0 * I * w0 * (std::exp(-0.5 * G * t) * Ft - F0));
    return part1 + part2 - pc.sigma / (pc.mu * pc.mu) * t;
}

inline cplx phase_integral_Ib(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M, w0 = pc.omega0;
    const cplx slope = -pc.sigma / (pc.mu * pc.mu) + csqrt((pc.Delta - M * w0 * w0) / M) + w0 * csqrt(M * pc.sigma - 1.0);
    return slope * t;
}

inline cplx phase_integral_Ic(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M, w0 = pc.omega0, G = pc.Gamma, D = pc.Delta;
    const double K = M * w0 * w0;
    if (D - K < 0.0)
        throw OutOfValidatedDomain("Set-Ic closed-form phase is only validated for Delta >= M omega0^2");
    const double sD = std::sqrt(D);
    const double u0 = std::sqrt(D - K), ut = std::sqrt(D - K * std::exp(-G * t));
    const double first = (sD * G * t + 2.0 * u0 - 2.0 * ut + 2.0 * sD * std::log((D + sD * ut) / (D + sD * u0))) /
                         (G * std::sqrt(M));
    const cplx second = pc.sigma * t / (pc.mu * pc.mu) +
                        (2.0 / G) * w0 * (std::exp(-0.5 * G * t) - 1.0) * csqrt(M * pc.sigma - 1.0);
    return first - second;
}

inline cplx phase_integral_II(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    if (sc.k_exp != 2) throw UnsupportedK("closed-form Set-II phase is only available for k = 2");
    const double M = pc.M, w0 = pc.omega0, G = pc.Gamma, D = pc.Delta, chi = pc.chi;
    const double B = 4.0 * pc.sigma * M;
    const double s = shifted_time(sc, t);
    if (D * chi * chi / M < w0 * w0)
        throw OutOfValidatedDomain("Set-II closed-form phase needs Delta chi^2/M >= omega0^2");
    if (s * s > B)
        throw OutOfValidatedDomain("Set-II closed-form phase is only validated inside the theta_nc window");
    auto F = [&](double x) {
        const cplx root = csqrt(D * x * x / M - w0 * w0);
        return w0 * catan(w0 / root) + root;
    };
    const cplx I(0.0, 1.0);
    const cplx part1 = (F(s) - F(chi) - 2.0 * pc.sigma / (pc.mu * pc.mu) * std::log(s / chi)) / G;
    const cplx part2 = (w0 / G) * (csqrt(B - chi * chi) / chi - csqrt(B - s * s) / s -
                                   I * clog((s + csqrt(s * s - B)) / (chi + csqrt(chi * chi - B))));
    return part1 + part2;
}

inline cplx phase_integral_III(const Scenario& sc, double t) {
    const PhysicalConstants& pc = sc.constants;
    const double M = pc.M, w0 = pc.omega0, G = pc.Gamma, D = pc.Delta, chi = pc.chi;
    const double s = shifted_time(sc, t);
    if (D / (M * s * s) < w0 * w0 || D / (M * chi * chi) < w0 * w0)
        throw OutOfValidatedDomain("Set-III closed-form phase is only validated inside the Omega_nc window");
    auto F = [&](double x) {
        return -std::sqrt(D / (M * x * x) - w0 * w0) - w0 * std::atan(w0 * x / std::sqrt(D / M - w0 * w0 * x * x));
    };
    const cplx part1 = w0 * csqrt(M * pc.sigma - 1.0) / G * std::log(s / chi) - pc.sigma * t / (pc.mu * pc.mu * chi * s);
    return part1 + (F(s) - F(chi)) / G;
}

}  // namespace detail

/// ∫_0^t (c − a/ρ²) dT from the per-family closed forms.
inline cplx phase_integral_closed_form(const Scenario& sc, double t) {
    if (sc.family() == Family::Exponential && sc.constants.vartheta != sc.constants.Gamma)
        throw OutOfValidatedDomain("closed-form Set-I phases are only available when vartheta = Gamma");
    if (t < 0.0) throw DomainError("phase requested at negative time");
    switch (sc.kind) {
        case ScenarioKind::SetIa: return detail::phase_integral_Ia(sc, t);
        case ScenarioKind::SetIb: return detail::phase_integral_Ib(sc, t);
        case ScenarioKind::SetIc: return detail::phase_integral_Ic(sc, t);
        case ScenarioKind::SetII: return detail::phase_integral_II(sc, t);
        case ScenarioKind::SetIII: return detail::phase_integral_III(sc, t);
    }
    return 0.0;
}

inline PhaseResult phase_quadrature(const Scenario& sc, const StateLabel& s, double t, double abs_tol = 1e-10,
                                    double rel_tol = 1e-13) {
    PhaseResult r;
    r.t = t;
    r.method = PhaseMethod::Quadrature;
    r.value = static_cast<double>(s.m) * phase_integral_quadrature(sc, t, abs_tol, rel_tol);
    return r;
}

inline PhaseResult phase_closed_form(const Scenario& sc, const StateLabel& s, double t) {
    PhaseResult r;
    r.t = t;
    r.method = PhaseMethod::ClosedForm;
    r.value = static_cast<double>(s.m) * phase_integral_closed_form(sc, t);
    return r;
}

/// Closed form where it is validated, quadrature otherwise (with a note).
inline PhaseResult phase(const Scenario& sc, const StateLabel& s, double t) {
    try {
        return phase_closed_form(sc, s, t);
    } catch (const OutOfValidatedDomain& e) {
        PhaseResult r = phase_quadrature(sc, s, t);
        r.note = e.what();
        return r;
    } catch (const UnsupportedK& e) {
        PhaseResult r = phase_quadrature(sc, s, t);
        r.note = e.what();
        return r;
    }
}

/// J(t) = Θ_{0,1}(t); every Θ_{n,l} is (n+l)·J.
inline cplx phase_unit(const Scenario& sc, double t) { return phase(sc, StateLabel(0, 1), t).value; }

inline cplx hamiltonian_eigenfunction(const Scenario& sc, double t, const StateLabel& s, const PolarPoint& pt) {
    const cplx theta = phase(sc, s, t).value;
    return std::exp(cplx(0.0, 1.0) * theta) * eigenfunction(sc, t, s, pt);
}

// ---------------------------------------------------------------------------
// Matrix elements ⟨n, m'−n| x^k |n, m−n⟩ (Hamiltonian eigenstates)

enum class Coordinate { X, Y };
enum class Basis { Hamiltonian, Invariant };

/// Closed-form element with a supplied J = Θ_{0,1}(t). The selection rule
/// m' = m + 2r − k picks at most one r; otherwise the result is exactly 0.
inline cplx matrix_element_pow_with_phase(const Scenario& sc, double t, Coordinate coord, int n, int m, int m_prime,
                                          int k_pow, cplx J, Basis basis = Basis::Hamiltonian) {
    if (n < 0 || m < 0 || m_prime < 0 || k_pow < 0)
        throw InvalidLabel("matrix element needs n, m, m', k >= 0 (negative Laguerre degree)");
    const int twice_r = m_prime - m + k_pow;
    if (twice_r < 0 || twice_r % 2 != 0 || twice_r / 2 > k_pow) return 0.0;
    const int r = twice_r / 2;
    const int j = 2 * r - k_pow;  // = m' − m

    const double rho = rho_eval(sc, t).rho;
    const double hbar = sc.constants.hbar;
    const double hr2 = hbar * rho * rho;
    const double lam2 = 1.0 / (std::numbers::pi * static_cast<double>(factorial(n)) * std::pow(hr2, 1.0 + n));
    const double radial = lam2 * std::pow(std::sqrt(hbar) * rho, 2 * n + k_pow + 2) *
                          std::sqrt(static_cast<double>(factorial(m) * factorial(m_prime))) *
                          laguerre_weighted_integral(n - m - r + k_pow, m, n - m, m_prime, n - m_prime);
    const double pre = std::numbers::pi / std::ldexp(1.0, k_pow) * static_cast<double>(binomial(k_pow, r));

    cplx factor = 1.0;
    if (coord == Coordinate::X) {
        static const cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
        factor = ((k_pow + r) % 2 == 0 ? 1.0 : -1.0) * minus_i_pow[k_pow % 4];
    }
    const cplx ph = basis == Basis::Hamiltonian && j != 0 ? std::exp(cplx(0.0, 1.0) * static_cast<double>(j) * J)
                                                         : cplx(1.0);
    return pre * factor * ph * radial;
}

inline cplx matrix_element_pow(const Scenario& sc, double t, Coordinate coord, int n, int m, int m_prime, int k_pow,
                               Basis basis = Basis::Hamiltonian) {
    const bool need_phase = basis == Basis::Hamiltonian && m_prime != m;
    const cplx J = need_phase ? phase_unit(sc, t) : cplx(0.0);
    return matrix_element_pow_with_phase(sc, t, coord, n, m, m_prime, k_pow, J, basis);
}

inline cplx matrix_element_x_pow(const Scenario& sc, double t, int n, int m, int m_prime, int k_pow) {
    return matrix_element_pow(sc, t, Coordinate::X, n, m, m_prime, k_pow);
}

inline cplx matrix_element_y_pow(const Scenario& sc, double t, int n, int m, int m_prime, int k_pow) {
    return matrix_element_pow(sc, t, Coordinate::Y, n, m, m_prime, k_pow);
}

// ---------------------------------------------------------------------------
// 2-D quadrature oracle: Gauss–Laguerre in u = r²/(ħρ²) times a periodic
// trapezoid rule in the polar angle.

class PolarQuadrature {
public:
    PolarQuadrature(const Scenario& sc, double t, int n_radial, int n_angular)
        : ctx_(detail::eigen_context(sc, t)) {
        if (n_radial < 1 || n_angular < 1) throw DomainError("quadrature grid sizes must be positive");
        const GaussLaguerreRule rule = gauss_laguerre_rule(n_radial);
        const double dang = 2.0 * std::numbers::pi / n_angular;
        for (int i = 0; i < n_radial; ++i) {
            const double r = std::sqrt(ctx_.hr2 * rule.nodes[i]);
            // r dr = (ħρ²/2) du
            const double wr = 0.5 * ctx_.hr2 * rule.scaled_weights[i];
            for (int j = 0; j < n_angular; ++j) points_.push_back({r, j * dang, wr * dang});
        }
    }

    const std::vector<cplx>& samples(const StateLabel& s) {
        auto it = cache_.find(s);
        if (it != cache_.end()) return it->second;
        std::vector<cplx> v;
        v.reserve(points_.size());
        for (const Node& p : points_) v.push_back(detail::eigenfunction_at(ctx_, s, {p.r, p.angle}, RadialForm::Regularized));
        return cache_.emplace(s, std::move(v)).first->second;
    }

    /// ∫ conj(φ_bra) g(r, angle) φ_ket r dr dangle
    template <class G>
    cplx integrate(const StateLabel& bra, const StateLabel& ket, G&& g) {
        const std::vector<cplx>& a = samples(bra);
        const std::vector<cplx>& b = samples(ket);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i)
            sum += points_[i].w * g(points_[i].r, points_[i].angle) * std::conj(a[i]) * b[i];
        return sum;
    }

private:
    struct Node {
        double r, angle, w;
    };
    detail::EigenContext ctx_;
    std::vector<Node> points_;
    std::map<StateLabel, std::vector<cplx>> cache_;
};

/// Escalating tensor grids (16, 32, 64, 128 points per axis) at one time;
/// a value is accepted once two consecutive levels agree to tol·max(1, |I|).
class PolarOracle {
public:
    PolarOracle(const Scenario& sc, double t, double tol = 1e-10) : sc_(sc), t_(t), tol_(tol) {}

    template <class G>
    cplx integrate(const StateLabel& bra, const StateLabel& ket, G&& g) {
        cplx prev = level(0).integrate(bra, ket, g);
        double diff = 0.0;
        for (std::size_t lv = 1; lv < kLevels.size(); ++lv) {
            const cplx cur = level(lv).integrate(bra, ket, g);
            diff = std::abs(cur - prev);
            if (diff <= tol_ * std::max(1.0, std::abs(cur))) return cur;
            prev = cur;
        }
        throw ToleranceNotMet("2-D polar quadrature did not settle", diff);
    }

    cplx overlap(const StateLabel& s1, const StateLabel& s2) {
        return integrate(s1, s2, [](double, double) { return 1.0; });
    }

    cplx phase_of(const StateLabel& s) {
        auto it = phases_.find(s);
        if (it != phases_.end()) return it->second;
        const cplx v = phase(sc_, s, t_).value;
        phases_.emplace(s, v);
        return v;
    }

    /// e^{i(Θ_{n,m'−n} − Θ_{n,m−n})} ∫ conj(φ_{n,m−n}) (r cos)^k φ_{n,m'−n}  (sin for y)
    cplx matrix_element(int n, int m, int m_prime, int k_pow, Coordinate coord, Basis basis = Basis::Hamiltonian) {
        const StateLabel bra(n, m), ket(n, m_prime);
        const cplx integral = integrate(bra, ket, [&](double r, double ang) {
            const double proj = coord == Coordinate::X ? r * std::cos(ang) : r * std::sin(ang);
            return std::pow(proj, k_pow);
        });
        if (basis == Basis::Invariant || m == m_prime) return integral;
        const cplx dtheta = phase_of(ket) - phase_of(bra);
        return std::exp(cplx(0.0, 1.0) * dtheta) * integral;
    }

private:
    static constexpr std::array<int, 4> kLevels = {16, 32, 64, 128};

    PolarQuadrature& level(std::size_t i) {
        if (!grids_[i]) grids_[i] = std::make_unique<PolarQuadrature>(sc_, t_, kLevels[i], kLevels[i]);
        return *grids_[i];
    }

    Scenario sc_;
    double t_;
    double tol_;
    std::array<std::unique_ptr<PolarQuadrature>, 4> grids_;
    std::map<StateLabel, cplx> phases_;
};

inline cplx overlap(const Scenario& sc, double t, const StateLabel& s1, const StateLabel& s2, double tol = 1e-10) {
    PolarOracle oracle(sc, t, tol);
    return oracle.overlap(s1, s2);
}

inline cplx matrix_element_oracle(const Scenario& sc, double t, int n, int m, int m_prime, int k_pow,
                                  Coordinate coord, double tol = 1e-10) {
    if (n < 0 || m < 0 || m_prime < 0 || k_pow < 0) throw InvalidLabel("matrix element needs n, m, m', k >= 0");
    PolarOracle oracle(sc, t, tol);
    return oracle.matrix_element(n, m, m_prime, k_pow, coord);
}

}  // namespace ncosc
