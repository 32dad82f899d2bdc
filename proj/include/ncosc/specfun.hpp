#pragma once

// Special functions: associated Laguerre polynomials, the polynomial case of
// Tricomi's U, Gauss 2F1, exact Laguerre weighted integrals, and the
// quadrature rules used as oracles elsewhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace ncosc {

using cplx = std::complex<double>;

// Principal-branch helpers. A real negative radicand is promoted to +i√|x|,
// never to −i√|x| through a stray negative zero.
inline cplx csqrt(double x) { return x >= 0.0 ? cplx(std::sqrt(x), 0.0) : cplx(0.0, std::sqrt(-x)); }
inline cplx csqrt(cplx z) {
    if (z.imag() == 0.0) return csqrt(z.real());
    return std::sqrt(z);
}
inline cplx clog(cplx z) {
    if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
    return std::log(z);
}
inline cplx catan(cplx z) {
    if (z.imag() == 0.0) return cplx(std::atan(z.real()), 0.0);
    return std::atan(z);
}

// ---------------------------------------------------------------------------
// Integer helpers

/// n! as long double; exact through 25!, log-gamma beyond 170.
inline long double factorial(int n) {
    if (n < 0) throw DomainError("factorial of negative integer");
    if (n > 170) return std::exp(std::lgamma(static_cast<long double>(n) + 1.0L));
    long double r = 1.0L;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

namespace detail {

using i128 = __int128;

inline bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool add_ok(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }

// Generalized binomial C(top, k) for integer top (negative allowed), k >= 0.
// Exact; false on overflow.
inline bool binomial_exact(long long top, int k, i128& out) {
    if (k < 0) { out = 0; return true; }
    if (top >= 0 && k > top) { out = 0; return true; }
    i128 r = 1;
    for (int i = 0; i < k; ++i) {
        // r * (top - i) / (i + 1) stays integral at every step
        if (!mul_ok(r, static_cast<i128>(top - i), r)) return false;
        r /= (i + 1);
    }
    out = r;
    return true;
}

}  // namespace detail

/// Generalized binomial coefficient C(top, k), integer top of either sign.
inline long double binomial(long long top, int k) {
    detail::i128 v;
    if (detail::binomial_exact(top, k, v)) return static_cast<long double>(v);
    long double r = 1.0L;
    for (int i = 0; i < k; ++i) r *= static_cast<long double>(top - i) / (i + 1);
    return r;
}

// ---------------------------------------------------------------------------
// Laguerre / Tricomi U

/// L_n^{(zeta)}(w) by the three-term recurrence in n.
inline double laguerre(int n, double zeta, double w) {
    if (n < 0) throw DomainError("Laguerre degree must be nonnegative");
    long double l0 = 1.0L;
    if (n == 0) return 1.0;
    long double l1 = 1.0L + zeta - w;
    for (int k = 1; k < n; ++k) {
        const long double l2 = ((2.0L * k + 1.0L + zeta - w) * l1 - (k + zeta) * l0) / (k + 1.0L);
        l0 = l1;
        l1 = l2;
    }
    return static_cast<double>(l1);
}

/// Explicit sum Σ (-1)^i C(n+ζ, n-i) w^i / i!  (integer ζ).
inline double laguerre_explicit(int n, int zeta, double w) {
    if (n < 0) throw DomainError("Laguerre degree must be nonnegative");
    long double sum = 0.0L, wp = 1.0L;
    for (int i = 0; i <= n; ++i) {
        const long double term = binomial(static_cast<long long>(n) + zeta, n - i) * wp / factorial(i);
        sum += (i % 2 == 0) ? term : -term;
        wp *= w;
    }
    return static_cast<double>(sum);
}

/// U(-m, b, w) = (-1)^m m! L_m^{(b-1)}(w).
inline double tricomi_u_poly(int m, double b, double w) {
    if (m < 0) throw NonPolynomialCase("U(a,b,w) with a = " + std::to_string(-m) + " is not a polynomial");
    const double l = laguerre(m, b - 1.0, w);
    return static_cast<double>((m % 2 == 0 ? 1.0L : -1.0L) * factorial(m) * l);
}

/// U(a, b, w) for real a; only the polynomial case a = -m is supported.
inline double tricomi_u(double a, double b, double w) {
    const double m = -a;
    if (!(m >= 0.0) || m != std::floor(m) || m > 1000.0)
        throw NonPolynomialCase("Tricomi U is only supported for a = 0, -1, -2, ...");
    return tricomi_u_poly(static_cast<int>(m), b, w);
}

// ---------------------------------------------------------------------------
// Gauss–Laguerre rule (weight e^{-u} on [0, ∞))

struct GaussLaguerreRule {
    std::vector<double> nodes;
    std::vector<double> scaled_weights;  // w_i e^{u_i}: Σ g(u_i) scaled_i ≈ ∫ g(u) du
};

inline GaussLaguerreRule gauss_laguerre_rule(int n) {
    if (n < 1 || n > 400) throw DomainError("Gauss-Laguerre order out of range");
    GaussLaguerreRule rule;
    rule.nodes.resize(n);
    rule.scaled_weights.resize(n);
    std::vector<long double> x(n);
    long double z = 0.0L;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0L / (1.0L + 2.4L * n);
        } else if (i == 1) {
            z += 15.0L / (1.0L + 2.5L * n);
        } else {
            const long double ai = i - 1;
            z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - x[i - 2]);
        }
        long double p1 = 1.0L, p2 = 0.0L, pp = 1.0L;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0L;
            p2 = 0.0L;
            for (int j = 1; j <= n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L - z) * p2 - (j - 1.0L) * p3) / j;
            }
            pp = (n * p1 - n * p2) / z;
            const long double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-18L * std::fabs(z)) break;
        }
        x[i] = z;
        // weight = -1/(pp n p2); keep it in log form against e^{z}
        const long double w = -1.0L / (pp * n * p2);
        rule.nodes[i] = static_cast<double>(z);
        rule.scaled_weights[i] = static_cast<double>(w * std::exp(z));
    }
    return rule;
}

// ---------------------------------------------------------------------------
// ∫_0^∞ w^q e^{-w} L_{n1}^{(ζ1)}(w) L_{n2}^{(ζ2)}(w) dw

namespace detail {

// Σ_i Σ_j (-1)^{i+j} C(n1+ζ1, n1-i) C(n2+ζ2, n2-j) (q+i+j)!/(i! j!)
// (q+i+j)!/(i! j!) = C(q+i+j, i) C(q+j, j) q!, so every term is an integer.
inline bool laguerre_integral_exact(int q, int n1, int z1, int n2, int z2, i128& out) {
    i128 total = 0;
    for (int i = 0; i <= n1; ++i) {
        i128 ci;
        if (!binomial_exact(static_cast<long long>(n1) + z1, n1 - i, ci)) return false;
        if (ci == 0) continue;
        for (int j = 0; j <= n2; ++j) {
            i128 dj;
            if (!binomial_exact(static_cast<long long>(n2) + z2, n2 - j, dj)) return false;
            if (dj == 0) continue;
            const int p = q + i + j;
            if (p < 0) throw DomainError("Laguerre weighted integral diverges at w = 0");
            i128 a, b, f = 1, term;
            // q may be negative; compute p!/(i! j!) via C(p, i) * (p-i)!/j!,
            // which is only integral term by term when p >= i and q + j >= j
            if (p < i) return false;
            if (!binomial_exact(p, i, a)) return false;
            const int rest = p - i;  // = q + j
            if (rest >= j) {
                if (!binomial_exact(rest, j, b)) return false;
                for (int s = 2; s <= rest - j; ++s)
                    if (!mul_ok(f, s, f)) return false;
            } else {
                // (rest)!/j! is not integral on its own; only reachable for q < 0
                return false;
            }
            if (!mul_ok(a, b, term) || !mul_ok(term, f, term) || !mul_ok(term, ci, term) ||
                !mul_ok(term, dj, term))
                return false;
            if ((i + j) % 2 != 0) term = -term;
            if (!add_ok(total, term, total)) return false;
        }
    }
    out = total;
    return true;
}

// Fallback once the integer sum overflows: the integrand is a polynomial of
// degree q + n1 + n2, so an (deg/2 + 1)-point Gauss–Laguerre rule is exact and
// its positive weights avoid the cancellation of the alternating expansion.
inline long double laguerre_integral_gauss(int q, int n1, int z1, int n2, int z2) {
    auto lowest = [](int n, int z) {
        for (int i = 0; i <= n; ++i)
            if (binomial(static_cast<long long>(n) + z, n - i) != 0.0L) return i;
        return -1;
    };
    const int i0 = lowest(n1, z1), j0 = lowest(n2, z2);
    if (i0 < 0 || j0 < 0) return 0.0L;
    if (q + i0 + j0 < 0) throw DomainError("Laguerre weighted integral diverges at w = 0");
    const int degree = q + n1 + n2;
    const int points = degree / 2 + 2;
    if (points > 400) throw DomainError("Laguerre weighted integral degree too large");
    const GaussLaguerreRule rule = gauss_laguerre_rule(points);
    long double total = 0.0L;
    for (int k = 0; k < points; ++k) {
        const long double u = rule.nodes[k];
        const long double w = rule.scaled_weights[k] * std::exp(-u);
        if (w == 0.0L) continue;
        total += w * std::pow(u, static_cast<long double>(q)) * laguerre(n1, z1, static_cast<double>(u)) *
                 laguerre(n2, z2, static_cast<double>(u));
    }
    return total;
}

}  // namespace detail

/// Expansion of both polynomials against ∫ w^p e^{-w} = p!, summed exactly in
/// 128-bit integers; Gauss–Laguerre when that overflows. q may be negative as
/// long as every nonzero term has a nonnegative power (negative ζ polynomials
/// carry a factor w^{-ζ}).
inline double laguerre_weighted_integral_expanded(int q, int n1, int zeta1, int n2, int zeta2) {
    if (n1 < 0 || n2 < 0) throw DomainError("Laguerre degree must be nonnegative");
    detail::i128 v;
    if (detail::laguerre_integral_exact(q, n1, zeta1, n2, zeta2, v)) return static_cast<double>(v);
    return static_cast<double>(detail::laguerre_integral_gauss(q, n1, zeta1, n2, zeta2));
}

/// Same integral, using the orthogonality relation and the first moment
/// identity where they apply. Higher moments always go through the expansion:
/// the (2n+k+1)^p pattern does not hold for p >= 2.
inline double laguerre_weighted_integral(int q, int n1, int zeta1, int n2, int zeta2) {
    if (n1 < 0 || n2 < 0) throw DomainError("Laguerre degree must be nonnegative");
    if (zeta1 == zeta2 && zeta1 >= 0) {
        const int z = zeta1;
        if (q == z) {
            if (n1 != n2) return 0.0;
            return static_cast<double>(binomial(static_cast<long long>(n1) + z, z) * factorial(z));
        }
        if (q == z + 1 && n1 == n2) {
            const long double ratio = binomial(static_cast<long long>(n1) + z, z) * factorial(z);
            return static_cast<double>(ratio * (2.0L * n1 + z + 1.0L));
        }
    }
    return laguerre_weighted_integral_expanded(q, n1, zeta1, n2, zeta2);
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric 2F1

namespace detail {

inline bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline double rgamma(double x) { return nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

inline cplx hyp2f1_series(double a, double b, double c, cplx z, int max_terms) {
    cplx term = 1.0, sum = 1.0;
    int small = 0;
    for (int k = 0; k < max_terms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (term == 0.0) return sum;  // terminating series
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small >= 2) return sum;
        } else {
            small = 0;
        }
    }
    throw NoConvergence("2F1 series did not converge within " + std::to_string(max_terms) + " terms");
}

}  // namespace detail

/// 2F1(a, b; c; z), principal branch.
///   |z| < 0.75           direct series
///   |1 - z| < 0.75       linear transformation to 1 - z (c - a - b not an integer)
///   otherwise |z| < 1    direct series with a large term budget
/// Anything else raises OutOfValidatedDomain.
inline cplx gauss_2f1(double a, double b, double c, cplx z) {
    if (detail::nonpositive_integer(c)) throw DomainError("2F1 with c a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (detail::nonpositive_integer(a) || detail::nonpositive_integer(b)) {
        // polynomial: the series terminates for any z
        return detail::hyp2f1_series(a, b, c, z, 100000);
    }
    const double az = std::abs(z);
    if (az < 0.75) return detail::hyp2f1_series(a, b, c, z, 5000);

    const double d = c - a - b;
    if (std::abs(1.0 - z) < 0.75 && d != std::floor(d)) {
        const cplx w = 1.0 - z;
        const double g1 = std::tgamma(c) * std::tgamma(d) * detail::rgamma(c - a) * detail::rgamma(c - b);
        const double g2 = std::tgamma(c) * std::tgamma(-d) * detail::rgamma(a) * detail::rgamma(b);
        cplx out = g1 * detail::hyp2f1_series(a, b, 1.0 - d, w, 5000);
        if (g2 != 0.0) out += g2 * std::pow(w, d) * detail::hyp2f1_series(c - a, c - b, d + 1.0, w, 5000);
        return out;
    }
    if (az < 1.0) return detail::hyp2f1_series(a, b, c, z, 200000);
    throw OutOfValidatedDomain("2F1 argument |z| >= 1 outside the implemented transformations");
}

// ---------------------------------------------------------------------------
// Adaptive Gauss–Kronrod quadrature over a finite interval

struct QuadratureResult {
    cplx value;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

struct GK15 {
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx k = fc * GK15::wk[7];
    cplx g = fc * GK15::wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * GK15::xk[j];
        const cplx s = cplx(f(c - dx)) + cplx(f(c + dx));
        k += GK15::wk[j] * s;
        if (j % 2 == 1) g += GK15::wg[j / 2] * s;
    }
    const cplx kv = k * h;
    const double err = std::abs(kv - g * h);
    return {a, b, kv, err};
}

}  // namespace detail

/// Global adaptive G7K15 on [t0, t1]; bisects the worst panel until the total
/// error estimate is below max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate_adaptive_ex(F&& f, double t0, double t1, double abs_tol = 1e-10,
                                       double rel_tol = 0.0, int max_intervals = 4000) {
    if (!(abs_tol > 0.0) && !(rel_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    QuadratureResult res;
    if (t0 == t1) return res;
    auto g = [&](double x) -> cplx { return cplx(f(x)); };
    std::priority_queue<detail::Panel> heap;
    detail::Panel p0 = detail::gk15(g, t0, t1);
    heap.push(p0);
    cplx total = p0.value;
    double err = p0.error;
    int count = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (count >= max_intervals) throw ToleranceNotMet("adaptive quadrature exhausted subdivisions", err);
        const detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) throw ToleranceNotMet("adaptive quadrature interval underflow", err);
        const detail::Panel l = detail::gk15(g, worst.a, mid);
        const detail::Panel r = detail::gk15(g, mid, worst.b);
        heap.push(l);
        heap.push(r);
        ++count;
        // resum to keep rounding from accumulating
        total = 0.0;
        err = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            total += copy.top().value;
            err += copy.top().error;
            copy.pop();
        }
    }
    res.value = total;
    res.error = err;
    res.intervals = count;
    return res;
}

template <class F>
cplx integrate_adaptive(F&& f, double t0, double t1, double tol = 1e-10) {
    return integrate_adaptive_ex(std::forward<F>(f), t0, t1, tol).value;
}

}  // namespace ncosc
