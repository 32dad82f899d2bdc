#pragma once

#include <cmath>
#include <complex>

#include <ncosc/ncosc.hpp>

namespace fixtures {

using namespace ncosc;

// Figure parameter set: M=1, mu=1, Delta=sigma=1e7, omega0=1e3, Gamma=vartheta=1, xi=1, chi=1.
inline ScenarioSpec figure_spec(ScenarioKind kind) {
    ScenarioSpec s;
    s.kind = kind;
    PhysicalConstants& c = s.constants;
    c.M = 1.0;
    c.mu = 1.0;
    c.Delta = 1e7;
    c.sigma = 1e7;
    c.omega0 = 1e3;
    c.Gamma = 1.0;
    c.vartheta = 1.0;
    c.xi = 1.0;
    c.chi = kind == ScenarioKind::SetII || kind == ScenarioKind::SetIII ? 1.0 : 0.0;
    return s;
}

inline Scenario figure(ScenarioKind kind) { return build_scenario(figure_spec(kind)); }

// Set-Ia with the 2F1 argument below 1 for t < 10.4.
inline Scenario moderate_Ia() {
    ScenarioSpec s;
    s.kind = ScenarioKind::SetIa;
    PhysicalConstants& c = s.constants;
    c.M = 1.0;
    c.Delta = 0.5;
    c.omega0 = 2.0;
    c.Gamma = 0.1;
    c.vartheta = 0.1;
    c.sigma = 50.0;
    c.mu = std::pow(c.sigma * c.sigma / (c.sigma * c.Delta - 0.25 * c.vartheta * c.vartheta), 0.25);
    return build_scenario(s);
}

// Parameter sets mild enough for a fixed-step integrator (|ab| of order 1).
inline Scenario mild(ScenarioKind kind) {
    ScenarioSpec s;
    s.kind = kind;
    PhysicalConstants& c = s.constants;
    c.M = 1.0;
    c.omega0 = 0.5;
    c.Gamma = 1.0;
    c.vartheta = 1.0;
    switch (family_of(kind)) {
        case Family::Exponential:
            c.sigma = 2.0;
            c.Delta = 1.0;
            c.mu = std::pow(4.0 / 1.75, 0.25);
            break;
        case Family::Rational:
            c.sigma = 1.0;
            c.Delta = 1.0;
            c.chi = 1.0;
            c.mu = std::pow(16.0 / 15.0, 0.25);
            break;
        case Family::Elementary:
            c.sigma = 1.0;
            c.Delta = 1.0;
            c.chi = 1.0;
            c.mu = 1.0;
            break;
    }
    return build_scenario(s);
}

inline double rel(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace fixtures
