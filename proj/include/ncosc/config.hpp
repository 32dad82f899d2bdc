#pragma once

// Physical scenarios: constants, damping/frequency profiles and the
// Ermakov-Pinney solution family they are bound to. A Scenario is an
// immutable value; every other module takes it by const reference.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace ncosc {

struct PhysicalConstants {
    double M = 1.0;         // mass
    double omega0 = 1.0;    // base angular frequency
    double Gamma = 1.0;     // decay rate
    double vartheta = 1.0;  // exponential rate of the Set-I family
    double chi = 0.0;       // time offset of the rational/elementary families
    double sigma = 1.0;
    double Delta = 1.0;
    double mu = 1.0;
    double xi = 1.0;        // EP integration constant
    double hbar = 1.0;

    bool operator==(const PhysicalConstants&) const = default;
};

enum class DampingKind { Unit, ExpDecay };
enum class FrequencyKind { Constant, ExpDecay, Rational };
enum class ScenarioKind { SetIa, SetIb, SetIc, SetII, SetIII };
enum class Family { Exponential, Rational, Elementary };

/// f(t) = exp(-∫η): 1 for Unit, e^{-Γt} for ExpDecay.
struct DampingProfile {
    DampingKind kind = DampingKind::Unit;
    double Gamma = 0.0;

    double value(double t) const {
        return kind == DampingKind::Unit ? 1.0 : std::exp(-Gamma * t);
    }
    bool operator==(const DampingProfile&) const = default;
};

struct FrequencyProfile {
    FrequencyKind kind = FrequencyKind::Constant;
    double omega0 = 1.0;
    double Gamma = 0.0;
    double chi = 1.0;

    double value(double t) const {
        switch (kind) {
            case FrequencyKind::Constant: return omega0;
            case FrequencyKind::ExpDecay: return omega0 * std::exp(-0.5 * Gamma * t);
            case FrequencyKind::Rational: return omega0 / (Gamma * t + chi);
        }
        return omega0;
    }
    bool operator==(const FrequencyProfile&) const = default;
};

inline Family family_of(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::SetIa:
        case ScenarioKind::SetIb:
        case ScenarioKind::SetIc: return Family::Exponential;
        case ScenarioKind::SetII: return Family::Rational;
        case ScenarioKind::SetIII: return Family::Elementary;
    }
    return Family::Exponential;
}

inline std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::SetIa: return "SetIa";
        case ScenarioKind::SetIb: return "SetIb";
        case ScenarioKind::SetIc: return "SetIc";
        case ScenarioKind::SetII: return "SetII";
        case ScenarioKind::SetIII: return "SetIII";
    }
    return "?";
}

inline std::optional<ScenarioKind> scenario_kind_from_string(std::string_view s) {
    if (s == "SetIa") return ScenarioKind::SetIa;
    if (s == "SetIb") return ScenarioKind::SetIb;
    if (s == "SetIc") return ScenarioKind::SetIc;
    if (s == "SetII" || s == "SetII_k") return ScenarioKind::SetII;
    if (s == "SetIII") return ScenarioKind::SetIII;
    return std::nullopt;
}

/// Profile pair each scenario kind is defined with.
inline std::pair<DampingKind, FrequencyKind> expected_profiles(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::SetIa: return {DampingKind::Unit, FrequencyKind::ExpDecay};
        case ScenarioKind::SetIb: return {DampingKind::ExpDecay, FrequencyKind::Constant};
        case ScenarioKind::SetIc: return {DampingKind::ExpDecay, FrequencyKind::ExpDecay};
        case ScenarioKind::SetII:
        case ScenarioKind::SetIII: return {DampingKind::Unit, FrequencyKind::Rational};
    }
    return {DampingKind::Unit, FrequencyKind::Constant};
}

/// Unvalidated scenario description, as parsed from a file or built in code.
/// The profile overrides are optional; when absent they follow from `kind`.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::SetIb;
    int k_exp = 2;
    PhysicalConstants constants;
    std::optional<DampingKind> damping;
    std::optional<FrequencyKind> frequency;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Family constraint relation evaluated as LHS = RHS.
/// relative = |LHS - RHS| / max(largest individual term, 1).
struct ConstraintResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 1.0;
    double relative = 0.0;
    std::string_view equation;
};

inline ConstraintResidual family_constraint(const PhysicalConstants& pc, ScenarioKind kind, int k_exp) {
    ConstraintResidual r;
    switch (family_of(kind)) {
        case Family::Exponential: {
            r.equation = "mu^4 = xi^2 sigma^2 / (sigma Delta - vartheta^2/4)";
            r.lhs = std::pow(pc.mu, 4);
            r.rhs = pc.xi * pc.xi * pc.sigma * pc.sigma /
                    (pc.sigma * pc.Delta - 0.25 * pc.vartheta * pc.vartheta);
            r.scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1.0});
            break;
        }
        case Family::Rational: {
            r.equation = "Gamma^2 mu = (k+2)^2 (sigma Delta mu - xi^2 sigma^2 / mu^3)";
            const double k2 = (k_exp + 2.0) * (k_exp + 2.0);
            const double t1 = k2 * pc.sigma * pc.Delta * pc.mu;
            const double t2 = k2 * pc.xi * pc.xi * pc.sigma * pc.sigma / std::pow(pc.mu, 3);
            r.lhs = pc.Gamma * pc.Gamma * pc.mu;
            r.rhs = t1 - t2;
            r.scale = std::max({std::abs(r.lhs), std::abs(t1), std::abs(t2), 1.0});
            break;
        }
        case Family::Elementary: {
            r.equation = "Delta mu^4 = xi^2 sigma";
            r.lhs = pc.Delta * std::pow(pc.mu, 4);
            r.rhs = pc.xi * pc.xi * pc.sigma;
            r.scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1.0});
            break;
        }
    }
    r.relative = std::abs(r.lhs - r.rhs) / r.scale;
    return r;
}

inline constexpr double kConstraintTolerance = 1e-9;

struct Scenario {
    PhysicalConstants constants;
    DampingProfile damping;
    FrequencyProfile frequency;
    ScenarioKind kind = ScenarioKind::SetIb;
    int k_exp = 2;
    double constraint_residual = 0.0;

    Family family() const { return family_of(kind); }
    double f(double t) const { return damping.value(t); }
    double omega(double t) const { return frequency.value(t); }

    bool operator==(const Scenario&) const = default;
};

enum class Validation { Strict, Unchecked };

inline Scenario build_scenario(const ScenarioSpec& spec, Validation mode = Validation::Strict) {
    const PhysicalConstants& pc = spec.constants;
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError(std::string(name) + " must be positive and finite");
    };
    positive(pc.M, "M");
    positive(pc.omega0, "omega0");
    positive(pc.Gamma, "Gamma");
    positive(pc.vartheta, "vartheta");
    positive(pc.sigma, "sigma");
    positive(pc.Delta, "Delta");
    positive(pc.mu, "mu");
    positive(pc.xi, "xi");
    positive(pc.hbar, "hbar");
    if (!std::isfinite(pc.chi)) throw DomainError("chi must be finite");

    const auto [want_damping, want_frequency] = expected_profiles(spec.kind);
    if (spec.damping && *spec.damping != want_damping)
        throw ProfileMismatch("damping profile does not match scenario kind " +
                              std::string(to_string(spec.kind)));
    if (spec.frequency && *spec.frequency != want_frequency)
        throw ProfileMismatch("frequency profile does not match scenario kind " +
                              std::string(to_string(spec.kind)));

    const Family fam = family_of(spec.kind);
    if (fam == Family::Exponential) {
        if (!(pc.sigma * pc.Delta > 0.25 * pc.vartheta * pc.vartheta))
            throw DomainError("Set-I requires sigma*Delta > vartheta^2/4");
    } else {
        if (pc.chi == 0.0) throw DomainError("rational/elementary families require chi != 0");
        if (fam == Family::Rational && spec.k_exp < 1)
            throw DomainError("Set-II requires integer exponent k_exp >= 1");
    }

    Scenario sc;
    sc.constants = pc;
    sc.kind = spec.kind;
    sc.k_exp = fam == Family::Rational ? spec.k_exp : 0;
    sc.damping = {want_damping, want_damping == DampingKind::ExpDecay ? pc.Gamma : 0.0};
    sc.frequency = {want_frequency, pc.omega0,
                    want_frequency == FrequencyKind::Constant ? 0.0 : pc.Gamma,
                    want_frequency == FrequencyKind::Rational ? pc.chi : 1.0};

    const ConstraintResidual cr = family_constraint(pc, spec.kind, sc.k_exp);
    sc.constraint_residual = cr.relative;
    if (mode == Validation::Strict && !(cr.relative <= kConstraintTolerance)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", cr.relative);
        throw ConstraintViolation("constraint " + std::string(cr.equation) +
                                      " violated: relative residual " + buf,
                                  cr.relative);
    }
    return sc;
}

inline ScenarioSpec spec_of(const Scenario& sc) {
    ScenarioSpec spec;
    spec.kind = sc.kind;
    spec.k_exp = sc.family() == Family::Rational ? sc.k_exp : 2;
    spec.constants = sc.constants;
    return spec;
}

// ---------------------------------------------------------------------------
// Scenario file format: `key = value` per line, `#` starts a comment.

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text, int line, std::string_view key) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ParseError("invalid number '" + std::string(text) + "' for key " + std::string(key), line);
    return v;
}

}  // namespace detail

inline ScenarioSpec parse_scenario(std::istream& in) {
    std::map<std::string, std::pair<std::string, int>> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (value.empty()) throw ParseError("empty value for key " + key, line_no);
        static constexpr std::string_view known[] = {"kind", "M", "omega0", "Gamma", "vartheta", "chi",
                                                     "sigma", "Delta", "mu", "xi", "hbar", "k_exp"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ParseError("unknown key '" + key + "'", line_no);
        if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        entries.emplace(key, std::make_pair(value, line_no));
    }

    ScenarioSpec spec;
    const auto kind_it = entries.find("kind");
    if (kind_it == entries.end()) throw ParseError("missing required key 'kind'", 0);
    const auto kind = scenario_kind_from_string(kind_it->second.first);
    if (!kind)
        throw ParseError("unknown scenario kind '" + kind_it->second.first + "'", kind_it->second.second);
    spec.kind = *kind;

    auto number = [&](const std::string& key) -> std::optional<double> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return detail::parse_number(it->second.first, it->second.second, key);
    };
    auto required = [&](const std::string& key) {
        const auto v = number(key);
        if (!v) throw ParseError("missing required key '" + key + "'", 0);
        return *v;
    };

    PhysicalConstants& pc = spec.constants;
    pc.M = required("M");
    pc.omega0 = required("omega0");
    pc.Gamma = required("Gamma");
    pc.sigma = required("sigma");
    pc.Delta = required("Delta");
    pc.mu = required("mu");
    pc.vartheta = number("vartheta").value_or(pc.Gamma);
    pc.xi = number("xi").value_or(1.0);
    pc.hbar = number("hbar").value_or(1.0);
    if (family_of(spec.kind) == Family::Exponential)
        pc.chi = number("chi").value_or(0.0);
    else
        pc.chi = required("chi");

    if (const auto it = entries.find("k_exp"); it != entries.end()) {
        const double k = detail::parse_number(it->second.first, it->second.second, "k_exp");
        if (k != std::floor(k) || k < 1 || k > 1000)
            throw ParseError("k_exp must be a positive integer", it->second.second);
        spec.k_exp = static_cast<int>(k);
    }
    return spec;
}

inline ScenarioSpec parse_scenario(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

inline ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'", 0);
    return parse_scenario(in);
}

inline void write_scenario(std::ostream& out, const ScenarioSpec& spec) {
    const PhysicalConstants& pc = spec.constants;
    auto put = [&](const char* key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " = " << buf << '\n';
    };
    out << "kind = " << to_string(spec.kind) << '\n';
    put("M", pc.M);
    put("omega0", pc.omega0);
    put("Gamma", pc.Gamma);
    put("vartheta", pc.vartheta);
    put("chi", pc.chi);
    put("sigma", pc.sigma);
    put("Delta", pc.Delta);
    put("mu", pc.mu);
    put("xi", pc.xi);
    put("hbar", pc.hbar);
    if (family_of(spec.kind) == Family::Rational) out << "k_exp = " << spec.k_exp << '\n';
}

}  // namespace ncosc
