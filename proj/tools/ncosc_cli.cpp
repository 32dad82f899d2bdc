// ncosc: verification runs and CSV emitters for the damped NC oscillator.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ncosc/ncosc.hpp>

using namespace ncosc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string scenario;
    int n = 0;
    int m = 0;
    int m_prime = -1;
    int k_pow = 1;
    std::string coord = "both";
    double t0 = 0.0;
    double t1 = 10.0;
    double t = 0.0;
    int points = 100;
    double tol = 1e-10;
    bool gnuplot = false;
    std::string out;
    double r_max = 0.0;
    int n_radial = 64;
    int n_angular = 64;

    double tol_ep = 1e-12;
    double tol_constraint = 1e-9;
    double tol_invariant = 1e-6;
    double tol_identity = 1e-12;
    double tol_phase = 1e-7;
    double tol_matelem = 1e-6;
    double tol_overlap = 1e-6;
    double tol_bopp = 1e-9;
    double tol_energy = 1e-10;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

Scenario load(const Options& o) {
    const ScenarioSpec spec = load_scenario_file(o.scenario);
    return build_scenario(spec, Validation::Unchecked);
}

std::vector<double> grid(double t0, double t1, int points) {
    if (points < 1) throw UsageError("--points must be at least 1");
    if (!(t1 >= t0)) throw UsageError("--t1 must not be smaller than --t0");
    if (t0 < 0.0) throw UsageError("--t0 must be nonnegative");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = points == 1 ? t0 : t0 + (t1 - t0) * i / (points - 1);
    return g;
}

// CSV goes to --out when given, otherwise stdout.
class Sink {
public:
    explicit Sink(const Options& o) {
        if (o.gnuplot && o.out.empty()) throw UsageError("--gnuplot needs --out so the script can reference the CSV");
        if (!o.out.empty()) {
            file_.open(o.out, std::ios::binary);
            if (!file_) throw UsageError("cannot open output file '" + o.out + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    void row(const std::vector<std::string>& cells) {
        std::ostream& s = os();
        for (std::size_t i = 0; i < cells.size(); ++i) s << (i ? "," : "") << cells[i];
        s << '\n';
        ++rows_;
    }
    int rows() const { return rows_; }

private:
    std::ofstream file_;
    int rows_ = 0;
};

void write_gnuplot(const Options& o, const std::string& title, const std::string& xcol, const std::vector<std::pair<int, std::string>>& series,
                   int xindex) {
    std::ofstream gp(o.out + ".gp", std::ios::binary);
    if (!gp) throw UsageError("cannot write gnuplot script");
    gp << "set datafile separator ','\n";
    gp << "set key autotitle columnhead\n";
    gp << "set title '" << title << "'\n";
    gp << "set xlabel '" << xcol << "'\n";
    gp << "set grid\n";
    gp << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        gp << (i ? ", \\\n     " : "") << "'" << o.out << "' using " << xindex << ":" << series[i].first
           << " with lines title '" << series[i].second << "'";
    }
    gp << "\n";
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
    bool skipped = false;
    bool passed = true;
    std::string note;
};

template <class F>
CheckResult run_check(const std::string& name, double tol, F&& body) {
    CheckResult c;
    c.name = name;
    c.tol = tol;
    try {
        body(c);
        if (!c.skipped) c.passed = c.worst <= tol;
    } catch (const std::exception& e) {
        c.passed = false;
        c.worst = INFINITY;
        c.note = e.what();
    }
    return c;
}

double verify_window(const Scenario& sc) {
    double end = 10.0 / sc.constants.Gamma;
    std::optional<double> h = reality_horizon(sc);
    const std::optional<double> nc = nc_horizons(sc).tightest();
    if (nc && (!h || *nc < *h)) h = nc;
    if (h && *h > 0.0) end = std::min(end, 0.95 * *h);
    return end;
}

int cmd_verify(const Options& o) {
    const Scenario sc = load(o);
    const double T = verify_window(sc);
    const bool nc_ok_somewhere = nc_in_window(sc, 0.0);
    std::vector<CheckResult> results;

    results.push_back(run_check("constraint", o.tol_constraint, [&](CheckResult& c) {
        const ConstraintResidual r = constraint_check(sc);
        c.worst = r.relative;
        c.note = std::string(r.equation);
    }));

    results.push_back(run_check("ep_residual", o.tol_ep, [&](CheckResult& c) {
        for (double t : grid(0.0, T, 200)) c.worst = std::max(c.worst, ep_residual(sc, t).relative());
    }));

    results.push_back(run_check("invariant_ode", o.tol_invariant, [&](CheckResult& c) {
        const double h = 1e-5;
        for (double t : grid(h, T, 100)) c.worst = std::max(c.worst, invariant_ode_residuals(sc, t, h).worst());
    }));

    results.push_back(run_check("invariant_identity", o.tol_identity, [&](CheckResult& c) {
        for (double t : grid(0.0, T, 100))
            c.worst = std::max(c.worst, invariant_identity_residual(invariant_coefficients(sc, t), sc.constants.xi));
    }));

    results.push_back(run_check("bopp_identity", o.tol_bopp, [&](CheckResult& c) {
        if (!nc_ok_somewhere) {
            c.skipped = true;
            c.note = "NC parameters complex at t = 0";
            return;
        }
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (double t : grid(0.0, T, 10)) {
            for (int i = 0; i < 1000; ++i) {
                const PhaseSpacePoint p{u(rng), u(rng), u(rng), u(rng)};
                const double a = classical_symbol(sc, t, p, SymbolForm::BoppShifted);
                const double b = classical_symbol(sc, t, p, SymbolForm::ABCForm);
                c.worst = std::max(c.worst, std::abs(a - b) / classical_symbol_scale(sc, t, p));
            }
        }
    }));

    results.push_back(run_check("nc_roundtrip", o.tol_identity, [&](CheckResult& c) {
        if (!nc_ok_somewhere) {
            c.skipped = true;
            c.note = "NC parameters complex at t = 0";
            return;
        }
        for (double t : grid(0.0, T, 100)) {
            const auto [a, b] = coefficients_from_nc(sc, nc_parameters(sc, t));
            const FamilyCoeffs fc = family_coefficients(sc, t);
            c.worst = std::max({c.worst, std::abs(a - fc.a) / fc.a, std::abs(b - fc.b) / fc.b});
        }
    }));

    results.push_back(run_check("phase_cross", o.tol_phase, [&](CheckResult& c) {
        int compared = 0;
        std::string refused;
        for (double t : grid(0.0, T, 50)) {
            cplx closed;
            try {
                closed = phase_integral_closed_form(sc, t);
            } catch (const OutOfValidatedDomain& e) {
                refused = e.what();
                continue;
            } catch (const UnsupportedK& e) {
                refused = e.what();
                continue;
            }
            const cplx quad = phase_integral_quadrature(sc, t, o.tol);
            if (t == 0.0 && closed != 0.0) c.worst = INFINITY;
            c.worst = std::max(c.worst, std::abs(closed - quad) / std::max(1.0, std::abs(quad)));
            ++compared;
        }
        if (compared == 0) {
            c.skipped = true;
            c.note = "no closed form on this window: " + refused;
        } else {
            c.note = std::to_string(compared) + " of 50 times compared";
        }
    }));

    const std::vector<double> times = {0.0, 0.25 * T, 0.5 * T};

    results.push_back(run_check("matrix_elements", o.tol_matelem, [&](CheckResult& c) {
        if (!nc_ok_somewhere) {
            c.skipped = true;
            c.note = "NC parameters complex at t = 0";
            return;
        }
        for (double t : times) {
            PolarOracle oracle(sc, t, o.tol);
            const cplx J = phase_unit(sc, t);
            for (int n = 0; n <= 3; ++n)
                for (int m = 0; m <= 3; ++m)
                    for (int mp = 0; mp <= 3; ++mp)
                        for (int k = 0; k <= 2; ++k)
                            for (Coordinate co : {Coordinate::X, Coordinate::Y}) {
                                const cplx cf = matrix_element_pow_with_phase(sc, t, co, n, m, mp, k, J);
                                const cplx orc = oracle.matrix_element(n, m, mp, k, co);
                                c.worst = std::max(c.worst, std::abs(cf - orc) / std::max({1.0, std::abs(cf), std::abs(orc)}));
                            }
        }
    }));

    results.push_back(run_check("orthonormality", o.tol_overlap, [&](CheckResult& c) {
        for (double t : times) {
            PolarOracle oracle(sc, t, o.tol);
            for (int n1 = 0; n1 <= 3; ++n1)
                for (int m1 = 0; m1 <= 3; ++m1)
                    for (int n2 = 0; n2 <= 3; ++n2)
                        for (int m2 = 0; m2 <= 3; ++m2) {
                            const cplx v = oracle.overlap({n1, m1}, {n2, m2});
                            const double expect = (n1 == n2 && m1 == m2) ? 1.0 : 0.0;
                            c.worst = std::max(c.worst, std::abs(v - expect));
                        }
        }
    }));

    results.push_back(run_check("energy_closed_form", o.tol_energy, [&](CheckResult& c) {
        const bool closed = has_closed_form_c(sc) && (sc.family() != Family::Rational || sc.k_exp == 2) &&
                            (sc.family() != Family::Exponential || sc.constants.xi == 1.0);
        if (!closed) {
            c.skipped = true;
            c.note = "no reduced energy form for this scenario";
            return;
        }
        int compared = 0;
        for (double t : grid(0.0, T, 200)) {
            if (!energy_in_window(sc, t)) continue;
            for (const StateLabel s : {StateLabel(0, 0), StateLabel(1, 0), StateLabel(2, 1), StateLabel(0, 2)}) {
                const cplx a = energy_assembled(sc, t, s);
                const cplx b = energy_closed_form(sc, t, s);
                c.worst = std::max(c.worst, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
                ++compared;
            }
        }
        if (compared == 0) {
            c.skipped = true;
            c.note = "energy window empty";
        }
    }));

    int failed = 0, passed = 0;
    double worst = 0.0;
    std::printf("scenario %s (%s), window [0, %.6g]\n", o.scenario.c_str(), std::string(to_string(sc.kind)).c_str(), T);
    std::printf("%-20s %-14s %-10s %s\n", "check", "worst", "tol", "status");
    for (const CheckResult& r : results) {
        const char* status = r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL";
        std::printf("%-20s %-14.6e %-10.1e %s%s%s\n", r.name.c_str(), r.worst, r.tol, status, r.note.empty() ? "" : "  ",
                    r.note.c_str());
        if (r.skipped) continue;
        if (r.passed)
            ++passed;
        else
            ++failed;
        if (std::isfinite(r.worst)) worst = std::max(worst, r.worst / r.tol);
    }
    std::printf("passed %d, failed %d, worst residual/tol %.3e\n", passed, failed, worst);
    return failed == 0 ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// emitters

int cmd_energy(const Options& o) {
    const Scenario sc = load(o);
    const StateLabel s(o.n, o.m);
    const std::vector<double> g = grid(o.t0, o.t1, o.points);
    Sink sink(o);
    sink.row({"t", "Gamma_t", "E_re_scaled", "E_im_scaled", "in_window"});
    for (const EnergyRow& r : energy_series(sc, s, g))
        sink.row({fmt(r.t), fmt(r.gamma_t), fmt(r.e_re_scaled), fmt(r.e_im_scaled), r.in_window ? "1" : "0"});
    if (o.gnuplot)
        write_gnuplot(o, "energy / omega0, state (" + std::to_string(o.n) + "," + std::to_string(o.m) + ")", "Gamma t",
                      {{3, "Re E/omega0"}, {4, "Im E/omega0"}}, 2);
    return kExitOk;
}

int cmd_phase(const Options& o) {
    const Scenario sc = load(o);
    const StateLabel s(o.n, o.m);
    const std::vector<double> g = grid(o.t0, o.t1, o.points);
    Sink sink(o);
    sink.row({"t", "Theta_re", "Theta_im", "method"});
    for (double t : g) {
        const PhaseResult p = phase(sc, s, t);
        sink.row({fmt(t), fmt(p.value.real()), fmt(p.value.imag()), to_string(p.method)});
    }
    if (o.gnuplot) write_gnuplot(o, "phase", "t", {{2, "Re Theta"}, {3, "Im Theta"}}, 1);
    return kExitOk;
}

int cmd_ncparams(const Options& o) {
    const Scenario sc = load(o);
    const std::vector<double> g = grid(o.t0, o.t1, o.points);
    Sink sink(o);
    sink.row({"t", "theta_re", "theta_im", "omega_re", "omega_im", "theta_in_window", "omega_in_window"});
    for (double t : g) {
        const NCParamsComplex p = nc_parameters_complex(sc, t);
        bool th = false, om = false;
        nc_in_window(sc, t, &th, &om);
        sink.row({fmt(t), fmt(p.theta_nc.real()), fmt(p.theta_nc.imag()), fmt(p.omega_nc.real()), fmt(p.omega_nc.imag()),
                  th ? "1" : "0", om ? "1" : "0"});
    }
    if (o.gnuplot) write_gnuplot(o, "noncommutative parameters", "t", {{2, "theta_nc"}, {4, "Omega_nc"}}, 1);
    return kExitOk;
}

int cmd_matelem(const Options& o) {
    if (o.gnuplot) throw UsageError("--gnuplot is not available for matelem");
    const Scenario sc = load(o);
    if (o.n < 0 || o.m < 0 || o.k_pow < 0) throw UsageError("--n, --m and --k must be nonnegative");
    std::vector<Coordinate> coords;
    if (o.coord == "x" || o.coord == "both") coords.push_back(Coordinate::X);
    if (o.coord == "y" || o.coord == "both") coords.push_back(Coordinate::Y);
    std::vector<int> targets;
    if (o.m_prime >= 0) {
        targets.push_back(o.m_prime);
    } else {
        for (int mp = o.m - o.k_pow; mp <= o.m + o.k_pow; mp += 2)
            if (mp >= 0) targets.push_back(mp);
    }
    PolarOracle oracle(sc, o.t, o.tol);
    Sink sink(o);
    sink.row({"coord", "k", "n", "m", "m_prime", "closed_re", "closed_im", "oracle_re", "oracle_im", "abs_diff"});
    for (Coordinate co : coords)
        for (int mp : targets) {
            const cplx cf = matrix_element_pow(sc, o.t, co, o.n, o.m, mp, o.k_pow);
            const cplx orc = oracle.matrix_element(o.n, o.m, mp, o.k_pow, co);
            sink.row({co == Coordinate::X ? "x" : "y", std::to_string(o.k_pow), std::to_string(o.n), std::to_string(o.m),
                      std::to_string(mp), fmt(cf.real()), fmt(cf.imag()), fmt(orc.real()), fmt(orc.imag()),
                      fmt(std::abs(cf - orc))});
        }
    return kExitOk;
}

int cmd_wavefield(const Options& o) {
    const Scenario sc = load(o);
    const StateLabel s(o.n, o.m);
    if (o.n_radial < 2 || o.n_angular < 1) throw UsageError("--nr must be >= 2 and --nangle >= 1");
    const double rho = rho_eval(sc, o.t).rho;
    const double r_max = o.r_max > 0.0 ? o.r_max : 4.0 * std::sqrt(sc.constants.hbar * (o.n + o.m + 1)) * rho;
    const cplx theta = phase(sc, s, o.t).value;
    const double norm = std::abs(std::exp(cplx(0.0, 1.0) * theta));
    Sink sink(o);
    sink.row({"r", "angle", "x", "y", "psi_abs2"});
    for (int i = 0; i < o.n_radial; ++i) {
        const double r = r_max * i / (o.n_radial - 1);
        for (int j = 0; j < o.n_angular; ++j) {
            const double ang = 2.0 * std::numbers::pi * j / o.n_angular;
            const double phi = std::abs(eigenfunction(sc, o.t, s, {r, ang}));
            const double psi2 = norm * norm * phi * phi;
            sink.row({fmt(r), fmt(ang), fmt(r * std::cos(ang)), fmt(r * std::sin(ang)), fmt(psi2)});
        }
    }
    if (o.gnuplot) {
        std::ofstream gp(o.out + ".gp", std::ios::binary);
        gp << "set datafile separator ','\nset view map\nset size ratio -1\n"
           << "splot '" << o.out << "' using 3:4:5 with points palette pointtype 5 pointsize 0.5 notitle\n";
    }
    return kExitOk;
}

void add_tolerances(CLI::App* sub, Options& o) {
    sub->add_option("--tol-ep", o.tol_ep, "EP residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-constraint", o.tol_constraint, "constraint tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-invariant", o.tol_invariant, "invariant ODE tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-identity", o.tol_identity, "4ab-g^2 identity and NC round trip tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-phase", o.tol_phase, "phase cross-check tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-matelem", o.tol_matelem, "matrix element tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-overlap", o.tol_overlap, "orthonormality tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-bopp", o.tol_bopp, "Bopp identity tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-energy", o.tol_energy, "energy closed form tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Damped oscillator in time-dependent noncommutative space: checks and data"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "scenario file (key = value)")->required();
        sub->add_option("--tol", o.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
    };
    auto series = [&](CLI::App* sub) {
        sub->add_option("--t0", o.t0, "first time");
        sub->add_option("--t1", o.t1, "last time");
        sub->add_option("--points", o.points, "number of grid points");
        sub->add_option("--out", o.out, "write CSV to this file instead of stdout");
        sub->add_flag("--gnuplot", o.gnuplot, "also write <out>.gp");
    };
    auto state = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "quantum number n");
        sub->add_option("--m", o.m, "quantum number m = n + l");
    };

    CLI::App* verify = app.add_subcommand("verify", "run every consistency check on a scenario");
    common(verify);
    add_tolerances(verify, o);

    CLI::App* energy = app.add_subcommand("energy", "energy expectation / omega0 as CSV");
    common(energy);
    series(energy);
    state(energy);

    CLI::App* ph = app.add_subcommand("phase", "phase Theta_{n,m-n}(t) as CSV");
    common(ph);
    series(ph);
    state(ph);

    CLI::App* nc = app.add_subcommand("ncparams", "theta_nc(t), Omega_nc(t) as CSV");
    common(nc);
    series(nc);

    CLI::App* me = app.add_subcommand("matelem", "matrix elements of x^k, y^k with oracle values");
    common(me);
    state(me);
    me->add_option("--m-prime", o.m_prime, "target m' (default: every allowed value)");
    me->add_option("--k", o.k_pow, "power k");
    me->add_option("--coord", o.coord, "x, y or both")->check(CLI::IsMember({"x", "y", "both"}));
    me->add_option("--t", o.t, "time");
    me->add_option("--out", o.out, "write CSV to this file instead of stdout");
    me->add_flag("--gnuplot", o.gnuplot, "not supported for this command");

    CLI::App* wf = app.add_subcommand("wavefield", "|psi|^2 on a polar grid at fixed t");
    common(wf);
    state(wf);
    wf->add_option("--t", o.t, "time");
    wf->add_option("--r-max", o.r_max, "outer radius (default 4 sqrt(hbar (n+m+1)) rho)");
    wf->add_option("--nr", o.n_radial, "radial samples");
    wf->add_option("--nangle", o.n_angular, "angular samples");
    wf->add_option("--out", o.out, "write CSV to this file instead of stdout");
    wf->add_flag("--gnuplot", o.gnuplot, "also write <out>.gp");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(o);
        if (*energy) return cmd_energy(o);
        if (*ph) return cmd_phase(o);
        if (*nc) return cmd_ncparams(o);
        if (*me) return cmd_matelem(o);
        if (*wf) return cmd_wavefield(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << o.scenario << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ProfileMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidLabel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
