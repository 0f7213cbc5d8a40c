// Acceptance run: one PASS/FAIL line per criterion, details on indented lines.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dirsim/closed_forms.hpp"
#include "dirsim/figures.hpp"
#include "dirsim/fock.hpp"

using namespace dirsim;
using namespace dirsim::app;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double t_end = 20;
constexpr double dt = 1e-3;

Params make(double gamma, double big_gamma, double g, double theta = 0, double omega = 0.1)
{
    Params p;
    p.gamma = gamma;
    p.big_gamma = big_gamma;
    p.g = g;
    p.theta = theta;
    p.omega = omega;
    return p;
}

double rel(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0 : std::abs(a - b) / s;
}

/// Collects sub-checks of one criterion.
class Criterion
{
public:
    explicit Criterion(int id) : m_id(id) {}

    bool check(const std::string& what, double value, double tol)
    {
        return expect(what, value, tol, value <= tol);
    }

    /// Passes when value is larger than `bound`.
    bool exceed(const std::string& what, double value, double bound)
    {
        return expect(what, value, bound, value > bound);
    }

    bool flag(const std::string& what, bool ok)
    {
        std::printf("    %s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
        m_ok = m_ok && ok;
        return ok;
    }

    bool finish(const char* title)
    {
        std::printf("%s criterion %d: %s\n", m_ok ? "PASS" : "FAIL", m_id, title);
        std::fflush(stdout);
        return m_ok;
    }

private:
    bool expect(const std::string& what, double value, double tol, bool ok)
    {
        std::printf("    %s  %-58s %.3e (%s %.1e)\n", ok ? "ok  " : "FAIL", what.c_str(), value,
                    value <= tol ? "<=" : ">", tol);
        m_ok = m_ok && ok;
        return ok;
    }

    int m_id;
    bool m_ok{true};
};

double sup_moments(const Trajectory<double>& a, const Trajectory<double>& b)
{
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, (a.states[k].b - b.states[k].b).cwiseAbs().maxCoeff());
        worst = std::max(worst, (a.states[k].n - b.states[k].n).cwiseAbs().maxCoeff());
    }
    return worst;
}

double sup_populations(const Trajectory<double>& traj,
                       const std::function<closed::Populations<double>(double)>& f)
{
    double worst = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto c = f(traj.times[k]);
        worst = std::max({worst, std::abs(c.n11 - traj.states[k].n(0, 0).real()),
                          std::abs(c.n22 - traj.states[k].n(1, 1).real())});
    }
    return worst;
}

double steady_delta(double g)
{
    return *steady_populations(make(1, 0, g)).delta;
}

bool criterion1()
{
    Criterion c(1);
    double worst_n = 0;
    double worst_delta = 0;
    double n22_max = -1;
    double g_at_max = -1;
    for (int k = 0; k <= 60; ++k) {
        const double g = 3.0 * k / 60;
        const auto closed = closed::ss_coherent(1.0, g, 0.1);
        const auto engine = steady_populations(make(1, 0, g));
        worst_n = std::max({worst_n, rel(closed.n1, engine.n11), rel(closed.n2, engine.n22)});
        worst_delta = std::max(worst_delta, std::abs(*closed.delta - *engine.delta));
        if (engine.n22 > n22_max) {
            n22_max = engine.n22;
            g_at_max = g;
        }
    }
    c.check("populations, closed vs engine, relative", worst_n, 1e-12);
    c.check("imbalance, closed vs engine, absolute", worst_delta, 1e-12);

    double lo = 0.1;
    double hi = 1.0;
    c.flag("imbalance changes sign on [0.1, 1]", steady_delta(lo) > 0 && steady_delta(hi) < 0);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = (lo + hi) / 2;
        (steady_delta(mid) > 0 ? lo : hi) = mid;
    }
    c.check("bisected zero crossing |g - 0.5|", std::abs((lo + hi) / 2 - 0.5), 1e-9);
    c.check("grid n22 maximum sits at g = 0.5", std::abs(g_at_max - 0.5), 0);
    c.check("n22 maximum |n22 - 0.01|", std::abs(n22_max - 0.01), 1e-12);
    return c.finish("coherent regime steady state");
}

bool criterion2()
{
    Criterion c(2);
    double lo = 1;
    double hi = 0;
    for (int k = 0; k < 100; ++k) {
        const double x = 0.99 * k / 99;
        const double d_engine = *steady_populations(make(1, x, 0)).delta;
        const double d_closed = *closed::ss_dissipative(1.0, x, 0.1).delta;
        lo = std::min({lo, d_engine, d_closed});
        hi = std::max({hi, d_engine, d_closed});
    }
    c.flag("imbalance within [0, 1] on Gamma in [0, 0.99]", lo >= 0 && hi <= 1);

    const Params p = make(1, 0.8, 0);
    const auto n = steady_second_moments_direct(p);
    const double n11 = n(0, 0).real();
    const double n22 = n(1, 1).real();
    const double delta = (n11 - n22) / (n11 + n22);
    const auto closed = closed::ss_dissipative(1.0, 0.8, 0.1);
    c.check("n11 closed vs linear solve", std::abs(closed.n1 - n11), 1e-10);
    c.check("n22 closed vs linear solve", std::abs(closed.n2 - n22), 1e-10);
    c.check("imbalance closed vs linear solve", std::abs(*closed.delta - delta), 1e-10);
    c.check("n11 vs 0.30864197530864", std::abs(n11 - 25.0 / 81), 1e-10);
    c.check("n22 vs 0.19753086419753", std::abs(n22 - 16.0 / 81), 1e-10);
    c.check("imbalance vs 0.21951219512195", std::abs(delta - 9.0 / 41), 1e-10);

    bool rejected = false;
    try {
        steady_populations(make(1, 1, 0));
    } catch (const Error& e) {
        rejected = e.code() == Errc::MarginallyStable;
    }
    c.flag("Gamma = gamma, g = 0 rejected as MarginallyStable", rejected);
    return c.finish("dissipative regime steady state");
}

bool criterion3()
{
    Criterion c(3);
    const Params coupled = make(1, 1, 0.5, pi / 2);
    const Params alone = make(1, 0, 0);
    for (const auto& [label, init] : {std::pair{"one excitation", Init::single_excitation_first()},
                                      std::pair{"vacuum", Init::vacuum()}}) {
        const auto a = evolve(coupled, init, t_end, dt, Method::ExactPropagator);
        const auto b = evolve(alone, init, t_end, dt, Method::ExactPropagator);
        double worst = 0;
        for (std::size_t k = 0; k < a.size(); ++k)
            worst = std::max({worst, std::abs(a.states[k].b(0) - b.states[k].b(0)),
                              std::abs(a.states[k].n(0, 0) - b.states[k].n(0, 0))});
        c.check(std::string("(b1, n11) vs uncoupled, ") + label, worst, 1e-10);
    }
    const auto ss = steady_populations(coupled);
    c.check("steady |n22 - 0.16|", std::abs(ss.n22 - 0.16), 1e-10);
    c.check("steady |delta + 0.6|", std::abs(*ss.delta + 0.6), 1e-12);
    return c.finish("rightward one-way coupling");
}

bool criterion4()
{
    Criterion c(4);
    const Params p = make(1, 1, 0.5, 3 * pi / 2);
    for (Method m : {Method::ExactPropagator, Method::RK4}) {
        const auto traj = evolve(p, Init::single_excitation_first(), t_end, dt, m);
        double n22 = 0;
        double b2 = 0;
        for (const auto& s : traj.states) {
            n22 = std::max(n22, std::abs(s.n(1, 1)));
            b2 = std::max(b2, std::abs(s.b(1)));
        }
        const std::string label = m == Method::RK4 ? ", rk4" : ", exact";
        c.check("sup n22" + label, n22, 1e-12);
        c.check("sup |b2|" + label, b2, 1e-12);
    }
    c.check("steady |delta - 1|", std::abs(*steady_populations(p).delta - 1), 1e-12);
    return c.finish("leftward one-way coupling");
}

bool criterion5()
{
    Criterion c(5);
    const std::complex<double> target(0, -0.5);
    for (double big_gamma : {1.0, 0.8}) {
        const Params p = make(1, big_gamma, big_gamma / 2, pi / 2);
        const auto e = eigenmodes(dynamical_matrix(p));
        char label[64];
        std::snprintf(label, sizeof label, "Gamma=%.1f", big_gamma);
        c.check(std::string("eigenvalues vs -i/2, ") + label,
                std::max(std::abs(e.lambda_plus - target), std::abs(e.lambda_minus - target)), 1e-12);
        const auto traj = evolve(p, Init::single_excitation_first(), t_end, dt, Method::ExactPropagator);
        c.check(std::string("Jordan propagator vs one-way dynamics, ") + label,
                sup_populations(traj, [&](double t) { return closed::dyn_unidirectional(1.0, big_gamma, 0.1, t); }),
                1e-12);
    }
    const Params p = make(1, 1, 0.5, pi / 2);
    const auto traj = evolve(p, Init::single_excitation_first(), 2.0, dt, Method::ExactPropagator);
    const double n11 = traj.states.back().n(0, 0).real();
    const double expected = 0.04 - 0.08 * std::exp(-1.0) + 1.04 * std::exp(-2.0);
    c.check("n11(2) vs 0.04 - 0.08/e + 1.04/e^2", std::abs(n11 - expected), 1e-12);
    // The expression is 0.151318339...; the quoted seven-place value is checked to its last digit.
    c.check("n11(2) vs 0.1513184", std::abs(n11 - 0.1513184), 1e-7);
    c.check("closed n11(2) vs exact expression",
            std::abs(closed::dyn_unidirectional(1.0, 1.0, 0.1, 2.0).n11 - expected), 1e-12);
    return c.finish("exceptional point");
}

/// Both sides of one corrected entry: the corrected error and the uncorrected relative error.
struct EntryGap
{
    double corrected{};
    double uncorrected{};
};

EntryGap coupling_entry()
{
    EntryGap gap;
    for (double gamma : {0.7, 1.6})
        for (double x : {0.2, 0.9})
            for (double theta : {0.0, 0.8, pi / 2, 4.0})
                for (double phi : {0.0, 1.3}) {
                    Params p = make(gamma, x * gamma, 0.35 + x, theta);
                    p.phi = phi;
                    const auto m = dynamical_matrix(p).m;
                    const std::complex<double> m12 = m(0, 1);
                    const std::complex<double> m21_conj = std::conj(m(1, 0));
                    const auto ok = generalized_couplings(p);
                    const auto bad = closed::uncorrected::generalized_couplings(p);
                    gap.corrected = std::max({gap.corrected, std::abs(ok.g_minus - m12),
                                              std::abs(ok.g_plus - m21_conj)});
                    gap.uncorrected = std::max({gap.uncorrected, std::abs(bad.g_minus - m12) / std::abs(m12),
                                                std::abs(bad.g_plus - m21_conj) / std::abs(m21_conj)});
                }
    return gap;
}

using DynFn = std::function<closed::Populations<double>(double gamma, double a, double t)>;

EntryGap dynamics_entry(const std::vector<std::pair<double, double>>& grid,
                        const std::function<Params(double, double)>& at, const DynFn& ok,
                        const DynFn& bad)
{
    EntryGap gap;
    for (const auto& [gamma, a] : grid) {
        const auto traj = evolve(at(gamma, a), Init::single_excitation_first(), 10.0, 1e-2,
                                 Method::ExactPropagator);
        gap.corrected = std::max(
            gap.corrected, sup_populations(traj, [&](double t) { return ok(gamma, a, t); }));
        for (std::size_t k = 1; k < traj.size(); ++k) {
            const auto b = bad(gamma, a, traj.times[k]);
            gap.uncorrected = std::max({gap.uncorrected, rel(b.n11, traj.states[k].n(0, 0).real()),
                                        rel(b.n22, traj.states[k].n(1, 1).real())});
        }
    }
    return gap;
}

bool criterion6()
{
    Criterion c(6);
    auto report = [&c](const std::string& name, const EntryGap& gap) {
        c.check(name + ": corrected vs engine", gap.corrected, 1e-10);
        c.exceed(name + ": as printed, max relative error", gap.uncorrected, 1e-3);
    };

    report("generalized couplings", coupling_entry());

    report("coherent dynamics",
           dynamics_entry({{0.6, 0.3}, {1.6, 0.7}, {2.3, 2.0}, {1.0, 1.7}},
                          [](double gamma, double g) { return make(gamma, 0, g); },
                          [](double gamma, double g, double t) { return closed::dyn_coherent(gamma, g, 0.1, t); },
                          [](double gamma, double g, double t) {
                              return closed::uncorrected::dyn_coherent(gamma, g, 0.1, t);
                          }));

    EntryGap uni_ss;
    for (double gamma : {0.5, 1.4, 2.5})
        for (int k = 0; k <= 10; ++k) {
            const double big_gamma = 0.95 * gamma * k / 10;
            const auto e = steady_populations(make(gamma, big_gamma, big_gamma / 2, pi / 2));
            const auto ok = closed::ss_unidirectional(gamma, big_gamma, 0.1);
            const auto bad = closed::uncorrected::ss_unidirectional(gamma, big_gamma, 0.1);
            uni_ss.corrected = std::max({uni_ss.corrected, rel(ok.n1, e.n11), rel(ok.n2, e.n22)});
            uni_ss.uncorrected = std::max({uni_ss.uncorrected, rel(bad.n1, e.n11), rel(bad.n2, e.n22)});
        }
    report("one-way steady state", uni_ss);

    report("one-way dynamics",
           dynamics_entry({{0.6, 0.5}, {1.4, 0.9}, {2.2, 2.2}, {1.0, 0.3}},
                          [](double gamma, double big_gamma) {
                              return make(gamma, big_gamma, big_gamma / 2, pi / 2);
                          },
                          [](double gamma, double big_gamma, double t) {
                              return closed::dyn_unidirectional(gamma, big_gamma, 0.1, t);
                          },
                          [](double gamma, double big_gamma, double t) {
                              return closed::uncorrected::dyn_unidirectional(gamma, big_gamma, 0.1, t);
                          }));

    EntryGap n2_gap;
    EntryGap delta_gap;
    for (double gamma : {0.6, 1.5})
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 5; ++j) {
                Params p = make(gamma, 0.9 * gamma * j / 4, 0.2 + 0.4 * j, 2 * pi * i / 8 + 0.1);
                p.phi = 0.3;
                if (!strictly_stable(p))
                    continue;
                const auto e = steady_populations(p);
                const auto ok = closed::ss_general(p);
                const auto bad = closed::uncorrected::ss_general(p);
                n2_gap.corrected = std::max(n2_gap.corrected, rel(ok.n2, e.n22));
                n2_gap.uncorrected = std::max(n2_gap.uncorrected, rel(bad.n2, e.n22));
                delta_gap.corrected = std::max(delta_gap.corrected, std::abs(*ok.delta - *e.delta));
                delta_gap.uncorrected = std::max(delta_gap.uncorrected, rel(*bad.delta, *e.delta));
            }
    report("general steady n22", n2_gap);
    report("general imbalance", delta_gap);
    return c.finish("corrected closed forms vs as printed");
}

bool criterion7()
{
    Criterion c(7);
    const auto init = Init::single_excitation_first();
    for (const auto& dc : dynamics_cases()) {
        const auto start = std::chrono::steady_clock::now();
        const auto moments = evolve(dc.params, init, t_end, dt, Method::ExactPropagator);
        const auto rho6 = fock::evolve_rho(dc.params, init, 6, t_end, dt);
        const auto rho8 = fock::evolve_rho(dc.params, init, 8, t_end, dt);
        double gap = 0;
        double drift = 0;
        for (std::size_t k = 0; k < rho6.size(); ++k) {
            const auto& s = moments.states[k];
            gap = std::max({gap, std::abs(rho6[k].n11 - s.n(0, 0).real()),
                            std::abs(rho6[k].n22 - s.n(1, 1).real()), std::abs(rho6[k].b1 - s.b(0)),
                            std::abs(rho6[k].b2 - s.b(1)), std::abs(rho6[k].n12 - s.n(0, 1))});
            drift = std::max({drift, std::abs(rho6[k].trace - 1), std::abs(rho8[k].trace - 1)});
        }
        c.check(dc.name + " N=6 vs moments", gap, 1e-6);
        c.check(dc.name + " convergence N=6 to 8", fock::max_population_difference(rho6, rho8), 1e-8);
        c.check(dc.name + " trace drift", drift, 1e-8);
        if (strictly_stable(dc.params)) {
            const auto ss = fock::steady_rho(dc.params, 6, false);
            c.check(dc.name + " steady purity |1 - tr rho^2|", std::abs(1 - fock::purity(ss)), 1e-6);
        } else {
            std::printf("    n/a   %s steady purity: no steady state\n", dc.name.c_str());
        }
        std::printf("          (%.1f s)\n",
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return c.finish("Fock-space oracle agreement");
}

std::vector<Params> figure_params()
{
    std::vector<Params> out;
    for (const auto& dc : dynamics_cases())
        out.push_back(dc.params);
    return out;
}

bool criterion8()
{
    Criterion c(8);
    double gaussian = 0;
    double drive = 0;
    for (const Params& p : figure_params()) {
        const auto vac = evolve(p, Init::vacuum(), t_end, dt, Method::RK4);
        for (const auto& s : vac.states)
            gaussian = std::max(gaussian, s.fluctuation().cwiseAbs().maxCoeff());

        Params weak = p;
        Params strong = p;
        weak.omega = 0.05;
        strong.omega = 0.2;
        const auto a = evolve(weak, Init::single_excitation_first(), t_end, dt, Method::RK4);
        const auto b = evolve(strong, Init::single_excitation_first(), t_end, dt, Method::RK4);
        for (std::size_t k = 0; k < a.size(); ++k)
            drive = std::max(drive, (a.states[k].fluctuation() - b.states[k].fluctuation()).cwiseAbs().maxCoeff());
    }
    c.check("vacuum start, max |n - outer(conj b, b)|", gaussian, 1e-10);
    c.check("fluctuation, Omega=0.05 vs Omega=0.2", drive, 1e-10);
    return c.finish("coherent-state and drive-independence properties");
}

bool criterion9()
{
    Criterion c(9);
    for (const auto& dc : dynamics_cases()) {
        double worst = 0;
        for (const auto& init : {Init::single_excitation_first(), Init::vacuum()}) {
            const auto rk4 = evolve(dc.params, init, t_end, dt, Method::RK4);
            const auto exact = evolve(dc.params, init, t_end, dt, Method::ExactPropagator);
            worst = std::max(worst, sup_moments(rk4, exact));
        }
        c.check(dc.name + " rk4 vs exact", worst, 1e-8);
    }
    return c.finish("integrator consistency");
}

bool criterion10()
{
    Criterion c(10);
    const auto ds = figure_job(Figure::Fig3Heatmap, {});
    std::istringstream in(ds.at(0).csv);
    std::string line;
    std::getline(in, line);
    double lo = 1;
    double hi = -1;
    double at_right = std::nan("");
    double at_left = std::nan("");
    std::size_t count = 0;
    while (std::getline(in, line)) {
        double x = 0;
        double big_gamma = 0;
        double delta = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &big_gamma, &delta) != 3)
            continue;
        ++count;
        lo = std::min(lo, delta);
        hi = std::max(hi, delta);
        if (big_gamma == 1.0 && std::abs(x - pi / 2) < 1e-12)
            at_right = delta;
        if (big_gamma == 1.0 && std::abs(x - 3 * pi / 2) < 1e-12)
            at_left = delta;
    }
    c.flag("grid has " + std::to_string(count) + " cells, both one-way points present",
           count > 0 && !std::isnan(at_right) && !std::isnan(at_left));
    c.check("|delta(pi/2, 1) + 0.6|", std::abs(at_right + 0.6), 1e-12);
    c.check("|delta(3pi/2, 1) - 1|", std::abs(at_left - 1), 1e-12);
    c.flag("all cells within [-1, 1]", lo >= -1 && hi <= 1);
    return c.finish("phase and loss heatmap");
}

bool criterion11()
{
    Criterion c(11);
    FigureOptions serial;
    FigureOptions threaded;
    threaded.jobs = 8;
    for (Figure f : all_figures()) {
        const auto a = figure_job(f, serial);
        const auto b = figure_job(f, threaded);
        bool same = a.size() == b.size();
        for (std::size_t k = 0; same && k < a.size(); ++k)
            same = a[k].name == b[k].name && a[k].csv == b[k].csv && a[k].report == b[k].report;
        c.flag(std::string(to_string(f)) + " identical for 1 and 8 jobs", same);
    }
    return c.finish("deterministic output across worker counts");
}

} // namespace

int main()
{
    const std::vector<std::function<bool()>> criteria = {
        criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
        criterion7, criterion8, criterion9, criterion10, criterion11,
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            failed += criteria[k]() ? 0 : 1;
        } catch (const std::exception& e) {
            std::printf("FAIL criterion %zu: threw %s\n", k + 1, e.what());
            ++failed;
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
