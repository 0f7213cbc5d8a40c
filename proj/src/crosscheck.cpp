#include "dirsim/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "dirsim/closed_forms.hpp"
#include "dirsim/figures.hpp"
#include "dirsim/fock.hpp"
#include "dirsim/parallel.hpp"

namespace dirsim::app {

namespace {

constexpr double k_steady_tol = 1e-12;
constexpr double k_exact_tol = 1e-12;
constexpr double k_rk4_tol = 1e-8;
constexpr double k_oracle_tol = 1e-6;
constexpr double k_trace_tol = 1e-8;
constexpr int k_grid_points = 50;

double relative_gap(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

CheckLine make_line(std::string name, double value, double tol)
{
    return {std::move(name), value, tol, value <= tol};
}

using SteadyFn = std::function<closed::SteadyResult<double>(const Params&)>;

CheckLine steady_grid(const std::string& name, const std::vector<Params>& grid,
                      const SteadyFn& closed_at, const CrossCheckOptions& options)
{
    std::vector<double> gaps(grid.size(), 0.0);
    parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
        const Params& p = grid[i];
        if (!strictly_stable(p))
            return;
        auto c = closed_at(p);
        c.n1 *= 1 + options.closed_form_perturbation;
        c.n2 *= 1 + options.closed_form_perturbation;
        const auto e = steady_populations(p);
        gaps[i] = std::max(relative_gap(c.n1, e.n11), relative_gap(c.n2, e.n22));
    });
    return make_line(name, *std::max_element(gaps.begin(), gaps.end()), k_steady_tol);
}

std::vector<Params> line_grid(double lo, double hi, const std::function<Params(double)>& at)
{
    std::vector<Params> grid;
    for (int k = 0; k < k_grid_points; ++k)
        grid.push_back(at(lo + (hi - lo) * k / (k_grid_points - 1)));
    return grid;
}

Params base()
{
    Params p;
    p.gamma = 1;
    p.omega = 0.1;
    return p;
}

CrossCheckReport steady_scope(const CrossCheckOptions& options)
{
    CrossCheckReport report;
    report.lines.push_back(steady_grid(
        "steady/coherent", line_grid(0, 3, [](double g) { Params p = base(); p.g = g; return p; }),
        [](const Params& p) { return closed::ss_coherent(p.gamma, p.g, p.omega); }, options));
    report.lines.push_back(steady_grid(
        "steady/dissipative",
        line_grid(0, 0.98, [](double x) { Params p = base(); p.big_gamma = x; return p; }),
        [](const Params& p) { return closed::ss_dissipative(p.gamma, p.big_gamma, p.omega); },
        options));
    report.lines.push_back(steady_grid(
        "steady/unidirectional",
        line_grid(0, 1,
                  [](double x) {
                      Params p = base();
                      p.big_gamma = x;
                      p.g = x / 2;
                      p.theta = std::numbers::pi / 2;
                      return p;
                  }),
        [](const Params& p) { return closed::ss_unidirectional(p.gamma, p.big_gamma, p.omega); },
        options));

    std::vector<Params> general;
    for (int k = 0; k < k_grid_points; ++k) {
        Params p = base();
        p.theta = 2 * std::numbers::pi * k / k_grid_points + 0.1;
        p.phi = 0.3;
        p.big_gamma = 0.9 * ((7 * k) % k_grid_points) / (k_grid_points - 1);
        p.g = 0.1 + 2.0 * ((13 * k) % k_grid_points) / (k_grid_points - 1);
        general.push_back(p);
    }
    report.lines.push_back(steady_grid("steady/general", general,
                                       [](const Params& p) { return closed::ss_general(p); },
                                       options));
    return report;
}

double sup_gap(const Trajectory<double>& traj, const std::function<closed::Populations<double>(double)>& f,
               double scale)
{
    double worst = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto c = f(traj.times[k]);
        worst = std::max({worst, std::abs(c.n11 * scale - traj.states[k].n(0, 0).real()),
                          std::abs(c.n22 * scale - traj.states[k].n(1, 1).real())});
    }
    return worst;
}

CrossCheckReport dynamics_scope(const CrossCheckOptions& options)
{
    const auto cases = dynamics_cases();
    const double scale = 1 + options.closed_form_perturbation;
    std::vector<std::array<CheckLine, 3>> lines(cases.size());
    parallel_for(cases.size(), options.jobs, [&](std::size_t i) {
        const auto& c = cases[i];
        const auto init = Init::single_excitation_first();
        const auto exact = evolve(c.params, init, options.t_end, options.dt, Method::ExactPropagator);
        const auto rk4 = evolve(c.params, init, options.t_end, options.dt, Method::RK4);
        auto regime = [&c](double t) { return closed_dynamics(c, t); };
        auto general = [&](double t) { return closed::dyn_closed_form(c.params, init, t); };
        lines[i][0] = make_line("dynamics/" + c.name + "/closed_vs_exact",
                                sup_gap(exact, regime, scale), k_exact_tol);
        lines[i][1] = make_line("dynamics/" + c.name + "/closed_vs_rk4",
                                sup_gap(rk4, regime, scale), k_rk4_tol);
        lines[i][2] = make_line("dynamics/" + c.name + "/eigenbasis_vs_exact",
                                sup_gap(exact, general, scale), k_exact_tol);
    });
    CrossCheckReport report;
    for (const auto& group : lines)
        report.lines.insert(report.lines.end(), group.begin(), group.end());
    return report;
}

CrossCheckReport oracle_scope(const CrossCheckOptions& options)
{
    const auto cases = dynamics_cases();
    struct Job
    {
        std::size_t case_index;
        int cutoff;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < cases.size(); ++i)
        for (int n : options.cutoffs)
            jobs.push_back({i, n});

    std::vector<std::array<CheckLine, 2>> lines(jobs.size());
    parallel_for(jobs.size(), options.jobs, [&](std::size_t j) {
        const auto& c = cases[jobs[j].case_index];
        const auto init = Init::single_excitation_first();
        const auto moments =
            evolve(c.params, init, options.t_end, options.dt, Method::ExactPropagator);
        const auto rho = fock::evolve_rho(c.params, init, jobs[j].cutoff, options.t_end, options.dt);
        double gap = 0;
        double drift = 0;
        for (std::size_t k = 0; k < rho.size(); ++k) {
            const auto& s = moments.states[k];
            gap = std::max({gap, std::abs(rho[k].n11 - s.n(0, 0).real()),
                            std::abs(rho[k].n22 - s.n(1, 1).real()), std::abs(rho[k].b1 - s.b(0)),
                            std::abs(rho[k].b2 - s.b(1)), std::abs(rho[k].n12 - s.n(0, 1))});
            drift = std::max(drift, std::abs(rho[k].trace - 1));
        }
        const std::string prefix = "oracle/" + c.name + "/N=" + std::to_string(jobs[j].cutoff);
        lines[j][0] = make_line(prefix + "/moments_vs_fock", gap, k_oracle_tol);
        lines[j][1] = make_line(prefix + "/trace_drift", drift, k_trace_tol);
    });
    CrossCheckReport report;
    for (const auto& group : lines)
        report.lines.insert(report.lines.end(), group.begin(), group.end());
    return report;
}

} // namespace

std::optional<Scope> scope_from_name(std::string_view name)
{
    if (name == "steady")
        return Scope::Steady;
    if (name == "dynamics")
        return Scope::Dynamics;
    if (name == "oracle")
        return Scope::Oracle;
    return std::nullopt;
}

bool CrossCheckReport::passed() const
{
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

std::string CrossCheckReport::text() const
{
    std::string out;
    char buf[96];
    for (const auto& line : lines) {
        std::snprintf(buf, sizeof buf, "  max=%.3e  tol=%.1e  ", line.value, line.tolerance);
        out += std::string(line.passed ? "PASS" : "FAIL") + buf + line.name + '\n';
    }
    out += passed() ? "crosscheck: PASS\n" : "crosscheck: FAIL (ToleranceExceeded)\n";
    return out;
}

CrossCheckReport cross_check(Scope scope, const CrossCheckOptions& options)
{
    switch (scope) {
    case Scope::Steady: return steady_scope(options);
    case Scope::Dynamics: return dynamics_scope(options);
    case Scope::Oracle: return oracle_scope(options);
    }
    return {};
}

} // namespace dirsim::app
