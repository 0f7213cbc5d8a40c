#include "dirsim/figures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "dirsim/csv.hpp"
#include "dirsim/parallel.hpp"

namespace dirsim::app {

namespace {

constexpr double k_pi = std::numbers::pi;

struct FigureName
{
    Figure figure;
    std::string_view name;
};

constexpr std::array k_names = {
    FigureName{Figure::Fig2SteadyCoherent, "fig2_steady_coherent"},
    FigureName{Figure::Fig2DynCoherent, "fig2_dyn_coherent"},
    FigureName{Figure::Fig2SteadyDissipative, "fig2_steady_dissipative"},
    FigureName{Figure::Fig2DynDissipative, "fig2_dyn_dissipative"},
    FigureName{Figure::Fig2SteadyUnidirectional, "fig2_steady_unidirectional"},
    FigureName{Figure::Fig2DynUnidirectional, "fig2_dyn_unidirectional"},
    FigureName{Figure::Fig3Heatmap, "fig3_heatmap"},
    FigureName{Figure::Fig4Dynamics, "fig4_dynamics"},
};

Params base_params()
{
    Params p;
    p.gamma = 1;
    p.omega = 0.1;
    return p;
}

std::string_view method_name(Method m)
{
    return m == Method::RK4 ? "rk4" : "exact";
}

std::string_view init_name(const Init& init)
{
    switch (init.kind) {
    case Init::Kind::Vacuum: return "vacuum";
    case Init::Kind::SingleExcitationFirst: return "single_excitation_first";
    case Init::Kind::CoherentAmplitudes: return "coherent";
    }
    return "unknown";
}

std::string_view closed_name(ClosedKind k)
{
    switch (k) {
    case ClosedKind::Coherent: return "coherent";
    case ClosedKind::Dissipative: return "dissipative";
    case ClosedKind::Unidirectional: return "unidirectional";
    case ClosedKind::General: return "general";
    }
    return "unknown";
}

using ClosedFn = std::function<std::optional<closed::Populations<double>>(double)>;

Dataset build_dynamics(const std::string& name, const Params& params, const Init& init,
                       const FigureOptions& options, const ClosedFn& closed_at,
                       std::string_view closed_label)
{
    const auto traj = evolve(params, init, options.t_end, options.dt, options.method);
    std::vector<std::optional<closed::Populations<double>>> closed;
    closed.reserve(traj.size());
    double gap11 = 0;
    double gap22 = 0;
    bool any_closed = false;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        closed.push_back(closed_at(traj.times[k]));
        if (closed.back()) {
            any_closed = true;
            gap11 = std::max(gap11, std::abs(traj.states[k].n(0, 0).real() - closed.back()->n11));
            gap22 = std::max(gap22, std::abs(traj.states[k].n(1, 1).real() - closed.back()->n22));
        }
    }

    nlohmann::json report = {{"dataset", name},
                             {"params", params_json(params)},
                             {"init", init_name(init)},
                             {"method", method_name(options.method)},
                             {"dt", options.dt},
                             {"t_end", options.t_end},
                             {"samples", traj.size()},
                             {"closed_form", closed_label},
                             {"warnings", traj.warnings}};
    if (any_closed)
        report["max_abs_discrepancy"] = {{"n11", gap11}, {"n22", gap22}};
    else
        report["max_abs_discrepancy"] = nullptr;
    return {name, dynamics_csv(traj, closed), report.dump(2) + "\n"};
}

double relative_gap(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

/// Scaled closed-form steady curve along one axis, with the moment-engine gap in the report.
Dataset steady_dataset(const std::string& name, const SweepAxis& axis,
                       const std::function<Params(double)>& params_at,
                       const std::function<closed::SteadyResult<double>(const Params&)>& closed_at,
                       int jobs)
{
    struct Row
    {
        double x{};
        closed::SteadyResult<double> closed;
        std::string regime;
        bool stable{};
        double gap{};
    };
    std::vector<Row> rows(static_cast<std::size_t>(axis.count));
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        Row& row = rows[i];
        row.x = axis.value(static_cast<int>(i));
        const Params p = params_at(row.x);
        const double scale = std::pow(p.gamma / p.omega, 2);
        row.closed = closed_at(p);
        row.closed.n1 *= scale;
        row.closed.n2 *= scale;
        row.regime = std::string(to_string(classify_regime(p)));
        row.stable = strictly_stable(p);
        if (row.stable) {
            const auto engine = steady_populations(p);
            row.gap = std::max(relative_gap(engine.n11 * scale, row.closed.n1),
                               relative_gap(engine.n22 * scale, row.closed.n2));
        }
    });

    std::string csv = "axis1,axis2,n11,n22,delta,regime,stable\n";
    double worst = 0;
    for (const auto& row : rows) {
        csv += format_real(row.x) + ",," + format_real(row.closed.n1) + ',' +
               format_real(row.closed.n2) + ',' + format_real(row.closed.delta) + ',' + row.regime +
               ',' + (row.stable ? "1" : "0") + '\n';
        worst = std::max(worst, row.gap);
    }
    const Params first = params_at(axis.min);
    nlohmann::json report = {
        {"dataset", name},
        {"axis", {{"name", axis.name}, {"min", axis.min}, {"max", axis.max}, {"count", axis.count}}},
        {"params_at_axis_min", params_json(first)},
        {"populations_scaled_by", "(gamma/Omega)^2"},
        {"max_rel_discrepancy_vs_moment_engine", worst}};
    return {name, csv, report.dump(2) + "\n"};
}

Dataset fig3_dataset(int jobs)
{
    const SweepAxis phase{"theta_minus_phi", 0.0, 2 * k_pi, 181};
    const SweepAxis loss{"Gamma", 0.0, 1.0, 101};
    Params fixed = base_params();
    fixed.g = 0.5;

    struct Cell
    {
        double x{};
        double big_gamma{};
        double delta{};
        std::optional<double> gap;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(phase.count) * loss.count);
    parallel_for(static_cast<std::size_t>(phase.count), jobs, [&](std::size_t i) {
        for (int j = 0; j < loss.count; ++j) {
            Cell& c = cells[i * loss.count + j];
            c.x = phase.value(static_cast<int>(i));
            c.big_gamma = loss.value(j);
            Params p = fixed;
            p.theta = c.x;
            p.big_gamma = c.big_gamma;
            c.delta = closed::imbalance_general(p.gamma, p.g, p.big_gamma, c.x);
            if (strictly_stable(p))
                c.gap = std::abs(*steady_populations(p).delta - c.delta);
        }
    });

    std::string csv = "theta_minus_phi,Gamma,delta\n";
    double worst = 0;
    double lo = 1;
    double hi = -1;
    int marginal = 0;
    for (const auto& c : cells) {
        csv += format_real(c.x) + ',' + format_real(c.big_gamma) + ',' + format_real(c.delta) + '\n';
        lo = std::min(lo, c.delta);
        hi = std::max(hi, c.delta);
        if (c.gap)
            worst = std::max(worst, *c.gap);
        else
            ++marginal;
    }
    nlohmann::json report = {
        {"dataset", "fig3_heatmap"},
        {"params", params_json(fixed)},
        {"axes",
         {{{"name", phase.name}, {"min", phase.min}, {"max", phase.max}, {"count", phase.count}},
          {{"name", loss.name}, {"min", loss.min}, {"max", loss.max}, {"count", loss.count}}}},
        {"delta_min", lo},
        {"delta_max", hi},
        {"max_abs_discrepancy_vs_moment_engine", worst},
        {"marginally_stable_points_skipped", marginal}};
    return {"fig3_heatmap", csv, report.dump(2) + "\n"};
}

Dataset case_dataset(const DynamicsCase& c, const FigureOptions& options)
{
    return build_dynamics(
        c.name, c.params, Init::single_excitation_first(), options,
        [&c](double t) { return std::optional(closed_dynamics(c, t)); }, closed_name(c.closed));
}

const DynamicsCase& find_case(std::string_view name)
{
    static const std::vector<DynamicsCase> cases = dynamics_cases();
    for (const auto& c : cases)
        if (c.name == name)
            return c;
    throw Error(Errc::InvalidArgument, "no dynamics case " + std::string(name));
}

} // namespace

std::string_view to_string(Figure f)
{
    for (const auto& entry : k_names)
        if (entry.figure == f)
            return entry.name;
    return "unknown";
}

std::optional<Figure> figure_from_name(std::string_view name)
{
    for (const auto& entry : k_names)
        if (entry.name == name)
            return entry.figure;
    return std::nullopt;
}

const std::vector<Figure>& all_figures()
{
    static const std::vector<Figure> figures = [] {
        std::vector<Figure> out;
        for (const auto& entry : k_names)
            out.push_back(entry.figure);
        return out;
    }();
    return figures;
}

std::vector<DynamicsCase> dynamics_cases()
{
    std::vector<DynamicsCase> cases;
    Params p = base_params();
    p.g = 2;
    cases.push_back({"fig2_dyn_coherent", p, ClosedKind::Coherent});

    p = base_params();
    p.big_gamma = 0.8;
    cases.push_back({"fig2_dyn_dissipative", p, ClosedKind::Dissipative});

    p = base_params();
    p.big_gamma = 0.8;
    p.g = 0.4;
    p.theta = k_pi / 2;
    cases.push_back({"fig2_dyn_unidirectional", p, ClosedKind::Unidirectional});

    const std::array<std::pair<const char*, double>, 3> phases = {
        std::pair{"fig4_dynamics_a", 0.0}, std::pair{"fig4_dynamics_b", k_pi / 2},
        std::pair{"fig4_dynamics_c", 3 * k_pi / 2}};
    for (const auto& [name, x] : phases) {
        p = base_params();
        p.g = 0.5;
        p.big_gamma = 1;
        p.theta = x;
        cases.push_back({name, p, ClosedKind::General});
    }
    return cases;
}

closed::Populations<double> closed_dynamics(const DynamicsCase& c, double t)
{
    const Params& p = c.params;
    switch (c.closed) {
    case ClosedKind::Coherent: return closed::dyn_coherent(p.gamma, p.g, p.omega, t);
    case ClosedKind::Dissipative: return closed::dyn_dissipative(p.gamma, p.big_gamma, p.omega, t);
    case ClosedKind::Unidirectional:
        return closed::dyn_unidirectional(p.gamma, p.big_gamma, p.omega, t);
    case ClosedKind::General:
        return closed::dyn_closed_form(p, Init::single_excitation_first(), t);
    }
    throw Error(Errc::InvalidArgument, "unknown closed-form kind");
}

std::string dynamics_csv(const Trajectory<double>& traj,
                         const std::vector<std::optional<closed::Populations<double>>>& closed)
{
    std::string out = "t,n11,n22,delta,n11_closed,n22_closed\n";
    const auto delta = traj.imbalance();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::optional<double> c11;
        std::optional<double> c22;
        if (k < closed.size() && closed[k]) {
            c11 = closed[k]->n11;
            c22 = closed[k]->n22;
        }
        out += format_real(traj.times[k]) + ',' + format_real(traj.states[k].n(0, 0).real()) + ',' +
               format_real(traj.states[k].n(1, 1).real()) + ',' + format_real(delta[k]) + ',' +
               format_real(c11) + ',' + format_real(c22) + '\n';
    }
    return out;
}

Dataset dynamics_dataset(const std::string& name, const Params& params, const Init& init,
                         const FigureOptions& options)
{
    const bool resonant = params.omega_delta == 0;
    return build_dynamics(
        name, params, init, options,
        [&](double t) -> std::optional<closed::Populations<double>> {
            if (!resonant)
                return std::nullopt;
            return closed::dyn_closed_form(params, init, t);
        },
        resonant ? "general" : "none");
}

std::vector<Dataset> figure_job(Figure figure, const FigureOptions& options)
{
    switch (figure) {
    case Figure::Fig2SteadyCoherent:
        return {steady_dataset(
            "fig2_steady_coherent", {"g", 0.0, 3.0, 61},
            [](double g) {
                Params p = base_params();
                p.g = g;
                return p;
            },
            [](const Params& p) { return closed::ss_coherent(p.gamma, p.g, p.omega); },
            options.jobs)};
    case Figure::Fig2SteadyDissipative:
        return {steady_dataset(
            "fig2_steady_dissipative", {"Gamma", 0.0, 0.99, 100},
            [](double big_gamma) {
                Params p = base_params();
                p.big_gamma = big_gamma;
                return p;
            },
            [](const Params& p) { return closed::ss_dissipative(p.gamma, p.big_gamma, p.omega); },
            options.jobs)};
    case Figure::Fig2SteadyUnidirectional:
        return {steady_dataset(
            "fig2_steady_unidirectional", {"Gamma", 0.0, 1.0, 101},
            [](double big_gamma) {
                Params p = base_params();
                p.big_gamma = big_gamma;
                p.g = big_gamma / 2;
                p.theta = k_pi / 2;
                return p;
            },
            [](const Params& p) {
                return closed::ss_unidirectional(p.gamma, p.big_gamma, p.omega);
            },
            options.jobs)};
    case Figure::Fig2DynCoherent:
    case Figure::Fig2DynDissipative:
    case Figure::Fig2DynUnidirectional:
        return {case_dataset(find_case(to_string(figure)), options)};
    case Figure::Fig3Heatmap:
        return {fig3_dataset(options.jobs)};
    case Figure::Fig4Dynamics: {
        const std::array<std::string_view, 3> panels = {"fig4_dynamics_a", "fig4_dynamics_b",
                                                        "fig4_dynamics_c"};
        std::vector<Dataset> out(panels.size());
        FigureOptions inner = options;
        inner.jobs = 1;
        parallel_for(panels.size(), options.jobs,
                     [&](std::size_t i) { out[i] = case_dataset(find_case(panels[i]), inner); });
        return out;
    }
    }
    throw Error(Errc::InvalidArgument, "unknown figure");
}

} // namespace dirsim::app
