// dirsim: steady states, dynamics, sweeps and figure datasets for a pair of
// driven-dissipative resonators with coherent and dissipative couplings.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirsim/closed_forms.hpp"
#include "dirsim/config.hpp"
#include "dirsim/crosscheck.hpp"
#include "dirsim/csv.hpp"
#include "dirsim/figures.hpp"
#include "dirsim/sweep.hpp"

namespace {

using namespace dirsim;
using namespace dirsim::app;

constexpr int k_exit_validation = 2;
constexpr int k_exit_tolerance = 3;
constexpr int k_exit_parse = 4;

struct Flags
{
    std::string config_path;
    std::string out;
    std::string format;
    std::string method;
    double dt{0};
    double t_end{0};
    int cutoff{0};
    int jobs{1};
    double perturb{0};
    std::string figure;
    std::string scope;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::ParseError, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
    out << content;
}

/// Config file (if any) with command-line flags layered on top.
RunConfig load(const Flags& f)
{
    RunConfig config = f.config_path.empty() ? RunConfig{} : parse_config(read_file(f.config_path));
    if (!f.out.empty())
        config.out = f.out;
    if (!f.format.empty())
        config.format = f.format == "json" ? Format::Json : Format::Csv;
    if (!f.method.empty())
        config.method = f.method == "exact" ? Method::ExactPropagator : Method::RK4;
    if (f.dt > 0)
        config.dt = f.dt;
    if (f.t_end > 0)
        config.t_end = f.t_end;
    if (f.cutoff > 0)
        config.cutoff = f.cutoff;
    validate_config(config);
    return config;
}

int cmd_validate(const Flags& f)
{
    load(f);
    std::cout << "ok\n";
    return 0;
}

int cmd_steady(const Flags& f)
{
    const RunConfig config = load(f);
    const Params& p = config.params;
    const auto modes = eigenmodes(dynamical_matrix(p));
    const bool stable = strictly_stable(p);
    std::optional<SteadyPopulations<double>> ss;
    if (stable)
        ss = steady_populations(p);

    if (config.format == Format::Csv) {
        std::string csv = "axis1,axis2,n11,n22,delta,regime,stable\n";
        csv += ",," + format_real(ss ? std::optional(ss->n11) : std::nullopt) + ',' +
               format_real(ss ? std::optional(ss->n22) : std::nullopt) + ',' +
               format_real(ss ? ss->delta : std::nullopt) + ',' +
               std::string(to_string(classify_regime(p))) + ',' + (stable ? "1" : "0") + '\n';
        write_output(config.out, csv);
    } else {
        nlohmann::json doc = {{"params", params_json(p)},
                              {"regime", to_string(classify_regime(p))},
                              {"stable", stable},
                              {"eigenvalues",
                               {{modes.lambda_plus.real(), modes.lambda_plus.imag()},
                                {modes.lambda_minus.real(), modes.lambda_minus.imag()}}},
                              {"exceptional_point", modes.degenerate}};
        if (ss) {
            doc["n11"] = ss->n11;
            doc["n22"] = ss->n22;
            doc["delta"] = ss->delta ? nlohmann::json(*ss->delta) : nlohmann::json(nullptr);
            if (p.omega_delta == 0) {
                const auto c = closed::ss_general(p);
                doc["closed_form"] = {{"n11", c.n1}, {"n22", c.n2}};
            }
        }
        write_output(config.out, doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_dynamics(const Flags& f)
{
    const RunConfig config = load(f);
    FigureOptions options;
    options.method = config.method;
    options.dt = config.dt;
    options.t_end = config.t_end;
    const Dataset ds = dynamics_dataset("dynamics", config.params, config.init, options);
    write_output(config.out, ds.csv);
    if (!config.out.empty() && config.out != "-")
        write_output(config.out + ".report.json", ds.report);
    return 0;
}

int cmd_sweep(const Flags& f)
{
    const RunConfig config = load(f);
    if (!config.sweep)
        throw Error(Errc::ValidationError, "sweep needs axis1 in the config");
    const SweepTable table = run_sweep(*config.sweep, f.jobs);
    write_output(config.out, config.format == Format::Csv ? sweep_csv(table) : sweep_json(table));
    std::cerr << "max relative gap vs closed form: " << table.max_discrepancy() << '\n';
    return 0;
}

int cmd_figure(const Flags& f)
{
    std::vector<Figure> figures;
    if (f.figure == "all") {
        figures = all_figures();
    } else if (auto fig = figure_from_name(f.figure)) {
        figures.push_back(*fig);
    } else {
        throw Error(Errc::ValidationError, "unknown figure '" + f.figure + "'");
    }
    FigureOptions options;
    options.jobs = f.jobs;
    options.method = f.method == "exact" ? Method::ExactPropagator : Method::RK4;
    if (f.dt > 0)
        options.dt = f.dt;
    if (f.t_end > 0)
        options.t_end = f.t_end;
    if (options.t_end / options.dt > 1e7)
        throw Error(Errc::ValidationError, "t_end / dt exceeds 1e7 steps");

    const std::filesystem::path dir = f.out.empty() ? "." : f.out;
    std::filesystem::create_directories(dir);
    for (Figure fig : figures)
        for (const auto& ds : figure_job(fig, options)) {
            write_output((dir / (ds.name + ".csv")).string(), ds.csv);
            write_output((dir / (ds.name + ".report.json")).string(), ds.report);
            std::cout << "wrote " << (dir / (ds.name + ".csv")).string() << '\n';
        }
    return 0;
}

int cmd_crosscheck(const Flags& f)
{
    const auto scope = scope_from_name(f.scope);
    if (!scope)
        throw Error(Errc::ValidationError, "scope must be steady, dynamics or oracle");
    CrossCheckOptions options;
    options.jobs = f.jobs;
    options.closed_form_perturbation = f.perturb;
    if (f.cutoff > 0)
        options.cutoffs = {f.cutoff, f.cutoff + 2};
    if (f.dt > 0)
        options.dt = f.dt;
    if (f.t_end > 0)
        options.t_end = f.t_end;
    const auto report = cross_check(*scope, options);
    std::cout << report.text();
    return report.passed() ? 0 : k_exit_tolerance;
}

int exit_code(Errc code)
{
    switch (code) {
    case Errc::ParseError:
    case Errc::UnknownKey:
        return k_exit_parse;
    case Errc::ToleranceExceeded:
        return k_exit_tolerance;
    case Errc::NonPositiveLoss:
    case Errc::GammaExceedsLoss:
    case Errc::NegativeMagnitude:
    case Errc::NonFinite:
    case Errc::ValidationError:
        return k_exit_validation;
    default:
        return 1;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled driven-dissipative resonator simulator"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config_path, "key = value or JSON config file");
        sub->add_option("--out", f.out, "output path (stdout when omitted)");
        sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_time = [&f](CLI::App* sub) {
        sub->add_option("--dt", f.dt, "time step in units of 1/gamma")->check(CLI::PositiveNumber);
        sub->add_option("--t-end", f.t_end, "final time in units of 1/gamma")->check(CLI::PositiveNumber);
        sub->add_option("--method", f.method, "rk4 or exact")->check(CLI::IsMember({"rk4", "exact"}));
    };
    auto add_jobs = [&f](CLI::App* sub) {
        sub->add_option("--jobs", f.jobs, "worker threads for grid evaluation")->check(CLI::PositiveNumber);
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    add_common(validate_cmd);
    auto* steady_cmd = app.add_subcommand("steady", "steady-state populations");
    add_common(steady_cmd);
    auto* dynamics_cmd = app.add_subcommand("dynamics", "time-dependent populations");
    add_common(dynamics_cmd);
    add_time(dynamics_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "steady states over a parameter grid");
    add_common(sweep_cmd);
    add_jobs(sweep_cmd);
    auto* figure_cmd = app.add_subcommand("figure", "emit a figure dataset");
    figure_cmd->add_option("name", f.figure, "figure job name, or 'all'")->required();
    figure_cmd->add_option("--out", f.out, "output directory");
    add_time(figure_cmd);
    add_jobs(figure_cmd);
    auto* cross_cmd = app.add_subcommand("crosscheck", "compare independent solution routes");
    cross_cmd->add_option("scope", f.scope, "steady, dynamics or oracle")->required();
    cross_cmd->add_option("--cutoff", f.cutoff, "Fock cutoff N (compares N and N+2)")
        ->check(CLI::PositiveNumber);
    cross_cmd->add_option("--dt", f.dt, "time step")->check(CLI::PositiveNumber);
    cross_cmd->add_option("--t-end", f.t_end, "final time")->check(CLI::PositiveNumber);
    cross_cmd->add_option("--perturb-closed-form", f.perturb,
                          "scale closed forms by (1 + x) to exercise failure detection");
    add_jobs(cross_cmd);
    for (auto* sub : {steady_cmd, dynamics_cmd, validate_cmd})
        sub->add_option("--cutoff", f.cutoff, "Fock cutoff N")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : k_exit_parse;
    }

    try {
        if (*validate_cmd)
            return cmd_validate(f);
        if (*steady_cmd)
            return cmd_steady(f);
        if (*dynamics_cmd)
            return cmd_dynamics(f);
        if (*sweep_cmd)
            return cmd_sweep(f);
        if (*figure_cmd)
            return cmd_figure(f);
        if (*cross_cmd)
            return cmd_crosscheck(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
