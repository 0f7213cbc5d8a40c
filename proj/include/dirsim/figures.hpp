#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirsim/closed_forms.hpp"
#include "dirsim/config.hpp"

namespace dirsim::app {

enum class Figure {
    Fig2SteadyCoherent,
    Fig2DynCoherent,
    Fig2SteadyDissipative,
    Fig2DynDissipative,
    Fig2SteadyUnidirectional,
    Fig2DynUnidirectional,
    Fig3Heatmap,
    Fig4Dynamics,
};

std::string_view to_string(Figure f);
std::optional<Figure> figure_from_name(std::string_view name);
const std::vector<Figure>& all_figures();

/// Which analytic population formula accompanies a dynamics run.
enum class ClosedKind { Coherent, Dissipative, Unidirectional, General };

struct DynamicsCase
{
    std::string name;
    Params params;
    ClosedKind closed;
};

/// Parameter sets of the figure dynamics: Ω = γ/10 with g = 2γ; Γ = 0.8γ;
/// one-way at Γ = 0.8γ; and g = γ/2, Γ = γ at θ - φ = 0, π/2, 3π/2.
std::vector<DynamicsCase> dynamics_cases();

closed::Populations<double> closed_dynamics(const DynamicsCase& c, double t);

struct FigureOptions
{
    int jobs{1};
    Method method{Method::RK4};
    double dt{1e-3};
    double t_end{20};
};

/// One output file pair: `<name>.csv` plus a `<name>.report.json` sidecar.
struct Dataset
{
    std::string name;
    std::string csv;
    std::string report;
};

std::vector<Dataset> figure_job(Figure figure, const FigureOptions& options);

/// Header `t,n11,n22,delta,n11_closed,n22_closed`; missing closed values stay empty.
std::string dynamics_csv(const Trajectory<double>& traj,
                         const std::vector<std::optional<closed::Populations<double>>>& closed);

/// Moment-engine run plus closed-form columns for an arbitrary parameter set.
Dataset dynamics_dataset(const std::string& name, const Params& params, const Init& init,
                         const FigureOptions& options);

} // namespace dirsim::app
