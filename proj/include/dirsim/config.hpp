#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dirsim/model.hpp"
#include "dirsim/moments.hpp"

namespace dirsim::app {

using Params = SystemParams<double>;
using Init = InitialCondition<double>;

enum class Format { Csv, Json };

struct SweepAxis
{
    std::string name;
    double min{};
    double max{};
    int count{};

    double value(int index) const { return min + (max - min) * index / (count - 1); }
};

/// One- or two-dimensional grid over named parameters; unswept values come from `fixed`.
struct SweepSpec
{
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    Params fixed;
};

struct RunConfig
{
    Params params;
    Init init = Init::single_excitation_first();
    double t_end{20};
    double dt{1e-3};
    Method method{Method::RK4};
    int cutoff{6};
    std::string out;
    Format format{Format::Csv};
    std::optional<SweepSpec> sweep;
};

/// Names accepted as sweep axes.
bool is_sweepable(std::string_view name);

/// Sets a sweepable parameter; theta_minus_phi moves theta and keeps phi.
void apply_parameter(Params& p, std::string_view name, double value);

/**
 * Parses `key = value` lines ('#' starts a comment) or a JSON object with
 * the same keys. Frequencies share one unit with gamma (default 1); phases
 * accept plain numbers or forms like `pi/2`, `3*pi/2`.
 *
 * Throws ParseError, UnknownKey or ValidationError.
 */
RunConfig parse_config(std::string_view text);

/// Checks every invariant of a config; throws ValidationError.
void validate_config(const RunConfig& config);

/// Parses a real or a simple multiple of pi.
double parse_real(std::string_view text);

} // namespace dirsim::app
