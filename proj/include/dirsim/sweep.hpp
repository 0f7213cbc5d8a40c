#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirsim/config.hpp"

namespace dirsim::app {

struct SweepRow
{
    double axis1{};
    std::optional<double> axis2;
    Params params;
    std::optional<double> n11;
    std::optional<double> n22;
    std::optional<double> delta;
    std::string regime;
    bool stable{false};
    /// Relative gap between the moment-engine solve and the closed form, when both exist.
    std::optional<double> closed_discrepancy;
    std::string error;
};

struct SweepTable
{
    std::vector<SweepRow> rows;

    double max_discrepancy() const;
};

/**
 * Steady state at every grid point, axis2 varying fastest. Rows come back
 * in grid order whatever `jobs` is; marginal or invalid points keep their
 * row with empty values and stable = false.
 */
SweepTable run_sweep(const SweepSpec& spec, int jobs);

/// Header `axis1,axis2,n11,n22,delta,regime,stable`.
std::string sweep_csv(const SweepTable& table);

std::string sweep_json(const SweepTable& table);

} // namespace dirsim::app
