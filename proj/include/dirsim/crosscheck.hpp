#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirsim::app {

enum class Scope { Steady, Dynamics, Oracle };

std::optional<Scope> scope_from_name(std::string_view name);

struct CheckLine
{
    std::string name;
    double value{};
    double tolerance{};
    bool passed{};
};

struct CrossCheckReport
{
    std::vector<CheckLine> lines;

    bool passed() const;
    std::string text() const;
};

struct CrossCheckOptions
{
    int jobs{1};
    /// Scales every closed-form value by (1 + x); a nonzero x must trip the checks.
    double closed_form_perturbation{0};
    std::vector<int> cutoffs{6, 8};
    double t_end{20};
    double dt{1e-3};
};

/**
 * steady:   closed forms vs the moment-engine solve on 50-point grids per regime (rel 1e-12)
 * dynamics: closed forms vs exact propagation (1e-12) and RK4 (1e-8) on the figure runs
 * oracle:   moment engine vs Fock-space density matrix (1e-6), plus trace drift (1e-8)
 */
CrossCheckReport cross_check(Scope scope, const CrossCheckOptions& options);

} // namespace dirsim::app
