#include "dirsim/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "dirsim/closed_forms.hpp"
#include "dirsim/csv.hpp"
#include "dirsim/parallel.hpp"

namespace dirsim::app {

namespace {

double relative_gap(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

SweepRow evaluate_point(const Params& p, double a1, std::optional<double> a2)
{
    SweepRow row;
    row.axis1 = a1;
    row.axis2 = a2;
    row.params = p;
    if (auto err = validate(p)) {
        row.regime = "Invalid";
        row.error = std::string(to_string(*err));
        return row;
    }
    row.regime = std::string(to_string(classify_regime(p)));
    row.stable = strictly_stable(p);
    if (!row.stable) {
        row.error = std::string(to_string(Errc::MarginallyStable));
        return row;
    }
    const auto engine = steady_populations(p);
    row.n11 = engine.n11;
    row.n22 = engine.n22;
    row.delta = engine.delta;
    if (p.omega_delta == 0) {
        const auto closed = closed::ss_general(p);
        row.closed_discrepancy =
            std::max(relative_gap(engine.n11, closed.n1), relative_gap(engine.n22, closed.n2));
    }
    return row;
}

} // namespace

double SweepTable::max_discrepancy() const
{
    double worst = 0;
    for (const auto& row : rows)
        if (row.closed_discrepancy)
            worst = std::max(worst, *row.closed_discrepancy);
    return worst;
}

SweepTable run_sweep(const SweepSpec& spec, int jobs)
{
    const int n1 = spec.axis1.count;
    const int n2 = spec.axis2 ? spec.axis2->count : 1;
    SweepTable table;
    table.rows.resize(static_cast<std::size_t>(n1) * n2);
    parallel_for(table.rows.size(), jobs, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / n2;
        const int j = static_cast<int>(idx) % n2;
        Params p = spec.fixed;
        const double a1 = spec.axis1.value(i);
        apply_parameter(p, spec.axis1.name, a1);
        std::optional<double> a2;
        if (spec.axis2) {
            a2 = spec.axis2->value(j);
            apply_parameter(p, spec.axis2->name, *a2);
        }
        table.rows[idx] = evaluate_point(p, a1, a2);
    });
    return table;
}

std::string sweep_csv(const SweepTable& table)
{
    std::string out = "axis1,axis2,n11,n22,delta,regime,stable\n";
    for (const auto& row : table.rows) {
        out += format_real(row.axis1) + ',' + format_real(row.axis2) + ',' +
               format_real(row.n11) + ',' + format_real(row.n22) + ',' +
               format_real(row.delta) + ',' + row.regime + ',' + (row.stable ? "1" : "0") + '\n';
    }
    return out;
}

std::string sweep_json(const SweepTable& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = {{"axis1", row.axis1},
                            {"params", params_json(row.params)},
                            {"regime", row.regime},
                            {"stable", row.stable}};
        auto put = [&r](const char* key, const std::optional<double>& v) {
            r[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
        };
        put("axis2", row.axis2);
        put("n11", row.n11);
        put("n22", row.n22);
        put("delta", row.delta);
        put("closed_form_rel_discrepancy", row.closed_discrepancy);
        if (!row.error.empty())
            r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    nlohmann::json doc = {{"rows", rows}, {"max_closed_form_rel_discrepancy", table.max_discrepancy()}};
    return doc.dump(2) + "\n";
}

} // namespace dirsim::app
