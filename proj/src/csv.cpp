#include "dirsim/csv.hpp"

#include <cstdio>

namespace dirsim::app {

std::string format_real(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

std::string format_real(const std::optional<double>& value)
{
    return value ? format_real(*value) : std::string();
}

nlohmann::json params_json(const Params& p)
{
    return {{"gamma", p.gamma}, {"Gamma", p.big_gamma}, {"g", p.g},
            {"theta", p.theta}, {"phi", p.phi},         {"Omega", p.omega},
            {"omega_delta", p.omega_delta}};
}

} // namespace dirsim::app
