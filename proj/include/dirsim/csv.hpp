#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dirsim/config.hpp"

namespace dirsim::app {

/// Fixed 17-significant-digit scientific notation, e.g. 1.0000000000000000e-02.
std::string format_real(double value);

/// Empty field for a missing value.
std::string format_real(const std::optional<double>& value);

nlohmann::json params_json(const Params& p);

} // namespace dirsim::app
