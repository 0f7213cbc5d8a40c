#include "dirsim/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace dirsim::app {

namespace {

constexpr std::array k_sweepable = {"g", "Gamma", "theta", "phi", "theta_minus_phi", "Omega",
                                    "omega_delta"};

constexpr std::array k_known_keys = {"gamma", "Gamma", "g", "theta", "phi", "theta_minus_phi",
                                     "Omega", "omega_delta", "init", "alpha1", "alpha2", "t_end",
                                     "dt", "method", "cutoff", "out", "format", "axis1", "axis2"};

[[noreturn]] void parse_error(const std::string& what)
{
    throw Error(Errc::ParseError, what);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        parse_error("not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

std::complex<double> parse_complex(std::string_view s)
{
    const auto parts = split(s, ',');
    if (parts.size() == 1)
        return {parse_real(parts[0]), 0.0};
    if (parts.size() == 2)
        return {parse_real(parts[0]), parse_real(parts[1])};
    parse_error("expected 're' or 're,im': '" + std::string(s) + "'");
}

int parse_int(std::string_view s)
{
    const double v = parse_number(s);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        parse_error("not an integer: '" + std::string(s) + "'");
    return static_cast<int>(v);
}

SweepAxis parse_axis(std::string_view s)
{
    auto parts = split(s, ',');
    if (parts.size() != 4) {
        // Also accept whitespace separation.
        std::istringstream in{std::string(s)};
        std::vector<std::string> words;
        for (std::string w; in >> w;)
            words.push_back(w);
        if (words.size() != 4)
            parse_error("axis needs 'name,min,max,count': '" + std::string(s) + "'");
        return {words[0], parse_real(words[1]), parse_real(words[2]), parse_int(words[3])};
    }
    return {std::string(parts[0]), parse_real(parts[1]), parse_real(parts[2]), parse_int(parts[3])};
}

Method parse_method(std::string_view s)
{
    if (s == "rk4")
        return Method::RK4;
    if (s == "exact")
        return Method::ExactPropagator;
    parse_error("method must be rk4 or exact: '" + std::string(s) + "'");
}

Format parse_format(std::string_view s)
{
    if (s == "csv")
        return Format::Csv;
    if (s == "json")
        return Format::Json;
    parse_error("format must be csv or json: '" + std::string(s) + "'");
}

/// Flattens either input syntax into key -> raw text.
std::map<std::string, std::string> collect_entries(std::string_view text)
{
    std::map<std::string, std::string> entries;
    auto insert = [&](const std::string& key, std::string value) {
        if (!entries.emplace(key, std::move(value)).second)
            parse_error("duplicate key '" + key + "'");
    };

    if (trim(text).starts_with('{')) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            parse_error(e.what());
        }
        if (!doc.is_object())
            parse_error("JSON config must be an object");
        for (const auto& [key, value] : doc.items()) {
            if (value.is_string()) {
                insert(key, value.get<std::string>());
            } else if (value.is_number()) {
                insert(key, value.dump());
            } else if (value.is_object() && (key == "axis1" || key == "axis2")) {
                try {
                    insert(key, value.at("name").get<std::string>() + "," +
                                    value.at("min").dump() + "," + value.at("max").dump() + "," +
                                    value.at("count").dump());
                } catch (const nlohmann::json::exception& e) {
                    parse_error(std::string("bad axis object: ") + e.what());
                }
            } else if (value.is_array() && value.size() == 2 && value[0].is_number() &&
                       value[1].is_number()) {
                insert(key, value[0].dump() + "," + value[1].dump());
            } else {
                parse_error("unsupported value for '" + key + "'");
            }
        }
        return entries;
    }

    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            parse_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            parse_error("line " + std::to_string(line_no) + ": empty key or value");
        insert(key, value);
    }
    return entries;
}

} // namespace

double parse_real(std::string_view text)
{
    std::string s;
    for (char c : trim(text))
        if (c != ' ')
            s.push_back(c);
    const auto pos = s.find("pi");
    if (pos == std::string::npos)
        return parse_number(s);

    std::string_view prefix(s.data(), pos);
    std::string_view suffix(s.data() + pos + 2, s.size() - pos - 2);
    double factor = 1;
    if (prefix == "-") {
        factor = -1;
    } else if (!prefix.empty()) {
        if (prefix.back() != '*')
            parse_error("malformed multiple of pi: '" + s + "'");
        prefix.remove_suffix(1);
        factor = parse_number(prefix);
    }
    double divisor = 1;
    if (!suffix.empty()) {
        if (suffix.front() != '/')
            parse_error("malformed multiple of pi: '" + s + "'");
        suffix.remove_prefix(1);
        divisor = parse_number(suffix);
    }
    return factor * std::numbers::pi / divisor;
}

bool is_sweepable(std::string_view name)
{
    for (const char* allowed : k_sweepable)
        if (name == allowed)
            return true;
    return false;
}

void apply_parameter(Params& p, std::string_view name, double value)
{
    if (name == "g")
        p.g = value;
    else if (name == "Gamma")
        p.big_gamma = value;
    else if (name == "theta")
        p.theta = value;
    else if (name == "phi")
        p.phi = value;
    else if (name == "theta_minus_phi")
        p.theta = p.phi + value;
    else if (name == "Omega")
        p.omega = value;
    else if (name == "omega_delta")
        p.omega_delta = value;
    else
        throw Error(Errc::ValidationError, "parameter '" + std::string(name) + "' cannot be swept");
}

void validate_config(const RunConfig& config)
{
    auto fail = [](const std::string& what) { throw Error(Errc::ValidationError, what); };
    if (auto err = validate(config.params))
        fail(std::string(to_string(*err)));
    if (!(config.t_end > 0) || !(config.dt > 0))
        fail("t_end and dt must be positive");
    if (config.t_end / config.dt > 1e7)
        fail("t_end / dt exceeds 1e7 steps");
    if (config.cutoff < 1)
        fail("cutoff must be at least 1");
    if (!config.sweep)
        return;
    auto check_axis = [&](const SweepAxis& axis) {
        if (!is_sweepable(axis.name))
            fail("axis '" + axis.name + "' is not a sweepable parameter");
        if (axis.count < 2)
            fail("axis '" + axis.name + "' needs at least 2 points");
        if (!(axis.min < axis.max))
            fail("axis '" + axis.name + "' needs min < max");
    };
    check_axis(config.sweep->axis1);
    if (config.sweep->axis2) {
        check_axis(*config.sweep->axis2);
        if (config.sweep->axis2->name == config.sweep->axis1.name)
            fail("both axes sweep '" + config.sweep->axis1.name + "'");
    }
}

RunConfig parse_config(std::string_view text)
{
    const auto entries = collect_entries(text);
    for (const auto& [key, value] : entries) {
        bool known = false;
        for (const char* k : k_known_keys)
            known = known || key == k;
        if (!known)
            throw Error(Errc::UnknownKey, "unknown key '" + key + "'");
    }
    if (entries.contains("theta") && entries.contains("theta_minus_phi"))
        parse_error("theta and theta_minus_phi are mutually exclusive");

    RunConfig config;
    auto real = [&](const char* key, double& target) {
        if (auto it = entries.find(key); it != entries.end())
            target = parse_real(it->second);
    };
    real("gamma", config.params.gamma);
    real("Gamma", config.params.big_gamma);
    real("g", config.params.g);
    real("theta", config.params.theta);
    real("phi", config.params.phi);
    real("Omega", config.params.omega);
    real("omega_delta", config.params.omega_delta);
    if (auto it = entries.find("theta_minus_phi"); it != entries.end())
        config.params.theta = config.params.phi + parse_real(it->second);
    real("t_end", config.t_end);
    real("dt", config.dt);

    if (auto it = entries.find("init"); it != entries.end()) {
        const std::string& kind = it->second;
        if (kind == "vacuum")
            config.init = Init::vacuum();
        else if (kind == "single" || kind == "single_excitation_first")
            config.init = Init::single_excitation_first();
        else if (kind == "coherent")
            config.init = Init::coherent(0, 0);
        else
            parse_error("init must be vacuum, single_excitation_first or coherent");
    }
    const bool has_alpha = entries.contains("alpha1") || entries.contains("alpha2");
    if (has_alpha && config.init.kind != Init::Kind::CoherentAmplitudes)
        parse_error("alpha1/alpha2 require init = coherent");
    if (auto it = entries.find("alpha1"); it != entries.end())
        config.init.alpha1 = parse_complex(it->second);
    if (auto it = entries.find("alpha2"); it != entries.end())
        config.init.alpha2 = parse_complex(it->second);

    if (auto it = entries.find("method"); it != entries.end())
        config.method = parse_method(it->second);
    if (auto it = entries.find("format"); it != entries.end())
        config.format = parse_format(it->second);
    if (auto it = entries.find("cutoff"); it != entries.end())
        config.cutoff = parse_int(it->second);
    if (auto it = entries.find("out"); it != entries.end())
        config.out = it->second;

    if (auto it = entries.find("axis1"); it != entries.end()) {
        SweepSpec spec;
        spec.axis1 = parse_axis(it->second);
        if (auto it2 = entries.find("axis2"); it2 != entries.end())
            spec.axis2 = parse_axis(it2->second);
        spec.fixed = config.params;
        config.sweep = spec;
    } else if (entries.contains("axis2")) {
        parse_error("axis2 given without axis1");
    }

    validate_config(config);
    return config;
}

} // namespace dirsim::app
