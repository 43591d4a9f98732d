#include "nsfd_epi/config.hpp"

#include "nsfd_epi/errors.hpp"
#include "nsfd_epi/harness.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace nsfd_epi {

using json = nlohmann::json;

std::string_view to_string(Scheme s) noexcept
{
    switch (s) {
    case Scheme::Nsfd:
        return "nsfd";
    case Scheme::Rk4:
        return "rk4";
    case Scheme::Euler:
        return "euler";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat f) noexcept
{
    return f == OutputFormat::Json ? "json" : "csv";
}

Scheme parse_scheme(std::string_view name)
{
    if (name == "nsfd")
        return Scheme::Nsfd;
    if (name == "rk4")
        return Scheme::Rk4;
    if (name == "euler")
        return Scheme::Euler;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name)
{
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "json")
        return OutputFormat::Json;
    throw ConfigError("unknown output format '" + std::string(name) + "'");
}

std::string config_to_json(const RunConfig& c)
{
    json points = json::array();
    for (const auto& s : c.initial_points)
        points.push_back({s.X, s.Y});
    const json doc = {
        {"model", std::string(to_string(c.variant))},
        {"params",
            {{"bx", c.params.bx}, {"by", c.params.by}, {"ux", c.params.ux}, {"uy", c.params.uy}, {"K", c.params.K},
                {"e", c.params.e}, {"beta", c.params.beta}}},
        {"scheme", std::string(to_string(c.scheme))},
        {"h", c.hs},
        {"dt", c.dt},
        {"t_max", c.t_max},
        {"initial_points", points},
        {"preset", c.preset ? json(*c.preset) : json(nullptr)},
        {"steps", c.steps ? json(*c.steps) : json(nullptr)},
        {"detector",
            {{"tol_step", c.detector.tol_step}, {"window", c.detector.window}, {"tol_eq", c.detector.tol_eq},
                {"max_steps", c.detector.max_steps}}},
        {"format", std::string(to_string(c.format))},
        {"out", c.out},
        {"permissive", c.permissive},
    };
    return doc.dump(2);
}

namespace {

template <typename T>
void read(const json& obj, const char* key, T& target)
{
    if (obj.contains(key))
        target = obj.at(key).get<T>();
}

} // namespace

RunConfig config_from_json(std::string_view text, const RunConfig& base)
{
    RunConfig c = base;
    try {
        const json doc = json::parse(text);
        if (!doc.is_object())
            throw ConfigError("config must be a JSON object");
        if (doc.contains("model"))
            c.variant = parse_variant(doc.at("model").get<std::string>());
        if (doc.contains("params")) {
            const auto& p = doc.at("params");
            read(p, "bx", c.params.bx);
            read(p, "by", c.params.by);
            read(p, "ux", c.params.ux);
            read(p, "uy", c.params.uy);
            read(p, "K", c.params.K);
            read(p, "e", c.params.e);
            read(p, "beta", c.params.beta);
        }
        if (doc.contains("scheme"))
            c.scheme = parse_scheme(doc.at("scheme").get<std::string>());
        if (doc.contains("h")) {
            const auto& h = doc.at("h");
            c.hs = h.is_array() ? h.get<std::vector<double>>() : std::vector<double> {h.get<double>()};
        }
        read(doc, "dt", c.dt);
        read(doc, "t_max", c.t_max);
        if (doc.contains("initial_points")) {
            c.initial_points.clear();
            for (const auto& pt : doc.at("initial_points")) {
                if (!pt.is_array() || pt.size() != 2)
                    throw ConfigError("initial points must be [X, Y] pairs");
                c.initial_points.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
        }
        if (doc.contains("preset")) {
            const auto& p = doc.at("preset");
            c.preset = p.is_null() ? std::nullopt : std::optional<std::string>(p.get<std::string>());
        }
        if (doc.contains("steps")) {
            const auto& s = doc.at("steps");
            c.steps = s.is_null() ? std::nullopt : std::optional<std::size_t>(s.get<std::size_t>());
        }
        if (doc.contains("detector")) {
            const auto& d = doc.at("detector");
            read(d, "tol_step", c.detector.tol_step);
            read(d, "window", c.detector.window);
            read(d, "tol_eq", c.detector.tol_eq);
            read(d, "max_steps", c.detector.max_steps);
        }
        if (doc.contains("format"))
            c.format = parse_format(doc.at("format").get<std::string>());
        read(doc, "out", c.out);
        read(doc, "permissive", c.permissive);
    } catch (const json::exception& err) {
        throw ConfigError(std::string("malformed config: ") + err.what());
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    return c;
}

std::vector<std::string> config_keys(std::string_view text)
{
    std::vector<std::string> keys;
    try {
        const json doc = json::parse(text);
        for (const auto& [key, value] : doc.items()) {
            keys.push_back(key);
            if (key == "params" && value.is_object()) {
                for (const auto& [name, unused] : value.items())
                    keys.push_back("params." + name);
            }
        }
    } catch (const json::exception& err) {
        throw ConfigError(std::string("malformed config: ") + err.what());
    }
    return keys;
}

Model config_model(const RunConfig& c)
{
    const auto violations = validate_params(c.params, c.permissive ? ValidationMode::Permissive : ValidationMode::Strict);
    if (!violations.empty()) {
        std::string msg = "invalid parameters:";
        for (const auto& v : violations)
            msg += " [" + v.predicate + "] " + v.message + ";";
        throw ConfigError(msg);
    }
    try {
        return Model(c.params, c.variant);
    } catch (const VariantError& err) {
        throw ConfigError(err.what());
    }
}

std::vector<State> config_initial_points(const RunConfig& c, const std::vector<State>& fallback)
{
    if (!c.initial_points.empty())
        return c.initial_points;
    if (c.preset) {
        try {
            return initial_point_preset(*c.preset);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
    }
    return fallback;
}

void validate_config(const RunConfig& c)
{
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (c.scheme == Scheme::Rk4) {
        if (!positive(c.dt))
            throw ConfigError("rk4 needs dt > 0");
        if (!(c.t_max >= c.dt))
            throw ConfigError("rk4 needs t_max >= dt");
    }
    for (double h : c.hs) {
        if (!positive(h))
            throw ConfigError("step sizes must be > 0");
    }
    for (const auto& s : c.initial_points) {
        if (!is_finite(s) || s.X < 0.0 || s.Y < 0.0)
            throw ConfigError("initial points must be finite and nonnegative");
    }
    try {
        check_settings(c.detector);
    } catch (const DomainError& err) {
        throw ConfigError(err.what());
    }
}

} // namespace nsfd_epi
