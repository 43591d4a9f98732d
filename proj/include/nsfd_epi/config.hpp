#pragma once

#include "nsfd_epi/convergence.hpp"
#include "nsfd_epi/model.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nsfd_epi {

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Scheme { Nsfd, Rk4, Euler };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(OutputFormat f) noexcept;
Scheme parse_scheme(std::string_view name);
OutputFormat parse_format(std::string_view name);

/// Everything a CLI command needs. Defaults are the general reference
/// parameter set with beta = 0.1.
struct RunConfig {
    ModelVariant variant = ModelVariant::General;
    HostParams params {0.6, 0.4, 0.1, 0.2, 1.0, 0.02, 0.1};
    Scheme scheme = Scheme::Nsfd;
    std::vector<double> hs;          ///< step sizes for nsfd/euler (first one drives simulate)
    double dt = 0.01;                ///< rk4 step
    double t_max = 2000.0;           ///< rk4 horizon
    std::vector<State> initial_points;
    std::optional<std::string> preset;
    std::optional<std::size_t> steps;
    ConvergenceSettings detector;
    OutputFormat format = OutputFormat::Csv;
    std::string out;                 ///< empty: stdout
    bool permissive = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string config_to_json(const RunConfig& config);

/// Parses a JSON config. Missing keys keep the values already in `base`.
/// Throws ConfigError on malformed input.
RunConfig config_from_json(std::string_view text, const RunConfig& base = {});

/// Keys present in a JSON config document (top level, plus "params.<name>").
std::vector<std::string> config_keys(std::string_view text);

/// Model for the config; throws ConfigError when parameters are invalid for
/// the validation mode or the variant.
Model config_model(const RunConfig& config);

/// Explicit points, else the preset, else `fallback`.
std::vector<State> config_initial_points(const RunConfig& config, const std::vector<State>& fallback);

/// Throws ConfigError unless the scheme's step field and the detector
/// settings are valid.
void validate_config(const RunConfig& config);

} // namespace nsfd_epi
