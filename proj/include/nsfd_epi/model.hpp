#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nsfd_epi {

/// Host demography and transmission rates.
///
/// Rates are per unit time, K is a host density and beta is per density per
/// unit time. No unit system is enforced.
struct HostParams {
    double bx = 0.0;   ///< birth rate of uninfected hosts
    double by = 0.0;   ///< birth rate of infected hosts (infected offspring)
    double ux = 0.0;   ///< death rate of uninfected hosts
    double uy = 0.0;   ///< death rate of infected hosts
    double K = 1.0;    ///< carrying capacity
    double e = 0.0;    ///< rate of uninfected offspring from infected hosts
    double beta = 0.0; ///< horizontal (mass-action) transmission coefficient

    friend bool operator==(const HostParams&, const HostParams&) = default;
};

/// Uninfected (X) and infected (Y) host densities.
struct State {
    double X = 0.0;
    double Y = 0.0;

    friend bool operator==(const State&, const State&) = default;
};

double max_norm(State s) noexcept;
double distance(State a, State b) noexcept; ///< infinity-norm distance
bool is_finite(State s) noexcept;

enum class ModelVariant {
    General,                   ///< imperfect vertical + horizontal transmission
    HorizontalPerfectVertical, ///< e = 0
    PerfectVerticalOnly,       ///< e = 0 and beta = 0
};

std::string_view to_string(ModelVariant v) noexcept;
/// Accepts the CLI spellings `general`, `horizontal`, `vertical`.
ModelVariant parse_variant(std::string_view name);

enum class ValidationMode { Strict, Permissive };

struct Violation {
    std::string predicate;
    std::string message;
};

/// Checks the parameter invariants. In strict mode the biological ordering
/// assumptions `u_y > u_x` and `b_x >= b_y + e` are violations; in permissive
/// mode they are reported by `biological_warnings` only.
std::vector<Violation> validate_params(const HostParams& p, ValidationMode mode = ValidationMode::Strict);
std::vector<Violation> biological_warnings(const HostParams& p);

/// A parameter set bound to a model variant.
///
/// Construction throws `VariantError` when a parameter the variant forces to
/// zero is nonzero. General with e = 0 is allowed.
class Model {
public:
    Model(HostParams params, ModelVariant variant);

    const HostParams& params() const noexcept { return params_; }
    ModelVariant variant() const noexcept { return variant_; }

    /// True when the Y-axis is invariant (e == 0).
    bool has_invariant_y_axis() const noexcept { return params_.e == 0.0; }

private:
    HostParams params_;
    ModelVariant variant_;
};

/// Right-hand side (dX/dt, dY/dt) of the continuous model.
State vector_field(const Model& model, State s);

} // namespace nsfd_epi
