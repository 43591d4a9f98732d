#include "nsfd_epi/model.hpp"

#include "nsfd_epi/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nsfd_epi {

double max_norm(State s) noexcept
{
    return std::max(std::abs(s.X), std::abs(s.Y));
}

double distance(State a, State b) noexcept
{
    return max_norm({a.X - b.X, a.Y - b.Y});
}

bool is_finite(State s) noexcept
{
    return std::isfinite(s.X) && std::isfinite(s.Y);
}

std::string_view to_string(ModelVariant v) noexcept
{
    switch (v) {
    case ModelVariant::General:
        return "general";
    case ModelVariant::HorizontalPerfectVertical:
        return "horizontal";
    case ModelVariant::PerfectVerticalOnly:
        return "vertical";
    }
    return "unknown";
}

ModelVariant parse_variant(std::string_view name)
{
    if (name == "general")
        return ModelVariant::General;
    if (name == "horizontal")
        return ModelVariant::HorizontalPerfectVertical;
    if (name == "vertical")
        return ModelVariant::PerfectVerticalOnly;
    throw std::invalid_argument("unknown model variant '" + std::string(name) + "'");
}

std::vector<Violation> validate_params(const HostParams& p, ValidationMode mode)
{
    std::vector<Violation> out;
    const std::pair<const char*, double> fields[] = {
        {"b_x", p.bx}, {"b_y", p.by}, {"u_x", p.ux}, {"u_y", p.uy}, {"K", p.K}, {"e", p.e}, {"beta", p.beta},
    };
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value))
            out.push_back({std::string(name) + " finite", std::string(name) + " is not finite"});
        else if (value < 0.0)
            out.push_back({std::string(name) + " >= 0", std::string(name) + " is negative"});
    }
    if (std::isfinite(p.K) && !(p.K > 0.0))
        out.push_back({"K > 0", "carrying capacity must be positive"});

    if (mode == ValidationMode::Strict) {
        auto bio = biological_warnings(p);
        out.insert(out.end(), bio.begin(), bio.end());
    }
    return out;
}

std::vector<Violation> biological_warnings(const HostParams& p)
{
    std::vector<Violation> out;
    if (!(p.uy > p.ux))
        out.push_back({"u_y > u_x", "infected hosts must die faster than uninfected hosts"});
    if (!(p.bx >= p.by + p.e))
        out.push_back({"b_x >= b_y + e", "uninfected birth rate must be at least b_y + e"});
    return out;
}

Model::Model(HostParams params, ModelVariant variant)
    : params_(params)
    , variant_(variant)
{
    if (variant != ModelVariant::General && params.e != 0.0)
        throw VariantError("variant '" + std::string(to_string(variant)) + "' requires e = 0");
    if (variant == ModelVariant::PerfectVerticalOnly && params.beta != 0.0)
        throw VariantError("variant 'vertical' requires beta = 0");
}

State vector_field(const Model& model, State s)
{
    if (!is_finite(s))
        throw DomainError("vector_field: non-finite state");
    const auto& p = model.params();
    // Sub-variants carry e = 0 (and beta = 0), so one expression covers all three.
    const double crowding = 1.0 - (s.X + s.Y) / p.K;
    const double dX = (p.bx * crowding - p.ux - p.beta * s.Y) * s.X + p.e * crowding * s.Y;
    const double dY = (p.by * crowding - p.uy + p.beta * s.X) * s.Y;
    return {dX, dY};
}

} // namespace nsfd_epi
