#pragma once

#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/model.hpp"

#include <random>
#include <stdexcept>

namespace nsfd_epi::test {

inline HostParams general_set(double beta)
{
    return {0.6, 0.4, 0.1, 0.2, 1.0, 0.02, beta};
}

inline HostParams perfect_vertical_set(double beta)
{
    return {0.6, 0.4, 0.1, 0.2, 1.2, 0.0, beta};
}

inline Model general(double beta)
{
    return Model(general_set(beta), ModelVariant::General);
}

inline Model horizontal(double beta)
{
    return Model(perfect_vertical_set(beta), ModelVariant::HorizontalPerfectVertical);
}

inline Model vertical()
{
    return Model(perfect_vertical_set(0.0), ModelVariant::PerfectVerticalOnly);
}

inline double uniform(std::mt19937& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Parameters satisfying u_y > u_x and b_x >= b_y + e, drawn independently
/// of the library's own generator.
inline HostParams strict_params(std::mt19937& rng)
{
    HostParams p;
    p.ux = uniform(rng, 0.01, 1.0);
    p.uy = p.ux + uniform(rng, 0.01, 1.0);
    p.e = uniform(rng, 0.0, 0.3);
    p.by = uniform(rng, 0.05, 2.0);
    p.bx = p.by + p.e + uniform(rng, 0.0, 2.0);
    p.K = uniform(rng, 0.2, 5.0);
    p.beta = uniform(rng, 0.0, 1.0);
    return p;
}

inline Model with_variant(HostParams p, ModelVariant v)
{
    if (v != ModelVariant::General)
        p.e = 0.0;
    if (v == ModelVariant::PerfectVerticalOnly)
        p.beta = 0.0;
    return Model(p, v);
}

inline const Equilibrium& find(const std::vector<Equilibrium>& eqs, EquilibriumKind k)
{
    for (const auto& e : eqs)
        if (e.kind == k)
            return e;
    throw std::out_of_range("equilibrium kind not present");
}

} // namespace nsfd_epi::test
