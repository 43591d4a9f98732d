#pragma once

#include "nsfd_epi/convergence.hpp"
#include "nsfd_epi/model.hpp"

#include <cstddef>

namespace nsfd_epi {

/// Positive, finite step size. No upper bound.
class StepSize {
public:
    explicit StepSize(double h);
    double value() const noexcept { return h_; }

private:
    double h_;
};

/// phi1 scales the X update, phi2 the Y update.
struct DenominatorPair {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

/// Below this value of beta K u_y h / b_y, phi1 is evaluated from its
/// second-order series.
inline constexpr double kDenominatorSeriesThreshold = 1e-8;

/// phi1 = (1 - exp(-c h)) / c with c = beta K u_y / b_y, phi2 = h.
/// phi1 = h for the vertical-only variant and whenever c == 0.
DenominatorPair denominators(const Model& model, StepSize h);

/// One step of the general positive map. Requires X > 0: the update contains
/// Y^2 / X and is undefined on the Y-axis (DomainError).
State step_general(const HostParams& p, StepSize h, State s);

/// One step of the e = 0 map; `p.e` is not read. Both axes are invariant.
State step_horizontal(const HostParams& p, StepSize h, State s);

/// One step of the e = 0, beta = 0 map with phi1 = phi2 = h; `p.e` and
/// `p.beta` are not read.
State step_vertical(const HostParams& p, StepSize h, State s);

/// Dispatches on the model variant.
State nsfd_step(const Model& model, StepSize h, State s);

struct IterateOptions {
    /// Record every `thin`-th state (the first and last are always kept).
    std::size_t thin = 1;
};

/// Iterates the variant's map from s0 for at most n_max steps, stopping as
/// soon as the limit detector reports convergence or divergence.
Trajectory iterate(const Model& model, StepSize h, State s0, std::size_t n_max,
    const ConvergenceSettings& settings = {}, IterateOptions options = {});

} // namespace nsfd_epi
