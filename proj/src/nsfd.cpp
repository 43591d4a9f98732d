#include "nsfd_epi/nsfd.hpp"

#include "nsfd_epi/errors.hpp"

#include <cmath>
#include <string>

namespace nsfd_epi {

StepSize::StepSize(double h)
    : h_(h)
{
    if (!std::isfinite(h) || !(h > 0.0))
        throw DomainError("step size must be finite and > 0, got " + std::to_string(h));
}

DenominatorPair denominators(const Model& model, StepSize step)
{
    const double h = step.value();
    const auto& p = model.params();
    DenominatorPair d{h, h};
    if (model.variant() == ModelVariant::PerfectVerticalOnly || p.beta == 0.0)
        return d;
    if (p.by == 0.0)
        throw DomainError("denominators: b_y must be nonzero when beta > 0");

    const double c = p.beta * p.K * p.uy / p.by;
    if (std::abs(c) * h < kDenominatorSeriesThreshold)
        d.phi1 = h * (1.0 - c * h / 2.0);
    else
        d.phi1 = -std::expm1(-c * h) / c;
    return d;
}

namespace {

void require_finite(State s, const char* where)
{
    if (!is_finite(s))
        throw DomainError(std::string(where) + ": non-finite state");
}

State positive_map(const HostParams& p, double phi1, double phi2, double e, double beta, State s)
{
    const double X = s.X;
    const double Y = s.Y;
    const double bxK = p.bx / p.K;
    const double byK = p.by / p.K;

    double x_den_rates = bxK * X + bxK * Y + p.ux + beta * Y;
    if (e != 0.0)
        x_den_rates += e / p.K * Y + e / p.K * Y * Y / X;
    const double x_next = (X * (1.0 + phi1 * p.bx) + phi1 * e * Y) / (1.0 + phi1 * x_den_rates);
    const double y_next = Y * (1.0 + phi2 * (p.by + beta * X)) / (1.0 + phi2 * (byK * X + byK * Y + p.uy));
    return {x_next, y_next};
}

} // namespace

State step_general(const HostParams& p, StepSize h, State s)
{
    require_finite(s, "step_general");
    if (!(s.X > 0.0))
        throw DomainError("step_general: X must be > 0 (the map contains Y^2/X)");
    const auto d = denominators(Model(p, ModelVariant::General), h);
    return positive_map(p, d.phi1, d.phi2, p.e, p.beta, s);
}

State step_horizontal(const HostParams& p, StepSize h, State s)
{
    require_finite(s, "step_horizontal");
    HostParams q = p;
    q.e = 0.0;
    const auto d = denominators(Model(q, ModelVariant::HorizontalPerfectVertical), h);
    return positive_map(q, d.phi1, d.phi2, 0.0, q.beta, s);
}

State step_vertical(const HostParams& p, StepSize h, State s)
{
    require_finite(s, "step_vertical");
    return positive_map(p, h.value(), h.value(), 0.0, 0.0, s);
}

State nsfd_step(const Model& model, StepSize h, State s)
{
    switch (model.variant()) {
    case ModelVariant::General:
        return step_general(model.params(), h, s);
    case ModelVariant::HorizontalPerfectVertical:
        return step_horizontal(model.params(), h, s);
    case ModelVariant::PerfectVerticalOnly:
        return step_vertical(model.params(), h, s);
    }
    throw DomainError("nsfd_step: unknown variant");
}

Trajectory iterate(const Model& model, StepSize h, State s0, std::size_t n_max,
    const ConvergenceSettings& settings, IterateOptions options)
{
    if (n_max == 0)
        throw DomainError("iterate: n_max must be positive");
    if (options.thin == 0)
        throw DomainError("iterate: thinning factor must be positive");

    Trajectory traj;
    traj.step = h.value();
    traj.record(0, s0);

    LimitDetector detector(settings, known_equilibria(model), model.params().K);
    std::optional<Verdict> verdict = detector.update(s0);
    State s = s0;
    std::size_t n = 0;
    while (!verdict && n < n_max) {
        s = nsfd_step(model, h, s);
        ++n;
        verdict = detector.update(s);
        if (n % options.thin == 0)
            traj.record(n, s);
    }
    if (n % options.thin != 0)
        traj.record(n, s);
    traj.verdict = verdict ? *verdict : Verdict{VerdictKind::MaxStepsReached, std::nullopt, s};
    return traj;
}

} // namespace nsfd_epi
