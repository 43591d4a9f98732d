#include "nsfd_epi/convergence.hpp"

#include "nsfd_epi/errors.hpp"
#include "nsfd_epi/format.hpp"

#include <cmath>
#include <limits>

namespace nsfd_epi {

void check_settings(const ConvergenceSettings& s)
{
    if (!(s.tol_step > 0.0) || !(s.tol_eq > 0.0) || s.window < 1 || s.max_steps < 1)
        throw DomainError("convergence settings must be positive with window >= 1");
}

std::string describe(const Verdict& v)
{
    switch (v.kind) {
    case VerdictKind::ConvergedTo:
        return "converged:" + std::string(label(*v.equilibrium)) + ":" + format_number(v.point.X) + ","
            + format_number(v.point.Y);
    case VerdictKind::MaxStepsReached:
        return "max-steps";
    case VerdictKind::Diverged:
        return "diverged";
    }
    return "unknown";
}

LimitDetector::LimitDetector(const ConvergenceSettings& settings, std::vector<Equilibrium> known, double K)
    : settings_(settings)
    , known_(std::move(known))
    , divergence_radius_(1e6 * std::abs(K))
{
    check_settings(settings_);
}

std::optional<Verdict> LimitDetector::update(State s)
{
    if (!is_finite(s) || max_norm(s) > divergence_radius_)
        return Verdict{VerdictKind::Diverged, std::nullopt, s};

    if (previous_ && distance(s, *previous_) < settings_.tol_step)
        ++quiet_;
    else
        quiet_ = 0;
    previous_ = s;

    if (quiet_ < settings_.window)
        return std::nullopt;

    const Equilibrium* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& eq : known_) {
        const double d = distance(s, eq.point);
        if (d < best) {
            best = d;
            nearest = &eq;
        }
    }
    if (nearest == nullptr || best > settings_.tol_eq)
        return std::nullopt;
    return Verdict{VerdictKind::ConvergedTo, nearest->kind, nearest->point};
}

Verdict detect_limit(std::span<const State> states, const ConvergenceSettings& settings,
    const std::vector<Equilibrium>& known, double K)
{
    check_settings(settings);
    const double radius = 1e6 * std::abs(K);
    for (const auto& s : states) {
        if (!is_finite(s) || max_norm(s) > radius)
            return {VerdictKind::Diverged, std::nullopt, s};
    }
    Verdict fallback{VerdictKind::MaxStepsReached, std::nullopt, states.empty() ? State{} : states.back()};
    if (states.size() < settings.window + 1)
        return fallback;

    // Only the tail matters, so prefix padding never changes the verdict.
    LimitDetector detector(settings, known, K);
    std::optional<Verdict> v;
    for (std::size_t i = states.size() - settings.window - 1; i < states.size(); ++i)
        v = detector.update(states[i]);
    return v ? *v : fallback;
}

std::vector<Equilibrium> known_equilibria(const Model& model)
{
    std::vector<Equilibrium> out;
    for (auto& eq : all_equilibria(model)) {
        if (eq.exists)
            out.push_back(std::move(eq));
    }
    return out;
}

} // namespace nsfd_epi
