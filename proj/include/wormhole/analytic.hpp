#pragma once

// Closed-form large-N solution of the teleportation response at beta = 0.
// Valid for |g| << 1 and, on the generic branch, |g| << |1 - gamma|.

#include <algorithm>
#include <cmath>
#include <complex>

#include "wormhole/model.hpp"
#include "wormhole/profile.hpp"

namespace wormhole::analytic {

namespace detail {

inline void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("time must be finite and >= 0");
}

// e^{kappa t} beyond this exponent is treated as infinite: G -> gamma.
inline constexpr double kExpCutoff = 700.0;

} // namespace detail

/// Diagonal profile G(t).
///
/// Generic: gamma + (1-gamma)^2 / (1 - gamma + i g e^{(1-gamma) t}).
/// Critical (gamma = 1): 1 - (g^2 t + i g) / (1 + g^2 t^2).
inline std::complex<double> cal_g(double t, const ModelParams& p)
{
    detail::require_time(t);
    const double g = p.g();
    if (p.is_critical()) {
        const double den = 1.0 + g * g * t * t;
        return {1.0 - g * g * t / den, -g / den};
    }
    const double kappa = p.lyapunov();
    const double kt = kappa * t;
    if (kt > detail::kExpCutoff)
        return {p.gamma(), 0.0};
    const std::complex<double> den{kappa, g * std::exp(kt)};
    return p.gamma() + kappa * kappa / den;
}

/// K(t, t) = Im G(t). Evaluated in log-space so it never overflows.
inline double response_diag(double t, const ModelParams& p)
{
    detail::require_time(t);
    const double g = p.g();
    if (g == 0.0)
        return 0.0;
    if (p.is_critical())
        return -g / (1.0 + g * g * t * t);

    const double kappa = p.lyapunov();
    const double k2 = kappa * kappa;
    const double sign = g > 0.0 ? 1.0 : -1.0;
    const double log_x = std::log(std::abs(g)) + kappa * t; // x = |g| e^{kappa t}
    if (log_x > 300.0)
        return -sign * k2 * std::exp(-log_x);
    if (log_x < -300.0)
        return -sign * std::exp(log_x);
    const double x = std::exp(log_x);
    return -sign * k2 * x / (x * x + k2);
}

/// G^W(t_L, t_R) = e^{-Gamma |t_L - t_R| / 2} G(min(t_L, t_R)).
inline std::complex<double> wightman(double t_l, double t_r, const ModelParams& p)
{
    detail::require_time(t_l);
    detail::require_time(t_r);
    const double decay = std::exp(-0.5 * p.decay_rate() * std::abs(t_l - t_r));
    return decay * cal_g(std::min(t_l, t_r), p);
}

inline double response_offdiag(double t_l, double t_r, const ModelParams& p)
{
    detail::require_time(t_l);
    detail::require_time(t_r);
    const double decay = std::exp(-0.5 * p.decay_rate() * std::abs(t_l - t_r));
    return decay * response_diag(std::min(t_l, t_r), p);
}

struct Peak {
    double k_max;  // max_t |K(t, t)|
    double t_star; // its location
};

/// Peak of |K(t, t)| over t >= 0.
///
/// For gamma < 1 and |g| < 1 - gamma the peak sits at |g| e^{(1-gamma) t*} = 1 - gamma
/// with height (1 - gamma)/2. Otherwise |K| is non-increasing and the peak is at t = 0.
inline Peak kmax_and_tstar(const ModelParams& p)
{
    if (p.g() == 0.0)
        throw DomainError("kmax_and_tstar needs g != 0");
    const double kappa = p.lyapunov();
    const double abs_g = std::abs(p.g());
    if (!p.is_critical() && kappa > 0.0 && abs_g < kappa)
        return {kappa / 2.0, std::log(kappa / abs_g) / kappa};
    return {std::abs(response_diag(0.0, p)), 0.0};
}

inline DiagonalProfile sample_profile(const ModelParams& p, const TimeGrid& grid)
{
    DiagonalProfile out{grid, {}, branch_for(p)};
    out.values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.values.push_back(cal_g(grid.time(i), p));
    return out;
}

} // namespace wormhole::analytic
