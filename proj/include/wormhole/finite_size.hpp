#pragma once

// Long-time finite-N objects: the two partial-transpose eigenvalues that can
// turn negative, their phase-minimized envelope, the red boundary curve in
// the (r, g) plane, and the gamma* root.
//
// r is taken as an explicit input. Its relation to (gamma, t_L, t_R) is not
// modelled here.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wormhole/errors.hpp"

namespace wormhole::finite_size {

/// Inputs to the long-time eigenvalue formula.
class FiniteSizeParams {
public:
    static FiniteSizeParams make(double r, double g, int n_fermions)
    {
        if (n_fermions < 2 || n_fermions % 2 != 0)
            throw DomainError("n_fermions must be even and >= 2");
        if (!std::isfinite(r) || std::abs(r) > 1.0)
            throw DomainError("r must lie in [-1, 1]");
        if (!std::isfinite(g))
            throw DomainError("g must be finite");
        return FiniteSizeParams(r, g, n_fermions);
    }

    double r() const noexcept { return r_; }
    double g() const noexcept { return g_; }
    int n_fermions() const noexcept { return n_; }
    /// theta = (1 - r) g N / 2.
    double phase() const noexcept { return (1.0 - r_) * g_ * n_ / 2.0; }

private:
    FiniteSizeParams(double r, double g, int n) : r_(r), g_(g), n_(n) {}

    double r_;
    double g_;
    int n_;
};

struct EpsilonPair {
    double plus;
    double minus;
};

namespace detail {

// 8 eps_pm = base + cos_amp cos(theta) +- sin_amp sin(theta)
inline double base(double r) { return 1.0 - (r - 2.0) * r; }
inline double cos_amp(double r) { return (1.0 - r) * (1.0 - r); }
inline double sin_amp(double r) { return r * r - 1.0; }

} // namespace detail

inline EpsilonPair epsilon_at_phase(double r, double theta)
{
    const double common = detail::base(r) + detail::cos_amp(r) * std::cos(theta);
    const double osc = detail::sin_amp(r) * std::sin(theta);
    return {(common + osc) / 8.0, (common - osc) / 8.0};
}

inline EpsilonPair epsilon_pm(const FiniteSizeParams& fsp)
{
    return epsilon_at_phase(fsp.r(), fsp.phase());
}

/// min over theta and both branches: [1 - (r-2) r - sqrt((1-r)^4 + (r^2-1)^2)] / 8.
inline double min_epsilon_over_phase(double r)
{
    return (detail::base(r) - std::hypot(detail::cos_amp(r), detail::sin_amp(r))) / 8.0;
}

/// f(gamma) = 1 + (2 - gamma) gamma - (1 - gamma) sqrt(5 + 6 gamma + 5 gamma^2).
inline double gamma_star_condition(double gamma)
{
    return 1.0 + (2.0 - gamma) * gamma - (1.0 - gamma) * std::sqrt(5.0 + 6.0 * gamma + 5.0 * gamma * gamma);
}

/// Root of gamma_star_condition on [0, 1) by bisection.
inline double gamma_star(double tol = 1e-12)
{
    if (!(tol >= 1e-12))
        throw DomainError("tol must be >= 1e-12");
    double lo = 0.0;
    double hi = 1.0 - 1e-12;
    double f_lo = gamma_star_condition(lo);
    if (!(f_lo < 0.0) || !(gamma_star_condition(hi) > 0.0))
        throw BracketError("gamma* condition does not change sign on [0, 1)");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = gamma_star_condition(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Smallest theta > 0 with min(eps+, eps-) = 0.
///
/// 8 min(eps) = A + B cos(theta) - |C sin(theta)| is even about theta = pi and
/// positive at 0, so the first root lies in (0, pi] where it reads
/// A + R cos(theta + phi) with R = hypot(B, |C|), phi = atan2(|C|, B).
inline double first_zero_phase(double r)
{
    const double a = detail::base(r);
    const double b = detail::cos_amp(r);
    const double c = std::abs(detail::sin_amp(r));
    const double amp = std::hypot(b, c);
    if (!(amp > 0.0) || a > amp)
        throw NoRootError("eps_pm stays positive for r = " + std::to_string(r));
    return std::acos(std::clamp(-a / amp, -1.0, 1.0)) - std::atan2(c, b);
}

/// g on the boundary for one r: theta_0 converted through g = 2 theta_0 / ((1-r) N).
inline double boundary_point(double r, int n_fermions)
{
    if (n_fermions < 2 || n_fermions % 2 != 0)
        throw DomainError("n_fermions must be even and >= 2");
    if (!(std::abs(r) <= 1.0))
        throw DomainError("r must lie in [-1, 1]");
    if (r == 1.0)
        throw NoRootError("eps_pm is independent of g at r = 1");
    const double theta = first_zero_phase(r);
    return 2.0 * theta / ((1.0 - r) * n_fermions);
}

struct BoundaryRow {
    double r;
    double g_boundary;
};

struct BoundaryCurve {
    std::vector<BoundaryRow> rows;
    std::vector<double> no_root; // r values with no boundary
};

inline BoundaryCurve boundary_curve(std::span<const double> r_samples, int n_fermions)
{
    BoundaryCurve out;
    for (double r : r_samples) {
        try {
            out.rows.push_back({r, boundary_point(r, n_fermions)});
        } catch (const NoRootError&) {
            out.no_root.push_back(r);
        }
    }
    return out;
}

} // namespace wormhole::finite_size
