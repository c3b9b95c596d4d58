#pragma once

// Numerical Schwinger-Dyson solver for the Brownian model at beta = 0.
//
// The two-time equation
//     (d_L + Gamma/2)(d_R + Gamma/2) G^W = delta(t_L - t_R) Sigma^W(t_L),
//     Sigma^W(t) = G^W(t,t)^2 + gamma - (1 - e^{-ig}) delta(t)
// has a product operator with a purely diagonal source, which forces
// G^W(t_L, t_R) = e^{-Gamma |t_L - t_R|/2} G(min). Substituting gives the
// scalar Riccati law on the diagonal,
//     dG/dt = -(G - gamma)(1 - G),        t > 0,
// and the delta in Sigma^W becomes a jump of G across t = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "wormhole/analytic.hpp"
#include "wormhole/model.hpp"
#include "wormhole/profile.hpp"

namespace wormhole::sd {

using complex = std::complex<double>;

/// How the coupling source at t = 0 is applied.
enum class Kick {
    /// Leading order in g, applied to the linearizing variable 1/(G - gamma):
    /// G(0+) = gamma + (1-gamma)^2/(1-gamma+ig), or 1 - ig at gamma = 1.
    /// This is the initial value carried by the closed forms.
    leading_order,
    /// Full jump G(0+) = G(0-) - (1 - e^{-ig}) = e^{-ig}.
    exact,
};

/// Equal-time Wightman value before the kick (EPR state).
inline constexpr complex kPreKickValue{1.0, 0.0};

inline complex post_kick_value(const ModelParams& p, Kick kick)
{
    const double g = p.g();
    if (kick == Kick::exact)
        return kPreKickValue - (1.0 - std::exp(complex{0.0, -g}));
    if (p.is_critical())
        return {1.0, -g};
    const double kappa = p.lyapunov();
    return p.gamma() + kappa * kappa / complex{kappa, g};
}

inline complex riccati_rhs(complex G, double gamma) { return -(G - gamma) * (1.0 - G); }

inline void check_step(const ModelParams& p, const TimeGrid& grid)
{
    const double stiffness = std::max(p.decay_rate(), 1.0);
    if (!(grid.dt() * stiffness < 0.1))
        throw StepSizeError("dt * max(Gamma, 1) must be < 0.1, got " +
                            std::to_string(grid.dt() * stiffness));
}

/// Classical fixed-step RK4 for the diagonal law from an arbitrary G(0+).
inline DiagonalProfile integrate(const ModelParams& p, const TimeGrid& grid, complex initial)
{
    check_step(p, grid);
    const double gamma = p.gamma();
    const double h = grid.dt();

    DiagonalProfile out{grid, {}, branch_for(p)};
    out.values.reserve(grid.size());
    complex y = initial;
    out.values.push_back(y);
    for (std::size_t i = 0; i < grid.n_steps(); ++i) {
        const complex k1 = riccati_rhs(y, gamma);
        const complex k2 = riccati_rhs(y + 0.5 * h * k1, gamma);
        const complex k3 = riccati_rhs(y + 0.5 * h * k2, gamma);
        const complex k4 = riccati_rhs(y + h * k3, gamma);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(y.real()) || !std::isfinite(y.imag()) || std::abs(y) > 2.0)
            throw NonFiniteError("G left the disk |G| <= 2 at t = " + std::to_string(grid.time(i + 1)));
        out.values.push_back(y);
    }
    return out;
}

inline DiagonalProfile solve_diagonal(const ModelParams& p, const TimeGrid& grid,
                                      Kick kick = Kick::leading_order)
{
    return integrate(p, grid, post_kick_value(p, kick));
}

/// G^W on the two-time plane, built from the diagonal profile.
class WightmanField {
public:
    WightmanField(DiagonalProfile diag, const ModelParams& p)
        : diag_(std::move(diag)), gamma_(p.gamma()), decay_(p.decay_rate())
    {
        if (diag_.values.size() != diag_.grid.size())
            throw DomainError("diagonal profile does not cover its grid");
    }

    const DiagonalProfile& diagonal() const noexcept { return diag_; }
    const TimeGrid& grid() const noexcept { return diag_.grid; }

    /// Value at grid indices (i, j).
    complex at(std::size_t i, std::size_t j) const
    {
        if (i >= diag_.values.size() || j >= diag_.values.size())
            throw OutOfRangeError("grid index beyond the profile");
        const double sep = grid().time(i > j ? i - j : j - i);
        return std::exp(-0.5 * decay_ * sep) * diag_.values[std::min(i, j)];
    }

    /// Value at arbitrary times; off-grid diagonal values use cubic Hermite
    /// interpolation with the exact slope of the diagonal law.
    complex operator()(double t_l, double t_r) const
    {
        return std::exp(-0.5 * decay_ * std::abs(t_l - t_r)) * diag_at(std::min(t_l, t_r), std::max(t_l, t_r));
    }

    double response(double t_l, double t_r) const { return (*this)(t_l, t_r).imag(); }

private:
    complex diag_at(double t, double t_other) const
    {
        const double h = grid().dt();
        const double t_max = grid().t_max();
        const double slack = 1e-9 * h;
        if (!(t >= -slack) || !(t_other <= t_max + slack))
            throw OutOfRangeError("time outside [0, " + std::to_string(t_max) + "]");
        const double s = std::clamp(t, 0.0, t_max) / h;
        auto i = static_cast<std::size_t>(std::floor(s));
        if (i >= grid().n_steps())
            return diag_.values.back();
        const double u = s - static_cast<double>(i);
        if (u < 1e-12)
            return diag_.values[i];
        const complex y0 = diag_.values[i];
        const complex y1 = diag_.values[i + 1];
        const complex m0 = h * riccati_rhs(y0, gamma_);
        const complex m1 = h * riccati_rhs(y1, gamma_);
        const double u2 = u * u;
        const double u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y1 +
               (u3 - u2) * m1;
    }

    DiagonalProfile diag_;
    double gamma_;
    double decay_;
};

inline WightmanField two_time_field(DiagonalProfile diag, const ModelParams& p)
{
    return WightmanField(std::move(diag), p);
}

/// Max over the grid of |G_numeric - G_closed_form|.
inline double validate(const ModelParams& p, const TimeGrid& grid, Kick kick = Kick::leading_order)
{
    if (std::abs(p.g()) > 0.1)
        throw DomainError("validate compares against small-g closed forms; need |g| <= 0.1");
    const DiagonalProfile numeric = solve_diagonal(p, grid, kick);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(numeric.values[i] - analytic::cal_g(grid.time(i), p)));
    return worst;
}

struct ConvergenceReport {
    double dt;
    double coarse_error; // validate() at dt
    double fine_error;   // validate() at dt / 2
    double ratio;        // coarse / fine, ~16 for a 4th-order scheme
};

inline ConvergenceReport convergence_ratio(const ModelParams& p, double t_max, double dt)
{
    const TimeGrid coarse = TimeGrid::make(t_max, dt);
    const double e1 = validate(p, coarse);
    const double e2 = validate(p, coarse.refined());
    return {dt, e1, e2, e1 / e2};
}

} // namespace wormhole::sd
