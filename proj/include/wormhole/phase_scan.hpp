#pragma once

// Time traces and gamma sweeps of the channel, plus location of the two
// teleportation transitions.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wormhole/analytic.hpp"
#include "wormhole/channel_metrics.hpp"
#include "wormhole/model.hpp"
#include "wormhole/parallel.hpp"
#include "wormhole/sd_solver.hpp"

namespace wormhole::scan {

enum class Source { analytic, numeric };

inline std::string_view to_string(Source s) noexcept
{
    return s == Source::analytic ? "analytic" : "numeric";
}

struct ScanOptions {
    Source source = Source::analytic;
    double dt = 1e-3;
    double ns_factor = metrics::kDefaultNoSignalFactor;
    sd::Kick kick = sd::Kick::leading_order;
};

struct TracePoint {
    double t;
    double k;
    double negativity;
    double mutual_info_ln2;
};

using TimeTrace = std::vector<TracePoint>;

struct SweepRow {
    double gamma;
    double g;
    double k_max;
    double t_star;
    double neg_max;
    double mi_max_ln2;
    Regime regime;
};

/// t_max = max(3 t*, 20) with the closed-form t*.
inline TimeGrid default_trace_grid(const ModelParams& p, double dt = 1e-3)
{
    const double t_star = p.g() == 0.0 ? 0.0 : analytic::kmax_and_tstar(p).t_star;
    return TimeGrid::make(std::max(3.0 * t_star, 20.0), dt);
}

inline TracePoint trace_point(double t, double k)
{
    const auto state = metrics::density_from_k(k);
    return {t, k, metrics::negativity(state), metrics::mutual_information(state) / metrics::kLn2};
}

/// Channel metrics along t_L = t_R = t.
inline TimeTrace time_trace(const ModelParams& p, const TimeGrid& grid, Source source,
                            sd::Kick kick = sd::Kick::leading_order)
{
    TimeTrace out;
    out.reserve(grid.size());
    if (source == Source::analytic) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            out.push_back(trace_point(grid.time(i), analytic::response_diag(grid.time(i), p)));
        return out;
    }
    const auto profile = sd::solve_diagonal(p, grid, kick);
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.push_back(trace_point(grid.time(i), profile.response(i)));
    return out;
}

/// Grid maximum of |K| with three-point parabolic refinement around the
/// discrete peak.
inline analytic::Peak grid_peak(const DiagonalProfile& profile)
{
    const auto& v = profile.values;
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i].imag()) > std::abs(v[best].imag()))
            best = i;
    const double h = profile.grid.dt();
    const double y0 = std::abs(v[best].imag());
    if (best == 0 || best + 1 >= v.size())
        return {y0, profile.time(best)};
    const double ym = std::abs(v[best - 1].imag());
    const double yp = std::abs(v[best + 1].imag());
    const double curvature = ym - 2.0 * y0 + yp;
    if (!(curvature < 0.0))
        return {y0, profile.time(best)};
    const double shift = 0.5 * (ym - yp) / curvature;
    return {y0 - 0.25 * (ym - yp) * shift, profile.time(best) + shift * h};
}

inline analytic::Peak peak(const ModelParams& p, const ScanOptions& opts)
{
    if (p.g() == 0.0)
        return {0.0, 0.0};
    if (opts.source == Source::analytic)
        return analytic::kmax_and_tstar(p);
    return grid_peak(sd::solve_diagonal(p, default_trace_grid(p, opts.dt), opts.kick));
}

/// One sweep row. Negativity and mutual information are monotone in |K|,
/// so their maxima along the diagonal sit at the response peak.
inline SweepRow summarize(const ModelParams& p, const ScanOptions& opts = {})
{
    const auto pk = peak(p, opts);
    const auto state = metrics::density_from_k(std::min(pk.k_max, 1.0));
    return {p.gamma(),
            p.g(),
            pk.k_max,
            pk.t_star,
            metrics::negativity(state),
            metrics::mutual_information(state) / metrics::kLn2,
            metrics::classify(std::min(pk.k_max, 1.0), p, opts.ns_factor)};
}

/// One row per gamma, in input order; rows are evaluated concurrently.
inline std::vector<SweepRow> sweep(std::span<const double> gammas, double g, const ScanOptions& opts = {})
{
    if (gammas.empty())
        throw DomainError("sweep needs at least one gamma");
    std::vector<ModelParams> params;
    params.reserve(gammas.size());
    for (double gamma : gammas)
        params.push_back(ModelParams::make(gamma, g));
    return parallel_map(params.size(), [&](std::size_t i) { return summarize(params[i], opts); });
}

inline double neg_max(double gamma, double g, const ScanOptions& opts = {})
{
    return summarize(ModelParams::make(gamma, g), opts).neg_max;
}

namespace detail {

inline void require_small_g(double g)
{
    if (!(std::abs(g) > 0.0) || std::abs(g) > 0.05)
        throw DomainError("transition search needs 0 < |g| <= 0.05");
}

} // namespace detail

/// Quantum-classical transition: bisection on gamma for the zero crossing of
/// the peak negativity over [0, 1).
inline double find_gamma_q(double g, double tol, const ScanOptions& opts = {})
{
    detail::require_small_g(g);
    if (!(tol >= 1e-10))
        throw DomainError("tol must be >= 1e-10");
    double lo = 0.0;
    double hi = 1.0 - 1e-9;
    if (!(neg_max(lo, g, opts) > 0.0) || neg_max(hi, g, opts) > 0.0)
        throw BracketError("peak negativity does not change sign on [0, 1)");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (neg_max(mid, g, opts) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct GammaC {
    double value;
    std::string label;
};

/// Classical/no-signal crossover at finite g: the first gamma where the peak
/// response is no larger than ns_factor * |g|. Tends to 1 as g -> 0.
inline GammaC find_gamma_c(double g, double ns_factor = metrics::kDefaultNoSignalFactor)
{
    detail::require_small_g(g);
    const std::string label = "crossover at finite g";
    auto silent = [&](double gamma) {
        return analytic::kmax_and_tstar(ModelParams::make(gamma, g)).k_max <= ns_factor * std::abs(g);
    };
    if (silent(0.0))
        return {0.0, label};
    if (!silent(1.0))
        return {1.0, label};
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (silent(mid) ? hi : lo) = mid;
    }
    return {hi, label};
}

} // namespace wormhole::scan
