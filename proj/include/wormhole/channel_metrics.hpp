#pragma once

// Two-qubit channel state between the reference qubit A and the receiver
// qubit R_S1, built from the response K, and its entanglement measures.
// Basis ordering is (|00>, |01>, |10>, |11>) for (A, R_S1).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "wormhole/model.hpp"

namespace wormhole::metrics {

using Matrix4 = std::array<std::array<double, 4>, 4>;
using Spectrum4 = std::array<double, 4>;

struct ChannelState {
    Matrix4 rho{};
    double k_value = 0.0;
};

inline constexpr double kDefaultNoSignalFactor = 2.0;
inline constexpr double kLn2 = std::numbers::ln2;

inline ChannelState density_from_k(double k)
{
    if (!std::isfinite(k) || std::abs(k) > 1.0 + 1e-12)
        throw DomainError("density_from_k needs |k| <= 1, got " + std::to_string(k));
    ChannelState s;
    s.k_value = k;
    const double k2 = k * k;
    s.rho[0][0] = s.rho[3][3] = 0.25 * (1.0 + k2);
    s.rho[1][1] = s.rho[2][2] = 0.25 * (1.0 - k2);
    s.rho[0][3] = s.rho[3][0] = 0.5 * k;
    return s;
}

inline Matrix4 partial_transpose_a(const Matrix4& rho)
{
    Matrix4 out{};
    for (int a = 0; a < 2; ++a)
        for (int r = 0; r < 2; ++r)
            for (int ap = 0; ap < 2; ++ap)
                for (int rp = 0; rp < 2; ++rp)
                    out[2 * a + r][2 * ap + rp] = rho[2 * ap + r][2 * a + rp];
    return out;
}

inline Matrix4 partial_transpose_r(const Matrix4& rho)
{
    Matrix4 out{};
    for (int a = 0; a < 2; ++a)
        for (int r = 0; r < 2; ++r)
            for (int ap = 0; ap < 2; ++ap)
                for (int rp = 0; rp < 2; ++rp)
                    out[2 * a + r][2 * ap + rp] = rho[2 * a + rp][2 * ap + r];
    return out;
}

/// Eigenvalues of a real symmetric 4x4 matrix by cyclic Jacobi rotations,
/// sorted ascending.
inline Spectrum4 symmetric_eigenvalues(Matrix4 a)
{
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row)
            scale += v * v;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q)
                off += a[p][q] * a[p][q];
        if (off <= 1e-32 * (scale + 1e-300))
            break;
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                if (a[p][q] == 0.0)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 4; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Spectrum4 ev{a[0][0], a[1][1], a[2][2], a[3][3]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Spectrum of the partial transpose of density_from_k(k), sorted ascending.
inline Spectrum4 pt_spectrum_closed_form(double k)
{
    const double k2 = k * k;
    Spectrum4 ev{0.25 * (1.0 + k2), 0.25 * (1.0 + k2), 0.25 * (1.0 - k2) + 0.5 * k,
                 0.25 * (1.0 - k2) - 0.5 * k};
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// (||rho^{T_A}||_1 - 1)/2, i.e. the summed magnitude of negative PT eigenvalues.
inline double negativity(const ChannelState& state)
{
    double sum = 0.0;
    for (double ev : symmetric_eigenvalues(partial_transpose_a(state.rho)))
        if (ev < 0.0)
            sum -= ev;
    return sum;
}

/// Von Neumann entropy in nats, with 0 ln 0 = 0.
inline double entropy(std::span<const double> spectrum)
{
    double s = 0.0;
    for (double p : spectrum)
        if (p > 0.0)
            s -= p * std::log(p);
    return s;
}

namespace detail {

inline std::array<double, 2> eigen2(double a, double b, double d)
{
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    return {mean - rad, mean + rad};
}

} // namespace detail

/// I = S_A + S_R - S_AR in nats.
inline double mutual_information(const ChannelState& state)
{
    const auto& r = state.rho;
    const auto spec_a = detail::eigen2(r[0][0] + r[1][1], r[0][2] + r[1][3], r[2][2] + r[3][3]);
    const auto spec_r = detail::eigen2(r[0][0] + r[2][2], r[0][1] + r[2][3], r[1][1] + r[3][3]);
    const auto spec_ar = symmetric_eigenvalues(r);
    const double mi = entropy(spec_a) + entropy(spec_r) - entropy(spec_ar);
    return std::max(mi, 0.0);
}

/// Quantum above the entanglement threshold; NoSignal when the response is
/// no larger than ns_factor * |g|; Classical in between.
inline Regime classify(double k_max, const ModelParams& p, double ns_factor = kDefaultNoSignalFactor)
{
    if (!(k_max >= 0.0) || k_max > 1.0 + 1e-12)
        throw DomainError("classify needs k_max in [0, 1]");
    if (k_max > kQuantumThreshold)
        return Regime::quantum;
    if (k_max <= ns_factor * std::abs(p.g()))
        return Regime::no_signal;
    return Regime::classical;
}

} // namespace wormhole::metrics
