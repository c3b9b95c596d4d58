#pragma once

// Brownian couplings held piecewise constant per Trotter slice.
// A path stores the Wiener increments dW of every term; the coupling in a
// slice is dW / dt, so its variance per unit time is the term's rate.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wormhole/ed/majorana.hpp"
#include "wormhole/errors.hpp"
#include "wormhole/model.hpp"

namespace wormhole::ed {

/// Hermitian monomials of one party: chi_j chi_k chi_l psi_a and i chi_j psi_a.
struct TermTable {
    std::vector<PauliString> quartic;
    std::vector<PauliString> bilinear;
    double quartic_rate = 0.0;
    double bilinear_rate = 0.0;

    std::size_t size() const noexcept { return quartic.size() + bilinear.size(); }
    double rate(std::size_t term) const noexcept { return term < quartic.size() ? quartic_rate : bilinear_rate; }
};

/// System Majoranas occupy indices [0, n_sys), environment [n_sys, n_sys + m_env).
inline TermTable make_terms(const MajoranaAlgebra& algebra, int n_sys, int m_env, double gamma)
{
    if (n_sys + m_env != algebra.modes())
        throw DomainError("term table does not match the algebra");
    TermTable t;
    if (m_env == 0)
        return t;
    const double n = n_sys;
    const double m = m_env;
    t.quartic_rate = 2.0 * kJUnit / (m * n * n);
    t.bilinear_rate = gamma * kJUnit / m;
    for (int j = 0; j < n_sys; ++j)
        for (int k = j + 1; k < n_sys; ++k)
            for (int l = k + 1; l < n_sys; ++l)
                for (int a = 0; a < m_env; ++a) {
                    const std::array idx{j, k, l, n_sys + a};
                    t.quartic.push_back(algebra.product(idx));
                }
    if (gamma > 0.0)
        for (int j = 0; j < n_sys; ++j)
            for (int a = 0; a < m_env; ++a) {
                const std::array idx{j, n_sys + a};
                t.bilinear.push_back(algebra.product(idx).scaled({0.0, 1.0}));
            }
    return t;
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for (seed, realization, stream); scheduling cannot change draws.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t realization, std::uint64_t stream)
{
    const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ realization) ^ (stream + 0x51ed270b27dULL));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

/// Full slices of width dt plus a trailing partial slice, covering [0, t].
struct SlicePlan {
    std::size_t full = 0;
    double remainder = 0.0;

    std::size_t count() const noexcept { return full + (remainder > 0.0 ? 1 : 0); }
    double width(std::size_t k, double dt) const noexcept { return k < full ? dt : remainder; }
};

inline SlicePlan plan_slices(double t, double dt)
{
    if (!(t >= 0.0) || !(dt > 0.0))
        throw DomainError("slice plan needs t >= 0 and dt > 0");
    SlicePlan plan;
    const double ratio = t / dt;
    plan.full = static_cast<std::size_t>(std::floor(ratio + 1e-9));
    const double rest = t - static_cast<double>(plan.full) * dt;
    plan.remainder = rest > 1e-9 * dt ? rest : 0.0;
    return plan;
}

class BrownianPath {
public:
    /// Slice k spans [k dt, (k+1) dt); the last slice may be shorter.
    static BrownianPath sample(const TermTable& terms, double dt, double t_max, std::mt19937_64& rng)
    {
        const SlicePlan plan = plan_slices(t_max, dt);
        BrownianPath path;
        path.dt_ = dt;
        path.n_terms_ = terms.size();
        path.widths_.resize(plan.count());
        path.dw_.resize(path.widths_.size() * path.n_terms_);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < path.widths_.size(); ++k) {
            const double width = plan.width(k, dt);
            path.widths_[k] = width;
            for (std::size_t a = 0; a < path.n_terms_; ++a)
                path.dw_[k * path.n_terms_ + a] = std::sqrt(terms.rate(a) * width) * normal(rng);
        }
        return path;
    }

    /// Same path at half the step: each increment is split by a Brownian bridge draw.
    BrownianPath refined(const TermTable& terms, std::mt19937_64& rng) const
    {
        BrownianPath fine;
        fine.dt_ = dt_ / 2.0;
        fine.n_terms_ = n_terms_;
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < widths_.size(); ++k) {
            const double width = widths_[k];
            const bool split = width > fine.dt_ * (1.0 + 1e-9);
            const double first_width = split ? fine.dt_ : width;
            fine.widths_.push_back(first_width);
            if (split)
                fine.widths_.push_back(width - fine.dt_);
            std::vector<double> first(n_terms_), second(n_terms_);
            for (std::size_t a = 0; a < n_terms_; ++a) {
                const double total = dw_[k * n_terms_ + a];
                if (!split) {
                    first[a] = total;
                    continue;
                }
                const double share = first_width / width;
                const double spread = std::sqrt(terms.rate(a) * first_width * (width - first_width) / width);
                first[a] = share * total + spread * normal(rng);
                second[a] = total - first[a];
            }
            fine.dw_.insert(fine.dw_.end(), first.begin(), first.end());
            if (split)
                fine.dw_.insert(fine.dw_.end(), second.begin(), second.end());
        }
        return fine;
    }

    double dt() const noexcept { return dt_; }
    std::size_t slices() const noexcept { return widths_.size(); }
    std::size_t terms() const noexcept { return n_terms_; }
    double width(std::size_t k) const { return widths_.at(k); }

    std::span<const double> increments(std::size_t k) const
    {
        return {dw_.data() + k * n_terms_, n_terms_};
    }

private:
    double dt_ = 0.0;
    std::size_t n_terms_ = 0;
    std::vector<double> widths_;
    std::vector<double> dw_;
};

/// H for a slice of the given width; the right party flips the bilinear sign.
inline Eigen::MatrixXcd slice_hamiltonian(const TermTable& terms, std::span<const double> dw, double width,
                                          std::size_t dim, double bilinear_sign)
{
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < terms.quartic.size(); ++a)
        add_scaled(h, terms.quartic[a], dw[a] / width);
    const std::size_t off = terms.quartic.size();
    for (std::size_t a = 0; a < terms.bilinear.size(); ++a)
        add_scaled(h, terms.bilinear[a], bilinear_sign * dw[off + a] / width);
    return h;
}

namespace detail {

inline Eigen::MatrixXcd dense_evolution(const Eigen::MatrixXcd& h, double tau)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("slice Hamiltonian diagonalization failed");
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<cplx>() * cplx(0.0, -tau)).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

/// exp(-i H tau) for Hermitian H. Parity-even H is split into its two
/// parity blocks, which cuts the diagonalization cost by about four.
inline Eigen::MatrixXcd evolution(const Eigen::MatrixXcd& h, double tau)
{
    const Eigen::Index d = h.rows();
    if (d < 4)
        return detail::dense_evolution(h, tau);
    std::array<std::vector<Eigen::Index>, 2> sector;
    for (Eigen::Index i = 0; i < d; ++i)
        sector[std::popcount(static_cast<std::uint64_t>(i)) & 1].push_back(i);
    double leak = 0.0;
    for (Eigen::Index r : sector[0])
        for (Eigen::Index c : sector[1])
            leak = std::max(leak, std::abs(h(r, c)));
    if (leak > 0.0)
        return detail::dense_evolution(h, tau);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& idx : sector) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd block(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                block(r, c) = h(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
        const Eigen::MatrixXcd ub = detail::dense_evolution(block, tau);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                u(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) = ub(r, c);
    }
    return u;
}

} // namespace wormhole::ed
