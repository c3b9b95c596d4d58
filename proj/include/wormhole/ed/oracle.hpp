#pragma once

// Exact simulation of the two-sided protocol on small Brownian SYK clusters.
//
// A two-party state is stored as a d x d matrix psi(i_L, i_R) over the
// party registers. An L operator acts as O psi; an R operator acts as
// psi O^T, and odd R operators also pick up the L parity P_L on the left.
// The left party's path over [-t, 0] is replayed time-reflected by the
// right party over [0, t]: slice k is used at |time| inside slice k.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wormhole/ed/brownian.hpp"
#include "wormhole/ed/majorana.hpp"
#include "wormhole/errors.hpp"
#include "wormhole/model.hpp"
#include "wormhole/parallel.hpp"

namespace wormhole::ed {

inline constexpr int kMaxProtocolQubits = 20;
inline constexpr int kMaxSizeModes = 12;
inline constexpr double kTrotterTolerance = 1e-3;

struct OracleConfig {
    int n_sys = 4;
    int m_env = 4;
    double gamma = 0.0;
    double g = 0.0;
    double dt_trotter = 0.01;
    double t_l = 0.0;
    double t_r = 0.0;
    int n_samples = 1;
    std::uint64_t seed = 0;
    bool convergence_check = true;

    int modes() const noexcept { return n_sys + m_env; }
    /// Both parties plus the A and Q qubits.
    int protocol_qubits() const noexcept { return modes() + 2; }
};

inline void validate(const OracleConfig& c)
{
    if (c.n_sys < 2 || c.n_sys % 2 != 0)
        throw DomainError("n_sys must be even and >= 2");
    if (c.m_env < 0 || c.m_env % 2 != 0)
        throw DomainError("m_env must be even and >= 0");
    if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma))
        throw DomainError("gamma must be finite and >= 0");
    if (!std::isfinite(c.g) || std::abs(c.g) > std::numbers::pi)
        throw DomainError("g must satisfy |g| <= pi");
    if (!(c.dt_trotter > 0.0) || !std::isfinite(c.dt_trotter))
        throw DomainError("dt_trotter must be positive");
    if (!(c.t_l >= 0.0) || !(c.t_r >= 0.0) || !std::isfinite(c.t_l) || !std::isfinite(c.t_r))
        throw DomainError("protocol times must be finite and >= 0");
    if (c.n_samples < 1)
        throw DomainError("n_samples must be >= 1");
    if (c.protocol_qubits() > kMaxProtocolQubits)
        throw ResourceError("Hilbert dimension 2^" + std::to_string(c.protocol_qubits()) + " exceeds 2^" +
                            std::to_string(kMaxProtocolQubits));
}

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::vector<double> samples;
};

inline Estimate estimate(std::vector<double> samples)
{
    Estimate e;
    const auto n = static_cast<double>(samples.size());
    for (double s : samples)
        e.mean += s;
    e.mean /= n;
    if (samples.size() > 1) {
        double var = 0.0;
        for (double s : samples)
            var += (s - e.mean) * (s - e.mean);
        e.std_error = std::sqrt(var / (n - 1.0) / n);
    }
    e.samples = std::move(samples);
    return e;
}

namespace detail {

inline Eigen::MatrixXcd row_parity(const Eigen::MatrixXcd& psi)
{
    Eigen::MatrixXcd out = psi;
    for (Eigen::Index i = 0; i < psi.rows(); ++i)
        if (std::popcount(static_cast<std::uint64_t>(i)) & 1)
            out.row(i) *= -1.0;
    return out;
}

inline double overlap_re(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

inline cplx overlap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    return (a.conjugate().cwiseProduct(b)).sum();
}

} // namespace detail

/// Per-configuration data shared read-only by all realizations.
class OracleSetup {
public:
    explicit OracleSetup(OracleConfig config)
        : config_((validate(config), config)),
          algebra_(config.modes()),
          terms_(make_terms(algebra_, config.n_sys, config.m_env, config.gamma))
    {
        epr_ = build_epr_state();
    }

    const OracleConfig& config() const noexcept { return config_; }
    const MajoranaAlgebra& algebra() const noexcept { return algebra_; }
    const TermTable& terms() const noexcept { return terms_; }
    std::size_t dim() const noexcept { return algebra_.dim(); }
    const Eigen::MatrixXcd& epr() const noexcept { return epr_; }

    /// chi_L psi
    Eigen::MatrixXcd apply_l(int j, const Eigen::MatrixXcd& psi) const { return apply_left(algebra_.majorana(j), psi); }

    /// chi_R psi = P_L psi chi^T
    Eigen::MatrixXcd apply_r(int j, const Eigen::MatrixXcd& psi) const
    {
        return detail::row_parity(apply_right_transpose(algebra_.majorana(j), psi));
    }

    /// max_j || (chi_{j,L} + i chi_{j,R}) psi ||
    double annihilation_residual(const Eigen::MatrixXcd& psi) const
    {
        double worst = 0.0;
        for (int j = 0; j < algebra_.modes(); ++j)
            worst = std::max(worst, (apply_l(j, psi) + cplx(0.0, 1.0) * apply_r(j, psi)).norm());
        return worst;
    }

    /// prod_j (cos(g/2) - s sin(g/2) chi_{j,L} chi_{j,R}) over system modes; s = -1 gives the adjoint.
    Eigen::MatrixXcd couple(const Eigen::MatrixXcd& psi, double sign) const
    {
        const double c = std::cos(config_.g / 2.0);
        const double s = sign * std::sin(config_.g / 2.0);
        Eigen::MatrixXcd out = psi;
        for (int j = 0; j < config_.n_sys; ++j)
            out = c * out - s * apply_l(j, apply_r(j, out));
        return out;
    }

private:
    Eigen::MatrixXcd project(Eigen::MatrixXcd psi) const
    {
        const cplx i{0.0, 1.0};
        for (int j = 0; j < algebra_.modes(); ++j) {
            // c c^dagger with c = (chi_L + i chi_R) / 2
            const Eigen::MatrixXcd cd = 0.5 * (apply_l(j, psi) - i * apply_r(j, psi));
            psi = 0.5 * (apply_l(j, cd) + i * apply_r(j, cd));
        }
        return psi;
    }

    Eigen::MatrixXcd build_epr_state() const
    {
        const auto d = static_cast<Eigen::Index>(dim());
        std::mt19937_64 rng(0x5eedULL);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto reference = [&] {
            Eigen::MatrixXcd m(d, d);
            for (Eigen::Index c = 0; c < d; ++c)
                for (Eigen::Index r = 0; r < d; ++r)
                    m(r, c) = cplx(normal(rng), normal(rng));
            return m;
        };
        Eigen::MatrixXcd a = project(reference());
        Eigen::MatrixXcd b = project(reference());
        const double na = a.norm();
        const double nb = b.norm();
        if (na < 1e-8 || nb < 1e-8)
            throw DegeneracyError("annihilator null space is empty");
        a /= na;
        b /= nb;
        if (std::abs(std::abs(detail::overlap(a, b)) - 1.0) > 1e-9)
            throw DegeneracyError("annihilator null space is not one-dimensional");
        // Fix the global phase so the largest amplitude is real positive.
        Eigen::Index r = 0, c = 0;
        a.cwiseAbs().maxCoeff(&r, &c);
        a *= std::conj(a(r, c)) / std::abs(a(r, c));
        if (annihilation_residual(a) > 1e-10)
            throw DegeneracyError("EPR projection failed to converge");
        return a;
    }

    OracleConfig config_;
    MajoranaAlgebra algebra_;
    TermTable terms_;
    Eigen::MatrixXcd epr_;
};

/// Normalized state annihilated by every chi_{j,L} + i chi_{j,R}.
inline Eigen::MatrixXcd build_epr(const OracleSetup& setup) { return setup.epr(); }

/// One slice's (H_L, H_R) drawn from rng.
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sample_hamiltonian_step(const OracleConfig& config,
                                                                             std::mt19937_64& rng)
{
    validate(config);
    const MajoranaAlgebra algebra(config.modes());
    const TermTable terms = make_terms(algebra, config.n_sys, config.m_env, config.gamma);
    const BrownianPath path = BrownianPath::sample(terms, config.dt_trotter, config.dt_trotter, rng);
    const auto dw = path.increments(0);
    return {slice_hamiltonian(terms, dw, config.dt_trotter, algebra.dim(), 1.0),
            slice_hamiltonian(terms, dw, config.dt_trotter, algebra.dim(), -1.0)};
}

enum class Side { left, right };

/// One disorder realization: a fixed path and the evolution operators it induces.
class Realization {
public:
    Realization(const OracleSetup& setup, BrownianPath path) : setup_(&setup), path_(std::move(path)) {}

    static Realization draw(const OracleSetup& setup, std::size_t index)
    {
        const auto& c = setup.config();
        auto rng = make_stream(c.seed, index, 0);
        return {setup, BrownianPath::sample(setup.terms(), c.dt_trotter, std::max(c.t_l, c.t_r), rng)};
    }

    /// The same path at half the Trotter step.
    Realization refined(std::size_t index) const
    {
        auto rng = make_stream(setup_->config().seed, index, 1);
        return {*setup_, path_.refined(setup_->terms(), rng)};
    }

    const BrownianPath& path() const noexcept { return path_; }

    /// Pieces (slice, duration) covering [0, t].
    std::vector<std::pair<std::size_t, double>> pieces(double t) const
    {
        std::vector<std::pair<std::size_t, double>> out;
        double start = 0.0;
        for (std::size_t k = 0; k < path_.slices() && t - start > 1e-12; ++k) {
            const double w = path_.width(k);
            out.emplace_back(k, std::min(w, t - start));
            start += w;
        }
        if (t - start > 1e-9)
            throw OutOfRangeError("time beyond the sampled path");
        return out;
    }

    Eigen::MatrixXcd hamiltonian(Side side, std::size_t k) const
    {
        return slice_hamiltonian(setup_->terms(), path_.increments(k), path_.width(k), setup_->dim(),
                                 side == Side::left ? 1.0 : -1.0);
    }

    Eigen::MatrixXcd slice_unitary(Side side, std::size_t k, double tau) const
    {
        if (setup_->terms().size() == 0)
            return identity();
        return evolution(hamiltonian(side, k), tau);
    }

    /// u_0 u_1 ... : chi(-t) = W chi W^dagger for the left party.
    Eigen::MatrixXcd left_backward(double t) const
    {
        Eigen::MatrixXcd w = identity();
        for (const auto& [k, tau] : pieces(t))
            w = w * slice_unitary(Side::left, k, tau);
        return w;
    }

    /// ... u_1 u_0 : forward evolution of the right party over [0, t].
    Eigen::MatrixXcd right_forward(double t) const
    {
        Eigen::MatrixXcd s = identity();
        for (const auto& [k, tau] : pieces(t))
            s = slice_unitary(Side::right, k, tau) * s;
        return s;
    }

    /// chi_{1,L}(-t) as a party matrix.
    Eigen::MatrixXcd left_operator(double t) const
    {
        const Eigen::MatrixXcd w = left_backward(t);
        return w * setup_->algebra().dense(0) * w.adjoint();
    }

    /// Re <EPR| chi_{1,L}(-t_L) U^dagger chi_{1,R}(t_R) U |EPR>, the anticommutator mean.
    double kubo(double t_l, double t_r) const
    {
        const Eigen::MatrixXcd& e = setup_->epr();
        const Eigen::MatrixXcd alpha = left_operator(t_l) * e;
        const Eigen::MatrixXcd s = right_forward(t_r);
        const Eigen::MatrixXcd b = s.adjoint() * setup_->algebra().dense(0) * s;
        Eigen::MatrixXcd phi = setup_->couple(e, 1.0);
        phi = detail::row_parity(phi * b.transpose());
        phi = setup_->couple(phi, -1.0);
        return detail::overlap_re(alpha, phi);
    }

private:
    Eigen::MatrixXcd identity() const
    {
        const auto d = static_cast<Eigen::Index>(setup_->dim());
        return Eigen::MatrixXcd::Identity(d, d);
    }

    const OracleSetup* setup_;
    BrownianPath path_;
};

/// Throws TrotterError when halving dt_trotter moves realization 0 by more than the tolerance.
inline double trotter_check(const OracleSetup& setup, const Realization& first)
{
    const auto& c = setup.config();
    const double coarse = first.kubo(c.t_l, c.t_r);
    const double fine = first.refined(0).kubo(c.t_l, c.t_r);
    const double diff = std::abs(coarse - fine);
    if (diff > kTrotterTolerance)
        throw TrotterError("halving dt_trotter changed K by " + std::to_string(diff));
    return diff;
}

inline Estimate kubo_response(const OracleConfig& config)
{
    const OracleSetup setup(config);
    auto samples = parallel_map(static_cast<std::size_t>(config.n_samples), [&](std::size_t r) {
        const Realization real = Realization::draw(setup, r);
        if (r == 0 && config.convergence_check)
            trotter_check(setup, real);
        return real.kubo(config.t_l, config.t_r);
    });
    return estimate(std::move(samples));
}

using Matrix4c = Eigen::Matrix4cd;

struct ProtocolRun {
    Matrix4c rho = Matrix4c::Zero();
    double k = 0.0;
    double norm = 1.0;
};

namespace detail {

// Components psi[2a + q]: a = qubit A, q = qubit Q.
using Components = std::array<Eigen::MatrixXcd, 4>;

inline void evolve(Components& psi, const Eigen::MatrixXcd& ul, const Eigen::MatrixXcd& ur_t)
{
    for (auto& p : psi)
        p = ul * p * ur_t;
}

/// SWAP of qubit Q with L qubit 0 (the mode pair chi_{1,L}, chi_{2,L}).
inline void swap_q(Components& psi)
{
    Components out;
    for (int a = 0; a < 2; ++a)
        for (int q = 0; q < 2; ++q) {
            Eigen::MatrixXcd& dst = out[static_cast<std::size_t>(2 * a + q)];
            dst.resize(psi[0].rows(), psi[0].cols());
            for (Eigen::Index i = 0; i < dst.rows(); ++i) {
                const int b = static_cast<int>(i & 1);
                const Eigen::Index src = (i & ~Eigen::Index{1}) | q;
                dst.row(i) = psi[static_cast<std::size_t>(2 * a + b)].row(src);
            }
        }
    psi = std::move(out);
}

inline std::array<Eigen::Matrix2cd, 4> paulis()
{
    const cplx i{0.0, 1.0};
    Eigen::Matrix2cd s0, sx, sy, sz;
    s0 << 1, 0, 0, 1;
    sx << 0, 1, 1, 0;
    sy << 0, -i, i, 0;
    sz << 1, 0, 0, -1;
    return {s0, sx, sy, sz};
}

} // namespace detail

/// Full state-vector protocol for one realization.
inline ProtocolRun run_protocol_once(const OracleSetup& setup, const Realization& real)
{
    const auto& c = setup.config();
    const double root_half = std::sqrt(0.5);
    detail::Components psi;
    for (auto& p : psi)
        p = Eigen::MatrixXcd::Zero(setup.epr().rows(), setup.epr().cols());
    psi[0] = root_half * setup.epr();
    psi[3] = root_half * setup.epr();

    const auto back = real.pieces(c.t_l);
    std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>> units;
    units.reserve(back.size());
    for (const auto& [k, tau] : back)
        units.emplace_back(real.slice_unitary(Side::left, k, tau), real.slice_unitary(Side::right, k, tau));

    for (const auto& [ul, ur] : units)
        detail::evolve(psi, ul.adjoint(), ur.conjugate());
    detail::swap_q(psi);
    for (auto it = units.rbegin(); it != units.rend(); ++it)
        detail::evolve(psi, it->first, it->second.transpose());

    for (auto& p : psi)
        p = setup.couple(p, 1.0);

    for (const auto& [k, tau] : real.pieces(c.t_r))
        detail::evolve(psi, real.slice_unitary(Side::left, k, tau), real.slice_unitary(Side::right, k, tau).transpose());

    // R_S1 Pauli set built from chi_{1,R}, chi_{2,R}.
    const MajoranaAlgebra& alg = setup.algebra();
    const PauliString z_r = (alg.majorana(0) * alg.majorana(1)).scaled({0.0, -1.0});
    auto tau_apply = [&](int b, const Eigen::MatrixXcd& p) -> Eigen::MatrixXcd {
        switch (b) {
        case 1:
            return setup.apply_r(0, p);
        case 2:
            return setup.apply_r(1, p);
        case 3:
            return apply_right_transpose(z_r, p);
        default:
            return p;
        }
    };

    const auto sigma = detail::paulis();
    ProtocolRun run;
    for (int b = 0; b < 4; ++b) {
        detail::Components tb;
        for (std::size_t n = 0; n < 4; ++n)
            tb[n] = tau_apply(b, psi[n]);
        for (int a = 0; a < 4; ++a) {
            cplx expect{0.0, 0.0};
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) {
                    const cplx s = sigma[static_cast<std::size_t>(a)](a1, a2);
                    if (s == cplx{0.0, 0.0})
                        continue;
                    for (int q = 0; q < 2; ++q)
                        expect += s * detail::overlap(psi[static_cast<std::size_t>(2 * a1 + q)],
                                                      tb[static_cast<std::size_t>(2 * a2 + q)]);
                }
            Matrix4c kron;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l)
                            kron(2 * i + j, 2 * k + l) =
                                sigma[static_cast<std::size_t>(a)](i, k) * sigma[static_cast<std::size_t>(b)](j, l);
            run.rho += 0.25 * expect * kron;
        }
    }
    double norm2 = 0.0;
    for (const auto& p : psi)
        norm2 += p.squaredNorm();
    run.norm = std::sqrt(norm2);
    run.k = real.kubo(c.t_l, c.t_r);
    return run;
}

struct ProtocolResult {
    Matrix4c rho = Matrix4c::Zero();
    Estimate k;
    std::vector<Matrix4c> rho_samples;
    std::vector<double> norms;
};

inline ProtocolResult run_protocol(const OracleConfig& config)
{
    const OracleSetup setup(config);
    auto runs = parallel_map(static_cast<std::size_t>(config.n_samples), [&](std::size_t r) {
        const Realization real = Realization::draw(setup, r);
        if (r == 0 && config.convergence_check)
            trotter_check(setup, real);
        return run_protocol_once(setup, real);
    });
    ProtocolResult out;
    std::vector<double> ks;
    for (const auto& run : runs) {
        out.rho += run.rho;
        out.rho_samples.push_back(run.rho);
        out.norms.push_back(run.norm);
        ks.push_back(run.k);
    }
    out.rho /= static_cast<double>(runs.size());
    out.k = estimate(std::move(ks));
    return out;
}

/// Expansion of a party operator over Hermitian Majorana strings.
struct SizeWavefunction {
    std::vector<double> coefficients; // indexed by subset mask
    std::vector<int> sizes;           // system factors in each string
    int n0 = 0;

    double weight() const
    {
        double w = 0.0;
        for (double c : coefficients)
            w += c * c;
        return w;
    }

    double mean_size() const
    {
        double s = 0.0;
        for (std::size_t m = 0; m < coefficients.size(); ++m)
            s += (sizes[m] - n0) * coefficients[m] * coefficients[m];
        return s;
    }
};

/// Gamma_S = eta chi_{i1} ... chi_{ik} with eta chosen so Gamma_S is Hermitian.
inline std::vector<PauliString> hermitian_strings(const MajoranaAlgebra& algebra)
{
    const int n = algebra.modes();
    if (n > kMaxSizeModes)
        throw BasisOverflowError("string basis needs at most " + std::to_string(kMaxSizeModes) + " modes");
    const std::size_t count = std::size_t{1} << n;
    std::vector<PauliString> ordered(count);
    for (std::size_t m = 1; m < count; ++m) {
        const int top = std::bit_width(m) - 1;
        ordered[m] = ordered[m & ~(std::size_t{1} << top)] * algebra.majorana(top);
    }
    for (std::size_t m = 0; m < count; ++m) {
        const int k = std::popcount(m);
        if ((k * (k - 1) / 2) % 2 == 1)
            ordered[m] = ordered[m].scaled({0.0, 1.0});
    }
    return ordered;
}

inline SizeWavefunction expand_operator(const std::vector<PauliString>& strings, int n_sys,
                                        const Eigen::MatrixXcd& op)
{
    const auto d = static_cast<double>(op.rows());
    const std::uint64_t sys_mask = (std::uint64_t{1} << n_sys) - 1;
    SizeWavefunction w;
    w.coefficients.resize(strings.size());
    w.sizes.resize(strings.size());
    for (std::size_t m = 0; m < strings.size(); ++m) {
        w.coefficients[m] = trace_product(strings[m], op).real() / d;
        w.sizes[m] = std::popcount(m & sys_mask);
    }
    return w;
}

struct SizeCheck {
    Estimate k_size;
    Estimate k_kubo;
    double max_abs_diff = 0.0;
};

/// -Im sum_{n_S > 0} e^{-i g n_S} c_S(-t_L) c_S(-t_R)
inline double size_sum(const SizeWavefunction& a, const SizeWavefunction& b, double g)
{
    double acc = 0.0;
    for (std::size_t m = 0; m < a.coefficients.size(); ++m) {
        const int n = a.sizes[m] - a.n0;
        if (n <= 0)
            continue;
        acc += std::sin(g * n) * a.coefficients[m] * b.coefficients[m];
    }
    return acc;
}

inline SizeCheck size_representation_response(const OracleConfig& config)
{
    validate(config);
    if (config.modes() > kMaxSizeModes)
        throw BasisOverflowError("n_sys + m_env must be <= " + std::to_string(kMaxSizeModes));
    const OracleSetup setup(config);
    const auto strings = hermitian_strings(setup.algebra());
    auto pairs = parallel_map(static_cast<std::size_t>(config.n_samples), [&](std::size_t r) {
        const Realization real = Realization::draw(setup, r);
        if (r == 0 && config.convergence_check)
            trotter_check(setup, real);
        const Eigen::MatrixXcd op_l = real.left_operator(config.t_l);
        const Eigen::MatrixXcd op_r = config.t_r == config.t_l ? op_l : real.left_operator(config.t_r);
        const SizeWavefunction a = expand_operator(strings, config.n_sys, op_l);
        const SizeWavefunction b = expand_operator(strings, config.n_sys, op_r);
        return std::pair{size_sum(a, b, config.g), real.kubo(config.t_l, config.t_r)};
    });
    std::vector<double> ks, kk;
    SizeCheck out;
    for (const auto& [s, k] : pairs) {
        ks.push_back(s);
        kk.push_back(k);
        out.max_abs_diff = std::max(out.max_abs_diff, std::abs(s - k));
    }
    out.k_size = estimate(std::move(ks));
    out.k_kubo = estimate(std::move(kk));
    return out;
}

/// Disorder-averaged mean shifted size of chi_{1,L}(t).
inline Estimate mean_shifted_size(const OracleConfig& config, double t)
{
    validate(config);
    if (config.modes() > kMaxSizeModes)
        throw BasisOverflowError("n_sys + m_env must be <= " + std::to_string(kMaxSizeModes));
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("t must be finite and >= 0");
    OracleConfig c = config;
    c.t_l = t;
    c.t_r = t;
    const OracleSetup setup(c);
    const auto strings = hermitian_strings(setup.algebra());
    auto sizes = parallel_map(static_cast<std::size_t>(c.n_samples), [&](std::size_t r) {
        const Realization real = Realization::draw(setup, r);
        return expand_operator(strings, c.n_sys, real.left_operator(t)).mean_size();
    });
    return estimate(std::move(sizes));
}

struct ConventionReport {
    double annihilation_residual = 0.0;
    double k_free = 0.0;
};

/// Startup self-test: EPR annihilation and K(0,0) = +sin g for the free rotation.
inline ConventionReport verify_conventions()
{
    OracleConfig c;
    c.n_sys = 2;
    c.m_env = 0;
    c.g = 0.2;
    c.convergence_check = false;
    const OracleSetup setup(c);
    ConventionReport rep;
    rep.annihilation_residual = setup.annihilation_residual(setup.epr());
    rep.k_free = Realization::draw(setup, 0).kubo(0.0, 0.0);
    if (rep.annihilation_residual > 1e-10 || std::abs(rep.k_free - std::sin(c.g)) > 1e-10)
        throw Error("ED convention self-test failed");
    return rep;
}

} // namespace wormhole::ed
