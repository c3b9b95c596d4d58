#pragma once

// Majorana operators on a register of qubits via the Jordan-Wigner chain:
//   chi_{2k}   = Z_0 ... Z_{k-1} X_k
//   chi_{2k+1} = Z_0 ... Z_{k-1} Y_k
// Operators are kept as phased Pauli strings c X^x Z^z (bit k <-> qubit k),
// which act on basis states as signed permutations.

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wormhole/errors.hpp"

namespace wormhole::ed {

using cplx = std::complex<double>;

struct PauliString {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    cplx phase{1.0, 0.0};

    PauliString operator*(const PauliString& o) const
    {
        // Z^z X^{x'} = (-1)^{|z & x'|} X^{x'} Z^z
        const double sign = (std::popcount(z & o.x) & 1) ? -1.0 : 1.0;
        return {x ^ o.x, z ^ o.z, phase * o.phase * sign};
    }

    PauliString scaled(cplx s) const { return {x, z, phase * s}; }

    /// P|j> = amplitude(j) |j ^ x>.
    cplx amplitude(std::uint64_t j) const { return (std::popcount(z & j) & 1) ? -phase : phase; }

    Eigen::MatrixXcd dense(std::size_t dim) const
    {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        for (std::uint64_t j = 0; j < dim; ++j)
            m(j ^ x, j) = amplitude(j);
        return m;
    }
};

/// Hermitian Majorana operators for one party, chi_j^2 = 1.
class MajoranaAlgebra {
public:
    explicit MajoranaAlgebra(int n_modes) : n_modes_(n_modes)
    {
        if (n_modes < 2 || n_modes % 2 != 0)
            throw DomainError("Majorana count must be even and >= 2");
        if (n_modes > 40)
            throw ResourceError("Majorana count too large for a dense register");
        for (int k = 0; k < n_modes / 2; ++k) {
            const std::uint64_t bit = std::uint64_t{1} << k;
            const std::uint64_t string = bit - 1;
            modes_.push_back({bit, string, {1.0, 0.0}});            // Z..Z X_k
            modes_.push_back({bit, string | bit, {0.0, 1.0}});      // Z..Z (i X Z)_k = Z..Z Y_k
        }
    }

    int modes() const noexcept { return n_modes_; }
    int qubits() const noexcept { return n_modes_ / 2; }
    std::size_t dim() const noexcept { return std::size_t{1} << qubits(); }

    const PauliString& majorana(int j) const { return modes_.at(static_cast<std::size_t>(j)); }

    /// Z on every qubit; anticommutes with every chi_j.
    PauliString parity() const { return {0, dim() - 1, {1.0, 0.0}}; }

    /// Ordered product chi_{i1} chi_{i2} ...
    PauliString product(std::span<const int> indices) const
    {
        PauliString p;
        for (int i : indices)
            p = p * majorana(i);
        return p;
    }

    Eigen::MatrixXcd dense(int j) const { return majorana(j).dense(dim()); }

private:
    int n_modes_;
    std::vector<PauliString> modes_;
};

/// m += coeff * P
inline void add_scaled(Eigen::MatrixXcd& m, const PauliString& p, cplx coeff)
{
    const auto dim = static_cast<std::uint64_t>(m.rows());
    for (std::uint64_t j = 0; j < dim; ++j)
        m(j ^ p.x, j) += coeff * p.amplitude(j);
}

/// P * psi
inline Eigen::MatrixXcd apply_left(const PauliString& p, const Eigen::MatrixXcd& psi)
{
    const auto rows = static_cast<std::uint64_t>(psi.rows());
    Eigen::MatrixXcd out(psi.rows(), psi.cols());
    for (Eigen::Index c = 0; c < psi.cols(); ++c)
        for (std::uint64_t i = 0; i < rows; ++i) {
            const std::uint64_t src = i ^ p.x;
            out(static_cast<Eigen::Index>(i), c) = p.amplitude(src) * psi(static_cast<Eigen::Index>(src), c);
        }
    return out;
}

/// psi * P^T
inline Eigen::MatrixXcd apply_right_transpose(const PauliString& p, const Eigen::MatrixXcd& psi)
{
    const auto cols = static_cast<std::uint64_t>(psi.cols());
    Eigen::MatrixXcd out(psi.rows(), psi.cols());
    for (std::uint64_t i = 0; i < cols; ++i) {
        const std::uint64_t src = i ^ p.x;
        out.col(static_cast<Eigen::Index>(i)) = p.amplitude(src) * psi.col(static_cast<Eigen::Index>(src));
    }
    return out;
}

/// tr(P m)
inline cplx trace_product(const PauliString& p, const Eigen::MatrixXcd& m)
{
    cplx acc{0.0, 0.0};
    const auto dim = static_cast<std::uint64_t>(m.rows());
    for (std::uint64_t i = 0; i < dim; ++i)
        acc += p.amplitude(i) * m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i ^ p.x));
    return acc;
}

} // namespace wormhole::ed
