#pragma once

#include <complex>
#include <vector>

#include "wormhole/model.hpp"

namespace wormhole {

enum class Branch { generic, critical };

inline Branch branch_for(const ModelParams& p) noexcept
{
    return p.is_critical() ? Branch::critical : Branch::generic;
}

/// Diagonal Wightman profile G(t) = G^W(t, t) sampled on a grid.
struct DiagonalProfile {
    TimeGrid grid;
    std::vector<std::complex<double>> values;
    Branch branch = Branch::generic;

    double time(std::size_t i) const noexcept { return grid.time(i); }
    /// The response K(t, t) = Im G(t).
    double response(std::size_t i) const { return values.at(i).imag(); }
};

} // namespace wormhole
