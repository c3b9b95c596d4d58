#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>

#include "wormhole/errors.hpp"

namespace wormhole {

/// Energy unit: J = 1/4. All times are in units of 1/J with this choice.
inline constexpr double kJUnit = 0.25;

/// Response magnitude above which the channel state is entangled.
inline constexpr double kQuantumThreshold = std::numbers::sqrt2 - 1.0;

/// Below this distance from gamma = 1 the critical closed forms are used.
inline constexpr double kCriticalSeam = 1e-12;

/// Channel parameters in the thermodynamic limit at infinite temperature.
///
/// gamma = V/J is the system-environment coupling ratio and g the
/// teleportation coupling. Instances are immutable and always valid.
class ModelParams {
public:
    static ModelParams make(double gamma, double g)
    {
        if (!std::isfinite(gamma) || gamma < 0.0)
            throw DomainError("gamma must be finite and >= 0, got " + std::to_string(gamma));
        if (!std::isfinite(g) || std::abs(g) > std::numbers::pi)
            throw DomainError("|g| must be <= pi, got " + std::to_string(g));
        return ModelParams(gamma, g);
    }

    double gamma() const noexcept { return gamma_; }
    double g() const noexcept { return g_; }
    static constexpr double j_unit() noexcept { return kJUnit; }
    double v_coupling() const noexcept { return gamma_ * kJUnit; }

    /// Gamma = 4(J + V) = 1 + gamma.
    double decay_rate() const noexcept { return 4.0 * (kJUnit + v_coupling()); }
    /// Lyapunov exponent 1 - gamma.
    double lyapunov() const noexcept { return 1.0 - gamma_; }

    bool is_critical() const noexcept { return std::abs(gamma_ - 1.0) < kCriticalSeam; }

    ModelParams with_gamma(double gamma) const { return make(gamma, g_); }
    ModelParams with_g(double g) const { return make(gamma_, g); }

private:
    ModelParams(double gamma, double g) : gamma_(gamma), g_(g) {}

    double gamma_;
    double g_;
};

struct Rates {
    double decay;    // Gamma
    double lyapunov; // kappa
};

inline Rates derived_rates(const ModelParams& p) { return {p.decay_rate(), p.lyapunov()}; }

struct CriticalPoints {
    double gamma_q; // quantum -> classical
    double gamma_c; // classical -> no signal
};

inline constexpr CriticalPoints critical_points() noexcept
{
    return {3.0 - 2.0 * std::numbers::sqrt2, 1.0};
}

/// Ordered: Quantum > Classical > NoSignal.
enum class Regime { no_signal = 0, classical = 1, quantum = 2 };

inline std::string_view to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::quantum: return "Quantum";
    case Regime::classical: return "Classical";
    case Regime::no_signal: return "NoSignal";
    }
    return "?";
}

/// Uniform grid t_i = i*dt, i = 0..n_steps, with n_steps*dt = t_max.
class TimeGrid {
public:
    /// Rounds t_max up to a whole number of steps.
    static TimeGrid make(double t_max, double dt)
    {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw DomainError("time step must be positive");
        if (!(t_max > 0.0) || !std::isfinite(t_max))
            throw DomainError("t_max must be positive");
        auto n = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
        if (n < 1)
            n = 1;
        return TimeGrid(dt, n);
    }

    double dt() const noexcept { return dt_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t size() const noexcept { return n_steps_ + 1; }
    double t_max() const noexcept { return static_cast<double>(n_steps_) * dt_; }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) * dt_; }

    /// Same span, half the step.
    TimeGrid refined() const { return TimeGrid(dt_ / 2.0, 2 * n_steps_); }

private:
    TimeGrid(double dt, std::size_t n) : dt_(dt), n_steps_(n) {}

    double dt_;
    std::size_t n_steps_;
};

} // namespace wormhole
