#pragma once

#include <variant>
#include <vector>

namespace ricdyn {

/// Time-dependent oscillator frequency omega(t) >= 0. omega = 0 is free motion.
///
/// Three shapes are supported:
///   - constant omega0,
///   - piecewise constant: omega = omega_k on [t_k, t_{k+1}), right-continuous,
///     with omega_0 also used before t_0,
///   - sampled: linear interpolation between knots, held constant outside.
class FrequencyProfile {
public:
    struct Segment {
        double t_switch;
        double omega;
    };

    enum class Kind { Constant, PiecewiseConstant, Sampled };

    FrequencyProfile() : FrequencyProfile(constant(1.0)) {}

    static FrequencyProfile constant(double omega0);
    static FrequencyProfile piecewise_constant(std::vector<Segment> segments);
    static FrequencyProfile sampled(std::vector<double> times, std::vector<double> omegas);

    double operator()(double t) const;

    /// d omega / dt. Zero inside constant pieces; the slope of the active
    /// interval for sampled profiles. Jumps contribute nothing.
    double derivative(double t) const;

    Kind kind() const;
    bool is_constant() const;
    /// Only meaningful when is_constant().
    double constant_value() const;
    double max_value() const;

    /// Times where omega or its slope is discontinuous. Integrators stop
    /// exactly on these.
    std::vector<double> breakpoints() const;

    /// Profile t -> omega(t + offset).
    FrequencyProfile shifted(double offset) const;

    const std::vector<Segment>& segments() const;
    const std::vector<double>& sample_times() const;
    const std::vector<double>& sample_values() const;

private:
    struct Constant {
        double omega;
    };
    struct Piecewise {
        std::vector<Segment> segments;
    };
    struct Sampled {
        std::vector<double> times;
        std::vector<double> omegas;
    };

    explicit FrequencyProfile(std::variant<Constant, Piecewise, Sampled> rep)
        : rep_(std::move(rep)) {}

    std::variant<Constant, Piecewise, Sampled> rep_;
};

}  // namespace ricdyn
