#pragma once

#include <span>
#include <string>
#include <vector>

#include "horo/fuchsian.hpp"
#include "horo/psl2.hpp"

namespace horo
{

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// θ^G_t(g) = g b_t
GroupElement flow_on_G(const GroupElement& g, double t);
// θ^X_t(Γg) = Γ g b_t
QuotientPoint horocycle_flow(const QuotientPoint& x, double t);

// Positive speed field, evaluated along the carried representative.
//
// Built-ins, parsed from text:
//   const:<c>                              speed = c
//   sin:<base>:<amp>:<freq>:<phase>:<coord> speed = base + amp sin(freq u + phase),
//                                           u the x or log y coordinate of rep·i
class SpeedField
{
public:
    enum class Kind { constant, sinusoid };
    enum class Coord { x, log_y };

    static SpeedField constant(double c);
    static SpeedField sinusoid(double base, double amp, double freq, double phase,
                               Coord coord = Coord::x);
    static SpeedField parse(const std::string& spec);

    double operator()(const GroupElement& rep) const;
    // Speed at a point rep·i of the upper half plane.
    double at(PointH2 p) const;
    double f_min() const;
    double f_max() const;
    std::string describe() const;
    Kind kind() const { return kind_; }

private:
    Kind kind_ = Kind::constant;
    double base_ = 1, amp_ = 0, freq_ = 0, phase_ = 0;
    Coord coord_ = Coord::x;
};

struct TimeChange {
    SpeedField speed;
    double step = 1e-3;

    // Throws ConfigError when step <= 0.
    TimeChange(SpeedField s, double integrator_step);
};

// Solves β'(u) = speed(θ_β(u)(x)), β(0) = 0 by fixed-step RK4.
double beta(const TimeChange& tc, double t, const QuotientPoint& x);
// Advances β(·, x) monotonically in time, reusing the previous endpoint.
class BetaStepper
{
public:
    BetaStepper(const TimeChange& tc, const QuotientPoint& x) : tc_(tc), rep_(x.rep) {}
    // Requires t >= the previous time (starting at 0).
    double advance_to(double t);

private:
    const TimeChange& tc_;
    GroupElement rep_;
    double u_ = 0;
    double b_ = 0;
};

// β along sorted non-negative times, integrated incrementally.
std::vector<double> beta_path(const TimeChange& tc, const QuotientPoint& x,
                              std::span<const double> times);
// Inverse of β in the time slot: beta(alpha(t, x), x) = t.
double alpha(const TimeChange& tc, double t, const QuotientPoint& x);
// ψ_t(x) = θ_β(t,x)(x)
QuotientPoint psi(const TimeChange& tc, double t, const QuotientPoint& x);

} // namespace horo
