#include "horo/flows.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace horo
{

GroupElement flow_on_G(const GroupElement& g, double t) { return compose(g, horocycle_element(t)); }

QuotientPoint horocycle_flow(const QuotientPoint& x, double t)
{
    return {flow_on_G(x.rep, t), x.group};
}

SpeedField SpeedField::constant(double c)
{
    if (!(c > 0) || !std::isfinite(c)) {
        throw ConfigError("constant speed must be finite and > 0");
    }
    SpeedField f;
    f.kind_ = Kind::constant;
    f.base_ = c;
    return f;
}

SpeedField SpeedField::sinusoid(double base, double amp, double freq, double phase, Coord coord)
{
    if (!std::isfinite(base) || !std::isfinite(amp) || !std::isfinite(freq) ||
        !std::isfinite(phase)) {
        throw ConfigError("sinusoid speed parameters must be finite");
    }
    if (!(base - std::abs(amp) > 0)) {
        throw ConfigError("sinusoid speed needs base > |amp| to stay positive");
    }
    SpeedField f;
    f.kind_ = Kind::sinusoid;
    f.base_ = base;
    f.amp_ = amp;
    f.freq_ = freq;
    f.phase_ = phase;
    f.coord_ = coord;
    return f;
}

SpeedField SpeedField::parse(const std::string& spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        parts.push_back(tok);
    }
    auto num = [&](std::size_t i) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(parts.at(i), &pos);
            if (pos != parts[i].size()) {
                throw ConfigError("");
            }
            return v;
        } catch (const std::exception&) {
            throw ConfigError("malformed speed field spec: " + spec);
        }
    };
    if (!parts.empty() && parts[0] == "const" && parts.size() == 2) {
        return constant(num(1));
    }
    if (!parts.empty() && parts[0] == "sin" && (parts.size() == 5 || parts.size() == 6)) {
        Coord coord = Coord::x;
        if (parts.size() == 6) {
            if (parts[5] == "x") {
                coord = Coord::x;
            } else if (parts[5] == "logy") {
                coord = Coord::log_y;
            } else {
                throw ConfigError("speed coordinate must be x or logy: " + spec);
            }
        }
        return sinusoid(num(1), num(2), num(3), num(4), coord);
    }
    throw ConfigError("unknown speed field spec: " + spec +
                      " (expected const:<c> or sin:<base>:<amp>:<freq>:<phase>[:x|logy])");
}

double SpeedField::operator()(const GroupElement& rep) const { return at(mobius(rep, {0, 1})); }

double SpeedField::at(PointH2 p) const
{
    if (kind_ == Kind::constant) {
        return base_;
    }
    const double u = coord_ == Coord::x ? p.x : std::log(p.y);
    return base_ + amp_ * std::sin(freq_ * u + phase_);
}

double SpeedField::f_min() const { return base_ - std::abs(amp_); }
double SpeedField::f_max() const { return base_ + std::abs(amp_); }

std::string SpeedField::describe() const
{
    char buf[160];
    if (kind_ == Kind::constant) {
        std::snprintf(buf, sizeof(buf), "const:%.17g", base_);
    } else {
        std::snprintf(buf, sizeof(buf), "sin:%.17g:%.17g:%.17g:%.17g:%s", base_, amp_, freq_,
                      phase_, coord_ == Coord::x ? "x" : "logy");
    }
    return buf;
}

TimeChange::TimeChange(SpeedField s, double integrator_step) : speed(s), step(integrator_step)
{
    if (!(integrator_step > 0) || !std::isfinite(integrator_step)) {
        throw ConfigError("integrator step must be > 0");
    }
}

namespace
{

// One RK4 step of b' = speed(rep b_b).
double rk4_step(const TimeChange& tc, const GroupElement& rep, double b, double h)
{
    // rep b_v · i = rep · (v + i), no composition needed
    auto f = [&](double v) { return tc.speed.at(mobius(rep, {v, 1})); };
    const double k1 = f(b);
    const double k2 = f(b + 0.5 * h * k1);
    const double k3 = f(b + 0.5 * h * k2);
    const double k4 = f(b + h * k3);
    return b + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Integrates from (u0, b0) to u1 with full steps of tc.step and a final partial step.
double integrate(const TimeChange& tc, const GroupElement& rep, double u0, double b0, double u1)
{
    if (tc.speed.kind() == SpeedField::Kind::constant) {
        return b0 + tc.speed(rep) * (u1 - u0);
    }
    const double span = u1 - u0;
    const double dir = span < 0 ? -1.0 : 1.0;
    const double len = std::abs(span);
    const auto full = static_cast<long long>(std::floor(len / tc.step));
    double b = b0;
    for (long long i = 0; i < full; ++i) {
        b = rk4_step(tc, rep, b, dir * tc.step);
    }
    const double rest = len - static_cast<double>(full) * tc.step;
    if (rest > 0) {
        b = rk4_step(tc, rep, b, dir * rest);
    }
    return b;
}

} // namespace

double beta(const TimeChange& tc, double t, const QuotientPoint& x)
{
    return integrate(tc, x.rep, 0, 0, t);
}

double BetaStepper::advance_to(double t)
{
    if (t < u_) {
        throw ConfigError("BetaStepper needs non-decreasing non-negative times");
    }
    b_ = integrate(tc_, rep_, u_, b_, t);
    u_ = t;
    return b_;
}

std::vector<double> beta_path(const TimeChange& tc, const QuotientPoint& x,
                              std::span<const double> times)
{
    std::vector<double> out;
    out.reserve(times.size());
    BetaStepper stepper(tc, x);
    for (double t : times) {
        out.push_back(stepper.advance_to(t));
    }
    return out;
}

double alpha(const TimeChange& tc, double t, const QuotientPoint& x)
{
    if (t == 0) {
        return 0;
    }
    if (tc.speed.kind() == SpeedField::Kind::constant) {
        return t / tc.speed(x.rep);
    }
    // β(u)/u ∈ [f_min, f_max] brackets the root.
    double lo = t > 0 ? t / tc.speed.f_max() : t / tc.speed.f_min();
    double hi = t > 0 ? t / tc.speed.f_min() : t / tc.speed.f_max();
    double b_lo = beta(tc, lo, x);
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double b_mid = beta(tc, mid, x);
        if ((b_mid - t) * (b_lo - t) <= 0) {
            hi = mid;
        } else {
            lo = mid;
            b_lo = b_mid;
        }
    }
    // Newton polish; β'(u) is the speed at θ_β(u)(x).
    const double u = 0.5 * (lo + hi);
    const double bu = beta(tc, u, x);
    const double slope = tc.speed(flow_on_G(x.rep, bu));
    return u - (bu - t) / slope;
}

QuotientPoint psi(const TimeChange& tc, double t, const QuotientPoint& x)
{
    return horocycle_flow(x, beta(tc, t, x));
}

} // namespace horo
