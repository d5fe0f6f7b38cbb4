#include "horo/psl2.hpp"

#include <algorithm>
#include <limits>

namespace horo
{

namespace
{

constexpr double det_renorm_tol = 1e-14;

// Value of sinh(r)/r at r = sqrt(q) (q > 0) or sin(r)/r at r = sqrt(-q).
double sinc_q(double q)
{
    if (std::abs(q) < 1e-8) {
        return 1 + q / 6 + q * q / 120;
    }
    if (q > 0) {
        const double r = std::sqrt(q);
        return std::sinh(r) / r;
    }
    const double r = std::sqrt(-q);
    return std::sin(r) / r;
}

double cosc_q(double q)
{
    if (std::abs(q) < 1e-8) {
        return 1 + q / 2 + q * q / 24;
    }
    return q > 0 ? std::cosh(std::sqrt(q)) : std::cos(std::sqrt(-q));
}

} // namespace

Mat2 operator*(const Mat2& x, const Mat2& y)
{
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

GroupElement GroupElement::canonicalize(const Mat2& in)
{
    if (!std::isfinite(in.a) || !std::isfinite(in.b) || !std::isfinite(in.c) ||
        !std::isfinite(in.d)) {
        throw DomainError("group element has a non-finite entry");
    }
    Mat2 m = in;
    const double det = m.det();
    // With large entries the computed determinant is dominated by rounding; a
    // deviation inside that noise is not evidence of a non-unimodular input.
    const double noise = 16 * std::numeric_limits<double>::epsilon() *
                         (std::abs(m.a * m.d) + std::abs(m.b * m.c));
    if (std::abs(det - 1) > std::max(det_renorm_tol, noise)) {
        if (!(det > 0)) {
            throw DomainError("matrix determinant must be positive to represent PSL(2,R)");
        }
        const double s = std::sqrt(det);
        m = {m.a / s, m.b / s, m.c / s, m.d / s};
    }
    const double tr = m.a + m.d;
    if (tr < -canonical_trace_tol || (std::abs(tr) <= canonical_trace_tol && m.b < 0)) {
        m = {-m.a, -m.b, -m.c, -m.d};
    }
    return GroupElement(m);
}

GroupElement compose(const GroupElement& g, const GroupElement& h)
{
    return GroupElement::canonicalize(g.matrix() * h.matrix());
}

GroupElement inverse(const GroupElement& g)
{
    return GroupElement::canonicalize({g.d(), -g.b(), -g.c(), g.a()});
}

double trace(const GroupElement& g) { return std::abs(g.a() + g.d()); }

GroupElement horocycle_element(double t) { return GroupElement::canonicalize({1, t, 0, 1}); }

GroupElement diag_element(double a)
{
    if (!(a > 0) || !std::isfinite(a)) {
        throw DomainError("diag_element requires a finite a > 0");
    }
    return GroupElement::canonicalize({a, 0, 0, 1 / a});
}

GroupElement rotation_element(double angle)
{
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    return GroupElement::canonicalize({c, s, -s, c});
}

double entry_deviation(const GroupElement& g)
{
    return std::abs(g.a() - 1) + std::abs(g.b()) + std::abs(g.c()) + std::abs(g.d() - 1);
}

double entry_distance(const GroupElement& g, const GroupElement& h)
{
    return std::max({std::abs(g.a() - h.a()), std::abs(g.b() - h.b()), std::abs(g.c() - h.c()),
                     std::abs(g.d() - h.d())});
}

PointH2 mobius(const GroupElement& g, PointH2 z)
{
    // (a z + b) / (c z + d) with z = x + i y; imaginary part is y / |c z + d|^2.
    const double den_re = g.c() * z.x + g.d();
    const double den_im = g.c() * z.y;
    const double den2 = den_re * den_re + den_im * den_im;
    const double num_re = g.a() * z.x + g.b();
    const double num_im = g.a() * z.y;
    return {(num_re * den_re + num_im * den_im) / den2, z.y / den2};
}

double dist_h2(PointH2 z, PointH2 w)
{
    const double dx = z.x - w.x;
    const double dy = z.y - w.y;
    // arccosh(1 + |z-w|^2 / (2 y_z y_w)) written as 2 asinh(|z-w| / (2 sqrt(y_z y_w))).
    return 2 * std::asinh(std::hypot(dx, dy) / (2 * std::sqrt(z.y * w.y)));
}

double displacement(const GroupElement& g)
{
    // |g|_F^2 - 2 = (a - d)^2 + (b + c)^2 when det = 1.
    return 2 * std::asinh(0.5 * std::hypot(g.a() - g.d(), g.b() + g.c()));
}

LieVector log_psl2(const GroupElement& g)
{
    const double half_tr = 0.5 * (g.a() + g.d());
    const double y11 = 0.5 * (g.a() - g.d());
    const double y12 = g.b();
    const double y21 = g.c();

    // q = half_tr^2 - 1 = -det(traceless part). Take the estimate with the
    // smaller rounding error.
    const double eps = std::numeric_limits<double>::epsilon();
    const double q_direct = y11 * y11 + y12 * y21;
    const double err_direct = eps * (y11 * y11 + std::abs(y12 * y21));
    const double q_trace = (half_tr - 1) * (half_tr + 1);
    const double err_trace = eps * (std::abs(g.a()) + std::abs(g.d())) * (std::abs(half_tr) + 1);
    const double q = err_direct <= err_trace ? q_direct : q_trace;

    double factor = 1;
    const double tr = g.a() + g.d();
    if (std::abs(tr - 2) <= parabolic_trace_tol) {
        // parabolic band: nilpotent part, with the series correction for
        // the tiny residual curvature of the class
        factor = 1 - q / 6 + 3 * q * q / 40;
    } else if (tr > 2) {
        const double root = std::sqrt(std::max(q, 0.0));
        factor = root > 0 ? std::asinh(root) / root : 1.0;
    } else {
        const double root = std::sqrt(std::max(-q, 0.0));
        factor = root > 0 ? std::atan2(root, half_tr) / root : 1.0;
    }
    return {factor * y11, factor * y12, factor * y21};
}

GroupElement exp_psl2(const LieVector& x)
{
    const double q = x.x11 * x.x11 + x.x12 * x.x21;
    const double c = cosc_q(q);
    const double s = sinc_q(q);
    return GroupElement::canonicalize({c + s * x.x11, s * x.x12, s * x.x21, c - s * x.x11});
}

double dist_upper(const GroupElement& g, const GroupElement& h)
{
    if (g == h) {
        return 0;
    }
    return log_psl2(compose(inverse(g), h)).norm();
}

double dist_lower(const GroupElement& g, const GroupElement& h)
{
    if (g == h) {
        return 0;
    }
    return displacement(compose(inverse(g), h)) / orbit_lipschitz;
}

DistanceBracket dist_bracket(const GroupElement& g, const GroupElement& h)
{
    if (g == h) {
        return {};
    }
    const GroupElement k = compose(inverse(g), h);
    DistanceBracket out{displacement(k) / orbit_lipschitz, log_psl2(k).norm()};
    // Equality case (symmetric logarithm): both ends are the same number up to rounding.
    if (out.lo > out.hi && out.lo - out.hi <= 1e-12 * std::max(1.0, out.hi)) {
        out.lo = out.hi;
    }
    return out;
}

} // namespace horo
