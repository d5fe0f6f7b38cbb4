#pragma once

#include <cmath>
#include <stdexcept>

namespace horo
{

class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Raw 2x2 matrix, no invariants.
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    double det() const { return a * d - b * c; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 operator*(const Mat2& x, const Mat2& y);

// Canonical SL(2,R) representative of a PSL(2,R) class.
//
// Invariants: det = 1 up to rounding (renormalized on construction when the
// deviation exceeds both 1e-14 and the rounding noise of ad - bc) and
// a + d > 0, or a + d == 0 (within 1e-12) with b > 0.
class GroupElement
{
public:
    GroupElement() = default;

    // Throws DomainError when det <= 0 or an entry is not finite.
    static GroupElement canonicalize(const Mat2& m);
    static GroupElement identity() { return {}; }

    double a() const { return m_.a; }
    double b() const { return m_.b; }
    double c() const { return m_.c; }
    double d() const { return m_.d; }
    const Mat2& matrix() const { return m_; }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
    explicit GroupElement(const Mat2& m) : m_(m) {}
    Mat2 m_;
};

// Traceless 2x2 matrix (x11, x12; x21, -x11).
struct LieVector {
    double x11 = 0, x12 = 0, x21 = 0;

    // Frobenius norm of the full matrix; the metric pairing at the identity.
    double norm() const { return std::sqrt(2 * x11 * x11 + x12 * x12 + x21 * x21); }
};

struct PointH2 {
    double x = 0;
    double y = 1;
};

struct DistanceBracket {
    double lo = 0;
    double hi = 0;

    bool contains(double v) const { return lo <= v && v <= hi; }
    double width() const { return hi - lo; }
};

inline constexpr double canonical_trace_tol = 1e-12;
inline constexpr double parabolic_trace_tol = 1e-9;

GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
inline GroupElement operator*(const GroupElement& g, const GroupElement& h) { return compose(g, h); }

// |a + d|, independent of the representative.
double trace(const GroupElement& g);

// b_t = [(1 t; 0 1)], the horocycle generator.
GroupElement horocycle_element(double t);
// [(a 0; 0 1/a)], a > 0.
GroupElement diag_element(double a);
// Elliptic element fixing i that rotates tangent vectors at i by `angle`.
GroupElement rotation_element(double angle);

// |g11 - 1| + |g12| + |g21| + |g22 - 1| of the canonical representative.
double entry_deviation(const GroupElement& g);
// Largest entrywise difference between canonical representatives.
double entry_distance(const GroupElement& g, const GroupElement& h);

PointH2 mobius(const GroupElement& g, PointH2 z);
double dist_h2(PointH2 z, PointH2 w);
// d_H(i, g i), computed without cancellation near the identity.
double displacement(const GroupElement& g);

LieVector log_psl2(const GroupElement& g);
GroupElement exp_psl2(const LieVector& x);

// Upper bound on the left-invariant distance: length of the one-parameter
// curve g exp(s log(g^-1 h)), i.e. the Frobenius norm of log(g^-1 h).
double dist_upper(const GroupElement& g, const GroupElement& h);
// Lower bound: d_H(g i, h i) / sqrt(2). The orbit map g -> g i is
// sqrt(2)-Lipschitz for the Frobenius pairing.
double dist_lower(const GroupElement& g, const GroupElement& h);
DistanceBracket dist_bracket(const GroupElement& g, const GroupElement& h);

inline constexpr double orbit_lipschitz = 1.4142135623730951;

} // namespace horo
