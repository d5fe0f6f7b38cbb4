#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "horo/fuchsian.hpp"
#include "horo/psl2.hpp"
#include "horo/random.hpp"

namespace testing_support
{

using namespace horo;

inline double max_entry_diff(const Mat2& x, const Mat2& y)
{
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c),
                     std::abs(x.d - y.d)});
}

// Plain 2x2 product, independent of the library's composition.
inline Mat2 naive_product(const Mat2& x, const Mat2& y)
{
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

// Sign rule applied by hand: positive trace, or zero trace with b > 0.
inline Mat2 sign_normalized(Mat2 m)
{
    const double tr = m.a + m.d;
    if (tr < -1e-12 || (std::abs(tr) <= 1e-12 && m.b < 0)) {
        m = {-m.a, -m.b, -m.c, -m.d};
    }
    return m;
}

// Random matrix with entries in [-r, r] scaled to det 1; redraws until det > 0.1.
inline GroupElement random_entry_element(SplitMix64& rng, double r)
{
    for (;;) {
        const Mat2 m{rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r),
                     rng.uniform(-r, r)};
        const double det = m.det();
        if (det > 0.1) {
            const double s = std::sqrt(det);
            return GroupElement::canonicalize({m.a / s, m.b / s, m.c / s, m.d / s});
        }
    }
}

// Balls are expensive; each test binary builds them once.
inline const FuchsianBall& ball_L(int len, double max_disp = std::numeric_limits<double>::infinity())
{
    static std::map<std::pair<int, double>, std::unique_ptr<FuchsianBall>> cache;
    auto& slot = cache[{len, max_disp}];
    if (!slot) {
        BallOptions o;
        o.max_word_len = len;
        o.max_displacement = max_disp;
        slot = std::make_unique<FuchsianBall>(enumerate_ball(*shared_bolza_group(), o));
    }
    return *slot;
}

// The certified ball used by the command-line defaults.
inline const FuchsianBall& certified_ball() { return ball_L(11, 8.0); }

} // namespace testing_support
