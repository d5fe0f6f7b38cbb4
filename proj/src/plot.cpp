#include "horo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace horo
{

std::complex<double> to_disk(PointH2 p)
{
    const std::complex<double> z(p.x, p.y);
    const std::complex<double> i(0, 1);
    return (z - i) / (z + i);
}

namespace
{

using C = std::complex<double>;

// Fixed-precision coordinates keep the bytes stable and the file small.
std::string coord(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf) == "-0.0000" ? "0.0000" : buf;
}

struct Canvas {
    double half;
    double sx(C w) const { return half + w.real() * (half - 10); }
    double sy(C w) const { return half - w.imag() * (half - 10); }
    double scale() const { return half - 10; }
};

// Geodesic between disk points p and q: an arc of the circle through p, q and
// the inversion of p, or a straight chord through the origin.
std::string geodesic_path(const Canvas& cv, C p, C q)
{
    std::ostringstream s;
    s << "M " << coord(cv.sx(p)) << ' ' << coord(cv.sy(p)) << ' ';
    const double cross = p.real() * q.imag() - p.imag() * q.real();
    if (std::abs(cross) < 1e-12 || std::norm(p) < 1e-24) {
        s << "L " << coord(cv.sx(q)) << ' ' << coord(cv.sy(q));
        return s.str();
    }
    const C r = p / std::norm(p);
    // circumcenter of p, q, r
    const double ax = p.real(), ay = p.imag(), bx = q.real(), by = q.imag(), cx = r.real(),
                 cy = r.imag();
    const double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                       (cx * cx + cy * cy) * (ay - by)) /
                      d;
    const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                       (cx * cx + cy * cy) * (bx - ax)) /
                      d;
    const double radius = std::abs(p - C(ux, uy)) * cv.scale();
    // the short arc turns counterclockwise about the centre when this cross is
    // positive; the screen y flip turns that into sweep-flag 0
    const C u = C(ux, uy);
    const double turn = ((p - u) * std::conj(q - u)).imag();
    const int sweep = turn < 0 ? 0 : 1;
    s << "A " << coord(radius) << ' ' << coord(radius) << " 0 0 " << sweep << ' '
      << coord(cv.sx(q)) << ' ' << coord(cv.sy(q));
    return s.str();
}

std::vector<C> octagon_vertices(const FuchsianGroup& group)
{
    std::vector<double> angles;
    for (const auto& g : group.generators) {
        const C w = to_disk(mobius(g, {0, 1}));
        angles.push_back(std::atan2(w.imag(), w.real()));
    }
    std::sort(angles.begin(), angles.end());
    const double radius = std::tanh(group.cover_radius.value_or(0) / 2);
    std::vector<C> out;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double next = k + 1 < angles.size() ? angles[k + 1]
                                                  : angles[0] + 2 * std::numbers::pi;
        out.push_back(std::polar(radius, 0.5 * (angles[k] + next)));
    }
    return out;
}

} // namespace

std::string render_svg(const PlotOptions& o, const FuchsianGroup& group)
{
    const Canvas cv{o.size / 2.0};
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<!-- horolab disk plot schema_version 1 -->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.size << "\" height=\""
      << o.size << "\" viewBox=\"0 0 " << o.size << ' ' << o.size << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<circle cx=\"" << coord(cv.half) << "\" cy=\"" << coord(cv.half) << "\" r=\""
      << coord(cv.scale()) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    if (o.octagon && group.cover_radius && !group.generators.empty()) {
        const auto verts = octagon_vertices(group);
        s << "<g id=\"octagon\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\">\n";
        for (std::size_t k = 0; k < verts.size(); ++k) {
            s << "<path d=\"" << geodesic_path(cv, verts[k], verts[(k + 1) % verts.size()])
              << "\"/>\n";
        }
        s << "</g>\n";
        s << "<g id=\"vertices\" fill=\"#555555\">\n";
        for (const C& v : verts) {
            s << "<circle cx=\"" << coord(cv.sx(v)) << "\" cy=\"" << coord(cv.sy(v))
              << "\" r=\"3\"/>\n";
        }
        s << "</g>\n";
    }

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    s << "<g id=\"orbits\" fill=\"none\" stroke-width=\"1.2\">\n";
    if (o.samples > 0) {
        for (std::size_t k = 0; k < o.starts.size(); ++k) {
            // A folded trace jumps whenever the reducing element changes; each
            // continuous piece becomes its own polyline.
            std::vector<std::vector<C>> pieces(1);
            GroupElement last_gamma;
            for (int j = 0; j < o.samples; ++j) {
                const double t = o.samples == 1
                                     ? o.t_min
                                     : o.t_min + (o.t_max - o.t_min) * j / (o.samples - 1);
                const GroupElement g = compose(o.starts[k], horocycle_element(t));
                C w;
                if (o.fold) {
                    const Reduction r = reduce_to_domain(g, group);
                    if (j > 0 && !(r.gamma == last_gamma)) {
                        pieces.emplace_back();
                    }
                    last_gamma = r.gamma;
                    w = to_disk(mobius(r.reduced, {0, 1}));
                } else {
                    w = to_disk(mobius(g, {0, 1}));
                }
                pieces.back().push_back(w);
            }
            const char* colour = palette[k % std::size(palette)];
            for (const auto& piece : pieces) {
                if (piece.empty()) {
                    continue;
                }
                s << "<polyline stroke=\"" << colour << "\" points=\"";
                for (std::size_t j = 0; j < piece.size(); ++j) {
                    s << (j ? " " : "") << coord(cv.sx(piece[j])) << ','
                      << coord(cv.sy(piece[j]));
                }
                s << "\"/>\n";
            }
        }
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

} // namespace horo
