#pragma once

#include <complex>
#include <string>
#include <vector>

#include "horo/fuchsian.hpp"
#include "horo/psl2.hpp"

namespace horo
{

// Cayley map of the upper half plane onto the unit disk, z ↦ (z − i)/(z + i).
std::complex<double> to_disk(PointH2 p);

struct PlotOptions {
    std::vector<GroupElement> starts{GroupElement{}}; // one orbit trace g·b_t·i each
    double t_min = -20;
    double t_max = 20;
    int samples = 400; // per trace; 0 draws no traces
    bool fold = false; // reduce every sample into the Dirichlet domain
    bool octagon = true;
    int size = 800; // pixels
};

// Static SVG of the Poincaré disk with the fundamental octagon and orbit traces.
// Output is a pure function of the options.
std::string render_svg(const PlotOptions& options, const FuchsianGroup& group);

} // namespace horo
