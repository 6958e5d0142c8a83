#pragma once

#include <vector>

#include "conespec/error.hpp"

namespace conespec {

// Closed sector {arg in [arg_min, arg_max]} of the complex plane.
struct Sector {
    double arg_min = 0.0;
    double arg_max = 0.0;
    bool contains_origin = true;

    Sector() = default;
    Sector(double lo, double hi, bool origin = true);

    static Sector left_half_plane();
    bool contains(cplx z, double tol = 1e-12) const;
    // count rays evenly spaced, endpoints included.
    std::vector<double> rays(int count) const;
};

} // namespace conespec
