#pragma once

#include <vector>

#include "conespec/error.hpp"

namespace conespec {

struct Pole {
    cplx sigma;
    int ord = 1;
    int mode = 0;
};

// Roots of the indicial polynomials, sorted by (mode, Im, Re).
struct BoundarySpectrum {
    std::vector<Pole> poles;

    // Largest order over modes of a pole at sigma, 0 if absent.
    int ord_at(cplx sigma, double tol = 1e-9) const;
};

} // namespace conespec
