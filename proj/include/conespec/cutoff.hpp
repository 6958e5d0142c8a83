#pragma once

namespace conespec {

// Smooth step: 0 for u <= 0, 1 for u >= 1, C-infinity in between.
double smooth_step(double u);
double smooth_step_deriv(double u);

// phi(x) = 1 on [0, c1], 0 on [c2, inf).
struct Cutoff {
    double c1 = 0.2;
    double c2 = 0.35;
    double operator()(double x) const;
    double deriv(double x) const;
};

// chi(r) = 0 for r <= eps, 1 for r >= 2 eps.
struct Excision {
    double eps = 0.5;
    double operator()(double r) const;
    double deriv(double r) const;
};

} // namespace conespec
