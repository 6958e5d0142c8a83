#include "conespec/cutoff.hpp"

#include <cmath>

namespace conespec {

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double bump_deriv(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }

} // namespace

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = bump(u), b = bump(1.0 - u);
    return a / (a + b);
}

double smooth_step_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double a = bump(u), b = bump(1.0 - u);
    double da = bump_deriv(u), db = -bump_deriv(1.0 - u);
    double s = a + b;
    return (da * s - a * (da + db)) / (s * s);
}

double Cutoff::operator()(double x) const { return smooth_step((c2 - x) / (c2 - c1)); }

double Cutoff::deriv(double x) const {
    return -smooth_step_deriv((c2 - x) / (c2 - c1)) / (c2 - c1);
}

double Excision::operator()(double r) const { return smooth_step((r - eps) / eps); }

double Excision::deriv(double r) const { return smooth_step_deriv((r - eps) / eps) / eps; }

} // namespace conespec
