#pragma once

#include <vector>

#include "conespec/error.hpp"

namespace conespec {

// Gamma on the complex plane (Lanczos, g = 7). Throws PoleError at 0, -1, ...
cplx gamma_complex(cplx z);

// I_{nu+1}(z) / I_nu(z) by the Perron continued fraction, Re z > 0.
cplx bessel_i_ratio(double nu, cplx z);

// Debye polynomials u_0..u_kmax as coefficient vectors in t.
std::vector<std::vector<double>> debye_polynomials(int kmax);

// Positive zeros j_{nu,1..count} of J_nu, bracketed and refined.
std::vector<double> bessel_j_zeros(double nu, int count);

// Central finite-difference weights for the order-th derivative on offsets
// -half..half (unit spacing).
std::vector<double> fd_weights(int order, int half);

// d^j/dw^j [t0^w / w]; equals the integral of t^(w-1) log^j t over (0, t0] for Re w > 0.
cplx mellin_log_power(cplx w, int j, double t0);

// Polynomial helpers on coefficient vectors (lowest degree first).
double poly_eval(const std::vector<double>& c, double x);
std::vector<double> poly_deriv(const std::vector<double>& c);
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);

} // namespace conespec
