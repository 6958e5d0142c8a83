#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conespec/cutoff.hpp"
#include "conespec/sector.hpp"

namespace conespec {

// f(|xi|), evaluated for complex r so homogeneous parts can be extracted.
struct RadialFunction {
    std::function<cplx(cplx)> f;
    double degree = 0.0;
    bool homogeneous = true;

    cplx operator()(cplx r) const { return f(r); }
    static RadialFunction power(double k, cplx coef = 1.0);
    // sum c[i] r^i
    static RadialFunction polynomial(const std::vector<double>& c);
};

struct SymbolOrders {
    double mu = 0.0, p = 0.0, d = 1.0;
};

// Radial parameter-dependent symbol s(xi, lambda) = eval(|xi|, lambda).
struct ParamSymbol {
    std::function<cplx(double, cplx)> eval;
    // Analytic part without the excision factor; empty if unknown.
    std::function<cplx(cplx, cplx)> core;
    // Analytic d^beta/dlambda^beta of eval; empty if unknown.
    std::function<cplx(double, cplx, int)> lambda_deriv;
    SymbolOrders orders;
    int n = 1;
    double eps = 0.5;
    Sector sector = Sector::left_half_plane(); // parameter sector the symbol lives on
    std::string name;

    cplx operator()(double r, cplx lambda) const { return eval(r, lambda); }
    static ParamSymbol zero(SymbolOrders orders, int n = 1);
};

struct SeminormGrid {
    int per_decade = 40;
    double r_lo = 1e-3, r_hi = 1e3;     // |xi| range, plus xi = 0
    double lam_lo = 1.0, lam_hi = 1e3;  // |lambda|^{1/d} range
    Sector sector = Sector::left_half_plane();
    int rays = 5;
    // Relative finite-difference steps by total derivative order 1, 2, 3, 4+.
    double h1 = 1e-5, h2 = 1e-4, h3 = 1e-3, h4 = 3e-3;

    SeminormGrid refined() const;
};

struct SeminormRow {
    int alpha = 0, beta = 0;
    double worst_ratio = 0.0;
    double grid_refined_ratio = 0.0;
    double slope = 0.0; // growth of sup ratio vs log(1+|xi|) over the top decade
    bool pass = false;
};

struct SeminormReport {
    std::vector<SeminormRow> rows;
    bool pass = false;
    double max_slope() const;
    std::string to_csv() const;
};

// |d_xi1^alpha d_lambda^beta s| divided by the class bound, sup over the grid,
// for alpha <= max_alpha, beta <= max_beta.
SeminormReport seminorm_check(const ParamSymbol& s, int max_alpha, int max_beta,
                              const SeminormGrid& grid = {});

// Finite-difference derivative used by seminorm_check, exposed for validation.
cplx symbol_derivative(const ParamSymbol& s, int alpha, int beta, double r, cplx lambda,
                       const SeminormGrid& grid = {});

struct HomogComponent {
    double degree = 0.0;
    double d = 1.0;
    std::function<cplx(double, cplx)> eval; // valid away from (0, 0)
    cplx operator()(double r, cplx lambda) const { return eval(r, lambda); }
};

struct HomogExpansion {
    std::vector<HomogComponent> components;
    ParamSymbol remainder;
};

HomogExpansion homog_expand(const ParamSymbol& s, int N);

// chi(xi) b(xi) (a(xi) - lambda)^{-l}, orders (deg b - l deg a, -l deg a, deg a).
ParamSymbol resolvent_symbol(const RadialFunction& a, const RadialFunction& b, int l,
                             const Sector& lambda, double eps = 0.5);

// b = chi(xi) (a(xi) - x^mu lambda)^{-1}
ParamSymbol parametrix_leading(const RadialFunction& a, double mu, const Sector& lambda,
                               double eps = 0.5, double x = 1.0);
// max |(a - x^mu lambda) b - chi| over the seminorm grid.
double parametrix_residual(const RadialFunction& a, const ParamSymbol& b, double mu, double x,
                           const SeminormGrid& grid = {});

struct NeumannResult {
    ParamSymbol refined; // b0 (1 + s0 + ... + s0^steps)
    ParamSymbol error;   // s0^{steps+1}
};

NeumannResult neumann_refine(const ParamSymbol& b0, const ParamSymbol& s0, int steps);

// Least-squares slope of log|s(r, lambda)| against log(1 + r), r geometric in [r_lo, r_hi].
double order_slope(const ParamSymbol& s, cplx lambda, double r_lo, double r_hi, int count = 41);

} // namespace conespec
