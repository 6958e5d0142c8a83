#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "conespec/coneop.hpp"
#include "conespec/cutoff.hpp"

namespace conespec {

struct TraceSample {
    double param = 0.0; // t, or |lambda| on the sampled ray
    cplx value;
    double tail = 0.0;  // truncation bound
};

struct TraceMeta {
    double mu = 2.0, mu_prime = 0.0, beta = 0.0;
    int n = 2;
    int N = 0; // resolvent power, 0 for heat traces
};

struct TraceSeries {
    std::string kind; // "heat" or "resolvent"
    std::vector<TraceSample> samples;
    TraceMeta meta;

    std::vector<double> params() const;
    std::vector<cplx> values() const;
    std::string to_csv() const;
};

enum class PhiMode { Identity, OneNearZero, ZeroNearZero };

// x^{-beta} g(x) with g = 1, phi or 1 - phi, times (1 + m^2)^{mu'/2} on mode m.
struct WeightOperator {
    double beta = 0.0;
    PhiMode phi_mode = PhiMode::Identity;
    Cutoff phi;
    double mu_prime = 0.0;

    double multiplier(double x) const;
    double mode_factor(int m) const;
    bool is_identity() const;
    double support() const; // multiplier vanishes beyond this x
    double sup_g() const { return 1.0; }

    static WeightOperator identity() { return {}; }
    static WeightOperator cutoff(double beta, Cutoff phi = {});
};

// sum_j e^{-t lambda_j}; refuses samples whose Weyl tail exceeds rel_tol of the value.
TraceSeries heat_trace(const SpectralData& spec, const std::vector<double>& t_grid,
                       double rel_tol = 0.01);

// Required lambda_cut for heat_trace at t with the given relative tolerance.
double required_lambda_cut(const SpectralData& spec, double t, double value, double rel_tol);

// Tr B e^{-tA} from the Bessel eigenfunctions of a frozen Laplace-type operator.
// The spectrum is extended until the tail is below rel_tol at min(t_grid).
TraceSeries weighted_heat_trace(const ConeOperator& op, const WeightOperator& B,
                                const std::vector<double>& t_grid, double rel_tol = 1e-10);
// Same from discrete eigenpairs.
TraceSeries weighted_heat_trace(const Discretization& disc, const WeightOperator& B,
                                const std::vector<double>& t_grid, double rel_tol = 0.01);

// Same on the infinite model cone, from the diagonal kernel
// sum_m (2t)^{-1} e^{-z} I_nu(z), z = x^2 / 2t. Needs a multiplier supported in
// x < 1; `tail` bounds the distance to the Dirichlet trace on (0, 1].
TraceSeries model_cone_heat_trace(const ConeOperator& op, const WeightOperator& B,
                                  const std::vector<double>& t_grid);

struct ContourSpec {
    double a = -1.0;
    double delta = std::numbers::pi / 4;
    int N = 2;
    double rel_tol = 1e-8;
};

// Tr e^{-tA} as a Cauchy integral of Tr (A - lambda)^{-N} over a + rays at +-delta.
double heat_trace_contour(const Discretization& disc, double t, const ContourSpec& c = {});

// Tr B (A - lambda)^{-N} summed over every discrete eigenpair.
TraceSeries resolvent_power_trace(const Discretization& disc, const WeightOperator& B, int N,
                                  const std::vector<cplx>& lambdas);

// Same for the continuum operator of a frozen Laplace-type model, by per-mode
// closed forms. B = identity: any N >= 2 and lambda off [lambda_1, inf).
// Otherwise N = 2, real lambda < 0 and a multiplier supported in x < 1.
TraceSeries resolvent_power_trace_modal(const ConeOperator& op, const WeightOperator& B, int N,
                                        const std::vector<cplx>& lambdas);

// Per-mode closed form: sum_k (j_{nu,k}^2 + s)^{-N}.
cplx bessel_resolvent_mode(double nu, cplx s, int N);

// sum_j lambda_j^z for Re z < -n/mu - 0.5.
cplx complex_power_sum(const SpectralData& spec, cplx z, double* tail = nullptr,
                       double rel_tol = 1e-8);

} // namespace conespec
