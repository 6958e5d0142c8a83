#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conespec/boundary_spectrum.hpp"
#include "conespec/config.hpp"
#include "conespec/sector.hpp"

namespace conespec {

// c(m, x) = sum C[p,q] m^p x^q
struct Coefficient {
    std::map<std::pair<int, int>, cplx> terms;

    cplx eval(int m, double x) const;
    bool x_dependent() const;
    bool m_dependent() const;
    bool is_real() const;
    bool is_zero() const { return terms.empty(); }
};

// x^{-mu} P(xD_x, m; x) on (0,1] x S^1, one polynomial in sigma per Fourier mode.
// Convention: trial functions x^{i sigma}, xD_x -> sigma.
struct ConeOperator {
    double mu = 2.0;
    double alpha = 1.0;
    int modes = 0;                   // materialized modes -modes..modes
    std::vector<Coefficient> coeffs; // index j multiplies sigma^j
    std::string bc = "dirichlet";

    cplx coeff(int j, int m, double x) const;
    // Coefficients of p_m(sigma) from the x = 0 values, trailing zeros dropped.
    std::vector<cplx> indicial(int m) const;
    bool has_x_perturbation() const;
    ConeOperator frozen() const;

    static ConeOperator laplace_type(double a, int modes, double mu = 2.0, double alpha = 1.0,
                                     double perturbation = 0.0);
    static ConeOperator from_config(const Config& cfg);
    std::string to_text() const;
};

// Per-mode conormal symbols, modes -M..M in order.
std::vector<std::vector<cplx>> conormal_symbol(const ConeOperator& op);
cplx eval_poly(const std::vector<cplx>& c, cplx sigma);

BoundarySpectrum boundary_spectrum(const ConeOperator& op, double strip, int mode_cap);

struct EllipticityReport {
    Verdict symbol_ok = Verdict::Undecided;
    Verdict model_ok = Verdict::Undecided;
    Verdict clean_weight_line = Verdict::Undecided;
    std::string note;
};

EllipticityReport check_parameter_ellipticity(const ConeOperator& op, const Sector& lambda);

struct ModeMatrix {
    int mode = 0;
    Eigen::VectorXd diag; // stiffness diagonal
    Eigen::VectorXd off;  // stiffness sub/super diagonal
};

// Log grid s = log x, Dirichlet at both ends, nodes strictly inside [s_min, s_max].
struct Discretization {
    double s_min = -12.0, s_max = 0.0, h = 0.0, mu = 2.0;
    Eigen::VectorXd s, weight; // weight = e^{mu s}, plus h in inner products
    std::vector<ModeMatrix> modes;

    int npoints() const { return int(s.size()); }
    int index_of(int mode) const;
    double resolution() const { return h * std::abs(s_min); }

    Eigen::VectorXd eigenvalues(int idx) const;
    // Columns W-orthonormal: sum h w_k u_k^2 = 1.
    void eigenpairs(int idx, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) const;
    // Solves (K - lambda W) u = W rhs.
    Eigen::VectorXcd solve(int idx, cplx lambda, const Eigen::VectorXcd& rhs) const;
    // ||(A - lambda)^{-1}|| in the weighted L^2 norm, maximised over modes.
    double resolvent_norm(cplx lambda, int iterations = 60) const;
    // ||(A - lambda)^{-1}|| for one mode.
    double resolvent_norm_mode(int idx, cplx lambda, int iterations = 60) const;
    double norm(const Eigen::VectorXcd& u) const;
};

Discretization discretize(const ConeOperator& op, double s_min, int npoints, double s_max = 0.0);

std::vector<double> bessel_oracle(double nu, int count);

struct ModeSpectrum {
    int mode = 0;
    double nu = 0.0; // oracle only
    std::vector<double> values;
    double error_bound = 0.0;
};

struct SpectralData {
    std::vector<ModeSpectrum> modes;
    std::string provenance; // "oracle" or "discretization"
    double lambda_cut = 0.0;
    double weyl_c = 0.0;    // N(lambda) <= weyl_c * lambda beyond the cut

    std::size_t count() const;
    std::vector<double> all_values() const;
    // Bound on sum over lambda > lambda_cut of e^{-t lambda}.
    double heat_tail(double t) const;
    std::string to_csv() const;
};

// Exact spectrum of a frozen mu = 2 Laplace-type operator below lambda_cut,
// over every mode with nu_m^2 < lambda_cut.
SpectralData oracle_spectrum(const ConeOperator& op, double lambda_cut);
SpectralData discrete_spectrum(const Discretization& disc, double rel_accuracy = 1e-3);

struct ScaledFunction {
    Eigen::VectorXcd values;
    bool truncated = false; // part of the shifted support fell off the grid
};

// (kappa_rho u)(s) = u(s + log rho), linear interpolation, zero off grid.
ScaledFunction kappa_scale(double rho, const Eigen::VectorXd& s, const Eigen::VectorXcd& u);

// min_j |lambda_j - lambda| / (1 + |lambda_j|): lower bound C in ||(A-lambda)u|| >= C ||u||_A.
double injectivity_constant(const Discretization& disc, cplx lambda);

} // namespace conespec
