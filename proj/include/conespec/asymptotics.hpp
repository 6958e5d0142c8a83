#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conespec/coneop.hpp"
#include "conespec/cutoff.hpp"
#include "conespec/indexsets.hpp"
#include "conespec/symbols.hpp"
#include "conespec/traces.hpp"

namespace conespec {

struct ExpansionTerm {
    double gamma = 0.0;
    int j = 0; // log power
    cplx c;
    bool detected = false;
    double inflation = 0.0; // residual ratio after dropping this column
};

struct LogPolyExpansion {
    std::vector<ExpansionTerm> terms; // sorted by (gamma, j)
    double param_min = 0.0, param_max = 0.0;
    double residual = 0.0;     // relative RMS
    double conditioning = 0.0; // of the column-equilibrated weighted design

    cplx eval(double t) const;
    const ExpansionTerm* find(double gamma, int j) const;
    std::vector<ExpansionTerm> detected() const;
    std::string to_csv() const;
};

struct PredictedTerm {
    double gamma = 0.0;
    int max_log = 0;
};

enum class SeriesKind { Heat, Resolvent };

// Exponents of Tr B e^{-tA} (t-powers) or Tr B (A - lambda)^{-N} (lambda-powers)
// within k_max / mu of the leading one, logs per the vanishing lattices.
std::vector<PredictedTerm> predict_terms(const TraceMeta& meta, SeriesKind kind, int k_max);

// Columns (gamma, j) for j = 0..max_log of each predicted exponent.
std::vector<std::pair<double, int>> columns_of(const std::vector<PredictedTerm>& terms);

struct FitOptions {
    double detect_factor = 10.0;
    double max_conditioning = 1e12;
    int min_samples_per_term = 4;
    bool check_tails = true;
};

// Weighted least squares of y against x^gamma log^j x.
LogPolyExpansion fit_log_poly(const std::vector<double>& x, const std::vector<cplx>& y,
                              const std::vector<std::pair<double, int>>& columns,
                              const FitOptions& opt = {}, const std::vector<double>& tails = {});

LogPolyExpansion fit_expansion(const TraceSeries& series, const std::vector<PredictedTerm>& terms,
                               double param_min, double param_max, const FitOptions& opt = {});

struct LeadingFit {
    double gamma = 0.0; // best free leading exponent
    LogPolyExpansion fit;
};

// Leading exponent left free in [lo, hi]; the rest of `terms` (minus the
// predicted leading exponent) stays on its lattice.
LeadingFit fit_leading_exponent(const TraceSeries& series, const std::vector<PredictedTerm>& terms,
                                double param_min, double param_max, double lo, double hi,
                                const FitOptions& opt = {});

struct LemmaResult {
    LogPolyExpansion fit;
    IndexSet predicted;
    Verdict verdict = Verdict::Undecided;
    std::vector<ExpansionTerm> absent; // predicted, not detected
    std::string note;
};

// v(x) = int_0^1 u(x/y, y) dy/y against extended_union(E_lb, E_rb).
LemmaResult pushforward_fund2(const std::function<double(double, double)>& u,
                              const IndexSet& e_lb, const IndexSet& e_rb,
                              const std::vector<double>& x_grid);

// Quadrature value of v at one point, exposed for checks.
double pushforward_value(const std::function<double(double, double)>& u, double x);

// f(x) = -x^a int_x^inf y^{-a} g(y) dy/y, g vanishing beyond g_support.
LemmaResult ode_fund1(const std::function<double(double)>& g, const IndexSet& e, double a,
                      const std::vector<double>& x_grid, double g_support = 1.0);
double ode_solution_value(const std::function<double(double)>& g, double a, double x,
                          double g_support = 1.0);

struct AkResult {
    LogPolyExpansion fit;
    IndexSet predicted;
    double gamma = 0.0;             // N mu + k - mu' - n
    double identity_residual = 0.0; // max relative mismatch of the z-derivative identity
    Verdict verdict = Verdict::Undecided;
    std::vector<double> z;
    std::vector<double> values;
};

// A_k(z) = int chi(xi) a_k(xi, -z^{-mu}) dbar xi on the ray arg lambda = pi.
AkResult trace_component_Ak(const HomogComponent& a_k, const Excision& chi,
                            const std::vector<double>& z_grid, double mu, int N, double mu_prime,
                            int n, int k);
double Ak_value(const HomogComponent& a_k, const Excision& chi, double z, double mu, int n);

struct ZetaPole {
    cplx z;
    int order = 1;
    cplx residue;
    std::string lattice_tag; // "simple", "triple" or "outside"
};

struct ZetaResult {
    std::vector<cplx> z;
    std::vector<cplx> values;
    std::vector<ZetaPole> poles;
    std::string values_csv() const;
    std::string poles_csv() const;
};

struct ZetaOptions {
    double t0 = 0.02; // at most the upper end of the fit window
    double n = 2.0, mu = 2.0;
    double coefficient_floor = 0.0; // |c| at or below this is not a pole source
};

// zeta_A(z) = M(f)(-z) / Gamma(-z), the (0, t0] part from the fit and the
// [t0, inf) part from the spectrum.
ZetaResult zeta_continue(const SpectralData& spec, const LogPolyExpansion& fit,
                         const std::vector<cplx>& z_grid, const ZetaOptions& opt = {});
cplx zeta_value(const SpectralData& spec, const LogPolyExpansion& fit, cplx z,
                const ZetaOptions& opt = {});

} // namespace conespec
