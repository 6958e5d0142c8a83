#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conespec/asymptotics.hpp"
#include "conespec/coneop.hpp"
#include "conespec/traces.hpp"

namespace conespec {

// Tr e^{-t B*B} - Tr e^{-t BB*} from the singular values of B.
std::vector<double> mckean_singer(const Eigen::MatrixXcd& B, const std::vector<double>& t_list);

struct OmegaResult {
    double omega = 0.0;
    Verdict verdict = Verdict::Undecided;
    LogPolyExpansion fit;
    bool log_at_zero = false; // (0, 1) or (0, 2) detected next to the constant
    std::string note;
};

// Fitted (0, 0) coefficient of a heat-trace difference series.
OmegaResult omega_constant(const TraceSeries& difference, const std::vector<PredictedTerm>& terms,
                           double t_min, double t_max);
// Matrix realization: the difference series comes from mckean_singer.
OmegaResult omega_constant(const Eigen::MatrixXcd& B, double t_min, double t_max, int samples = 24);

// c P / ((sigma - shift)^2 + b^2)
struct RationalTerm {
    cplx c;
    double shift = 0.0;
    double b = 1.0;
    Eigen::MatrixXcd P;
};

// Finite-rank Mellin symbol H(sigma), integrated along Im sigma = -weight.
struct MellinPerturbation {
    int rank = 1;
    double weight = 1.0;
    std::vector<RationalTerm> terms;

    Eigen::MatrixXcd H(cplx sigma) const;
    Eigen::MatrixXcd dH(cplx sigma) const;
    cplx det1pH(cplx sigma) const;
    double decay_constant() const; // |H(sigma)| <= C / |Re sigma|^2 for large |Re sigma|

    static MellinPerturbation zero(int rank, double weight);
    static MellinPerturbation rank_one(cplx c, double b, double weight, double shift = 0.0);
    void add(cplx c, double shift, double b, const Eigen::MatrixXcd& P);
    // sigma -> conj H(-conj sigma)
    MellinPerturbation reflected() const;
};

struct EtaResult {
    double eta = 0.0;
    double tail_bound = 0.0;
    double imag_residue = 0.0; // |Im| of the integral, zero in exact arithmetic
};

// (1/2 pi i) int Tr H'(1 + H)^{-1} d sigma over the line, right to left, so that
// eta = (zeros - poles) of det(1 + H) below the line.
EtaResult eta_term(const MellinPerturbation& H, double R_max = 200.0, double shift = 0.0);

struct Census {
    int zeros_below = 0;
    int poles_below = 0;
};
// Winding numbers of det(1 + H) times the pole polynomial and of the pole polynomial
// alone along a rectangle under the line.
Census argument_census(const MellinPerturbation& H, double R = 1e3, double depth = 1e3);

struct Factorization {
    Eigen::MatrixXcd B;
    MellinPerturbation H;
};

struct IndexReport {
    double omega = 0.0, eta = 0.0, index = 0.0, integer_distance = 0.0;
    Verdict verdict = Verdict::Undecided;
    std::vector<std::string> flags;
    std::string to_csv() const;
};

IndexReport index_assemble(const Factorization& f, double t_min = 0.1, double t_max = 10.0,
                           double R_max = 200.0);

struct ConstRow {
    double tau = 0.0;
    double ratio = 0.0; // sup ||(A - A_[tau]) u|| / ||u||_A
};

struct ConstReport {
    std::vector<ConstRow> rows;
    double slope = 0.0;
    double epsilon = 0.0;
    Verdict verdict = Verdict::Undecided;
    std::string to_csv() const;
};

// A_[tau] = phi(x/tau) A_0 + (1 - phi(x/tau)) A with A_0 the frozen operator.
ConstReport invariance_red_to_const(const ConeOperator& op, const std::vector<double>& tau_list,
                                    double epsilon, double s_min = -12.0, int npoints = 600);

struct SobolevRow {
    double epsilon = 0.0;
    int ker = 0, coker = 0;         // A
    int ker_eps = 0, coker_eps = 0; // x^eps A conjugated to the same weight
    bool crossing = false;          // a boundary-spectrum pole lies between the two weight lines
    bool ambiguous = false;         // a singular value within 10x of the threshold
};

struct SobolevReport {
    double margin = 0.0; // distance from the weight line to the nearest pole
    std::vector<SobolevRow> rows;
    Verdict verdict = Verdict::Undecided;
    std::string to_csv() const;
};

SobolevReport invariance_red_to_sobolev(const ConeOperator& op, const std::vector<double>& eps_list,
                                        double s_min = -8.0, int npoints = 200);

} // namespace conespec
