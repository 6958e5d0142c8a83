#include <doctest.h>

#include <cmath>
#include <random>

#include "conespec/index.hpp"

using namespace conespec;

namespace {

Eigen::MatrixXcd random_matrix(int m, int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> d;
    Eigen::MatrixXcd a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(d(gen), d(gen));
    return a;
}

// zeros minus poles of det(1 + H) strictly below Im sigma = -w, for a scalar sum of
// c/((sigma - s)^2 + b^2) with all terms sharing shift and b: 1 + H = 1 + C/q
int rank_one_count(double c, double b, double w) {
    int zeros = 0, poles = 0;
    // q + c = 0: sigma = +-i sqrt(b^2 + c) (c > -b^2)
    if (b * b + c > 0 && std::sqrt(b * b + c) > w) ++zeros;
    if (b > w) ++poles;
    return zeros - poles;
}

} // namespace

TEST_CASE("McKean-Singer counts the dimension gap") {
    Eigen::MatrixXcd B = random_matrix(40, 60, 7);
    auto v = mckean_singer(B, {0.1, 1.0, 10.0});
    for (double x : v) CHECK(std::abs(x - 20.0) < 1e-8);
    CHECK(std::abs(v[0] - v[2]) < 1e-8);

    Eigen::MatrixXcd S = random_matrix(30, 30, 3) + 10.0 * Eigen::MatrixXcd::Identity(30, 30);
    for (double x : mckean_singer(S, {0.01, 1.0, 100.0})) CHECK(std::abs(x) < 1e-8);

    // transposed shape flips the sign
    for (double x : mckean_singer(B.adjoint(), {0.5})) CHECK(std::abs(x + 20.0) < 1e-8);
}

TEST_CASE("omega constant") {
    Eigen::MatrixXcd A = random_matrix(20, 20, 11);
    Eigen::MatrixXcd Hm = A + A.adjoint();
    OmegaResult z = omega_constant(Hm, 0.1, 10.0);
    CHECK(z.omega == 0.0);
    CHECK(z.verdict == Verdict::True);

    for (int k : {1, 3, 5}) {
        Eigen::MatrixXcd B = random_matrix(25, 25 + k, 100 + k);
        OmegaResult r = omega_constant(B, 0.1, 10.0);
        CHECK(r.verdict == Verdict::True);
        CHECK(std::abs(r.omega - k) < 1e-8);
        CHECK_FALSE(r.log_at_zero);
        OmegaResult r2 = omega_constant(B, 0.02, 2.0);
        CHECK(std::abs(r.omega - r2.omega) < 1e-3);
    }
    CHECK_THROWS_AS(omega_constant(Hm, 1.0, 0.5), ConfigError);
}

TEST_CASE("eta term, trivial and rank one") {
    EtaResult z = eta_term(MellinPerturbation::zero(2, 1.0));
    CHECK(std::abs(z.eta) < 1e-14);

    // b < w < sqrt(b^2 + c)
    MellinPerturbation h = MellinPerturbation::rank_one(1.0, 0.5, 1.0);
    EtaResult e = eta_term(h);
    CHECK(std::abs(e.eta - 1.0) < 1e-6);
    CHECK(e.imag_residue < 1e-6);
    Census c = argument_census(h);
    CHECK(c.zeros_below == 1);
    CHECK(c.poles_below == 0);
    CHECK(std::lround(e.eta) == c.zeros_below - c.poles_below);

    // independent count over a small parameter table
    for (double cc : {0.3, 1.0, 4.0})
        for (double b : {0.4, 1.3, 2.0}) {
            MellinPerturbation g = MellinPerturbation::rank_one(cc, b, 1.0);
            EtaResult r = eta_term(g);
            const int expect = rank_one_count(cc, b, 1.0);
            CHECK(std::abs(r.eta - expect) < 1e-6);
            Census k = argument_census(g);
            CHECK(k.zeros_below - k.poles_below == expect);
        }
}

TEST_CASE("eta term, matrix family, reflection and shift") {
    MellinPerturbation h = MellinPerturbation::zero(2, 1.0);
    Eigen::MatrixXcd P(2, 2);
    P << 1.0, 0.3, 0.3, 0.5;
    h.add(1.5, 0.4, 0.6, P);
    Eigen::MatrixXcd Q(2, 2);
    Q << 0.0, cplx(0.0, 0.2), cplx(0.0, -0.2), 1.0;
    h.add(cplx(2.0, 0.5), -0.7, 1.8, Q);

    EtaResult e = eta_term(h);
    Census c = argument_census(h);
    CHECK(std::abs(e.eta - std::round(e.eta)) < 1e-6);
    CHECK(std::lround(e.eta) == c.zeros_below - c.poles_below);

    MellinPerturbation r = h.reflected();
    // the reflected family is conj H(-conj sigma)
    const cplx s(0.37, -1.0);
    CHECK((r.H(s) - h.H(-std::conj(s)).conjugate()).norm() < 1e-14);
    EtaResult er = eta_term(r);
    Census cr = argument_census(r);
    CHECK(std::lround(er.eta) == cr.zeros_below - cr.poles_below);
    CHECK(std::abs(er.eta - std::round(er.eta)) < 1e-6);

    for (double sh : {-3.0, 0.25, 5.0}) CHECK(std::abs(eta_term(h, 200.0, sh).eta - e.eta) < 1e-8);
}

TEST_CASE("eta term errors") {
    // 1 + c/(sigma^2 + b^2) vanishes at sigma = -i w when c = w^2 - b^2
    MellinPerturbation h = MellinPerturbation::rank_one(0.75, 0.5, 1.0);
    try {
        eta_term(h);
        FAIL("expected PoleError");
    } catch (const PoleError& e) {
        CHECK(std::abs(e.z() - cplx(0.0, -1.0)) < 1e-4);
    }
    CHECK_THROWS_AS(MellinPerturbation::rank_one(1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(eta_term(MellinPerturbation::zero(1, 1.0), -1.0), ConfigError);
}

TEST_CASE("index assembly") {
    Eigen::MatrixXcd A = random_matrix(12, 12, 5);
    Factorization f{A + A.adjoint(), MellinPerturbation::rank_one(1.0, 0.5, 1.0)};
    IndexReport r = index_assemble(f);
    CHECK(std::abs(r.index + 1.0) < 1e-6);
    CHECK(r.integer_distance < 1e-6);
    CHECK(r.verdict == Verdict::True);
    // Ind(1 + H) = -eta
    CHECK(std::abs(r.index + r.eta) < 1e-12);

    Factorization g{random_matrix(10, 13, 9), MellinPerturbation::zero(1, 1.0)};
    IndexReport q = index_assemble(g);
    CHECK(std::abs(q.index - q.omega) < 1e-14);
    CHECK(std::abs(q.index - 3.0) < 1e-6);
    CHECK(q.to_csv().rfind("omega,eta,index,integer_distance,flags\n", 0) == 0);
}

TEST_CASE("graph-norm convergence of the frozen cut") {
    ConeOperator op = ConeOperator::laplace_type(1.5, 1, 2.0, 1.0, 0.5);
    std::vector<double> taus;
    for (int k = 1; k <= 5; ++k) taus.push_back(std::ldexp(1.0, -k));
    ConstReport r = invariance_red_to_const(op, taus, 0.1, -10.0, 300);
    CHECK(r.slope >= 0.8);
    CHECK(r.verdict == Verdict::True);
    for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].ratio < r.rows[i - 1].ratio);

    ConeOperator flat = ConeOperator::laplace_type(1.5, 1);
    ConstReport z = invariance_red_to_const(flat, taus, 0.1, -10.0, 300);
    for (const auto& row : z.rows) CHECK(row.ratio == 0.0);
    CHECK(z.verdict == Verdict::True);
    CHECK_THROWS_AS(invariance_red_to_const(op, {0.5}, 0.1), ConfigError);
}

TEST_CASE("Sobolev shift of the domain") {
    ConeOperator op = ConeOperator::laplace_type(1.5, 1);
    SobolevReport r = invariance_red_to_sobolev(op, {0.0, 0.2, 0.4, 0.6});
    CHECK(std::abs(r.margin - 0.5) < 1e-8);
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) {
        CHECK(row.ker == 0);
        CHECK(row.coker == 0);
        CHECK_FALSE(row.ambiguous);
    }
    CHECK(r.rows[0].ker_eps == r.rows[0].ker);
    CHECK_FALSE(r.rows[0].crossing);
    CHECK_FALSE(r.rows[1].crossing);
    CHECK_FALSE(r.rows[2].crossing);
    CHECK(r.rows[3].crossing);
    CHECK(r.verdict == Verdict::True);
    CHECK_THROWS_AS(invariance_red_to_sobolev(op, {-0.1}), ConfigError);
}
