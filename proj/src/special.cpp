#include "conespec/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

namespace conespec {

cplx gamma_complex(cplx z) {
    static const double g = 7.0;
    static const double c[9] = {0.99999999999980993,  676.5203681218851,
                                -1259.1392167224028,  771.32342877765313,
                                -176.61502916214059,  12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6,
                                1.5056327351493116e-7};
    const double pi = std::numbers::pi;
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw PoleError("gamma pole", z);
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    cplx t = z + g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx bessel_i_ratio(double nu, cplx z) {
    // Backward recurrence r_{mu-1} = 1 / (2 mu / z + r_mu) from a uniform
    // estimate of r at order nu + L.
    if (!(z.real() > 0.0)) throw ConfigError("bessel_i_ratio needs Re z > 0");
    const int L = 80 + int(2.0 * std::abs(z));
    double mu = nu + L + 0.5;
    cplx r = z / (mu + std::sqrt(mu * mu + z * z));
    for (int i = L; i >= 1; --i) r = 1.0 / (2.0 * (nu + i) / z + r);
    return r;
}

double poly_eval(const std::vector<double>& c, double x) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

std::vector<double> poly_deriv(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = double(i) * c[i];
    return d;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<std::vector<double>> debye_polynomials(int kmax) {
    // u_{k+1} = t^2 (1 - t^2) u_k' / 2 + (1/8) int_0^t (1 - 5 s^2) u_k(s) ds
    std::vector<std::vector<double>> u{{1.0}};
    for (int k = 0; k < kmax; ++k) {
        const auto& p = u.back();
        auto a = poly_mul(poly_mul({0.0, 0.0, 0.5, 0.0, -0.5}, {1.0}), poly_deriv(p));
        auto b = poly_mul({1.0, 0.0, -5.0}, p);
        std::vector<double> ib(b.size() + 1, 0.0);
        for (std::size_t i = 0; i < b.size(); ++i) ib[i + 1] = b[i] / double(i + 1) / 8.0;
        std::vector<double> next(std::max(a.size(), ib.size()), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) next[i] += a[i];
        for (std::size_t i = 0; i < ib.size(); ++i) next[i] += ib[i];
        u.push_back(next);
    }
    return u;
}

std::vector<double> bessel_j_zeros(double nu, int count) {
    if (!(nu >= 0.0)) throw ConfigError("Bessel order must be nonnegative");
    std::vector<double> out;
    if (count <= 0) return out;
    auto J = [nu](double x) { return boost::math::cyl_bessel_j(nu, x); };
    // First zero exceeds nu; consecutive zeros are more than pi/2 apart,
    // so a step of 0.5 cannot skip a sign change.
    const double step = 0.5;
    double a = std::max(nu, 1e-3);
    double fa = J(a);
    const double limit = nu + 4.0 * (count + 10) * std::numbers::pi;
    while (int(out.size()) < count) {
        double b = a + step;
        if (b > limit) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "bracketing failed for nu=%g after %zu zeros, last interval [%g, %g]", nu,
                          out.size(), a, b);
            throw NumericalError(buf);
        }
        double fb = J(b);
        if (fa == 0.0) {
            out.push_back(a);
        } else if (fa * fb < 0.0) {
            boost::uintmax_t iters = 200;
            auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-15 * std::abs(l); };
            auto r = boost::math::tools::toms748_solve(J, a, b, fa, fb, tol, iters);
            double root = 0.5 * (r.first + r.second);
            if (std::abs(r.second - r.first) > 1e-12 * root) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "zero refinement failed for nu=%g in [%g, %g]", nu,
                              a, b);
                throw NumericalError(buf, r.second - r.first);
            }
            out.push_back(root);
        }
        a = b;
        fa = fb;
    }
    return out;
}

std::vector<double> fd_weights(int order, int half) {
    // Fornberg's algorithm at x0 = 0 on nodes -half..half.
    const int n = 2 * half + 1;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = double(i - half);
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0, c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, order);
        double c2 = 1.0, c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][order];
    return w;
}

cplx mellin_log_power(cplx w, int j, double t0) {
    // d^j/dw^j [e^{wL} / w] = e^{wL} sum_i C(j,i) L^{j-i} (-1)^i i! / w^{i+1}
    const double L = std::log(t0);
    cplx s = 0.0;
    double binom = 1.0, fact = 1.0;
    for (int i = 0; i <= j; ++i) {
        if (i > 0) {
            binom = binom * double(j - i + 1) / double(i);
            fact *= double(i);
        }
        double sign = (i % 2) ? -1.0 : 1.0;
        s += binom * std::pow(L, j - i) * sign * fact / std::pow(w, i + 1);
    }
    return std::exp(w * L) * s;
}

} // namespace conespec
