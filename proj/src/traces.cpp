#include "conespec/traces.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "conespec/special.hpp"

namespace conespec {

namespace {

using GL16 = boost::math::quadrature::gauss<double, 16>;

// Integral of f over [a, b] with `panels` Gauss-Legendre panels.
template <class F>
double gl_panels(F f, double a, double b, int panels) {
    const auto& x = GL16::abscissa();
    const auto& w = GL16::weights();
    const double hp = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * hp, r = 0.5 * hp;
        // Boost stores nonnegative nodes only; x[0] = 0 for odd orders.
        const std::size_t first = x[0] == 0.0 ? 1 : 0;
        double part = first ? w[0] * f(c) : 0.0;
        for (std::size_t i = first; i < x.size(); ++i)
            part += w[i] * (f(c + r * x[i]) + f(c - r * x[i]));
        sum += r * part;
    }
    return sum;
}

// nu_m^2 = c0(m) for the sigma^2 + c0(m) family the closed forms need.
double mode_nu(const ConeOperator& op, int m) {
    double c0 = op.coeffs[0].eval(m, 0.0).real();
    if (c0 <= 0.0) throw ConfigError("closed forms need c0(m) > 0");
    return std::sqrt(c0);
}

void require_bessel_model(const ConeOperator& op) {
    if (std::abs(op.mu - 2.0) > 1e-14 || op.has_x_perturbation() || op.coeffs.size() != 3 ||
        !op.coeffs[1].is_zero() || op.coeffs[2].m_dependent() ||
        op.coeffs[2].eval(0, 0) != 1.0 || !op.coeffs[0].is_real())
        throw ConfigError("closed forms need a frozen mu = 2 operator sigma^2 + c0(m)");
}

// Bound on |<B u, u>| for a W-normalized eigenfunction with eigenvalue lambda:
// C0 lambda^p. Hardy: <x^{-2} u, u> <= lambda / nu_min^2.
void weight_growth(const WeightOperator& B, double nu_min, double& C0, double& p) {
    if (B.beta > 2.0) throw ConfigError("weight beta > 2 is not covered by the tail bound");
    C0 = B.sup_g() * std::pow(2.0, 0.5 * std::max(0.0, B.mu_prime));
    p = 0.5 * std::max(0.0, B.mu_prime);
    if (B.beta > 0.0) {
        C0 *= std::pow(nu_min, -B.beta);
        p += 0.5 * B.beta;
    }
}

// Weyl-law bound on sum_{lambda > c} e^{-t lambda} C0 lambda^p.
double weighted_tail(double weyl_c, double c, double t, double C0, double p) {
    return weyl_c * C0 * boost::math::tgamma(p + 2.0, t * c) / std::pow(t, p + 1.0);
}

std::vector<double> sorted_params(std::vector<double> v) {
    for (double t : v)
        if (!(t > 0.0)) throw ConfigError("trace parameters must be positive");
    return v;
}

} // namespace

std::vector<double> TraceSeries::params() const {
    std::vector<double> p;
    for (const auto& s : samples) p.push_back(s.param);
    return p;
}

std::vector<cplx> TraceSeries::values() const {
    std::vector<cplx> v;
    for (const auto& s : samples) v.push_back(s.value);
    return v;
}

std::string TraceSeries::to_csv() const {
    std::ostringstream os;
    os << "param,value_re,value_im,tail_bound\n";
    char buf[128];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.6g\n", s.param, s.value.real(),
                      s.value.imag(), s.tail);
        os << buf;
    }
    return os.str();
}

double WeightOperator::multiplier(double x) const {
    double g = 1.0;
    if (phi_mode == PhiMode::OneNearZero) g = phi(x);
    if (phi_mode == PhiMode::ZeroNearZero) g = 1.0 - phi(x);
    return beta == 0.0 ? g : g * std::pow(x, -beta);
}

double WeightOperator::mode_factor(int m) const {
    return mu_prime == 0.0 ? 1.0 : std::pow(1.0 + double(m) * m, 0.5 * mu_prime);
}

bool WeightOperator::is_identity() const {
    return beta == 0.0 && mu_prime == 0.0 && phi_mode == PhiMode::Identity;
}

double WeightOperator::support() const {
    return phi_mode == PhiMode::OneNearZero ? phi.c2 : 1.0;
}

WeightOperator WeightOperator::cutoff(double beta, Cutoff phi) {
    WeightOperator b;
    b.beta = beta;
    b.phi_mode = PhiMode::OneNearZero;
    b.phi = phi;
    return b;
}

double required_lambda_cut(const SpectralData& spec, double t, double value, double rel_tol) {
    double c = std::max(spec.lambda_cut, 1.0);
    while (spec.weyl_c * (c + 1.0 / t) * std::exp(-t * c) > rel_tol * std::abs(value)) c *= 1.1;
    return c;
}

TraceSeries heat_trace(const SpectralData& spec, const std::vector<double>& t_grid,
                       double rel_tol) {
    TraceSeries out;
    out.kind = "heat";
    std::vector<double> v = spec.all_values();
    for (double t : sorted_params(t_grid)) {
        double sum = 0.0;
        for (auto it = v.rbegin(); it != v.rend(); ++it) sum += std::exp(-t * *it);
        double tail = spec.heat_tail(t);
        if (tail > rel_tol * sum) {
            double need = required_lambda_cut(spec, t, sum, rel_tol);
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "heat trace at t=%g: tail %.3g exceeds %.3g of the value; need "
                          "lambda_cut >= %.4g (about %.0f eigenvalues, have %zu)",
                          t, tail, rel_tol, need, spec.weyl_c * need / 1.2, spec.count());
            throw NumericalError(buf, tail);
        }
        out.samples.push_back({t, sum, tail});
    }
    return out;
}

TraceSeries weighted_heat_trace(const ConeOperator& op, const WeightOperator& B,
                                const std::vector<double>& t_grid, double rel_tol) {
    require_bessel_model(op);
    std::vector<double> ts = sorted_params(t_grid);
    const double tmin = *std::min_element(ts.begin(), ts.end());
    if (B.is_identity()) {
        SpectralData sd = oracle_spectrum(op, 30.0 / tmin);
        return heat_trace(sd, ts, rel_tol < 0.01 ? 0.01 : rel_tol);
    }
    double nu_min = mode_nu(op, 0);
    for (int m = 1; m <= 50; ++m) nu_min = std::min({nu_min, mode_nu(op, m), mode_nu(op, -m)});
    double C0, p;
    weight_growth(B, nu_min, C0, p);

    SpectralData spec;
    double cut = 30.0 / tmin;
    std::vector<std::vector<double>> weights;
    for (int attempt = 0;; ++attempt) {
        spec = oracle_spectrum(op, cut);
        double tail = weighted_tail(spec.weyl_c, cut, tmin, C0, p);
        double scale = spec.weyl_c / tmin; // order of the unweighted trace
        if (B.is_identity() || tail < 1e-3 * rel_tol * scale) break;
        if (attempt > 12) throw NumericalError("weighted heat trace: tail bound does not close", tail);
        cut *= 1.5;
    }
    const double supp = B.support();
    for (const auto& ms : spec.modes) {
        std::vector<double> w;
        const double fac = B.mode_factor(ms.mode);
        for (double lam : ms.values) {
            if (B.is_identity()) {
                w.push_back(1.0);
                continue;
            }
            double j = std::sqrt(lam);
            double jn1 = boost::math::cyl_bessel_j(ms.nu + 1.0, j);
            int panels = std::max(8, int(std::ceil(2.0 * j * supp / std::numbers::pi))) + 8;
            double integral = gl_panels(
                [&](double x) {
                    if (x <= 0.0) return 0.0;
                    double jv = boost::math::cyl_bessel_j(ms.nu, j * x);
                    return x * B.multiplier(x) * jv * jv;
                },
                0.0, supp, panels);
            w.push_back(fac * 2.0 * integral / (jn1 * jn1));
        }
        weights.push_back(std::move(w));
    }

    TraceSeries out;
    out.kind = "heat";
    out.meta.beta = B.beta;
    out.meta.mu_prime = B.mu_prime;
    for (double t : ts) {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.modes.size(); ++i)
            for (std::size_t k = 0; k < weights[i].size(); ++k)
                sum += std::exp(-t * spec.modes[i].values[k]) * weights[i][k];
        double tail = weighted_tail(spec.weyl_c, spec.lambda_cut, t, C0, p);
        if (tail > rel_tol * std::abs(sum))
            throw NumericalError("weighted heat trace: tail above tolerance at t=" +
                                     std::to_string(t),
                                 tail);
        out.samples.push_back({t, sum, tail});
    }
    return out;
}

TraceSeries weighted_heat_trace(const Discretization& disc, const WeightOperator& B,
                                const std::vector<double>& t_grid, double rel_tol) {
    std::vector<double> ts = sorted_params(t_grid);
    SpectralData spec = discrete_spectrum(disc);
    double sup_mult = 0.0, sup_fac = 0.0;
    for (int k = 0; k < disc.npoints(); ++k)
        sup_mult = std::max(sup_mult, std::abs(B.multiplier(std::exp(disc.s[k]))));
    std::vector<std::vector<std::pair<double, double>>> pairs; // (lambda, <Bu,u>)
    for (std::size_t i = 0; i < disc.modes.size(); ++i) {
        const int m = disc.modes[i].mode;
        sup_fac = std::max(sup_fac, B.mode_factor(m));
        std::vector<std::pair<double, double>> pm;
        if (B.is_identity()) {
            for (double v : spec.modes[i].values) pm.push_back({v, 1.0});
        } else {
            Eigen::VectorXd vals;
            Eigen::MatrixXd vecs;
            disc.eigenpairs(int(i), vals, vecs);
            for (int j = 0; j < vals.size() && vals[j] <= spec.lambda_cut; ++j) {
                double acc = 0.0;
                for (int k = 0; k < disc.npoints(); ++k)
                    acc += disc.weight[k] * B.multiplier(std::exp(disc.s[k])) * vecs(k, j) * vecs(k, j);
                pm.push_back({vals[j], disc.h * acc * B.mode_factor(m)});
            }
        }
        pairs.push_back(std::move(pm));
    }
    TraceSeries out;
    out.kind = "heat";
    out.meta.beta = B.beta;
    out.meta.mu_prime = B.mu_prime;
    for (double t : ts) {
        double sum = 0.0;
        for (const auto& pm : pairs)
            for (auto [lam, w] : pm) sum += std::exp(-t * lam) * w;
        double tail = spec.heat_tail(t) * (B.is_identity() ? 1.0 : sup_mult * sup_fac);
        if (tail > rel_tol * std::abs(sum))
            throw NumericalError("weighted heat trace: discrete tail above tolerance at t=" +
                                     std::to_string(t),
                                 tail);
        out.samples.push_back({t, sum, tail});
    }
    return out;
}

TraceSeries model_cone_heat_trace(const ConeOperator& op, const WeightOperator& B,
                                  const std::vector<double>& t_grid) {
    require_bessel_model(op);
    const double supp = B.support();
    if (B.is_identity() || !(supp < 1.0))
        throw ConfigError("model cone trace needs a multiplier supported in x < 1");
    if (B.beta >= 2.0 || B.mu_prime != 0.0)
        throw ConfigError("model cone trace needs beta < 2 and mu' = 0");
    std::vector<double> ts = sorted_params(t_grid);
    TraceSeries out;
    out.kind = "heat";
    out.meta.beta = B.beta;
    out.meta.mu_prime = B.mu_prime;
    for (double t : ts) {
        if (supp * supp / (2.0 * t) > 700.0)
            throw ConfigError("model cone trace: t below supp^2/1400 overflows I_nu");
        // sum_m (1 + m^2)^{mu'/2} e^{-z} I_{nu_m}(z); terms fall off once nu^2 >> z
        auto kernel = [&](double x) {
            const double z = x * x / (2.0 * t);
            double sum = 0.0;
            auto term = [&](int m) { return std::exp(-z) * boost::math::cyl_bessel_i(mode_nu(op, m), z); };
            for (int am = 0;; ++am) {
                double part = am == 0 ? term(0) : term(am) + term(-am);
                sum += part;
                if (double(am) * am > 4.0 * z + 100.0 && part < 1e-17 * sum) break;
            }
            return sum / (2.0 * t);
        };
        auto integrand = [&](double x) {
            return x > 0.0 ? x * B.multiplier(x) * kernel(x) : 0.0;
        };
        // geometric panels up to the cutoff plateau, uniform across the transition
        double value = 0.0;
        double lo = 1e-3 * std::sqrt(t);
        const double c1 = std::min(B.phi.c1, supp);
        for (double a = lo; a < c1; a *= 1.25) value += gl_panels(integrand, a, std::min(1.25 * a, c1), 1);
        if (supp > c1) value += gl_panels(integrand, c1, supp, 12);
        // Gaussian bound on the Dirichlet correction to the diagonal kernel.
        double tail = supp * std::pow(supp, 1.0 - B.beta) / (2.0 - B.beta) / (2.0 * t) *
                      std::exp(-(1.0 - supp) * (1.0 - supp) / t);
        out.samples.push_back({t, value, tail});
    }
    return out;
}

double heat_trace_contour(const Discretization& disc, double t, const ContourSpec& c) {
    if (!(t > 0.0)) throw ConfigError("contour: t must be positive");
    if (c.N < 2) throw ConfigError("contour: N >= 2 is needed for integrability");
    if (!(c.a < 0.0)) throw ConfigError("contour: a must be negative");
    if (!(c.delta > 0.0 && c.delta < std::numbers::pi / 2))
        throw ConfigError("contour: delta must lie in (0, pi/2)");
    std::vector<double> lam;
    for (std::size_t i = 0; i < disc.modes.size(); ++i) {
        Eigen::VectorXd v = disc.eigenvalues(int(i));
        lam.insert(lam.end(), v.data(), v.data() + v.size());
    }
    if (*std::min_element(lam.begin(), lam.end()) <= c.a)
        throw ConfigError("contour: spectrum reaches left of a");

    const cplx dir = std::polar(1.0, c.delta);
    const int N = c.N;
    // Im(e^{i delta} e^{-t lambda} sum_j (lambda_j - lambda)^{-N}) on the upper ray.
    auto integrand = [&](double r) {
        cplx l = c.a + r * dir;
        cplx s = 0.0;
        for (double lj : lam) {
            cplx d = 1.0 / (lj - l), p = d;
            for (int k = 1; k < N; ++k) p *= d;
            s += p;
        }
        return (dir * std::exp(-t * l) * s).imag();
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0, lo = 0.0, hi = 1.0 / t;
    for (int panel = 0; panel < 200; ++panel) {
        double part = GK::integrate(integrand, lo, hi, 12, 1e-12);
        total += part;
        if (panel > 2 && std::abs(part) < c.rel_tol * std::abs(total)) break;
        lo = hi;
        hi *= 2.0;
    }
    // (i/2pi) (N-1)! t^{1-N} times the oriented integral -2i int Im(...) dr.
    double fact = std::tgamma(double(N));
    return fact * std::pow(t, 1.0 - N) * total / std::numbers::pi;
}

TraceSeries resolvent_power_trace(const Discretization& disc, const WeightOperator& B, int N,
                                  const std::vector<cplx>& lambdas) {
    const int n = 2;
    if (!(N * disc.mu - B.mu_prime > n))
        throw ConfigError("resolvent power trace needs N mu - mu' > n for trace class");
    std::vector<std::vector<std::pair<double, double>>> pairs;
    for (std::size_t i = 0; i < disc.modes.size(); ++i) {
        std::vector<std::pair<double, double>> pm;
        if (B.is_identity()) {
            Eigen::VectorXd v = disc.eigenvalues(int(i));
            for (int j = 0; j < v.size(); ++j) pm.push_back({v[j], 1.0});
        } else {
            Eigen::VectorXd vals;
            Eigen::MatrixXd vecs;
            disc.eigenpairs(int(i), vals, vecs);
            const double fac = B.mode_factor(disc.modes[i].mode);
            for (int j = 0; j < vals.size(); ++j) {
                double acc = 0.0;
                for (int k = 0; k < disc.npoints(); ++k)
                    acc += disc.weight[k] * B.multiplier(std::exp(disc.s[k])) * vecs(k, j) * vecs(k, j);
                pm.push_back({vals[j], disc.h * acc * fac});
            }
        }
        pairs.push_back(std::move(pm));
    }
    TraceSeries out;
    out.kind = "resolvent";
    out.meta = {disc.mu, B.mu_prime, B.beta, n, N};
    for (cplx l : lambdas) {
        cplx sum = 0.0;
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& pm : pairs)
            for (auto [lj, w] : pm) {
                cplx d = lj - l;
                gap = std::min(gap, std::abs(d));
                sum += w * std::pow(d, -N);
            }
        if (gap < 1e-10 * std::max(1.0, std::abs(l)))
            throw NumericalError("resolvent power trace: lambda is within rounding of the spectrum", gap);
        out.samples.push_back({std::abs(l), sum, 0.0});
    }
    return out;
}

cplx bessel_resolvent_mode(double nu, cplx s, int N) {
    if (N < 1) throw ConfigError("resolvent power must be positive");
    if (s.imag() == 0.0 && s.real() <= 0.0) throw ConfigError("closed form needs s off (-inf, 0]");
    // F(s) = sum_k (j_k^2 + s)^{-1} = r(k) / (2k), k = sqrt(s), r = I_{nu+1}/I_nu, and
    // 4 s F' = 1 - 4 (nu+1) F - 4 s F^2. Taylor jets of F at s give the powers.
    const cplx k = std::sqrt(s);
    std::vector<cplx> f(N), f2(N);
    f[0] = bessel_i_ratio(nu, k) / (2.0 * k);
    for (int m = 0; m + 1 < N; ++m) {
        f2[m] = 0.0;
        for (int i = 0; i <= m; ++i) f2[m] += f[i] * f[m - i];
        cplx rhs = (m == 0 ? 1.0 : 0.0) - 4.0 * (nu + 1.0) * f[m] - 4.0 * s * f2[m];
        if (m > 0) rhs -= 4.0 * f2[m - 1];
        f[m + 1] = (rhs - 4.0 * double(m) * f[m]) / (4.0 * s * double(m + 1));
    }
    return (N % 2 == 1 ? 1.0 : -1.0) * f[N - 1];
}

namespace {

// -d/ds of the diagonal Green function of mode nu at radius x, s = k^2, N = 2.
double green_diag_ds(double nu, double k, double x, const std::vector<std::vector<double>>& u) {
    using boost::math::cyl_bessel_i;
    using boost::math::cyl_bessel_i_prime;
    using boost::math::cyl_bessel_k;
    using boost::math::cyl_bessel_k_prime;
    if (nu >= 25.0) {
        // Debye: I K(nu z) ~ (t / 2nu) sum_k Q_k(t) nu^{-2k}, t = nu / sqrt(nu^2 + s x^2).
        double t = nu / std::sqrt(nu * nu + k * k * x * x);
        double dt = -t * t * t * x * x / (2.0 * nu * nu);
        double acc = 0.0, scale = 1.0;
        for (int kk = 0; kk <= 4; ++kk) {
            double d = 0.0;
            for (int i = 0; i <= 2 * kk; ++i) {
                int j = 2 * kk - i;
                double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                // d/dt [t u_i(t) u_j(t)]
                double ui = poly_eval(u[i], t), uj = poly_eval(u[j], t);
                double dui = poly_eval(poly_deriv(u[i]), t), duj = poly_eval(poly_deriv(u[j]), t);
                d += sgn * (ui * uj + t * (dui * uj + ui * duj));
            }
            acc += d * scale;
            scale /= nu * nu;
        }
        return -acc * dt / (2.0 * nu);
    }
    double z = k * x;
    double I = cyl_bessel_i(nu, z), K = cyl_bessel_k(nu, z);
    double Ip = cyl_bessel_i_prime(nu, z), Kp = cyl_bessel_k_prime(nu, z);
    double dk = x * (Ip * K + I * Kp);
    if (k < 400.0) {
        double I1 = cyl_bessel_i(nu, k), K1 = cyl_bessel_k(nu, k);
        dk -= -I * I / (k * I1 * I1) + (K1 / I1) * 2.0 * I * Ip * x;
    }
    return -dk / (2.0 * k);
}

double green_mode_value(double nu, double k, const WeightOperator& B,
                        const std::vector<std::vector<double>>& u) {
    // Integrate in log x; the Green function varies on the scale x ~ nu / k.
    const double hi = std::log(B.support());
    const double lo = std::log(std::max(1e-12, 1e-6 * std::max(1.0, nu) / k));
    int panels = std::max(24, int(3.0 * (hi - lo)));
    return gl_panels(
        [&](double l) {
            double x = std::exp(l);
            return x * x * B.multiplier(x) * green_diag_ds(nu, k, x, u);
        },
        lo, hi, panels);
}

// Sum over modes -M..M with power-law extrapolated tails on both sides.
template <class Term>
std::pair<cplx, double> mode_sum(Term term, int M) {
    cplx sum = 0.0;
    std::vector<cplx> side_p(M + 1), side_m(M + 1);
    for (int m = 0; m <= M; ++m) {
        side_p[m] = term(m);
        side_m[m] = m == 0 ? side_p[0] : term(-m);
        sum += side_p[m] + (m == 0 ? 0.0 : side_m[m]);
    }
    double bound = 0.0;
    for (auto* side : {&side_p, &side_m}) {
        auto extrap = [&](int a, int b) {
            const std::vector<cplx>& v = *side;
            double p = std::log(std::abs(v[a]) / std::abs(v[b])) / std::log(double(b) / a);
            if (!std::isfinite(p) || p <= 1.5) p = 3.0;
            cplx c = v[b] * std::pow(double(b), p);
            return c * std::pow(M + 0.5, 1.0 - p) / (p - 1.0);
        };
        cplx t1 = extrap(M / 2, M), t2 = extrap((3 * M) / 4, M);
        sum += t1;
        bound += std::abs(t1 - t2) + 1e-3 * std::abs(t1);
    }
    return {sum, bound};
}

} // namespace

TraceSeries resolvent_power_trace_modal(const ConeOperator& op, const WeightOperator& B, int N,
                                        const std::vector<cplx>& lambdas) {
    require_bessel_model(op);
    const int n = 2;
    if (!(N * op.mu - B.mu_prime > n))
        throw ConfigError("resolvent power trace needs N mu - mu' > n for trace class");
    TraceSeries out;
    out.kind = "resolvent";
    out.meta = {op.mu, B.mu_prime, B.beta, n, N};
    auto u = debye_polynomials(8);
    for (cplx l : lambdas) {
        cplx s = -l;
        std::pair<cplx, double> r;
        if (B.phi_mode == PhiMode::Identity && B.beta == 0.0) {
            int M = std::max(10000, int(100.0 * std::abs(std::sqrt(s))));
            r = mode_sum(
                [&](int m) { return B.mode_factor(m) * bessel_resolvent_mode(mode_nu(op, m), s, N); },
                M);
        } else {
            if (N != 2 || l.imag() != 0.0 || l.real() >= 0.0)
                throw ConfigError("weighted modal route covers N = 2 and real lambda < 0 only");
            if (B.phi_mode != PhiMode::OneNearZero)
                throw ConfigError("weighted modal route needs a multiplier supported near x = 0");
            double k = std::sqrt(s.real());
            int M = std::max(400, int(40.0 * k * B.support()));
            r = mode_sum(
                [&](int m) { return cplx(B.mode_factor(m) * green_mode_value(mode_nu(op, m), k, B, u)); },
                M);
        }
        out.samples.push_back({std::abs(l), r.first, r.second});
    }
    return out;
}

cplx complex_power_sum(const SpectralData& spec, cplx z, double* tail_out, double rel_tol) {
    // Weyl exponent n / mu = 1 for the models SpectralData carries.
    const double x = z.real();
    if (!(x < -1.5)) throw ConfigError("complex power sum needs Re z < -n/mu - 0.5");
    std::vector<double> v = spec.all_values();
    cplx sum = 0.0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) sum += std::pow(*it, z);
    const double c = spec.lambda_cut;
    double tail = spec.weyl_c * (-x) * std::pow(c, x + 1.0) / (-x - 1.0);
    if (tail_out) *tail_out = tail;
    if (tail > rel_tol * std::abs(sum))
        throw NumericalError("complex power sum: tail bound above tolerance; raise lambda_cut", tail);
    return sum;
}

} // namespace conespec
