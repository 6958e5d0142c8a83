#include "conespec/asymptotics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "conespec/special.hpp"

namespace conespec {

namespace {

constexpr double kTol = 1e-9;

bool is_nonneg_int(double v) { return v > -kTol && std::abs(v - std::round(v)) < kTol; }

// k in step * N0 + shift
bool in_lattice(double k, double step, double shift) { return is_nonneg_int((k - shift) / step); }

void add_term(std::vector<PredictedTerm>& out, double gamma, int log) {
    for (auto& t : out)
        if (std::abs(t.gamma - gamma) < kTol) {
            t.max_log = std::max(t.max_log, log);
            return;
        }
    out.push_back({gamma, log});
}

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// Adaptive Gauss-Kronrod over [a, b] split into pieces of at most `piece`.
template <class F>
double integrate_pieces(F f, double a, double b, double piece, double& err) {
    double sum = 0.0;
    int n = std::max(1, int(std::ceil((b - a) / piece)));
    double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
        double e = 0.0;
        sum += GK::integrate(f, a + i * h, a + (i + 1) * h, 12, 1e-13, &e);
        err += e;
    }
    return sum;
}

std::vector<std::pair<double, int>> index_columns(const IndexSet& s, bool probes) {
    std::vector<std::pair<double, int>> cols;
    for (const auto& e : s.tops()) {
        if (std::abs(e.z.imag()) > 1e-12)
            throw ConfigError("lemma fits need real exponents");
        for (int j = 0; j <= e.k + (probes ? 1 : 0); ++j) cols.push_back({e.z.real(), j});
    }
    return cols;
}

LemmaResult lemma_verdict(LogPolyExpansion fit, IndexSet predicted) {
    LemmaResult r;
    r.verdict = Verdict::True;
    for (const auto& t : fit.terms) {
        bool in = predicted.contains(t.gamma, t.j);
        if (t.detected && !in) {
            r.verdict = Verdict::False;
            char buf[96];
            std::snprintf(buf, sizeof buf, "detected x^%g log^%d outside the predicted set; ", t.gamma, t.j);
            r.note += buf;
        }
        if (!t.detected && in) r.absent.push_back(t);
    }
    r.fit = std::move(fit);
    r.predicted = std::move(predicted);
    return r;
}

} // namespace

cplx LogPolyExpansion::eval(double t) const {
    cplx s = 0.0;
    const double l = std::log(t);
    for (const auto& term : terms) s += term.c * std::pow(t, term.gamma) * std::pow(l, term.j);
    return s;
}

const ExpansionTerm* LogPolyExpansion::find(double gamma, int j) const {
    for (const auto& t : terms)
        if (t.j == j && std::abs(t.gamma - gamma) < kTol) return &t;
    return nullptr;
}

std::vector<ExpansionTerm> LogPolyExpansion::detected() const {
    std::vector<ExpansionTerm> d;
    for (const auto& t : terms)
        if (t.detected) d.push_back(t);
    return d;
}

std::string LogPolyExpansion::to_csv() const {
    std::ostringstream os;
    os << "gamma,logpow,coeff_re,coeff_im,detected\n";
    char buf[160];
    for (const auto& t : terms) {
        std::snprintf(buf, sizeof buf, "%.12g,%d,%.12g,%.12g,%d\n", t.gamma, t.j, t.c.real(),
                      t.c.imag(), t.detected ? 1 : 0);
        os << buf;
    }
    return os.str();
}

std::vector<PredictedTerm> predict_terms(const TraceMeta& m, SeriesKind kind, int k_max) {
    if (k_max < 0) throw ConfigError("predict_terms: k_max must be nonnegative");
    const double mu = m.mu, mp = m.mu_prime, beta = m.beta, n = m.n;
    if (!(mu > 0.0)) throw ConfigError("predict_terms: mu must be positive");
    // Heat exponents; resolvent exponents are -gamma - N with the same logs.
    const double lead = std::min({-(mp + n) / mu, -beta / mu, 0.0});
    const double span = k_max / mu + kTol;
    std::vector<PredictedTerm> out;
    auto log1_f1 = [&](double k) { return in_lattice(k, 1.0, mp + n - beta) || in_lattice(k, mu, mp + n); };
    auto log2_f1 = [&](double k) {
        double r = k - mp - n;
        return in_lattice(r, mu, 0.0) && is_nonneg_int(r + beta);
    };
    for (int k = 0;; ++k) {
        double g = (k - mp - n) / mu;
        if (g > lead + span) break;
        add_term(out, g, log2_f1(k) ? 2 : log1_f1(k) ? 1 : 0);
    }
    for (int k = 0;; ++k) {
        double g = (k - beta) / mu;
        if (g > lead + span) break;
        add_term(out, g, in_lattice(k, mu, beta) ? 1 : 0);
    }
    for (int k = 0; k <= lead + span; ++k) add_term(out, k, 0);
    if (kind == SeriesKind::Resolvent)
        for (auto& t : out) t.gamma = -t.gamma - m.N;
    std::sort(out.begin(), out.end(), [&](const PredictedTerm& a, const PredictedTerm& b) {
        return kind == SeriesKind::Heat ? a.gamma < b.gamma : a.gamma > b.gamma;
    });
    return out;
}

std::vector<std::pair<double, int>> columns_of(const std::vector<PredictedTerm>& terms) {
    std::vector<std::pair<double, int>> cols;
    for (const auto& t : terms)
        for (int j = 0; j <= t.max_log; ++j) cols.push_back({t.gamma, j});
    return cols;
}

namespace {

struct LsqResult {
    Eigen::VectorXcd coef;
    double residual = 0.0;
    double cond = 0.0;
};

LsqResult weighted_lsq(const std::vector<double>& x, const std::vector<cplx>& y,
                       const std::vector<double>& w, const std::vector<std::pair<double, int>>& cols) {
    const int m = int(x.size()), p = int(cols.size());
    LsqResult r;
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) b[i] = w[i] * y[i];
    if (p == 0) {
        r.residual = b.norm() / std::sqrt(double(m));
        return r;
    }
    Eigen::MatrixXd D(m, p);
    for (int i = 0; i < m; ++i) {
        const double l = std::log(x[i]);
        for (int c = 0; c < p; ++c)
            D(i, c) = w[i] * std::pow(x[i], cols[c].first) * std::pow(l, cols[c].second);
    }
    Eigen::VectorXd scale = D.colwise().norm();
    for (int c = 0; c < p; ++c)
        if (scale[c] > 0) D.col(c) /= scale[c];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    r.cond = sv[p - 1] > 0 ? sv[0] / sv[p - 1] : std::numeric_limits<double>::infinity();
    Eigen::VectorXd re = svd.solve(b.real()), im = svd.solve(b.imag());
    r.coef.resize(p);
    for (int c = 0; c < p; ++c) r.coef[c] = cplx(re[c], im[c]) / (scale[c] > 0 ? scale[c] : 1.0);
    Eigen::VectorXcd res = b - D.cast<cplx>() * (re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>());
    r.residual = res.norm() / std::sqrt(double(m));
    return r;
}

} // namespace

LogPolyExpansion fit_log_poly(const std::vector<double>& x, const std::vector<cplx>& y,
                              const std::vector<std::pair<double, int>>& cols,
                              const FitOptions& opt, const std::vector<double>& tails) {
    if (x.size() != y.size()) throw ConfigError("fit: x and y differ in length");
    for (double v : x)
        if (!(v > 0.0)) throw ConfigError("fit: parameters must be positive");
    if (x.size() < std::size_t(opt.min_samples_per_term) * std::max<std::size_t>(cols.size(), 1))
        throw ConfigError("fit: need at least " + std::to_string(opt.min_samples_per_term) +
                          " samples per fitted term");
    LogPolyExpansion out;
    out.param_min = *std::min_element(x.begin(), x.end());
    out.param_max = *std::max_element(x.begin(), x.end());
    for (auto [g, j] : cols) out.terms.push_back({g, j, 0.0, false, 0.0});

    double ymax = 0.0;
    for (cplx v : y) ymax = std::max(ymax, std::abs(v));
    if (ymax == 0.0) return out; // nothing to fit

    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = std::abs(y[i]) > 0 ? 1.0 / std::abs(y[i]) : 1.0 / ymax;
    LsqResult full = weighted_lsq(x, y, w, cols);
    out.conditioning = full.cond;
    if (!(full.cond <= opt.max_conditioning)) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "fit: design conditioning %.3g above %.3g; shrink the term list or widen "
                      "the window",
                      full.cond, opt.max_conditioning);
        throw NumericalError(buf, full.cond);
    }
    out.residual = full.residual;
    for (std::size_t c = 0; c < cols.size(); ++c) out.terms[c].c = full.coef[int(c)];
    const double floor = std::max(full.residual, 1e-300);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        auto reduced = cols;
        reduced.erase(reduced.begin() + long(c));
        double r = weighted_lsq(x, y, w, reduced).residual;
        out.terms[c].inflation = r / floor;
        out.terms[c].detected = r >= opt.detect_factor * floor;
    }
    if (opt.check_tails && !tails.empty()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double l = std::log(x[i]);
            for (const auto& t : out.terms) {
                if (!t.detected) continue;
                double mag = std::abs(t.c) * std::pow(x[i], t.gamma) * std::abs(std::pow(l, t.j));
                if (tails[i] > 0.01 * mag) {
                    char buf[200];
                    std::snprintf(buf, sizeof buf,
                                  "fit: truncation bound %.3g at %g exceeds 1%% of the detected "
                                  "term (%g, %d)",
                                  tails[i], x[i], t.gamma, t.j);
                    throw NumericalError(buf, tails[i]);
                }
            }
        }
    }
    return out;
}

LogPolyExpansion fit_expansion(const TraceSeries& series, const std::vector<PredictedTerm>& terms,
                               double pmin, double pmax, const FitOptions& opt) {
    std::vector<double> x, tails;
    std::vector<cplx> y;
    for (const auto& s : series.samples)
        if (s.param >= pmin * (1 - 1e-12) && s.param <= pmax * (1 + 1e-12)) {
            x.push_back(s.param);
            y.push_back(s.value);
            tails.push_back(s.tail);
        }
    return fit_log_poly(x, y, columns_of(terms), opt, tails);
}

LeadingFit fit_leading_exponent(const TraceSeries& series, const std::vector<PredictedTerm>& terms,
                                double pmin, double pmax, double lo, double hi,
                                const FitOptions& opt) {
    if (terms.empty()) throw ConfigError("fit_leading_exponent: empty term list");
    std::vector<PredictedTerm> rest(terms.begin() + 1, terms.end());
    auto cols_for = [&](double g) {
        auto cols = columns_of(rest);
        cols.insert(cols.begin(), {g, 0});
        return cols;
    };
    FitOptions quiet = opt;
    quiet.check_tails = false;
    quiet.detect_factor = opt.detect_factor;
    std::vector<double> x;
    std::vector<cplx> y;
    for (const auto& s : series.samples)
        if (s.param >= pmin * (1 - 1e-12) && s.param <= pmax * (1 + 1e-12)) {
            x.push_back(s.param);
            y.push_back(s.value);
        }
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = 1.0 / std::max(std::abs(y[i]), 1e-300);
    auto objective = [&](double g) { return std::log(weighted_lsq(x, y, w, cols_for(g)).residual + 1e-300); };
    // Coarse scan, then Brent around the best cell.
    const int scan = 40;
    double best = lo, bestv = objective(lo);
    for (int i = 1; i <= scan; ++i) {
        double g = lo + (hi - lo) * i / scan;
        double v = objective(g);
        if (v < bestv) bestv = v, best = g;
    }
    double step = (hi - lo) / scan;
    auto res = boost::math::tools::brent_find_minima(objective, std::max(lo, best - step),
                                                     std::min(hi, best + step), 50);
    LeadingFit lf;
    lf.gamma = res.first;
    lf.fit = fit_log_poly(x, y, cols_for(lf.gamma), quiet);
    return lf;
}

double pushforward_value(const std::function<double(double, double)>& u, double x) {
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("pushforward: x must lie in (0, 1)");
    // y = e^w on [x, 1]; u vanishes for x/y > 1.
    double err = 0.0;
    double v = integrate_pieces([&](double w) { return u(x * std::exp(-w), std::exp(w)); },
                                std::log(x), 0.0, 0.25, err);
    if (!std::isfinite(v) || err > 1e-9 * std::max(std::abs(v), 1e-300) + 1e-300)
        throw NumericalError("pushforward: quadrature did not converge near y = 0", err);
    return v;
}

LemmaResult pushforward_fund2(const std::function<double(double, double)>& u, const IndexSet& e_lb,
                              const IndexSet& e_rb, const std::vector<double>& x_grid) {
    IndexSet predicted = extended_union(e_lb, e_rb);
    std::vector<cplx> y;
    for (double x : x_grid) y.push_back(pushforward_value(u, x));
    FitOptions opt;
    opt.min_samples_per_term = 2;
    LogPolyExpansion fit = fit_log_poly(x_grid, y, index_columns(predicted, true), opt);
    return lemma_verdict(std::move(fit), std::move(predicted));
}

double ode_solution_value(const std::function<double(double)>& g, double a, double x, double supp) {
    if (!std::isfinite(supp)) throw ConfigError("ode_fund1: g needs a finite support bound");
    if (std::abs(g(supp)) * std::pow(supp, -a) > 1e-12)
        throw NumericalError("ode_fund1: g does not vanish at the support bound; tail integral diverges", std::abs(g(supp)));
    if (x >= supp) return 0.0;
    double err = 0.0;
    double v = integrate_pieces([&](double w) { return std::exp(-a * w) * g(std::exp(w)); },
                                std::log(x), std::log(supp), 0.25, err);
    if (!std::isfinite(v)) throw NumericalError("ode_fund1: quadrature failed", err);
    return -std::pow(x, a) * v;
}

LemmaResult ode_fund1(const std::function<double(double)>& g, const IndexSet& e, double a,
                      const std::vector<double>& x_grid, double supp) {
    IndexSet xa = IndexSet::from_entries({{cplx(a, 0.0), 0}}, e.cutoff(), false);
    IndexSet predicted = extended_union(e, xa);
    std::vector<cplx> y;
    for (double x : x_grid) y.push_back(ode_solution_value(g, a, x, supp));
    FitOptions opt;
    opt.min_samples_per_term = 2;
    LogPolyExpansion fit = fit_log_poly(x_grid, y, index_columns(predicted, true), opt);
    return lemma_verdict(std::move(fit), std::move(predicted));
}

namespace {

double sphere_factor(int n) {
    // |S^{n-1}| / (2 pi)^n
    double area = n == 1 ? 2.0 : 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    return area / std::pow(2.0 * std::numbers::pi, n);
}

} // namespace

double Ak_value(const HomogComponent& a, const Excision& chi, double z, double mu, int n) {
    const cplx lam = -std::pow(z, -mu);
    if (!(a.degree < -n)) throw ConfigError("A_k: degree must be below -n for integrability");
    auto f = [&](double w) {
        double r = std::exp(w);
        return chi(r) * a(r, lam).real() * std::pow(r, n);
    };
    double err = 0.0;
    const double R = 1e4 / z;
    double v = integrate_pieces(f, std::log(chi.eps), std::log(2 * chi.eps), 1.0, err);
    v += integrate_pieces(f, std::log(2 * chi.eps), std::log(R), 0.5, err);
    // Beyond R the component behaves like r^degree.
    v += a(R, lam).real() * std::pow(R, n) / (-a.degree - n);
    return sphere_factor(n) * v;
}

AkResult trace_component_Ak(const HomogComponent& a, const Excision& chi,
                            const std::vector<double>& z_grid, double mu, int N, double mu_prime,
                            int n, int k) {
    const double expect = mu_prime - N * mu - k;
    if (std::abs(a.degree - expect) > 1e-9)
        throw ConfigError("A_k: component degree does not equal mu' - N mu - k");
    if (!(a.degree < -n)) throw ConfigError("A_k: non-integrable degree (needs N mu - mu' + k > n)");
    AkResult r;
    r.gamma = N * mu + k - mu_prime - n;
    const double g = r.gamma;
    for (double z : z_grid) {
        r.z.push_back(z);
        r.values.push_back(Ak_value(a, chi, z, mu, n));
        // (z d/dz - gamma) A = z^gamma dB/du with B(u) = A(e^u) e^{-gamma u}.
        const double h = 0.05, u0 = std::log(z);
        static const double c7[7] = {-1, 9, -45, 0, 45, -9, 1};
        double dB = 0.0;
        for (int i = 0; i < 7; ++i) {
            if (i == 3) continue;
            double u = u0 + (i - 3) * h;
            dB += c7[i] * Ak_value(a, chi, std::exp(u), mu, n) * std::exp(-g * u);
        }
        dB /= 60.0 * h;
        double lhs = std::pow(z, g) * dB;
        // -z^{-degree} int (xi . grad chi)(xi) a(z xi, -1) dbar xi
        double err = 0.0;
        double rhs = -std::pow(z, -a.degree) * sphere_factor(n) *
                     integrate_pieces(
                         [&](double w) {
                             double rr = std::exp(w);
                             return rr * chi.deriv(rr) * a(z * rr, cplx(-1.0, 0.0)).real() * std::pow(rr, n);
                         },
                         std::log(chi.eps), std::log(2 * chi.eps), 1.0, err);
        r.identity_residual = std::max(r.identity_residual, std::abs(lhs - rhs) / std::abs(rhs));
    }
    double cutoff = g + 5.0 + 1e-9;
    std::vector<IndexEntry> lattice;
    for (double e = N * mu; e <= cutoff; e += mu) lattice.push_back({cplx(e, 0.0), 0});
    IndexSet fam = IndexSet::from_entries(lattice, cutoff, false);
    IndexSet lead = IndexSet::from_entries({{cplx(N * mu - mu_prime - n + k, 0.0), 0}}, cutoff, false);
    IndexSet predicted = extended_union(fam, lead);
    std::vector<cplx> y(r.values.begin(), r.values.end());
    FitOptions opt;
    opt.min_samples_per_term = 2;
    // Fit the leading part only: terms up to gamma + 3 resolve on [1e-3, 1e-1].
    IndexSet fit_set;
    std::vector<IndexEntry> keep;
    for (const auto& e : predicted.tops())
        if (e.z.real() <= g + 3.0 + 1e-9) keep.push_back(e);
    fit_set = IndexSet::from_entries(keep, cutoff, false);
    LemmaResult lr = lemma_verdict(fit_log_poly(r.z, y, index_columns(fit_set, true), opt), predicted);
    r.fit = std::move(lr.fit);
    r.predicted = std::move(lr.predicted);
    r.verdict = lr.verdict;
    return r;
}

namespace {

// int_{t0}^inf t^{-z-1} sum_j e^{-t lambda_j} dt
cplx mellin_upper(const SpectralData& spec, cplx z, double t0) {
    std::vector<double> v = spec.all_values();
    if (v.empty()) return 0.0;
    double f0 = 0.0;
    for (double l : v) f0 += std::exp(-t0 * l);
    if (spec.heat_tail(t0) > 1e-13 * f0)
        throw NumericalError("zeta: spectrum too short for the [t0, inf) integral", spec.heat_tail(t0));
    // e^{-t0 lambda} < 1e-20 beyond this; the dropped part is inside the tail check above
    while (!v.empty() && t0 * v.back() > 46.0) v.pop_back();
    // t^{-z} sum_j e^{-t lambda_j} in u = log t, fixed GL16 panels of width 0.05
    auto g = [&](double u) {
        const double t = std::exp(u);
        double s = 0.0;
        for (auto it = v.rbegin(); it != v.rend(); ++it) s += std::exp(-t * *it);
        return std::exp(-z * u) * s;
    };
    using GL = boost::math::quadrature::gauss<double, 16>;
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    const double h = 0.05;
    cplx total = 0.0;
    for (double lo = std::log(t0);; lo += h) {
        const double c = lo + 0.5 * h, r = 0.5 * h;
        cplx part = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) part += w[i] * (g(c + r * x[i]) + g(c - r * x[i]));
        total += r * part;
        // remaining integral below |g(hi)| / (lambda_1 t_hi) once the first eigenvalue dominates
        const double thi = std::exp(lo + h);
        if (thi * v.front() > 40.0 && std::abs(g(lo + h)) < 1e-17 * std::abs(total)) break;
        if (lo > 50.0) throw NumericalError("zeta: [t0, inf) integral does not settle", std::abs(total));
    }
    return total;
}

bool near_nonneg_int(cplx z) {
    return std::abs(z.imag()) < 1e-12 && is_nonneg_int(z.real()) && std::abs(z.real() - std::round(z.real())) < 1e-12;
}

cplx zeta_raw(const SpectralData& spec, const LogPolyExpansion& fit, cplx z, const ZetaOptions& opt) {
    if (opt.t0 > fit.param_max * (1 + 1e-12))
        throw ConfigError("zeta: t0 lies beyond the fitted window");
    cplx m = mellin_upper(spec, z, opt.t0);
    for (const auto& t : fit.terms) {
        cplx w = t.gamma - z;
        if (std::abs(w) < 1e-14) throw PoleError("zeta: evaluation at a pole", z);
        m += t.c * mellin_log_power(w, t.j, opt.t0);
    }
    return m / gamma_complex(-z);
}

} // namespace

cplx zeta_value(const SpectralData& spec, const LogPolyExpansion& fit, cplx z, const ZetaOptions& opt) {
    for (const auto& t : fit.terms)
        if (std::abs(z - t.gamma) < 1e-12) {
            if (t.j == 0 && near_nonneg_int(z)) continue; // cancelled by 1/Gamma(-z)
            if (std::abs(t.c) > opt.coefficient_floor) throw PoleError("zeta: evaluation at a pole", z);
        }
    if (!near_nonneg_int(z)) return zeta_raw(spec, fit, z, opt);
    // Removable point of M(-z)/Gamma(-z): mean value over a small circle.
    const int K = 16;
    const double rho = 1e-3;
    cplx s = 0.0;
    for (int i = 0; i < K; ++i)
        s += zeta_raw(spec, fit, z + std::polar(rho, 2 * std::numbers::pi * (i + 0.5) / K), opt);
    return s / double(K);
}

ZetaResult zeta_continue(const SpectralData& spec, const LogPolyExpansion& fit,
                         const std::vector<cplx>& z_grid, const ZetaOptions& opt) {
    ZetaResult r;
    for (cplx z : z_grid) {
        r.z.push_back(z);
        r.values.push_back(zeta_value(spec, fit, z, opt));
    }
    // Pole candidates from the detected terms, merged by exponent.
    std::vector<std::pair<double, int>> cand;
    for (const auto& t : fit.terms) {
        if (!t.detected || std::abs(t.c) <= opt.coefficient_floor) continue;
        bool merged = false;
        for (auto& c : cand)
            if (std::abs(c.first - t.gamma) < kTol) c.second = std::max(c.second, t.j + 1), merged = true;
        if (!merged) cand.push_back({t.gamma, t.j + 1});
    }
    std::sort(cand.begin(), cand.end());
    for (std::size_t i = 0; i < cand.size(); ++i) {
        auto [g, order] = cand[i];
        if (near_nonneg_int(g)) --order;
        if (order <= 0) continue;
        double gap = 1.0;
        for (const auto& t : fit.terms)
            if (std::abs(t.gamma - g) > kTol) gap = std::min(gap, std::abs(t.gamma - g));
        const double rho = 0.25 * gap;
        const int K = 64;
        cplx res = 0.0;
        for (int k = 0; k < K; ++k) {
            cplx e = std::polar(rho, 2 * std::numbers::pi * (k + 0.5) / K);
            res += zeta_raw(spec, fit, g + e, opt) * e;
        }
        res /= double(K);
        ZetaPole p;
        p.z = g;
        p.order = order;
        p.residue = res;
        const bool simple_lattice = is_nonneg_int(g * opt.mu + opt.n);
        const bool triple_set = is_nonneg_int(g * opt.mu) && !is_nonneg_int(g);
        p.lattice_tag = (order <= 1 && simple_lattice) ? "simple" : (order <= 3 && triple_set) ? "triple" : "outside";
        r.poles.push_back(p);
    }
    return r;
}

std::string ZetaResult::values_csv() const {
    std::ostringstream os;
    os << "z_re,z_im,value_re,value_im\n";
    char buf[128];
    for (std::size_t i = 0; i < z.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.15g,%.15g\n", z[i].real(), z[i].imag(),
                      values[i].real(), values[i].imag());
        os << buf;
    }
    return os.str();
}

std::string ZetaResult::poles_csv() const {
    std::ostringstream os;
    os << "z_re,z_im,order,residue_re,residue_im,lattice_tag\n";
    char buf[160];
    for (const auto& p : poles) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d,%.12g,%.12g,", p.z.real(), p.z.imag(), p.order,
                      p.residue.real(), p.residue.imag());
        os << buf << p.lattice_tag << "\n";
    }
    return os.str();
}

} // namespace conespec
