#include "conespec/coneop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "conespec/special.hpp"

namespace conespec {

namespace {

std::string fmt_cplx(cplx c) {
    char buf[80];
    if (c.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "%.17g", c.real());
    else
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", c.real(), c.imag());
    return buf;
}

cplx parse_cplx(const std::string& key, const std::string& v) {
    auto comma = v.find(',');
    try {
        if (comma == std::string::npos) return cplx(std::stod(v), 0.0);
        return cplx(std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1)));
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': bad coefficient value '" + v + "'");
    }
}

// Number of eigenvalues of K - lambda W below zero (Sturm count).
int sturm_count(const ModeMatrix& mm, const Eigen::VectorXd& w, double lambda) {
    const int n = int(mm.diag.size());
    int c = 0;
    double q = mm.diag[0] - lambda * w[0];
    if (q < 0) ++c;
    for (int k = 1; k < n; ++k) {
        if (q == 0.0) q = 1e-300;
        q = mm.diag[k] - lambda * w[k] - mm.off[k - 1] * mm.off[k - 1] / q;
        if (q < 0) ++c;
    }
    return c;
}

// i-th (0-based) generalized eigenvalue by bisection in [lo, hi].
double bisect_eigenvalue(const ModeMatrix& mm, const Eigen::VectorXd& w, int i, double lo,
                         double hi) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) break;
        if (sturm_count(mm, w, mid) > i)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Gaussian elimination with partial pivoting for a complex tridiagonal system.
Eigen::VectorXcd tridiag_solve(Eigen::VectorXcd dl, Eigen::VectorXcd d, Eigen::VectorXcd du,
                               Eigen::VectorXcd b, cplx lambda) {
    const int n = int(d.size());
    Eigen::VectorXcd du2 = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n - 1; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) throw NumericalError("singular resolvent system at lambda = " + fmt_cplx(lambda));
            cplx f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            cplx f = d[i] / dl[i];
            d[i] = dl[i];
            cplx t = d[i + 1];
            d[i + 1] = du[i] - f * t;
            if (i < n - 2) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = t;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= f * b[i];
        }
    }
    if (d[n - 1] == 0.0) throw NumericalError("singular resolvent system at lambda = " + fmt_cplx(lambda));
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    return b;
}

} // namespace

cplx Coefficient::eval(int m, double x) const {
    cplx s = 0.0;
    for (const auto& [pq, c] : terms) s += c * std::pow(double(m), pq.first) * std::pow(x, pq.second);
    return s;
}

bool Coefficient::x_dependent() const {
    for (const auto& [pq, c] : terms)
        if (pq.second > 0 && c != 0.0) return true;
    return false;
}

bool Coefficient::m_dependent() const {
    for (const auto& [pq, c] : terms)
        if (pq.first > 0 && c != 0.0) return true;
    return false;
}

bool Coefficient::is_real() const {
    for (const auto& [pq, c] : terms)
        if (c.imag() != 0.0) return false;
    return true;
}

cplx ConeOperator::coeff(int j, int m, double x) const {
    if (j < 0 || j >= int(coeffs.size())) return 0.0;
    return coeffs[std::size_t(j)].eval(m, x);
}

std::vector<cplx> ConeOperator::indicial(int m) const {
    std::vector<cplx> p(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) p[j] = coeffs[j].eval(m, 0.0);
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    if (p.empty()) p.push_back(0.0);
    return p;
}

bool ConeOperator::has_x_perturbation() const {
    for (const auto& c : coeffs)
        if (c.x_dependent()) return true;
    return false;
}

ConeOperator ConeOperator::frozen() const {
    ConeOperator f = *this;
    for (auto& c : f.coeffs)
        for (auto it = c.terms.begin(); it != c.terms.end();)
            it = it->first.second > 0 ? c.terms.erase(it) : std::next(it);
    return f;
}

ConeOperator ConeOperator::laplace_type(double a, int modes, double mu, double alpha,
                                        double perturbation) {
    // n = 2, so (n-2)^2/4 vanishes.
    ConeOperator op;
    op.mu = mu;
    op.alpha = alpha;
    op.modes = modes;
    op.coeffs.resize(3);
    op.coeffs[0].terms[{0, 0}] = a * a;
    op.coeffs[0].terms[{2, 0}] = 1.0;
    if (perturbation != 0.0) op.coeffs[0].terms[{0, 1}] = perturbation;
    op.coeffs[2].terms[{0, 0}] = 1.0;
    return op;
}

ConeOperator ConeOperator::from_config(const Config& cfg) {
    ConeOperator op;
    std::string model = cfg.str("model", "");
    if (model == "laplace_type") {
        op = laplace_type(cfg.num("a"), int(cfg.integer("modes", 8)), cfg.num("mu", 2.0),
                          cfg.num("alpha", 1.0), cfg.num("perturbation", 0.0));
    } else if (!model.empty()) {
        throw ConfigError("unknown model '" + model + "'");
    } else {
        op.mu = cfg.num("mu");
        op.alpha = cfg.num("alpha");
        op.modes = int(cfg.integer("modes"));
        for (const auto& [key, value] : cfg.values()) {
            int j, p, q;
            char tail;
            if (key.empty() || key[0] != 'c') continue;
            if (std::sscanf(key.c_str(), "c%d.m%d.x%d%c", &j, &p, &q, &tail) != 3) continue;
            if (j < 0 || p < 0 || q < 0 || j > 16)
                throw ConfigError("coefficient key out of range: '" + key + "'");
            if (int(op.coeffs.size()) <= j) op.coeffs.resize(std::size_t(j) + 1);
            op.coeffs[std::size_t(j)].terms[{p, q}] = parse_cplx(key, value);
        }
        if (op.coeffs.empty()) throw ConfigError("operator has no coefficients (keys c<j>.m<p>.x<q>)");
    }
    op.bc = cfg.str("bc", "dirichlet");
    if (op.bc != "dirichlet") throw ConfigError("only bc = dirichlet is supported");
    if (!(op.mu > 0.0)) throw ConfigError("mu must be positive");
    if (op.modes < 0) throw ConfigError("modes must be nonnegative");
    return op;
}

std::string ConeOperator::to_text() const {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof buf, "mu = %.17g\nalpha = %.17g\n", mu, alpha);
    os << buf << "modes = " << modes << "\nbc = " << bc << "\n";
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        for (const auto& [pq, c] : coeffs[j].terms)
            os << "c" << j << ".m" << pq.first << ".x" << pq.second << " = " << fmt_cplx(c) << "\n";
    return os.str();
}

cplx eval_poly(const std::vector<cplx>& c, cplx sigma) {
    cplx s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * sigma + *it;
    return s;
}

std::vector<std::vector<cplx>> conormal_symbol(const ConeOperator& op) {
    std::vector<std::vector<cplx>> out;
    for (int m = -op.modes; m <= op.modes; ++m) out.push_back(op.indicial(m));
    return out;
}

BoundarySpectrum boundary_spectrum(const ConeOperator& op, double strip, int mode_cap) {
    BoundarySpectrum bs;
    for (int m = -mode_cap; m <= mode_cap; ++m) {
        std::vector<cplx> p = op.indicial(m);
        const int deg = int(p.size()) - 1;
        if (deg == 0) {
            if (p[0] == 0.0)
                throw NumericalError("indicial polynomial vanishes identically in mode " + std::to_string(m));
            continue;
        }
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        for (int i = 0; i < deg; ++i) comp(0, i) = -p[std::size_t(deg - 1 - i)] / p[std::size_t(deg)];
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);

        std::vector<std::vector<cplx>> derivs{p};
        for (int k = 1; k <= deg; ++k) {
            const auto& prev = derivs.back();
            std::vector<cplx> d(prev.size() > 1 ? prev.size() - 1 : 1, 0.0);
            for (std::size_t i = 1; i < prev.size(); ++i) d[i - 1] = double(i) * prev[i];
            derivs.push_back(d);
        }
        // Cluster into multiple roots.
        std::vector<bool> used(roots.size(), false);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            cplx sum = roots[i];
            int ord = 1;
            used[i] = true;
            for (std::size_t k = i + 1; k < roots.size(); ++k) {
                if (!used[k] && std::abs(roots[k] - roots[i]) <= 1e-6 * std::max(1.0, std::abs(roots[i]))) {
                    used[k] = true;
                    sum += roots[k];
                    ++ord;
                }
            }
            cplx r = sum / double(ord);
            // Newton on p^{(ord-1)}, which has a simple root here.
            const auto& f = derivs[std::size_t(ord - 1)];
            const auto& df = derivs[std::size_t(ord)];
            for (int it = 0; it < 50; ++it) {
                cplx dv = eval_poly(df, r);
                if (dv == 0.0) break;
                cplx step = eval_poly(f, r) / dv;
                r -= step;
                if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
            }
            double scale = 0.0;
            for (std::size_t j = 0; j < f.size(); ++j) scale += std::abs(f[j]) * std::pow(std::abs(r), double(j));
            double resid = std::abs(eval_poly(f, r));
            if (!(resid <= 1e-9 * std::max(scale, 1e-300))) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "root finder failed in mode %d: residual %.3g", m, resid);
                throw NumericalError(buf, resid);
            }
            if (std::abs(r.imag()) <= strip) bs.poles.push_back({r, ord, m});
        }
    }
    std::sort(bs.poles.begin(), bs.poles.end(), [](const Pole& a, const Pole& b) {
        if (a.mode != b.mode) return a.mode < b.mode;
        if (a.sigma.imag() != b.sigma.imag()) return a.sigma.imag() < b.sigma.imag();
        return a.sigma.real() < b.sigma.real();
    });
    return bs;
}

EllipticityReport check_parameter_ellipticity(const ConeOperator& op, const Sector& lambda) {
    EllipticityReport rep;
    std::vector<std::string> notes;

    // (a) symbol values on sampled xi, every materialized mode.
    rep.symbol_ok = Verdict::True;
    for (int m = -op.modes; m <= op.modes && rep.symbol_ok == Verdict::True; ++m) {
        std::vector<cplx> p = op.indicial(m);
        for (int e = -30; e <= 30; ++e) {
            double xi = std::pow(10.0, e / 10.0);
            for (double sgn : {1.0, -1.0}) {
                cplx v = eval_poly(p, sgn * xi);
                if (lambda.contains(v)) {
                    rep.symbol_ok = Verdict::False;
                    char buf[120];
                    std::snprintf(buf, sizeof buf, "symbol value %.4g%+.4gi in sector at xi=%.3g, m=%d",
                                  v.real(), v.imag(), sgn * xi, m);
                    notes.push_back(buf);
                    break;
                }
            }
            if (rep.symbol_ok == Verdict::False) break;
        }
    }

    ConeOperator model = op.frozen();
    if (op.has_x_perturbation()) notes.push_back("x-dependent coefficients frozen at x=0 for the model check");

    // Weight line Im sigma = -alpha.
    BoundarySpectrum bs = boundary_spectrum(model, std::abs(op.alpha) + 1.0, op.modes);
    rep.clean_weight_line = Verdict::True;
    for (const auto& p : bs.poles) {
        if (std::abs(p.sigma.imag() + op.alpha) < 1e-9) {
            rep.clean_weight_line = Verdict::False;
            notes.push_back("indicial root on the weight line in mode " + std::to_string(p.mode));
            break;
        }
    }

    // (b) model operator.
    bool self_adjoint_form = model.coeffs.size() == 3 && model.coeffs[1].is_zero() &&
                             model.coeffs[0].is_real() && model.coeffs[2].is_real() &&
                             !model.coeffs[2].m_dependent();
    bool nonneg = self_adjoint_form && model.coeffs[2].eval(0, 0).real() > 0.0;
    for (int m = -op.modes; m <= op.modes && nonneg; ++m)
        nonneg = model.coeffs[0].eval(m, 0.0).real() >= 0.0;
    bool hits_positive_axis = lambda.contains(1.0);

    if (rep.clean_weight_line == Verdict::False) {
        rep.model_ok = Verdict::False;
    } else if (!nonneg) {
        rep.model_ok = Verdict::Undecided;
        notes.push_back("model operator outside the positive self-adjoint class");
    } else if (hits_positive_axis) {
        rep.model_ok = Verdict::False;
        notes.push_back("sector meets the continuous spectrum [0, inf) of the model");
    } else {
        // Numerical confirmation on a large truncated domain, two resolutions.
        rep.model_ok = Verdict::True;
        Discretization coarse = discretize(model, -12.0, 800, 6.0);
        Discretization fine = discretize(model, -12.0, 1600, 6.0);
        std::vector<int> probe_modes{0, op.modes};
        for (double arg : lambda.rays(3)) {
            for (double mag : {1e2, 1e3}) {
                cplx lam = std::polar(mag, arg);
                for (int m : probe_modes) {
                    double s1 = 1.0 / coarse.resolvent_norm_mode(coarse.index_of(m), lam);
                    double s2 = 1.0 / fine.resolvent_norm_mode(fine.index_of(m), lam);
                    if (!(s2 > 1e-8 * mag) || std::abs(s1 - s2) > 0.05 * s2) {
                        rep.model_ok = Verdict::Undecided;
                        notes.push_back("truncated model solve not stable under refinement");
                    }
                }
            }
        }
    }

    for (std::size_t i = 0; i < notes.size(); ++i) rep.note += (i ? "; " : "") + notes[i];
    return rep;
}

int Discretization::index_of(int mode) const {
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i].mode == mode) return int(i);
    throw ConfigError("mode " + std::to_string(mode) + " not in discretization");
}

Eigen::VectorXd Discretization::eigenvalues(int idx) const {
    const ModeMatrix& mm = modes.at(std::size_t(idx));
    const int n = npoints();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = 0; k < n; ++k) {
        double r = (k > 0 ? std::abs(mm.off[k - 1]) : 0.0) + (k < n - 1 ? std::abs(mm.off[k]) : 0.0);
        lo = std::min(lo, (mm.diag[k] - r) / weight[k]);
        hi = std::max(hi, (mm.diag[k] + r) / weight[k]);
    }
    lo = std::min(lo, 0.0) - 1.0;
    Eigen::VectorXd vals(n);
    double left = lo;
    for (int i = 0; i < n; ++i) {
        vals[i] = bisect_eigenvalue(mm, weight, i, left, hi);
        left = std::max(lo, vals[i] - 1e-9 * std::abs(vals[i]));
    }
    return vals;
}

void Discretization::eigenpairs(int idx, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) const {
    values = eigenvalues(idx);
    const int n = npoints();
    const ModeMatrix& mm = modes.at(std::size_t(idx));
    vectors.resize(n, n);
    Eigen::VectorXcd dl(n - 1), du(n - 1), d(n);
    for (int i = 0; i < n; ++i) {
        double lam = values[i];
        double gap = 1e-10 * std::max(1.0, std::abs(lam));
        if (i > 0) gap = std::min(gap, 0.01 * (lam - values[i - 1]));
        if (i < n - 1) gap = std::min(gap, 0.01 * (values[i + 1] - lam));
        double shift = lam + gap;
        Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
        for (int it = 0; it < 3; ++it) {
            for (int k = 0; k < n; ++k) d[k] = mm.diag[k] - shift * weight[k];
            for (int k = 0; k < n - 1; ++k) dl[k] = du[k] = mm.off[k];
            Eigen::VectorXcd rhs = (weight.array() * u.array()).matrix().cast<cplx>();
            u = tridiag_solve(dl, d, du, rhs, shift).real();
            u /= std::sqrt(h * (weight.array() * u.array().square()).sum());
        }
        if (u[n / 2] < 0 || (u[n / 2] == 0 && u.sum() < 0)) u = -u;
        vectors.col(i) = u;
    }
}

Eigen::VectorXcd Discretization::solve(int idx, cplx lambda, const Eigen::VectorXcd& rhs) const {
    const ModeMatrix& mm = modes.at(std::size_t(idx));
    const int n = npoints();
    Eigen::VectorXcd dl(n - 1), du(n - 1), d(n), b(n);
    for (int k = 0; k < n; ++k) {
        d[k] = mm.diag[k] - lambda * weight[k];
        b[k] = weight[k] * rhs[k];
    }
    for (int k = 0; k < n - 1; ++k) dl[k] = du[k] = mm.off[k];
    Eigen::VectorXcd u = tridiag_solve(dl, d, du, b, lambda);
    // Residual check against the original system.
    double rn = 0.0, bn = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx r = (mm.diag[k] - lambda * weight[k]) * u[k] - b[k];
        if (k > 0) r += mm.off[k - 1] * u[k - 1];
        if (k < n - 1) r += mm.off[k] * u[k + 1];
        rn += std::norm(r);
        bn += std::norm(b[k]);
    }
    if (!(std::sqrt(rn) <= 1e-10 * std::sqrt(bn) + 1e-300))
        throw NumericalError("resolvent solve residual too large at lambda = " + fmt_cplx(lambda),
                             std::sqrt(rn / std::max(bn, 1e-300)));
    double growth = norm(u) / std::max(norm(rhs), 1e-300);
    if (growth * std::max(1.0, std::abs(lambda)) > 1e12)
        throw NumericalError("resolvent system nearly singular at lambda = " + fmt_cplx(lambda), growth);
    return u;
}

double Discretization::norm(const Eigen::VectorXcd& u) const {
    return std::sqrt(h * (weight.array() * u.array().abs2()).sum());
}

double Discretization::resolvent_norm_mode(int idx, cplx lambda, int iterations) const {
    // Power iteration on T*T with T = (K - lambda W)^{-1} W, adjoint in the W inner product.
    const int n = npoints();
    Eigen::VectorXcd v(n);
    for (int k = 0; k < n; ++k) v[k] = 1.0 + 0.1 * std::sin(0.37 * k);
    v /= norm(v);
    double est = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd tv = solve(idx, lambda, v);
        Eigen::VectorXcd w = solve(idx, std::conj(lambda), tv);
        double nw = norm(w);
        double next = std::sqrt(nw);
        v = w / nw;
        if (it > 3 && std::abs(next - est) <= 1e-12 * next) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

double Discretization::resolvent_norm(cplx lambda, int iterations) const {
    double best = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
        best = std::max(best, resolvent_norm_mode(int(i), lambda, iterations));
    return best;
}

Discretization discretize(const ConeOperator& op, double s_min, int npoints, double s_max) {
    if (!(s_min < -5.0) || !(s_max > s_min))
        throw ConfigError("discretize: need s_min < -5 and s_max > s_min");
    if (npoints < 100) throw ConfigError("discretize: need npoints >= 100");
    if (op.coeffs.size() > 3) throw ConfigError("discretize: operators of order > 2 in sigma are not supported");
    for (const auto& c : op.coeffs)
        if (!c.is_real()) throw ConfigError("discretize: coefficients must be real");
    if (op.coeffs.size() > 1 && !op.coeffs[1].is_zero())
        throw ConfigError("discretize: first-order sigma coefficient must vanish");
    if (op.coeffs.size() < 3 || op.coeffs[2].x_dependent())
        throw ConfigError("discretize: need an x-independent sigma^2 coefficient");

    Discretization d;
    d.s_min = s_min;
    d.s_max = s_max;
    d.mu = op.mu;
    d.h = (s_max - s_min) / double(npoints + 1);
    d.s.resize(npoints);
    d.weight.resize(npoints);
    for (int k = 0; k < npoints; ++k) {
        d.s[k] = s_min + double(k + 1) * d.h;
        d.weight[k] = std::exp(op.mu * d.s[k]);
    }
    for (int m = -op.modes; m <= op.modes; ++m) {
        double c2 = op.coeffs[2].eval(m, 0.0).real();
        if (!(c2 > 0.0)) throw ConfigError("discretize: sigma^2 coefficient must be positive");
        ModeMatrix mm;
        mm.mode = m;
        mm.diag.resize(npoints);
        mm.off = Eigen::VectorXd::Constant(npoints - 1, -c2 / (d.h * d.h));
        for (int k = 0; k < npoints; ++k)
            mm.diag[k] = 2.0 * c2 / (d.h * d.h) + op.coeff(0, m, std::exp(d.s[k])).real();
        d.modes.push_back(std::move(mm));
    }
    return d;
}

std::vector<double> bessel_oracle(double nu, int count) {
    std::vector<double> z = bessel_j_zeros(nu, count);
    for (auto& v : z) v *= v;
    return z;
}

std::size_t SpectralData::count() const {
    std::size_t n = 0;
    for (const auto& m : modes) n += m.values.size();
    return n;
}

std::vector<double> SpectralData::all_values() const {
    std::vector<double> v;
    for (const auto& m : modes) v.insert(v.end(), m.values.begin(), m.values.end());
    std::sort(v.begin(), v.end());
    return v;
}

double SpectralData::heat_tail(double t) const {
    return weyl_c * (lambda_cut + 1.0 / t) * std::exp(-t * lambda_cut);
}

std::string SpectralData::to_csv() const {
    std::ostringstream os;
    os << "mode,k,eigenvalue,provenance\n";
    char buf[96];
    for (const auto& m : modes)
        for (std::size_t k = 0; k < m.values.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,", m.mode, k + 1, m.values[k]);
            os << buf << provenance << "\n";
        }
    return os.str();
}

namespace {

void fit_weyl(SpectralData& sd) {
    std::vector<double> v = sd.all_values();
    double c = 0.0;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
        double lam = frac * sd.lambda_cut;
        double count = double(std::upper_bound(v.begin(), v.end(), lam) - v.begin());
        if (lam > 0) c = std::max(c, count / lam);
    }
    sd.weyl_c = 1.2 * c;
}

} // namespace

SpectralData oracle_spectrum(const ConeOperator& op, double lambda_cut) {
    if (std::abs(op.mu - 2.0) > 1e-14) throw ConfigError("Bessel oracle needs mu = 2");
    if (op.has_x_perturbation()) throw ConfigError("Bessel oracle needs frozen coefficients");
    if (op.coeffs.size() != 3 || !op.coeffs[1].is_zero() || op.coeffs[2].m_dependent() ||
        op.coeffs[2].eval(0, 0) != 1.0 || !op.coeffs[0].is_real())
        throw ConfigError("Bessel oracle needs sigma^2 + c0(m) with real c0");
    SpectralData sd;
    sd.provenance = "oracle";
    sd.lambda_cut = lambda_cut;
    const double xmax = std::sqrt(lambda_cut);
    for (int am = 0;; ++am) {
        bool any = false;
        for (int sign : {1, -1}) {
            if (am == 0 && sign < 0) continue;
            const int m = sign * am;
            double c0 = op.coeffs[0].eval(m, 0.0).real();
            if (c0 < 0) throw ConfigError("Bessel oracle needs c0(m) >= 0");
            double nu = std::sqrt(c0);
            if (nu >= xmax) continue;
            any = true;
            ModeSpectrum ms;
            ms.mode = m;
            ms.nu = nu;
            // Zeros below xmax: McMahon count plus margin, then trim.
            int guess = int((xmax - nu) / std::numbers::pi) + 3;
            std::vector<double> z = bessel_j_zeros(nu, std::max(guess, 1));
            while (z.back() < xmax) z = bessel_j_zeros(nu, int(z.size()) + 4);
            for (double j : z)
                if (j < xmax) ms.values.push_back(j * j);
            ms.error_bound = 1e-12;
            sd.modes.push_back(std::move(ms));
        }
        if (!any && am > 0) break;
        if (am > 100000) throw ConfigError("Bessel oracle: c0(m) does not grow with |m|");
    }
    std::sort(sd.modes.begin(), sd.modes.end(), [](const ModeSpectrum& a, const ModeSpectrum& b) { return a.mode < b.mode; });
    fit_weyl(sd);
    return sd;
}

SpectralData discrete_spectrum(const Discretization& disc, double rel_accuracy) {
    SpectralData sd;
    sd.provenance = "discretization";
    // Second-order error estimate lambda h^2 / 12 in relative terms.
    sd.lambda_cut = 12.0 * rel_accuracy / (disc.h * disc.h);
    for (std::size_t i = 0; i < disc.modes.size(); ++i) {
        const ModeMatrix& mm = disc.modes[i];
        ModeSpectrum ms;
        ms.mode = mm.mode;
        int count = sturm_count(mm, disc.weight, sd.lambda_cut);
        double left = -1.0;
        for (int k = 0; k < count; ++k) {
            double v = bisect_eigenvalue(mm, disc.weight, k, left, sd.lambda_cut);
            ms.values.push_back(v);
            left = v - 1e-9 * std::abs(v) - 1e-300;
        }
        ms.error_bound = ms.values.empty() ? 0.0 : ms.values.back() * disc.h * disc.h / 12.0;
        sd.modes.push_back(std::move(ms));
    }
    fit_weyl(sd);
    return sd;
}

ScaledFunction kappa_scale(double rho, const Eigen::VectorXd& s, const Eigen::VectorXcd& u) {
    if (!(rho > 0.0)) throw ConfigError("kappa_scale: rho must be positive");
    const int n = int(s.size());
    const double h = n > 1 ? s[1] - s[0] : 1.0;
    const double shift = std::log(rho) / h;
    ScaledFunction out;
    out.values = Eigen::VectorXcd::Zero(n);
    // Exact one-cell shifts are permutations; avoid rounding in the weights.
    const double rshift = std::round(shift);
    const bool integral = std::abs(shift - rshift) < 1e-9;
    for (int k = 0; k < n; ++k) {
        double pos = k + (integral ? rshift : shift);
        int i0 = int(std::floor(pos));
        double f = integral ? 0.0 : pos - i0;
        cplx a = (i0 >= 0 && i0 < n) ? u[i0] : cplx(0.0);
        cplx b = (i0 + 1 >= 0 && i0 + 1 < n) ? u[i0 + 1] : cplx(0.0);
        out.values[k] = (1.0 - f) * a + f * b;
    }
    // Mass that left the grid.
    for (int i = 0; i < n; ++i) {
        double back = i - shift;
        if ((back < -1.0 || back > n) && std::abs(u[i]) > 1e-14 * u.cwiseAbs().maxCoeff()) {
            out.truncated = true;
            break;
        }
    }
    return out;
}

double injectivity_constant(const Discretization& disc, cplx lambda) {
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < disc.modes.size(); ++i) {
        Eigen::VectorXd v = disc.eigenvalues(int(i));
        for (int k = 0; k < v.size(); ++k) c = std::min(c, std::abs(v[k] - lambda) / (1.0 + std::abs(v[k])));
    }
    return c;
}

} // namespace conespec
