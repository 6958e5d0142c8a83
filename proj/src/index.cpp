#include "conespec/index.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace conespec {

namespace {

const double pi = std::numbers::pi;

std::vector<double> geom(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, n > 1 ? double(i) / (n - 1) : 0.0));
    return v;
}

double wrap(double a) {
    while (a > pi) a -= 2 * pi;
    while (a <= -pi) a += 2 * pi;
    return a;
}

// Total change of arg f along the segment p -> q, bisecting until steps stay below 0.5 rad.
template <class F>
double arg_change(F f, cplx p, cplx q, cplx fp, cplx fq, int depth = 0) {
    double d = wrap(std::arg(fq) - std::arg(fp));
    if (std::abs(d) < 0.5 && depth > 3) return d;
    if (depth > 40) throw NumericalError("argument census: contour passes through a zero or pole");
    cplx m = 0.5 * (p + q);
    cplx fm = f(m);
    return arg_change(f, p, m, fp, fm, depth + 1) + arg_change(f, m, q, fm, fq, depth + 1);
}

template <class F>
int winding(F f, const std::vector<cplx>& corners) {
    double total = 0.0;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        cplx p = corners[i], q = corners[(i + 1) % corners.size()];
        // split long edges so the bisection starts from a sane resolution
        const int pieces = std::max(1, int(std::abs(q - p) / 0.5));
        for (int k = 0; k < pieces; ++k) {
            cplx a = p + (q - p) * (double(k) / pieces), b = p + (q - p) * (double(k + 1) / pieces);
            total += arg_change(f, a, b, f(a), f(b));
        }
    }
    return int(std::lround(total / (2 * pi)));
}

} // namespace

std::vector<double> mckean_singer(const Eigen::MatrixXcd& B, const std::vector<double>& t_list) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(B);
    const Eigen::VectorXd& s = svd.singularValues();
    const long m = B.rows(), n = B.cols(), k = s.size();
    std::vector<double> out;
    for (double t : t_list) {
        // B*B is n x n, BB* is m x m; both carry the nonzero s_i^2, padded with zeros
        double common = 0.0;
        for (long i = 0; i < k; ++i) common += std::exp(-t * s[i] * s[i]);
        double tr_bsb = common + double(n - k), tr_bbs = common + double(m - k);
        out.push_back(tr_bsb - tr_bbs);
    }
    return out;
}

OmegaResult omega_constant(const TraceSeries& diff, const std::vector<PredictedTerm>& terms,
                           double t_min, double t_max) {
    OmegaResult r;
    bool all_zero = true;
    for (const auto& s : diff.samples)
        if (s.param >= t_min && s.param <= t_max && s.value != 0.0) all_zero = false;
    if (all_zero) {
        r.verdict = Verdict::True;
        r.note = "difference vanishes identically";
        return r;
    }
    std::vector<PredictedTerm> t = terms;
    if (std::none_of(t.begin(), t.end(), [](const PredictedTerm& p) { return std::abs(p.gamma) < 1e-12; }))
        t.push_back({0.0, 0});
    r.fit = fit_expansion(diff, t, t_min, t_max);
    const ExpansionTerm* c = r.fit.find(0.0, 0);
    r.omega = c->c.real();
    for (int j : {1, 2})
        if (const ExpansionTerm* l = r.fit.find(0.0, j); l && l->detected) r.log_at_zero = true;
    if (r.log_at_zero) r.note = "log terms detected at t^0";
    r.verdict = c->detected ? Verdict::True : Verdict::Undecided;
    if (!c->detected) r.note += (r.note.empty() ? "" : "; ") + std::string("constant term below noise");
    return r;
}

OmegaResult omega_constant(const Eigen::MatrixXcd& B, double t_min, double t_max, int samples) {
    if (!(t_min > 0.0 && t_max > t_min)) throw ConfigError("omega: need 0 < t_min < t_max");
    std::vector<double> ts = geom(t_min, t_max, samples);
    std::vector<double> v = mckean_singer(B, ts);
    TraceSeries s;
    s.kind = "heat";
    for (std::size_t i = 0; i < ts.size(); ++i) s.samples.push_back({ts[i], v[i], 0.0});
    return omega_constant(s, predict_terms(s.meta, SeriesKind::Heat, 2), t_min, t_max);
}

Eigen::MatrixXcd MellinPerturbation::H(cplx sigma) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rank, rank);
    for (const auto& t : terms) {
        cplx d = sigma - t.shift;
        h += (t.c / (d * d + t.b * t.b)) * t.P;
    }
    return h;
}

Eigen::MatrixXcd MellinPerturbation::dH(cplx sigma) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rank, rank);
    for (const auto& t : terms) {
        cplx d = sigma - t.shift, q = d * d + t.b * t.b;
        h += (-2.0 * t.c * d / (q * q)) * t.P;
    }
    return h;
}

cplx MellinPerturbation::det1pH(cplx sigma) const {
    return (Eigen::MatrixXcd::Identity(rank, rank) + H(sigma)).determinant();
}

double MellinPerturbation::decay_constant() const {
    double c = 0.0;
    for (const auto& t : terms) c += std::abs(t.c) * t.P.norm();
    return c;
}

MellinPerturbation MellinPerturbation::zero(int rank, double weight) {
    if (rank < 1) throw ConfigError("Mellin perturbation: rank must be positive");
    MellinPerturbation h;
    h.rank = rank;
    h.weight = weight;
    return h;
}

void MellinPerturbation::add(cplx c, double shift, double b, const Eigen::MatrixXcd& P) {
    if (!(b > 0.0)) throw ConfigError("Mellin perturbation: b must be positive");
    if (P.rows() != rank || P.cols() != rank) throw ConfigError("Mellin perturbation: P has the wrong size");
    if (std::abs(b - weight) < 1e-12)
        throw ConfigError("Mellin perturbation: pole on the integration line");
    terms.push_back({c, shift, b, P});
}

MellinPerturbation MellinPerturbation::rank_one(cplx c, double b, double weight, double shift) {
    MellinPerturbation h = zero(1, weight);
    h.add(c, shift, b, Eigen::MatrixXcd::Identity(1, 1));
    return h;
}

MellinPerturbation MellinPerturbation::reflected() const {
    MellinPerturbation r = zero(rank, weight);
    for (const auto& t : terms) r.terms.push_back({std::conj(t.c), -t.shift, t.b, t.P.conjugate()});
    return r;
}

EtaResult eta_term(const MellinPerturbation& H, double R_max, double shift) {
    if (!(R_max > 0.0)) throw ConfigError("eta: R_max must be positive");
    const double w = H.weight;
    // length scale: closest pole to the line, and the pole widths
    double L = 1.0;
    for (const auto& t : H.terms) L = std::min({L, std::abs(t.b - w), t.b});
    auto g = [&](double r) -> cplx {
        const cplx s(r, -w);
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(H.rank, H.rank) + H.H(s);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
        cplx det = lu.determinant();
        if (std::abs(det) < 1e-12) throw PoleError("eta: 1 + H is not invertible on the line", s);
        return (lu.solve(H.dH(s))).trace();
    };
    const double umax = std::asinh(R_max / L);
    // 1 + H must stay invertible on the line: scan, then refine the smallest local minima
    {
        auto absdet = [&](double u) { return std::abs(H.det1pH(cplx(shift + L * std::sinh(u), -w))); };
        const int n = 20001;
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = absdet(-umax + 2 * umax * i / (n - 1));
        for (int i = 1; i + 1 < n; ++i) {
            if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
            const double du = 2 * umax / (n - 1), u0 = -umax + i * du;
            auto m = boost::math::tools::brent_find_minima(absdet, u0 - du, u0 + du, 50);
            if (m.second < 1e-9)
                throw PoleError("eta: 1 + H is not invertible on the line", cplx(shift + L * std::sinh(m.first), -w));
        }
    }
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto& x = GL::abscissa();
    const auto& wt = GL::weights();
    // r = shift + L sinh(u), uniform panels in u
    const int panels = 2000;
    const double hu = 2 * umax / panels;
    cplx integral = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = -umax + (p + 0.5) * hu, rad = 0.5 * hu;
        cplx part = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (double sg : {1.0, -1.0}) {
                if (sg < 0 && x[i] == 0.0) continue;
                double u = c + sg * rad * x[i];
                part += wt[i] * g(shift + L * std::sinh(u)) * (L * std::cosh(u));
            }
        integral += rad * part;
    }
    // beyond the window: int g = d log det(1 + H), and det -> 1 at infinity
    const cplx hi(shift + R_max, -w), lo(shift - R_max, -w);
    cplx tail = -std::log(H.det1pH(hi)) + std::log(H.det1pH(lo));
    integral += tail;
    EtaResult r;
    cplx eta = -integral / (2.0 * pi * cplx(0.0, 1.0)); // right to left
    r.eta = eta.real();
    r.imag_residue = std::abs(eta.imag());
    r.tail_bound = std::abs(tail) / (2 * pi);
    return r;
}

Census argument_census(const MellinPerturbation& H, double R, double depth) {
    const double w = H.weight;
    auto f = [&](cplx s) { return H.det1pH(s); };
    int wind = winding(f, {cplx(-R, -w - depth), cplx(R, -w - depth), cplx(R, -w), cplx(-R, -w)});
    // pole orders from small circles around each distinct pole below the line
    std::vector<cplx> poles;
    for (const auto& t : H.terms) {
        cplx p(t.shift, -t.b);
        if (p.imag() < -w && std::none_of(poles.begin(), poles.end(), [&](cplx q) { return std::abs(q - p) < 1e-9; }))
            poles.push_back(p);
    }
    Census c;
    for (cplx p : poles) {
        double rho = 1e-3 * std::max(1e-3, std::abs(p.imag() + w));
        for (cplx q : poles)
            if (q != p) rho = std::min(rho, 0.25 * std::abs(q - p));
        std::vector<cplx> sq;
        for (int k = 0; k < 8; ++k) sq.push_back(p + std::polar(rho, 2 * pi * k / 8.0));
        c.poles_below += -winding(f, sq);
    }
    c.zeros_below = wind + c.poles_below;
    return c;
}

std::string IndexReport::to_csv() const {
    std::ostringstream os;
    os << "omega,eta,index,integer_distance,flags\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.3g,", omega, eta, index, integer_distance);
    os << buf;
    for (std::size_t i = 0; i < flags.size(); ++i) os << (i ? ";" : "") << flags[i];
    os << "\n";
    return os.str();
}

IndexReport index_assemble(const Factorization& f, double t_min, double t_max, double R_max) {
    IndexReport r;
    OmegaResult om = omega_constant(f.B, t_min, t_max);
    EtaResult et = eta_term(f.H, R_max);
    r.omega = om.omega;
    r.eta = et.eta;
    r.index = om.omega - et.eta;
    r.integer_distance = std::abs(r.index - std::round(r.index));
    if (om.log_at_zero) r.flags.push_back("log_at_t0");
    if (om.verdict == Verdict::Undecided) r.flags.push_back("omega_undecided");
    if (r.integer_distance >= 1e-6) r.flags.push_back("non_integer");
    r.verdict = om.verdict == Verdict::Undecided ? Verdict::Undecided
                : r.integer_distance < 1e-6      ? Verdict::True
                                                 : Verdict::False;
    return r;
}

std::string ConstReport::to_csv() const {
    std::ostringstream os;
    os << "tau,ratio\n";
    char buf[96];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", row.tau, row.ratio);
        os << buf;
    }
    return os.str();
}

ConstReport invariance_red_to_const(const ConeOperator& op, const std::vector<double>& tau_list,
                                    double epsilon, double s_min, int npoints) {
    if (tau_list.size() < 2) throw ConfigError("red_to_const: need at least two tau values");
    Discretization d = discretize(op, s_min, npoints);
    const Cutoff phi;
    ConstReport rep;
    rep.epsilon = epsilon;
    for (double tau : tau_list) {
        if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("red_to_const: tau must lie in (0, 1]");
        double best = 0.0;
        for (int idx = 0; idx < int(d.modes.size()); ++idx) {
            const int m = d.modes[idx].mode;
            // (A - A_[tau]) u = phi(x/tau) x^{-mu} (c0(m, x) - c0(m, 0)) u
            Eigen::VectorXd M(d.npoints());
            for (int k = 0; k < d.npoints(); ++k) {
                double x = std::exp(d.s[k]);
                M[k] = phi(x / tau) * std::pow(x, -op.mu) * (op.coeff(0, m, x) - op.coeff(0, m, 0.0)).real();
            }
            if (M.cwiseAbs().maxCoeff() == 0.0) continue;
            // largest eigenvalue of M (1 + A^2)^{-1} M by power iteration
            Eigen::VectorXcd v = Eigen::VectorXcd::Ones(d.npoints());
            double lam = 0.0;
            for (int it = 0; it < 500; ++it) {
                v /= d.norm(v);
                Eigen::VectorXcd y = M.cast<cplx>().cwiseProduct(v);
                y = d.solve(idx, cplx(0, 1), d.solve(idx, cplx(0, -1), y));
                y = M.cast<cplx>().cwiseProduct(y.real().cast<cplx>());
                double next = d.norm(y);
                v = y;
                if (it > 10 && std::abs(next - lam) < 1e-12 * next) {
                    lam = next;
                    break;
                }
                lam = next;
            }
            best = std::max(best, std::sqrt(lam));
        }
        rep.rows.push_back({tau, best});
    }
    bool any = std::any_of(rep.rows.begin(), rep.rows.end(), [](const ConstRow& r) { return r.ratio > 0; });
    if (!any) {
        rep.slope = std::numeric_limits<double>::infinity();
        rep.verdict = Verdict::True;
        return rep;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(rep.rows.size());
    for (const auto& r : rep.rows) {
        double lx = std::log(r.tau), ly = std::log(r.ratio);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.verdict = rep.slope >= 1.0 - epsilon - 0.1 ? Verdict::True : Verdict::False;
    return rep;
}

std::string SobolevReport::to_csv() const {
    std::ostringstream os;
    os << "epsilon,ker,coker,ker_eps,coker_eps,crossing,ambiguous\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%d,%d,%d,%d,%d,%d\n", r.epsilon, r.ker, r.coker, r.ker_eps,
                      r.coker_eps, r.crossing ? 1 : 0, r.ambiguous ? 1 : 0);
        os << buf;
    }
    return os.str();
}

SobolevReport invariance_red_to_sobolev(const ConeOperator& op, const std::vector<double>& eps_list,
                                        double s_min, int npoints) {
    double emax = 0.0;
    for (double e : eps_list) {
        if (e < 0.0) throw ConfigError("red_to_sobolev: epsilon must be nonnegative");
        emax = std::max(emax, e);
    }
    BoundarySpectrum bs = boundary_spectrum(op.frozen(), std::abs(op.alpha) + emax + 1.0, op.modes);
    SobolevReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (const auto& p : bs.poles) rep.margin = std::min(rep.margin, std::abs(p.sigma.imag() + op.alpha));

    Discretization d = discretize(op, s_min, npoints);
    const int n = d.npoints();
    const double thr = 1e-8;
    // graph-normalized singular values s / sqrt(1 + s^2) below the threshold
    auto count = [&](const Eigen::MatrixXd& S, bool& ambiguous) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(S);
        int k = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i) {
            double s = svd.singularValues()[i];
            double g = s / std::sqrt(1.0 + s * s);
            if (g < thr) ++k;
            if (g > 0.1 * thr && g < 10 * thr) ambiguous = true;
        }
        return k;
    };
    // S = W^{-1/2} K W^{-1/2}, per mode
    std::vector<Eigen::MatrixXd> S;
    for (const auto& mm : d.modes) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            s(k, k) = mm.diag[k] / d.weight[k];
            if (k + 1 < n) s(k, k + 1) = s(k + 1, k) = mm.off[k] / std::sqrt(d.weight[k] * d.weight[k + 1]);
        }
        S.push_back(std::move(s));
    }
    bool base_amb = false;
    int ker0 = 0;
    for (const auto& s : S) ker0 += count(s, base_amb);
    bool all_agree = true, any_amb = base_amb;
    for (double e : eps_list) {
        SobolevRow row;
        row.epsilon = e;
        row.ker = row.coker = ker0;
        row.ambiguous = base_amb;
        for (const auto& s : S) {
            // x^{-eps} S x^{eps}
            Eigen::MatrixXd c = s;
            for (int i = 0; i < n; ++i)
                for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j)
                    c(i, j) *= std::exp(e * (d.s[j] - d.s[i]));
            row.ker_eps += count(c, row.ambiguous);
        }
        row.coker_eps = row.ker_eps; // square realizations
        for (const auto& p : bs.poles) {
            double im = p.sigma.imag();
            if (im < -op.alpha + 1e-12 && im >= -op.alpha - e - 1e-12 && e > 0.0) row.crossing = true;
        }
        any_amb = any_amb || row.ambiguous;
        if (e < rep.margin && (row.ker != row.ker_eps || row.coker != row.coker_eps)) all_agree = false;
        rep.rows.push_back(row);
    }
    rep.verdict = any_amb ? Verdict::Undecided : all_agree ? Verdict::True : Verdict::False;
    return rep;
}

} // namespace conespec
