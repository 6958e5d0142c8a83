#include "conespec/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "conespec/special.hpp"

namespace conespec {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> geometric(double lo, double hi, int per_decade) {
    std::vector<double> v;
    int count = int(std::ceil(std::log10(hi / lo) * per_decade));
    for (int i = 0; i <= count; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / count));
    return v;
}

double step_for(int order, const SeminormGrid& g) {
    switch (order) {
    case 0:
    case 1: return g.h1;
    case 2: return g.h2;
    case 3: return g.h3;
    default: return g.h4;
    }
}

double class_bound(const SymbolOrders& o, int alpha, int beta, double r, double lam_root) {
    return std::pow(1.0 + r, o.mu - o.p - alpha) * std::pow(1.0 + r + lam_root, o.p - o.d * beta);
}

[[noreturn]] void reject_point(const std::string& what, double r, cplx lambda) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s at |xi|=%.6g, lambda=%.6g%+.6gi", what.c_str(), r,
                  lambda.real(), lambda.imag());
    throw SymbolRejected(buf, r, lambda);
}

struct SweepResult {
    std::vector<double> worst;              // per (alpha, beta)
    std::vector<std::vector<double>> per_r; // per (alpha, beta), sup over lambda at each r
    std::vector<double> r;
};

SweepResult sweep(const ParamSymbol& s, int max_alpha, int max_beta, const SeminormGrid& g) {
    SweepResult out;
    out.r.push_back(0.0);
    for (double r : geometric(g.r_lo, g.r_hi, g.per_decade)) out.r.push_back(r);
    // The excision annulus carries the cutoff derivatives; sample it linearly.
    for (int i = 1; i < g.per_decade; ++i) out.r.push_back(s.eps * (1.0 + double(i) / g.per_decade));
    std::sort(out.r.begin(), out.r.end());
    std::vector<double> lam_roots = geometric(g.lam_lo, g.lam_hi, g.per_decade);
    std::vector<double> rays = g.sector.rays(g.rays);
    const int pairs = (max_alpha + 1) * (max_beta + 1);
    out.worst.assign(std::size_t(pairs), 0.0);
    out.per_r.assign(std::size_t(pairs), std::vector<double>(out.r.size(), 0.0));
    for (std::size_t ir = 0; ir < out.r.size(); ++ir) {
        double r = out.r[ir];
        for (double lr : lam_roots) {
            double mag = std::pow(lr, s.orders.d);
            for (double th : rays) {
                cplx lam = std::polar(mag, th);
                for (int a = 0; a <= max_alpha; ++a)
                    for (int b = 0; b <= max_beta; ++b) {
                        cplx v = symbol_derivative(s, a, b, r, lam, g);
                        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                            reject_point("non-finite symbol value", r, lam);
                        double ratio = std::abs(v) / class_bound(s.orders, a, b, r, lr);
                        std::size_t k = std::size_t(a * (max_beta + 1) + b);
                        out.worst[k] = std::max(out.worst[k], ratio);
                        out.per_r[k][ir] = std::max(out.per_r[k][ir], ratio);
                    }
            }
        }
    }
    return out;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    if (x.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

Sector::Sector(double lo, double hi, bool origin) : arg_min(lo), arg_max(hi), contains_origin(origin) {
    if (!(hi - lo >= 0.0) || hi - lo > 2.0 * kPi + 1e-15)
        throw ConfigError("sector must satisfy 0 <= arg_max - arg_min <= 2 pi");
}

Sector Sector::left_half_plane() { return Sector(kPi / 2, 3 * kPi / 2); }

bool Sector::contains(cplx z, double tol) const {
    if (z == 0.0) return contains_origin;
    double a = std::arg(z);
    double rel = std::fmod(a - arg_min, 2.0 * kPi);
    if (rel < 0) rel += 2.0 * kPi;
    if (rel <= arg_max - arg_min + tol) return true;
    return 2.0 * kPi - rel <= tol;
}

std::vector<double> Sector::rays(int count) const {
    if (count <= 1) return {0.5 * (arg_min + arg_max)};
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(arg_min + (arg_max - arg_min) * i / double(count - 1));
    return v;
}

RadialFunction RadialFunction::power(double k, cplx coef) {
    RadialFunction f;
    f.degree = k;
    f.homogeneous = true;
    if (k == std::round(k) && std::abs(k) < 64) {
        int ik = int(k);
        f.f = [ik, coef](cplx r) { return coef * std::pow(r, ik); };
    } else {
        f.f = [k, coef](cplx r) { return r == 0.0 ? cplx(0.0) : coef * std::pow(r, k); };
    }
    return f;
}

RadialFunction RadialFunction::polynomial(const std::vector<double>& c) {
    RadialFunction f;
    std::size_t top = c.size();
    while (top > 0 && c[top - 1] == 0.0) --top;
    f.degree = top == 0 ? 0.0 : double(top - 1);
    std::size_t nonzero = 0;
    for (double x : c) nonzero += x != 0.0;
    f.homogeneous = nonzero <= 1;
    f.f = [c](cplx r) {
        cplx s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * r + *it;
        return s;
    };
    return f;
}

ParamSymbol ParamSymbol::zero(SymbolOrders orders, int n) {
    ParamSymbol s;
    s.orders = orders;
    s.n = n;
    s.eval = [](double, cplx) { return cplx(0.0); };
    s.core = [](cplx, cplx) { return cplx(0.0); };
    s.lambda_deriv = [](double, cplx, int) { return cplx(0.0); };
    s.name = "zero";
    return s;
}

SeminormGrid SeminormGrid::refined() const {
    SeminormGrid g = *this;
    g.per_decade *= 2;
    g.r_hi *= 2.0;
    g.lam_hi *= 2.0;
    return g;
}

cplx symbol_derivative(const ParamSymbol& s, int alpha, int beta, double r, cplx lambda,
                       const SeminormGrid& g) {
    const double rho = std::abs(lambda);
    const double th = std::arg(lambda);
    const double step = step_for(alpha + beta, g);
    const double hr = step * std::max(1.0, r);
    const double hl = step * std::pow(1.0 + r + std::pow(rho, 1.0 / s.orders.d), s.orders.d);
    const int ha = (alpha + 1) / 2, hb = (beta + 1) / 2;
    std::vector<double> wa = fd_weights(alpha, ha), wb = fd_weights(beta, hb);
    cplx acc = 0.0;
    for (int i = -ha; i <= ha; ++i) {
        double wi = wa[std::size_t(i + ha)];
        if (wi == 0.0) continue;
        double ri = std::abs(r + i * hr);
        for (int j = -hb; j <= hb; ++j) {
            double wj = wb[std::size_t(j + hb)];
            if (wj == 0.0) continue;
            acc += wi * wj * s.eval(ri, std::polar(rho + j * hl, th));
        }
    }
    // Radial steps are in rho; rotate back to the complex lambda derivative.
    return acc / (std::pow(hr, alpha) * std::pow(hl, beta)) * std::polar(1.0, -beta * th);
}

double SeminormReport::max_slope() const {
    double m = -1e300;
    for (const auto& r : rows) m = std::max(m, r.slope);
    return m;
}

std::string SeminormReport::to_csv() const {
    std::ostringstream os;
    os << "alpha,beta,worst_ratio,grid_refined_ratio,pass\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%.10g,%d\n", r.alpha, r.beta, r.worst_ratio,
                      r.grid_refined_ratio, r.pass ? 1 : 0);
        os << buf;
    }
    return os.str();
}

SeminormReport seminorm_check(const ParamSymbol& s, int max_alpha, int max_beta, const SeminormGrid& grid) {
    if (max_alpha < 0 || max_beta < 0) throw ConfigError("seminorm_check: negative derivative order");
    if (!(grid.lam_lo > 0.0)) throw ConfigError("seminorm_check: |lambda| grid must start above 0");
    SeminormGrid fine = grid.refined();
    SweepResult base = sweep(s, max_alpha, max_beta, grid);
    SweepResult ref = sweep(s, max_alpha, max_beta, fine);
    SeminormReport rep;
    rep.pass = true;
    for (int a = 0; a <= max_alpha; ++a)
        for (int b = 0; b <= max_beta; ++b) {
            std::size_t k = std::size_t(a * (max_beta + 1) + b);
            SeminormRow row;
            row.alpha = a;
            row.beta = b;
            row.worst_ratio = base.worst[k];
            row.grid_refined_ratio = ref.worst[k];
            std::vector<double> x, y;
            for (std::size_t i = 0; i < ref.r.size(); ++i) {
                if (ref.r[i] < fine.r_hi / 10.0 || ref.per_r[k][i] <= 0.0) continue;
                x.push_back(std::log(1.0 + ref.r[i]));
                y.push_back(std::log(ref.per_r[k][i]));
            }
            row.slope = ls_slope(x, y);
            row.pass = std::isfinite(row.worst_ratio) && std::isfinite(row.grid_refined_ratio) &&
                       row.grid_refined_ratio <= 1.1 * row.worst_ratio + 1e-300;
            if (row.worst_ratio == 0.0 && row.grid_refined_ratio == 0.0) row.pass = true;
            rep.pass = rep.pass && row.pass;
            rep.rows.push_back(row);
        }
    return rep;
}

namespace {

constexpr int kCauchyNodes = 32;

// Taylor coefficient j in eps of eps^mu core(r/eps, lambda/eps^d), trapezoid on |eps| = radius.
cplx taylor_coef(const ParamSymbol& s, int j, cplx r, cplx lambda, double radius) {
    cplx acc = 0.0;
    for (int k = 0; k < kCauchyNodes; ++k) {
        cplx e = std::polar(radius, kPi * (2.0 * k + 1.0) / kCauchyNodes);
        cplx F = std::pow(e, s.orders.mu) * s.core(r / e, lambda / std::pow(e, s.orders.d));
        acc += F * std::pow(e, -j);
    }
    return acc / double(kCauchyNodes);
}

double circle_max(const ParamSymbol& s, cplx r, cplx lambda, double radius) {
    double m = 0.0;
    for (int k = 0; k < kCauchyNodes; ++k) {
        cplx e = std::polar(radius, kPi * (2.0 * k + 1.0) / kCauchyNodes);
        m = std::max(m, std::abs(std::pow(e, s.orders.mu) * s.core(r / e, lambda / std::pow(e, s.orders.d))));
    }
    return m;
}

} // namespace

HomogExpansion homog_expand(const ParamSymbol& s, int N) {
    if (N < 0) throw ConfigError("homog_expand: N must be nonnegative");
    if (!s.core) throw ConfigError("homog_expand: symbol has no closed-form core");
    const double d = s.orders.d;
    const double R1 = 0.1, R2 = 0.05;

    // Classicality probe on the anisotropic unit sphere.
    for (double rh : {0.0, 0.3, 0.7, 0.95, 1.0}) {
        double lam_mag = std::sqrt(std::max(0.0, 1.0 - std::pow(rh, 2.0 * d)));
        for (double th : s.sector.rays(3)) {
            cplx lam = std::polar(lam_mag, th);
            double scale = circle_max(s, rh, lam, R1);
            if (!std::isfinite(scale)) reject_point("homog_expand: non-finite scaling", rh, lam);
            for (int j : {-1, -2})
                if (std::abs(taylor_coef(s, j, rh, lam, R1)) > 1e-9 * scale)
                    reject_point("homog_expand: scaling limit diverges (non-classical symbol)", rh, lam);
            for (int j = 0; j < N; ++j) {
                cplx c1 = taylor_coef(s, j, rh, lam, R1), c2 = taylor_coef(s, j, rh, lam, R2);
                if (std::abs(c1 - c2) > 1e-8 * scale * std::pow(R1, -j))
                    reject_point("homog_expand: scaling limit unstable", rh, lam);
            }
        }
    }

    HomogExpansion out;
    for (int j = 0; j < N; ++j) {
        HomogComponent c;
        c.degree = s.orders.mu - j;
        c.d = d;
        ParamSymbol copy = s;
        c.eval = [copy, j, d, R1](double r, cplx lam) -> cplx {
            double rho = std::pow(std::pow(r, 2.0 * d) + std::norm(lam), 1.0 / (2.0 * d));
            if (rho == 0.0) return 0.0;
            cplx v = taylor_coef(copy, j, r / rho, lam / std::pow(rho, d), R1);
            return std::pow(rho, copy.orders.mu - j) * v;
        };
        out.components.push_back(std::move(c));
    }
    ParamSymbol rem = s;
    rem.orders.mu = s.orders.mu - N;
    rem.core = nullptr;
    rem.lambda_deriv = nullptr;
    rem.name = s.name + " remainder";
    Excision chi{s.eps};
    auto comps = out.components;
    auto base = s.eval;
    rem.eval = [base, comps, chi](double r, cplx lam) {
        cplx v = base(r, lam);
        double c = chi(r);
        if (c != 0.0)
            for (const auto& comp : comps) v -= c * comp.eval(r, lam);
        return v;
    };
    out.remainder = rem;
    return out;
}

ParamSymbol resolvent_symbol(const RadialFunction& a, const RadialFunction& b, int l,
                             const Sector& lambda, double eps) {
    if (l < 1) throw ConfigError("resolvent_symbol: l must be at least 1");
    std::vector<double> probe{1.0};
    if (!a.homogeneous)
        for (double r : geometric(1e-3, 1e3, 10)) probe.push_back(r);
    for (double r : probe) {
        cplx v = a(r);
        if (v == 0.0 || lambda.contains(v))
            reject_point("resolvent_symbol: a(xi) lies in the sector", r, v);
    }
    ParamSymbol s;
    s.orders = {b.degree - l * a.degree, -l * a.degree, a.degree};
    s.eps = eps;
    s.sector = lambda;
    s.name = "resolvent";
    auto af = a.f, bf = b.f;
    Excision chi{eps};
    s.core = [af, bf, l](cplx r, cplx lam) { return bf(r) * std::pow(af(r) - lam, -l); };
    s.eval = [af, bf, l, chi](double r, cplx lam) {
        double c = chi(r);
        return c == 0.0 ? cplx(0.0) : c * bf(r) * std::pow(af(r) - lam, -l);
    };
    s.lambda_deriv = [af, bf, l, chi](double r, cplx lam, int beta) {
        double c = chi(r);
        if (c == 0.0) return cplx(0.0);
        double poch = 1.0;
        for (int i = 0; i < beta; ++i) poch *= double(l + i);
        return c * bf(r) * poch * std::pow(af(r) - lam, -l - beta);
    };
    return s;
}

ParamSymbol parametrix_leading(const RadialFunction& a, double mu, const Sector& lambda, double eps,
                               double x) {
    if (!(x > 0.0)) throw ConfigError("parametrix_leading: x must be positive");
    const double xm = std::pow(x, mu);
    std::vector<double> probe{0.0, 1.0};
    for (double r : geometric(1e-3, 1e3, 10)) probe.push_back(r);
    for (double r : probe) {
        cplx v = a(r) / xm;
        if (lambda.contains(v)) reject_point("parametrix_leading: a - x^mu lambda not invertible", r, v);
    }
    ParamSymbol s;
    s.orders = {-mu, -mu, mu};
    s.eps = eps;
    s.sector = lambda;
    s.name = "parametrix";
    auto af = a.f;
    Excision chi{eps};
    s.core = [af, xm](cplx r, cplx lam) { return 1.0 / (af(r) - xm * lam); };
    s.eval = [af, xm, chi](double r, cplx lam) {
        double c = chi(r);
        return c == 0.0 ? cplx(0.0) : c / (af(r) - xm * lam);
    };
    s.lambda_deriv = [af, xm, chi](double r, cplx lam, int beta) {
        double c = chi(r);
        if (c == 0.0) return cplx(0.0);
        double f = 1.0;
        for (int i = 1; i <= beta; ++i) f *= i;
        return c * f * std::pow(xm, beta) * std::pow(af(r) - xm * lam, -1 - beta);
    };
    return s;
}

double parametrix_residual(const RadialFunction& a, const ParamSymbol& b, double mu, double x,
                           const SeminormGrid& g) {
    const double xm = std::pow(x, mu);
    Excision chi{b.eps};
    std::vector<double> rs{0.0};
    for (double r : geometric(g.r_lo, g.r_hi, g.per_decade)) rs.push_back(r);
    double worst = 0.0;
    for (double r : rs)
        for (double lr : geometric(g.lam_lo, g.lam_hi, g.per_decade))
            for (double th : g.sector.rays(g.rays)) {
                cplx lam = std::polar(std::pow(lr, mu), th);
                worst = std::max(worst, std::abs((a(r) - xm * lam) * b(r, lam) - chi(r)));
            }
    return worst;
}

NeumannResult neumann_refine(const ParamSymbol& b0, const ParamSymbol& s0, int steps) {
    if (steps < 1) throw ConfigError("neumann_refine: steps must be at least 1");
    auto series = [steps](cplx q) {
        cplx acc = 1.0;
        for (int j = 0; j < steps; ++j) acc = 1.0 + q * acc;
        return acc;
    };
    NeumannResult out;
    out.refined = b0;
    out.refined.name = b0.name + " refined";
    out.refined.lambda_deriv = nullptr;
    auto be = b0.eval, se = s0.eval;
    out.refined.eval = [be, se, series](double r, cplx lam) { return be(r, lam) * series(se(r, lam)); };
    if (b0.core && s0.core) {
        auto bc = b0.core, sc = s0.core;
        out.refined.core = [bc, sc, series](cplx r, cplx lam) { return bc(r, lam) * series(sc(r, lam)); };
    } else {
        out.refined.core = nullptr;
    }
    out.error = s0;
    out.error.name = "neumann error";
    out.error.orders = {-double(steps) - 1.0, -s0.orders.d, s0.orders.d};
    out.error.lambda_deriv = nullptr;
    out.error.eval = [se, steps](double r, cplx lam) { return std::pow(se(r, lam), steps + 1); };
    if (s0.core) {
        auto sc = s0.core;
        out.error.core = [sc, steps](cplx r, cplx lam) { return std::pow(sc(r, lam), steps + 1); };
    }
    return out;
}

double order_slope(const ParamSymbol& s, cplx lambda, double r_lo, double r_hi, int count) {
    std::vector<double> x, y;
    for (int i = 0; i < count; ++i) {
        double r = r_lo * std::pow(r_hi / r_lo, double(i) / (count - 1));
        double v = std::abs(s(r, lambda));
        if (v <= 0.0) continue;
        x.push_back(std::log(1.0 + r));
        y.push_back(std::log(v));
    }
    return ls_slope(x, y);
}

} // namespace conespec
