#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library code it checks.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// Index sets with real exponents on the half-integer lattice: key = 2 Re z.
using Pairs = std::set<std::pair<int, int>>;

inline Pairs close_log(const Pairs& s) {
    Pairs out;
    for (auto [z, k] : s)
        for (int l = 0; l <= k; ++l) out.insert({z, l});
    return out;
}

inline Pairs close_cinf(const Pairs& s, int cutoff2) {
    Pairs out = s;
    for (auto [z, k] : s)
        for (int z2 = z + 2; z2 <= cutoff2; z2 += 2) out.insert({z2, k});
    return out;
}

inline Pairs ext_union(const Pairs& e, const Pairs& f) {
    Pairs out = e;
    out.insert(f.begin(), f.end());
    for (auto [z, k] : e)
        for (auto [w, l] : f)
            if (z == w) out.insert({z, k + l + 1});
    return out;
}

inline Pairs sum(const Pairs& e, const Pairs& f, int cutoff2) {
    Pairs out;
    for (auto [z, k] : e)
        for (auto [w, l] : f)
            if (z + w <= cutoff2) out.insert({z + w, k + l});
    return out;
}

// Smallest positive root of tan x = x, by bisection on sin x - x cos x.
inline double tan_x_equals_x_root() {
    auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
    double lo = 4.0, hi = 4.7;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Composite Gauss-Legendre (5 point) on [a, b] with n panels.
inline double gl5(const std::function<double(double)>& f, double a, double b, int n) {
    static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                0.9061798459386640};
    static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                0.2369268850561891, 0.2369268850561891};
    double h = (b - a) / n, s = 0.0;
    for (int p = 0; p < n; ++p) {
        double c = a + (p + 0.5) * h;
        for (int i = 0; i < 5; ++i) s += w[i] * f(c + 0.5 * h * x[i]);
    }
    return 0.5 * h * s;
}

// Same smooth step as the library cutoff, written out independently.
inline double step(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    double a = std::exp(-1 / u), b = std::exp(-1 / (1 - u));
    return a / (a + b);
}

inline double phi(double x, double c1, double c2) { return step((c2 - x) / (c2 - c1)); }

} // namespace oracle
