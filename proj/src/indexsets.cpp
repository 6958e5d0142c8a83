#include "conespec/indexsets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace conespec {

namespace {

constexpr double kZTol = 1e-12;
constexpr double kCutTol = 1e-12;

void merge_top(std::vector<IndexEntry>& tops, cplx z, int k) {
    for (auto& t : tops) {
        if (same_exponent(t.z, z)) {
            t.k = std::max(t.k, k);
            return;
        }
    }
    tops.push_back({z, k});
}

void require_same_cutoff(const IndexSet& e, const IndexSet& f) {
    if (std::abs(e.cutoff() - f.cutoff()) > kCutTol)
        throw ConfigError("index sets have different cutoffs (" + std::to_string(e.cutoff()) +
                          " vs " + std::to_string(f.cutoff()) + ")");
}

} // namespace

int BoundarySpectrum::ord_at(cplx sigma, double tol) const {
    int best = 0;
    for (const auto& p : poles)
        if (std::abs(p.sigma - sigma) <= tol * std::max(1.0, std::abs(sigma)))
            best = std::max(best, p.ord);
    return best;
}

bool same_exponent(cplx a, cplx b) {
    return std::abs(a - b) <= kZTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

IndexSet IndexSet::from_entries(const std::vector<IndexEntry>& entries, double cutoff,
                                bool cinf) {
    IndexSet s(cutoff, cinf);
    for (const auto& e : entries) {
        if (e.k < 0) throw ConfigError("negative log power in index set");
        if (!std::isfinite(e.z.real()) || !std::isfinite(e.z.imag()))
            throw ConfigError("non-finite exponent in index set");
        merge_top(s.tops_, e.z, e.k);
    }
    s.canonicalize();
    return s;
}

IndexSet IndexSet::naturals(int first, double cutoff) {
    std::vector<IndexEntry> v;
    for (int j = first; j <= cutoff + kCutTol; ++j) v.push_back({cplx(j, 0.0), 0});
    return from_entries(v, cutoff, true);
}

void IndexSet::canonicalize() {
    std::vector<IndexEntry> kept;
    for (const auto& t : tops_)
        if (t.z.real() <= cutoff_ + kCutTol) merge_top(kept, t.z, t.k);
    auto by_z = [](const IndexEntry& a, const IndexEntry& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    };
    std::sort(kept.begin(), kept.end(), by_z);
    if (cinf_) {
        // Ascending Re, so a raised k at z+1 is seen before z+1 is processed.
        for (std::size_t i = 0; i < kept.size(); ++i) {
            cplx z = kept[i].z;
            int k = kept[i].k;
            for (int l = 1; z.real() + l <= cutoff_ + kCutTol; ++l) {
                merge_top(kept, z + double(l), k);
            }
            std::sort(kept.begin() + long(i) + 1, kept.end(), by_z);
        }
    }
    tops_ = std::move(kept);
}

std::vector<IndexEntry> IndexSet::entries() const {
    std::vector<IndexEntry> out;
    for (const auto& t : tops_)
        for (int k = 0; k <= t.k; ++k) out.push_back({t.z, k});
    return out;
}

int IndexSet::max_log(cplx z) const {
    for (const auto& t : tops_)
        if (same_exponent(t.z, z)) return t.k;
    return -1;
}

std::size_t IndexSet::size() const {
    std::size_t n = 0;
    for (const auto& t : tops_) n += std::size_t(t.k) + 1;
    return n;
}

bool IndexSet::operator==(const IndexSet& o) const {
    if (std::abs(cutoff_ - o.cutoff_) > kCutTol || tops_.size() != o.tops_.size()) return false;
    for (std::size_t i = 0; i < tops_.size(); ++i)
        if (!same_exponent(tops_[i].z, o.tops_[i].z) || tops_[i].k != o.tops_[i].k) return false;
    return true;
}

std::string IndexSet::to_text() const {
    std::ostringstream os;
    char buf[96];
    std::snprintf(buf, sizeof buf, "# cutoff=%.17g cinf=%d\n", cutoff_, cinf_ ? 1 : 0);
    os << buf;
    for (const auto& e : entries()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", e.z.real(), e.z.imag(), e.k);
        os << buf;
    }
    return os.str();
}

IndexSet IndexSet::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    double cutoff = 0.0;
    int cinf = 0;
    bool header = false;
    std::vector<IndexEntry> v;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(), "# cutoff=%lf cinf=%d", &cutoff, &cinf) != 2)
                throw ConfigError("bad index set header: " + line);
            header = true;
            continue;
        }
        double re, im;
        int k;
        if (std::sscanf(line.c_str(), "%lf %lf %d", &re, &im, &k) != 3)
            throw ConfigError("bad index set line: " + line);
        v.push_back({cplx(re, im), k});
    }
    if (!header) throw ConfigError("index set text has no header line");
    return from_entries(v, cutoff, cinf != 0);
}

IndexSet extended_union(const IndexSet& e, const IndexSet& f) {
    require_same_cutoff(e, f);
    std::vector<IndexEntry> v = e.tops();
    for (const auto& t : f.tops()) {
        int ke = e.max_log(t.z);
        merge_top(v, t.z, ke >= 0 ? ke + t.k + 1 : t.k);
    }
    return IndexSet::from_entries(v, e.cutoff(), e.cinf() && f.cinf());
}

IndexSet plus(const IndexSet& e, const IndexSet& f) {
    require_same_cutoff(e, f);
    std::vector<IndexEntry> v;
    for (const auto& a : e.tops())
        for (const auto& b : f.tops())
            if ((a.z + b.z).real() <= e.cutoff() + kCutTol) merge_top(v, a.z + b.z, a.k + b.k);
    return IndexSet::from_entries(v, e.cutoff(), e.cinf() || f.cinf());
}

IndexFamily4 compose_family(const IndexFamily4& e, const IndexFamily4& f) {
    IndexFamily4 g;
    g.lb = extended_union(e.lb, plus(e.ff, f.lb));
    g.rb = extended_union(plus(e.rb, f.ff), f.rb);
    g.ff = extended_union(plus(e.ff, f.ff), plus(e.lb, f.rb));
    if (e.fi && f.fi) g.fi = plus(*e.fi, *f.fi);
    return g;
}

EAlpha build_E_alpha(const BoundarySpectrum& spec, double alpha, double mu, double cutoff) {
    const cplx I(0.0, 1.0);
    std::vector<IndexEntry> plus_e, minus_e;
    std::vector<cplx> seen;
    for (const auto& p : spec.poles) {
        bool dup = false;
        for (auto s : seen) dup = dup || std::abs(s - p.sigma) <= 1e-9 * std::max(1.0, std::abs(s));
        if (dup) continue;
        seen.push_back(p.sigma);
        cplx tau = p.sigma + I * mu;
        for (int sign : {+1, -1}) {
            // z = i tau for the + set, z = -i tau for the - set.
            cplx z = double(sign) * I * tau;
            if (!(z.real() > sign * (alpha - mu) + 1e-12)) continue;
            int total = 0;
            for (int r = 0; z.real() + r <= cutoff + kCutTol; ++r) {
                total += spec.ord_at(p.sigma - double(sign) * I * double(r));
                if (total >= 1) (sign > 0 ? plus_e : minus_e).push_back({z + double(r), total - 1});
            }
        }
    }
    EAlpha out;
    out.hat_plus = IndexSet::from_entries(plus_e, cutoff, true);
    out.hat_minus = IndexSet::from_entries(minus_e, cutoff, true);
    out.family.lb = extended_union(out.hat_plus, out.hat_plus);
    out.family.rb = extended_union(out.hat_minus, out.hat_minus);
    out.family.ff = extended_union(IndexSet::naturals(1, cutoff), plus(out.hat_plus, out.hat_minus));
    out.family.fi = IndexSet::naturals(0, cutoff);
    return out;
}

} // namespace conespec
