#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conespec/boundary_spectrum.hpp"

namespace conespec {

struct IndexEntry {
    cplx z;
    int k = 0;
};

// Truncated index set. Stored as exponent -> largest log power, which is
// enough because sets are log-downward closed.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(double cutoff, bool cinf) : cutoff_(cutoff), cinf_(cinf) {}

    static IndexSet from_entries(const std::vector<IndexEntry>& entries, double cutoff,
                                 bool cinf);
    // {(j, 0) : first <= j <= cutoff}, closed under z -> z+1.
    static IndexSet naturals(int first, double cutoff);

    double cutoff() const { return cutoff_; }
    bool cinf() const { return cinf_; }
    bool empty() const { return tops_.empty(); }

    // Expanded (z, k) list in canonical order.
    std::vector<IndexEntry> entries() const;
    // Distinct exponents with their largest log power.
    const std::vector<IndexEntry>& tops() const { return tops_; }
    // -1 if z is not an exponent of the set.
    int max_log(cplx z) const;
    bool contains(cplx z, int k) const { return max_log(z) >= k; }
    std::size_t size() const;

    bool operator==(const IndexSet& other) const;

    std::string to_text() const;
    static IndexSet from_text(const std::string& text);

private:
    void canonicalize();

    double cutoff_ = 0.0;
    bool cinf_ = false;
    std::vector<IndexEntry> tops_;
};

bool same_exponent(cplx a, cplx b);

IndexSet extended_union(const IndexSet& e, const IndexSet& f);
// Pairwise sums; an empty operand gives the empty set.
IndexSet plus(const IndexSet& e, const IndexSet& f);

struct IndexFamily4 {
    IndexSet lb, rb, ff;
    std::optional<IndexSet> fi;
};

IndexFamily4 compose_family(const IndexFamily4& e, const IndexFamily4& f);

struct EAlpha {
    IndexSet hat_plus, hat_minus;
    IndexFamily4 family;  // (check E+, check E-, E, N0)
};

EAlpha build_E_alpha(const BoundarySpectrum& spec, double alpha, double mu, double cutoff);

} // namespace conespec
