#pragma once

// Conversions between library index sets and the brute-force pair sets.

#include <cmath>
#include <random>
#include <vector>

#include "conespec/indexsets.hpp"
#include "oracles.hpp"

namespace pairs {

using conespec::cplx;
using conespec::IndexEntry;
using conespec::IndexSet;

inline IndexSet make(std::vector<std::pair<double, int>> v, double cutoff = 6.0, bool cinf = false) {
    std::vector<IndexEntry> e;
    for (auto [z, k] : v) e.push_back({cplx(z, 0.0), k});
    return IndexSet::from_entries(e, cutoff, cinf);
}

inline oracle::Pairs to_pairs(const IndexSet& s) {
    oracle::Pairs p;
    for (const auto& e : s.entries()) p.insert({int(std::lround(2 * e.z.real())), e.k});
    return p;
}

inline IndexSet from_pairs(const oracle::Pairs& p, double cutoff, bool cinf) {
    std::vector<IndexEntry> e;
    for (auto [z, k] : p) e.push_back({cplx(z / 2.0, 0.0), k});
    return IndexSet::from_entries(e, cutoff, cinf);
}

inline oracle::Pairs random_pairs(std::mt19937_64& rng, int cutoff2, bool cinf) {
    std::uniform_int_distribution<int> count(0, 4), z(0, cutoff2), k(0, 2);
    oracle::Pairs p;
    int n = count(rng);
    for (int i = 0; i < n; ++i) p.insert({z(rng), k(rng)});
    p = oracle::close_log(p);
    return cinf ? oracle::close_cinf(p, cutoff2) : p;
}

} // namespace pairs
