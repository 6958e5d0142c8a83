#include <doctest.h>

#include <random>

#include "conespec/indexsets.hpp"
#include "pairs.hpp"

using namespace conespec;

using namespace pairs;

TEST_CASE("extended union examples") {
    CHECK(extended_union(make({}), make({{0, 0}})) == make({{0, 0}}));
    CHECK(extended_union(make({{0, 0}}), make({{0, 0}})) == make({{0, 0}, {0, 1}}));
    auto g = extended_union(make({{1, 0}, {2, 1}}), make({{2, 0}}));
    CHECK(g == make({{1, 0}, {2, 0}, {2, 1}, {2, 2}}));
    CHECK(g.size() == 4);
}

TEST_CASE("extended union cutoff mismatch is a config error") {
    CHECK_THROWS_AS(extended_union(make({}, 6.0), make({}, 5.0)), ConfigError);
}

TEST_CASE("compose family examples") {
    IndexFamily4 e{make({{1, 0}}), make({}), make({{0, 0}}), std::nullopt};
    IndexFamily4 f{make({{2, 0}}), make({}), make({}), std::nullopt};
    CHECK(compose_family(e, f).lb == make({{1, 0}, {2, 0}}));

    IndexFamily4 empty{make({}), make({}), make({}), make({})};
    auto g = compose_family(empty, empty);
    CHECK(g.lb.empty());
    CHECK(g.rb.empty());
    CHECK(g.ff.empty());
    REQUIRE(g.fi.has_value());
    CHECK(g.fi->empty());

    IndexFamily4 a{make({}), make({}), make({{0, 0}}), std::nullopt};
    IndexFamily4 b{make({}), make({}), make({{0, 0}}), std::nullopt};
    CHECK(compose_family(a, b).ff == make({{0, 0}}));
}

TEST_CASE("plus with an empty operand is empty") {
    CHECK(plus(make({{0, 0}, {1, 2}}), make({})).empty());
}

TEST_CASE("canonical form") {
    auto s = make({{2, 1}, {0.5, 0}, {2, 0}, {2, 1}});
    auto e = s.entries();
    REQUIRE(e.size() == 3);
    CHECK(e[0].z.real() == 0.5);
    CHECK(e[1].k == 0);
    CHECK(e[2].k == 1);
    // C-infinity closure and idempotence.
    auto c = make({{0.5, 1}}, 3.0, true);
    CHECK(c.max_log(cplx(2.5, 0)) == 1);
    CHECK(c.max_log(cplx(3.5, 0)) == -1);
    CHECK(IndexSet::from_entries(c.entries(), 3.0, true) == c);
    // Complex exponents sort by (Re, Im).
    auto z = IndexSet::from_entries({{cplx(1, 2), 0}, {cplx(1, -2), 0}}, 3.0, false);
    CHECK(z.entries()[0].z.imag() == -2.0);
}

TEST_CASE("text round trip") {
    auto s = IndexSet::from_entries({{cplx(0.3, 1.5), 2}, {cplx(1.0 / 3.0, 0), 0}}, 4.0, true);
    auto t = IndexSet::from_text(s.to_text());
    CHECK(t == s);
    CHECK(t.cinf());
    CHECK_THROWS_AS(IndexSet::from_text("1 2 3\n"), ConfigError);
}

TEST_CASE("extended union laws") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        auto e = from_pairs(random_pairs(rng, 12, false), 6.0, false);
        auto f = from_pairs(random_pairs(rng, 12, false), 6.0, false);
        CHECK(extended_union(e, f) == extended_union(f, e));
        CHECK(extended_union(e, make({})) == e);
        auto u = extended_union(e, f);
        for (const auto& x : e.entries()) CHECK(u.contains(x.z, x.k));
        for (const auto& x : f.entries()) CHECK(u.contains(x.z, x.k));
    }
}

TEST_CASE("brute force agreement, small sample") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        int cutoff2 = 2 * std::uniform_int_distribution<int>(1, 6)(rng);
        double cutoff = cutoff2 / 2.0;
        bool ce = trial % 3 == 0, cf = trial % 5 == 0;
        auto pe = random_pairs(rng, cutoff2, ce), pf = random_pairs(rng, cutoff2, cf);
        auto e = from_pairs(pe, cutoff, ce), f = from_pairs(pf, cutoff, cf);
        CHECK(to_pairs(extended_union(e, f)) == oracle::ext_union(pe, pf));
        CHECK(to_pairs(plus(e, f)) == oracle::sum(pe, pf, cutoff2));
    }
}

TEST_CASE("compose with the all-N0 family stays in N0 patterns") {
    for (int cutoff = 1; cutoff <= 6; ++cutoff) {
        auto n0 = IndexSet::naturals(0, cutoff);
        IndexFamily4 fam{n0, n0, n0, n0};
        auto g = compose_family(fam, fam);
        oracle::Pairs p0;
        for (int j = 0; j <= cutoff; ++j) p0.insert({2 * j, 0});
        auto lb = oracle::ext_union(p0, oracle::sum(p0, p0, 2 * cutoff));
        CHECK(to_pairs(g.lb) == lb);
        CHECK(to_pairs(g.ff) == oracle::ext_union(oracle::sum(p0, p0, 2 * cutoff), oracle::sum(p0, p0, 2 * cutoff)));
        for (const auto& e : g.ff.entries()) CHECK(e.z.real() == std::round(e.z.real()));
    }
}

TEST_CASE("build_E_alpha") {
    SUBCASE("empty spectrum") {
        auto ea = build_E_alpha(BoundarySpectrum{}, 1.0, 2.0, 4.0);
        CHECK(ea.family.lb.empty());
        CHECK(ea.family.rb.empty());
        CHECK(ea.family.ff == IndexSet::naturals(1, 4.0));
        CHECK(*ea.family.fi == IndexSet::naturals(0, 4.0));
    }
    SUBCASE("simple pole") {
        // sigma = -1.5i, mu = 2: z = i(sigma + 2i) = -0.5 > alpha - mu = -1.
        BoundarySpectrum bs{{{cplx(0, -1.5), 1, 0}}};
        auto ea = build_E_alpha(bs, 1.0, 2.0, 3.0);
        for (int r = 0; r <= 3; ++r) CHECK(ea.hat_plus.max_log(cplx(-0.5 + r, 0)) == 0);
        CHECK(ea.hat_plus.max_log(cplx(3.5, 0)) == -1);
        // Check set doubles the log power.
        CHECK(ea.family.lb.max_log(cplx(-0.5, 0)) == 1);
    }
    SUBCASE("doubling the order raises the log ceiling") {
        BoundarySpectrum b1{{{cplx(0, -1.5), 1, 0}}}, b2{{{cplx(0, -1.5), 2, 0}}};
        auto e1 = build_E_alpha(b1, 1.0, 2.0, 3.0), e2 = build_E_alpha(b2, 1.0, 2.0, 3.0);
        for (int r = 0; r <= 3; ++r)
            CHECK(e2.hat_plus.max_log(cplx(-0.5 + r, 0)) == e1.hat_plus.max_log(cplx(-0.5 + r, 0)) + 1);
    }
    SUBCASE("poles one step apart accumulate") {
        // sigma and sigma - i both poles: at r = 1 the ceiling counts both.
        BoundarySpectrum bs{{{cplx(0, -1.5), 1, 0}, {cplx(0, -2.5), 1, 1}}};
        auto ea = build_E_alpha(bs, 1.0, 2.0, 3.0);
        CHECK(ea.hat_plus.max_log(cplx(-0.5, 0)) == 0);
        CHECK(ea.hat_plus.max_log(cplx(0.5, 0)) == 1);
    }
}
