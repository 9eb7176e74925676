#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "badapprox/points.hpp"

using namespace badapprox;

// Brute-force reference: scan all (p1, p2, q) directly.
static std::vector<RatPoint> brute_rationals(const RatRect& r, const BigInt& qmin,
                                             const BigInt& qmax, bool reduced_only) {
    std::vector<RatPoint> out;
    for (BigInt q = qmin; q <= qmax; ++q)
        for (BigInt p1 = 0; p1 <= q; ++p1)
            for (BigInt p2 = 0; p2 <= q; ++p2) {
                Rat x1 = make_rat(p1, q), x2 = make_rat(p2, q);
                if (x1 < r.lo1() || x1 > r.hi1() || x2 < r.lo2() || x2 > r.hi2()) continue;
                if (reduced_only && gcd(gcd(p1, p2), q) != 1) continue;
                out.push_back({p1, p2, q});
            }
    std::sort(out.begin(), out.end());
    return out;
}

TEST_CASE("rationals_in_rect matches brute force") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        long c1 = static_cast<long>(rng() % 64), c2 = static_cast<long>(rng() % 64);
        long h = 1 + static_cast<long>(rng() % 16);
        RatRect r{{Rat(c1, 64), Rat(c2, 64)}, {Rat(h, 64), Rat(h, 64)}};
        bool reduced = trial % 2 == 0;
        auto got = rationals_in_rect(r, 1, 12, reduced);
        auto want = brute_rationals(r, 1, 12, reduced);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
    }
}

TEST_CASE("rationals_in_rect narrow-window walk agrees with the scan") {
    // Width small enough to trip the Farey-walk branch.
    RatRect r{{Rat(355, 1024), Rat(1, 3)}, {Rat(1, 4096), Rat(1, 2)}};
    auto got = rationals_in_rect(r, 1, 200);
    auto want = brute_rationals(r, 1, 200, true);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
}

TEST_CASE("farey_neighbors brackets the target") {
    auto [lo, hi] = detail::farey_neighbors(Rat(2, 7), 5);
    CHECK(make_rat(lo.num, lo.den) <= Rat(2, 7));
    CHECK(make_rat(hi.num, hi.den) >= Rat(2, 7));
    // Adjacent Farey fractions satisfy the determinant identity.
    CHECK(hi.num * lo.den - lo.num * hi.den == 1);
}

TEST_CASE("farey_in_interval enumerates exactly the reduced fractions") {
    auto fr = detail::farey_in_interval(Rat(1, 4), Rat(3, 4), 6);
    std::vector<Rat> got;
    for (const auto& f : fr) got.push_back(make_rat(f.num, f.den));
    std::vector<Rat> want;
    for (long q = 1; q <= 6; ++q)
        for (long p = 0; p <= q; ++p)
            if (gcd(BigInt(p), BigInt(q)) == 1 && Rat(p, q) >= Rat(1, 4) && Rat(p, q) <= Rat(3, 4))
                want.push_back(Rat(p, q));
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    CHECK(got == want);
}

TEST_CASE("rationals_on_line stays on the line and misses nothing") {
    Line l = line_through(Rat(0), Rat(0), Rat(1), Rat(1, 2));  // x2 = x1/2
    RatRect within{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}};
    auto got = rationals_on_line(l, within, 1, 20);
    for (const auto& p : got) CHECK(line_contains(l, p.x1(), p.x2()));
    auto all = brute_rationals(within, 1, 20, true);
    size_t on = 0;
    for (const auto& p : all)
        if (line_contains(l, p.x1(), p.x2())) ++on;
    CHECK(got.size() == on);
}

TEST_CASE("collinear classification") {
    CHECK(collinear({}).kind == CollinearKind::empty);
    std::vector<RatPoint> single{{1, 1, 2}};
    auto one = collinear(single);
    CHECK(one.kind == CollinearKind::line);
    std::vector<RatPoint> dup{{1, 1, 2}, {2, 2, 4}};  // same point unreduced
    CHECK(collinear(dup).kind == CollinearKind::line);
    std::vector<RatPoint> on{{0, 0, 1}, {1, 1, 3}, {2, 2, 3}};  // x2 = x1
    CHECK(collinear(on).kind == CollinearKind::line);
    CHECK(line_contains(*collinear(on).line, Rat(1, 2), Rat(1, 2)));
    std::vector<RatPoint> off{{0, 0, 1}, {1, 1, 3}, {1, 2, 3}};
    CHECK(collinear(off).kind == CollinearKind::non_collinear);
}

TEST_CASE("dirichlet witnesses match the definition by brute force") {
    RatVec2 x{Rat(13, 37), Rat(29, 41)};
    RatVec2 ex{Rat(3, 2), Rat(3, 2)};
    auto got = dirichlet_witnesses(x, ex, 40);
    for (const auto& p : got) {
        Rat d1 = abs(Rat(x.x1 - p.x1()));
        Rat d2 = abs(Rat(x.x2 - p.x2()));
        if (d1 != 0) CHECK(cmp_pow_rat(p.q, -ex.x1, d1) > 0);
        if (d2 != 0) CHECK(cmp_pow_rat(p.q, -ex.x2, d2) > 0);
    }
    // Every brute-force witness was found.
    size_t count = 0;
    for (BigInt q = 1; q <= 40; ++q)
        for (BigInt p1 = 0; p1 <= q; ++p1)
            for (BigInt p2 = 0; p2 <= q; ++p2) {
                if (gcd(gcd(p1, p2), q) != 1) continue;
                Rat d1 = abs(Rat(x.x1 - make_rat(p1, q)));
                Rat d2 = abs(Rat(x.x2 - make_rat(p2, q)));
                bool ok1 = d1 == 0 || cmp_pow_rat(q, -ex.x1, d1) > 0;
                bool ok2 = d2 == 0 || cmp_pow_rat(q, -ex.x2, d2) > 0;
                if (ok1 && ok2) ++count;
            }
    CHECK(got.size() == count);
}
