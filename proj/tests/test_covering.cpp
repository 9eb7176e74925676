#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "badapprox/cantor.hpp"

using namespace badapprox;

static ConstructionParams desk() {
    return {{Rat(1), Rat(1)}, {Rat(3, 2), Rat(3, 2)}, 4, 4};
}

static RatRect unit() {
    return {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}};
}

static std::vector<EnlargedRect> random_family(std::mt19937_64& rng, size_t count) {
    std::vector<LeadingRational> lead;
    for (size_t i = 0; i < count; ++i) {
        BigInt q = 16 + BigInt(rng() % 4096);
        BigInt p1 = BigInt(rng() % 1000000) * q / 1000000;
        BigInt p2 = BigInt(rng() % 1000000) * q / 1000000;
        lead.push_back({{p1, p2, q}, 1, Line{}});
    }
    return enumerate_R_sequence(std::move(lead), desk().exps);
}

TEST_CASE("enlargement geometry") {
    ExponentPair e{Rat(3, 2), Rat(3, 2)};
    RatPoint p{1, 1, 4};
    RealRect r = enlargement_rect(p, e);
    // halfwidth 3 * 4^{-3/2} = 3/8 on both axes
    CHECK(r.halfwidth.x1.is_rational());
    CHECK(r.halfwidth.x1.rational_part() == Rat(3, 8));
    CHECK(enlargement_area(p) == Rat(9, 16));
    CHECK(enlargement_area(RatPoint{1, 1, 100}) == Rat(9, 250000));
}

TEST_CASE("R sequence is ordered by denominator with 1-based indices") {
    std::mt19937_64 rng(3);
    auto seq = random_family(rng, 64);
    for (size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq[i].seq_index == static_cast<long>(i) + 1);
        if (i > 0) CHECK(seq[i - 1].center.q <= seq[i].center.q);
    }
}

TEST_CASE("vitali selection: disjoint output covering all inputs at 5x") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto seq = random_family(rng, 1 + rng() % 40);
        auto picked = vitali_select(seq);
        for (size_t i = 0; i < picked.size(); ++i)
            for (size_t j = i + 1; j < picked.size(); ++j)
                CHECK(!rect_intersects(picked[i].rect, picked[j].rect));
        for (const auto& r : seq) {
            bool covered = false;
            for (const auto& p : picked) {
                RealRect five{p.rect.center,
                              {Rat(5) * p.rect.halfwidth.x1, Rat(5) * p.rect.halfwidth.x2}};
                if (rect_contains_rect(five, r.rect)) covered = true;
            }
            CHECK(covered);
        }
    }
}

TEST_CASE("vitali selection rejects unsorted input") {
    std::vector<LeadingRational> lead{{{1, 1, 100}, 1, Line{}}, {{1, 1, 50}, 1, Line{}}};
    std::vector<EnlargedRect> seq;
    long idx = 1;
    for (const auto& l : lead) seq.push_back({l.point, enlargement_rect(l.point, desk().exps), idx++});
    CHECK_THROWS_AS(vitali_select(seq), PreconditionError);
}

TEST_CASE("t_select reaches the density target on a real host") {
    auto st = build_level(build_level(make_level0(desk(), unit())));
    // The level-1 survivor cell used as the default tree root.
    GridSpec g = st.oracle->fine_grid(1);
    RatRect host = g.cell(10240, 14848);  // lower-left cell of the default root region
    REQUIRE(st.oracle->cell_survives(1, 10240, 14848));
    auto cands = host_candidates(*st.oracle, host, 3382, 13528);
    REQUIRE(!cands.empty());
    std::vector<LeadingRational> lead;
    for (const auto& c : cands) lead.push_back({c, desk().level_of_denominator(c.q), Line{}});
    auto seq = enumerate_R_sequence(std::move(lead), desk().exps);
    auto picked = t_select(st, host, 1, seq);
    REQUIRE(!picked.empty());
    Rat total = 0;
    for (const auto& r : picked) {
        CHECK(rect_contains_rect(to_real(host), r.rect));
        total += enlargement_area(r.center);
    }
    for (size_t i = 0; i < picked.size(); ++i)
        for (size_t j = i + 1; j < picked.size(); ++j)
            CHECK(!rect_intersects(picked[i].rect, picked[j].rect));
    CHECK(total >= Rat(3, 400) * rect_area(host));
}

TEST_CASE("t_select reports the achieved ratio on shortfall") {
    auto st = build_level(build_level(make_level0(desk(), unit())));
    GridSpec g = st.oracle->fine_grid(1);
    RatRect host = g.cell(10240, 14848);
    // Candidate pool too small to reach 3/400 of the host.
    std::vector<LeadingRational> lead;
    auto seq = enumerate_R_sequence(std::move(lead), desk().exps);
    try {
        t_select(st, host, 1, seq);
        FAIL("expected a density shortfall");
    } catch (const DensityShortfallError& e) {
        CHECK(e.achieved == 0);
    }
}

TEST_CASE("host level recovery from cell side") {
    auto st = build_level(build_level(make_level0(desk(), unit())));
    GridSpec g1 = st.oracle->fine_grid(1);
    CHECK(host_level_of(st, g1.cell(0, 0)) == 1);
    GridSpec g2 = st.oracle->fine_grid(2);
    CHECK(host_level_of(st, g2.cell(5, 7)) == 2);
    RatRect odd{{Rat(1, 3), Rat(1, 3)}, {Rat(1, 100), Rat(1, 100)}};
    CHECK_THROWS_AS(host_level_of(st, odd), PreconditionError);
}
