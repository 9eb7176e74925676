#pragma once

// Rectangle Vitali selection and the density selection inside a survivor cell:
// from the ordered family of enlargements Delta(p/q, 3q^{-rho}), pick a
// pairwise disjoint subfamily inside the host capturing at least 3/400 of its
// area.

#include "badapprox/construction.hpp"
#include "badapprox/errors.hpp"
#include "badapprox/geom.hpp"
#include "badapprox/realx.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

namespace badapprox {

struct EnlargedRect {
    RatPoint center;
    RealRect rect;       // Delta(center, 3 q^{-rho})
    long seq_index = 0;  // 1-based position in the global q-ordered sequence
};

inline RealRect enlargement_rect(const RatPoint& c, const ExponentPair& e) {
    Real h1 = Rat(3) * Real::pow(c.q, -e.rho1);
    Real h2 = Rat(3) * Real::pow(c.q, -e.rho2);
    return RealRect{{Real(c.x1()), Real(c.x2())}, {h1, h2}};
}

inline RealRect to_real(const RatRect& r) {
    return RealRect{{Real(r.center.x1), Real(r.center.x2)}, {Real(r.halfwidth.x1), Real(r.halfwidth.x2)}};
}

// Exact area: 4 * 3q^{-rho1} * 3q^{-rho2} = 36 q^{-3} since rho1 + rho2 = 3.
inline Rat enlargement_area(const RatPoint& c) { return Rat(36) / Rat(ipow(c.q, 3)); }

inline std::vector<EnlargedRect> enumerate_R_sequence(std::vector<LeadingRational> leading,
                                                      const ExponentPair& e) {
    std::sort(leading.begin(), leading.end(),
              [](const LeadingRational& a, const LeadingRational& b) { return a.point < b.point; });
    std::vector<EnlargedRect> out;
    out.reserve(leading.size());
    long idx = 1;
    for (const auto& l : leading) out.push_back({l.point, enlargement_rect(l.point, e), idx++});
    return out;
}

// Greedy disjoint subfamily; every input rect lies in the 5-fold dilate of
// some kept rect.
inline std::vector<EnlargedRect> vitali_select(const std::vector<EnlargedRect>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i].center.q < v[i - 1].center.q)
            throw PreconditionError("vitali_select: input not in nondecreasing denominator order");
    std::vector<EnlargedRect> kept;
    for (const auto& r : v) {
        bool clear = true;
        for (const auto& k : kept)
            if (rect_intersects(r.rect, k.rect)) {
                clear = false;
                break;
            }
        if (clear) kept.push_back(r);
    }
    return kept;
}

// The survivor level a host cell belongs to, recovered from its dimensions.
inline long host_level_of(const LevelState& state, const RatRect& host) {
    for (long n = 0; n <= state.level + 64; ++n) {
        GridSpec g = state.oracle->fine_grid(n);
        if (g.side(1) == host.halfwidth.x1 * 2 && g.side(2) == host.halfwidth.x2 * 2) return n;
        if (g.side(1) < host.halfwidth.x1 * 2) break;
    }
    throw PreconditionError("t_select: host is not a survivor-grid cell");
}

// Disjoint enlargements with index >= G, each inside the host and meeting a
// survivor cell of the next level strictly interior to it, accumulated in
// sequence order until their area reaches (3/400) * area(host).
inline std::vector<EnlargedRect> t_select(const LevelState& state, const RatRect& host, long G,
                                          const std::vector<EnlargedRect>& seq) {
    long n = host_level_of(state, host);
    GridSpec g = state.oracle->fine_grid(n + 1);

    // Survivor cells of level n+1 strictly inside the host interior.
    std::set<std::pair<BigInt, BigInt>> interior;
    {
        BigInt a1 = rat_ceil(host.lo1() * g.count(1)), b1 = rat_floor(host.hi1() * g.count(1)) - 1;
        BigInt a2 = rat_ceil(host.lo2() * g.count(2)), b2 = rat_floor(host.hi2() * g.count(2)) - 1;
        for (BigInt i1 = a1; i1 <= b1; ++i1)
            for (BigInt i2 = a2; i2 <= b2; ++i2) {
                RatRect cell = g.cell(i1, i2);
                if (!(host.lo1() < cell.lo1() && cell.hi1() < host.hi1() && host.lo2() < cell.lo2() &&
                      cell.hi2() < host.hi2()))
                    continue;
                if (state.oracle->cell_survives(n + 1, i1, i2)) interior.emplace(i1, i2);
            }
    }

    Rat target = Rat(3, 400) * rect_area(host);
    Rat total = 0;
    std::vector<EnlargedRect> kept;
    RealRect rhost = to_real(host);
    for (const auto& r : seq) {
        if (r.seq_index < G) continue;
        // meets some interior survivor of the next level?
        BigInt a1 = real_floor(r.rect.lo1() * Rat(g.count(1)));
        BigInt b1 = real_floor(r.rect.hi1() * Rat(g.count(1)));
        BigInt a2 = real_floor(r.rect.lo2() * Rat(g.count(2)));
        BigInt b2 = real_floor(r.rect.hi2() * Rat(g.count(2)));
        bool meets = false;
        for (BigInt i1 = a1; i1 <= b1 + 1 && !meets; ++i1)
            for (BigInt i2 = a2; i2 <= b2 + 1 && !meets; ++i2)
                if (interior.count({i1, i2}) && rect_intersects(r.rect, to_real(g.cell(i1, i2))))
                    meets = true;
        if (!meets) continue;
        if (!rect_contains_rect(rhost, r.rect)) continue;
        bool clear = true;
        for (const auto& k : kept)
            if (rect_intersects(r.rect, k.rect)) {
                clear = false;
                break;
            }
        if (!clear) continue;
        kept.push_back(r);
        total += enlargement_area(r.center);
        if (total >= target) return kept;
    }
    throw DensityShortfallError("t_select: density target unattained at current depth",
                                Rat(total / rect_area(host)));
}

}  // namespace badapprox
