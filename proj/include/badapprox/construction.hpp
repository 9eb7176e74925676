#pragma once

// Level-by-level avoidance construction inside a working window.
//
// At level n the unit square carries two grids: the coarse V_{n,n} grid whose
// cells host removal slabs, and the fine V_{l1(n),l2(n)} grid whose cells are
// the survivors. All rationals with denominator < N^n inside one coarse cell
// are collinear (simplex lemma), so each nonempty coarse cell determines one
// line; the slab around that line is removed at level n when some rational on
// it with denominator in [N^{n-1}, N^n) has a delta(n)-neighbourhood meeting
// the previous survivor union. Those witnessing rationals are the leading
// rationals.
//
// Everything is evaluated lazily and memoized per cell, so deep levels can be
// queried inside tiny windows without materializing full grids.

#include "badapprox/errors.hpp"
#include "badapprox/geom.hpp"
#include "badapprox/params.hpp"
#include "badapprox/points.hpp"
#include "badapprox/realx.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

namespace badapprox {

struct LeadingRational {
    RatPoint point;
    long level = 0;  // N^{level-1} <= q < N^{level}
    Line host_line;
};

inline bool operator<(const LeadingRational& a, const LeadingRational& b) {
    return std::tie(a.point, a.level) < std::tie(b.point, b.level);
}

// Line through all rationals of denominator < N^n in the cell, if any.
inline std::optional<Line> hyperplane_of_cell(const ConstructionParams& P, const RatRect& cell, long n) {
    auto pts = rationals_in_rect(cell, BigInt(1), BigInt(ipow(P.N, static_cast<unsigned long>(n)) - 1));
    auto col = collinear(pts);
    if (col.kind == CollinearKind::empty) return std::nullopt;
    if (col.kind == CollinearKind::non_collinear)
        throw std::logic_error("hyperplane_of_cell: non-collinear rationals below the simplex threshold");
    return col.line;
}

// Lazy, memoized construction oracle over a fixed window.
class Construction {
  public:
    Construction(ConstructionParams params, RatRect window)
        : P_(std::move(params)), window_(std::move(window)) {
        P_.validate();
    }

    const ConstructionParams& params() const { return P_; }
    const RatRect& window() const { return window_; }

    GridSpec coarse_grid(long n) const { return GridSpec{P_, n, n}; }
    GridSpec fine_grid(long n) const { return GridSpec{P_, P_.ell(n, 1), P_.ell(n, 2)}; }

    // Qualification result for one coarse cell.
    struct CellQual {
        std::optional<Line> line;
        std::optional<SegmentNeighborhood> slab;   // present iff the line qualifies
        std::vector<RatPoint> witnesses;           // leading rationals of this cell
    };

    const CellQual& qualify(long n, const BigInt& i1, const BigInt& i2) const {
        std::lock_guard<std::recursive_mutex> g(mu_);
        auto key = std::make_tuple(n, i1, i2);
        auto it = qual_cache_.find(key);
        if (it != qual_cache_.end()) return it->second;
        CellQual q = compute_qual(n, i1, i2);
        return qual_cache_.emplace(key, std::move(q)).first->second;
    }

    // Does this fine-grid cell survive all removals through level n?
    bool cell_survives(long n, const BigInt& i1, const BigInt& i2) const {
        if (n == 0) return true;
        std::lock_guard<std::recursive_mutex> g(mu_);
        auto key = std::make_tuple(n, i1, i2);
        auto it = survive_cache_.find(key);
        if (it != survive_cache_.end()) return it->second;
        bool s = compute_survives(n, i1, i2);
        survive_cache_.emplace(key, s);
        return s;
    }

    // Membership in the depth-n survivor union.
    bool survives_point(long n, const RatVec2& p) const {
        if (n == 0) return true;
        GridSpec g = fine_grid(n);
        for (const auto& i1 : covering_indices(g, p.x1, 1))
            for (const auto& i2 : covering_indices(g, p.x2, 2))
                if (cell_survives(n, i1, i2)) return true;
        return false;
    }

    // Does rect r meet the depth-n survivor union (within the window)?
    bool rect_meets_survivors(long n, const RatRect& r) const {
        if (n == 0) return rect_intersects(r, window_);
        GridSpec g = fine_grid(n);
        auto [a1, b1] = index_range(g, r.lo1(), r.hi1(), 1);
        auto [a2, b2] = index_range(g, r.lo2(), r.hi2(), 2);
        for (BigInt i1 = a1; i1 <= b1; ++i1)
            for (BigInt i2 = a2; i2 <= b2; ++i2) {
                if (!rect_intersects(g.cell(i1, i2), r)) continue;
                if (cell_survives(n, i1, i2)) return true;
            }
        return false;
    }

    // Leading rationals of level n with a coarse host cell meeting `where`.
    std::vector<LeadingRational> leading_in(long n, const RatRect& where) const {
        BigInt qmin = n == 1 ? BigInt(1) : ipow(P_.N, static_cast<unsigned long>(n - 1));
        BigInt qmax = ipow(P_.N, static_cast<unsigned long>(n)) - 1;
        auto band = rationals_in_rect(where, qmin, qmax);
        GridSpec g = coarse_grid(n);
        std::vector<std::tuple<BigInt, BigInt>> cells;
        for (const auto& pt : band)
            for (const auto& i1 : covering_indices(g, pt.x1(), 1))
                for (const auto& i2 : covering_indices(g, pt.x2(), 2)) cells.emplace_back(i1, i2);
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        std::vector<LeadingRational> out;
        for (const auto& [i1, i2] : cells) {
            const CellQual& q = qualify(n, i1, i2);
            if (!q.slab) continue;
            for (const auto& w : q.witnesses) out.push_back({w, n, *q.line});
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end(),
                              [](const LeadingRational& a, const LeadingRational& b) {
                                  return a.point == b.point && a.level == b.level;
                              }),
                  out.end());
        return out;
    }

    // Closed-cell index range covering [lo, hi] on one axis, clamped.
    static std::pair<BigInt, BigInt> index_range(const GridSpec& g, const Rat& lo, const Rat& hi, int axis) {
        BigInt cnt = g.count(axis);
        BigInt a = rat_floor(lo * cnt);
        Rat alo = lo * cnt;
        if (Rat(a) == alo) a -= 1;  // closed cells share boundary lines
        BigInt b = rat_floor(hi * cnt);
        if (a < 0) a = 0;
        if (b >= cnt) b = cnt - 1;
        return {a, b};
    }

    static std::vector<BigInt> covering_indices(const GridSpec& g, const Rat& x, int axis) {
        BigInt cnt = g.count(axis);
        Rat scaled = x * cnt;
        BigInt i = rat_floor(scaled);
        if (i >= cnt) i = cnt - 1;
        std::vector<BigInt> out;
        if (Rat(i) == scaled && i > 0) out.push_back(i - 1);
        if (i >= 0) out.push_back(i);
        return out;
    }

  private:
    CellQual compute_qual(long n, const BigInt& i1, const BigInt& i2) const {
        GridSpec g = coarse_grid(n);
        RatRect cell = g.cell(i1, i2);
        CellQual out;
        out.line = hyperplane_of_cell(P_, cell, n);
        if (!out.line) return out;
        BigInt qmin = n == 1 ? BigInt(1) : ipow(P_.N, static_cast<unsigned long>(n - 1));
        BigInt qmax = ipow(P_.N, static_cast<unsigned long>(n)) - 1;
        auto band = rationals_in_rect(cell, qmin, qmax);
        RatVec2 delta = P_.delta_vec(n);
        for (const auto& pt : band) {
            RatRect nb{{pt.x1(), pt.x2()}, delta};
            if (rect_meets_survivors(n - 1, nb)) out.witnesses.push_back(pt);
        }
        if (!out.witnesses.empty())
            out.slab = SegmentNeighborhood{*out.line, cell, delta, static_cast<int>(n)};
        return out;
    }

    bool compute_survives(long n, const BigInt& i1, const BigInt& i2) const {
        GridSpec g = fine_grid(n);
        RatRect cell = g.cell(i1, i2);
        if (!rect_intersects(cell, window_)) return false;
        if (n >= 2) {
            GridSpec gp = fine_grid(n - 1);
            BigInt r1 = g.count(1) / gp.count(1), r2 = g.count(2) / gp.count(2);
            if (!cell_survives(n - 1, i1 / r1, i2 / r2)) return false;
        }
        // Level-n slabs reaching this cell live on coarse cells whose 5-fold
        // dilate meets it.
        GridSpec gc = coarse_grid(n);
        auto reach = [&](const Rat& lo, const Rat& hi, int axis) {
            BigInt cnt = gc.count(axis);
            BigInt a = rat_floor(lo * cnt) - 2;
            BigInt b = rat_floor(hi * cnt) + 2;
            if (a < 0) a = 0;
            if (b >= cnt) b = cnt - 1;
            return std::make_pair(a, b);
        };
        auto [a1, b1] = reach(cell.lo1(), cell.hi1(), 1);
        auto [a2, b2] = reach(cell.lo2(), cell.hi2(), 2);
        for (BigInt j1 = a1; j1 <= b1; ++j1)
            for (BigInt j2 = a2; j2 <= b2; ++j2) {
                const CellQual& q = qualify(n, j1, j2);
                if (q.slab && slab_intersects_rect(*q.slab, cell)) return false;
            }
        return true;
    }

    ConstructionParams P_;
    RatRect window_;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::tuple<long, BigInt, BigInt>, CellQual> qual_cache_;
    mutable std::map<std::tuple<long, BigInt, BigInt>, bool> survive_cache_;
};

// Eagerly materialized construction state: all removed slabs and leading
// rationals of levels <= level whose host cells meet the (padded) window.
struct LevelState {
    ConstructionParams params;
    RatRect window;
    long level = 0;
    std::vector<SegmentNeighborhood> removed;
    std::vector<LeadingRational> leading;
    std::shared_ptr<Construction> oracle;
};

inline LevelState make_level0(const ConstructionParams& P, const RatRect& window) {
    LevelState s;
    s.params = P;
    s.window = window;
    s.level = 0;
    s.oracle = std::make_shared<Construction>(P, window);
    return s;
}

inline LevelState build_level(const LevelState& prev) {
    long n = prev.level + 1;
    const ConstructionParams& P = prev.params;
    LevelState next = prev;
    next.level = n;

    GridSpec fine = next.oracle->fine_grid(n);
    // The window must hold at least one survivor-grid cell outright.
    for (int axis = 1; axis <= 2; ++axis) {
        Rat side = fine.side(axis);
        Rat lo = axis == 1 ? prev.window.lo1() : prev.window.lo2();
        Rat hi = axis == 1 ? prev.window.hi1() : prev.window.hi2();
        if (Rat(rat_ceil(lo / side)) * side + side > hi)
            throw ConstructionInfeasibleError("build_level: window smaller than one survivor cell");
    }

    // Window padded by one fine cell per side, clamped to the unit square.
    Rat p1 = fine.side(1), p2 = fine.side(2);
    Rat lo1 = std::max(Rat(0), Rat(prev.window.lo1() - p1)), hi1 = std::min(Rat(1), Rat(prev.window.hi1() + p1));
    Rat lo2 = std::max(Rat(0), Rat(prev.window.lo2() - p2)), hi2 = std::min(Rat(1), Rat(prev.window.hi2() + p2));
    RatRect padded{{(lo1 + hi1) / 2, (lo2 + hi2) / 2}, {(hi1 - lo1) / 2, (hi2 - lo2) / 2}};

    BigInt qmin = n == 1 ? BigInt(1) : ipow(P.N, static_cast<unsigned long>(n - 1));
    BigInt qmax = ipow(P.N, static_cast<unsigned long>(n)) - 1;
    auto band = rationals_in_rect(padded, qmin, qmax);
    GridSpec coarse = next.oracle->coarse_grid(n);
    std::vector<std::tuple<BigInt, BigInt>> cells;
    for (const auto& pt : band)
        for (const auto& i1 : Construction::covering_indices(coarse, pt.x1(), 1))
            for (const auto& i2 : Construction::covering_indices(coarse, pt.x2(), 2))
                cells.emplace_back(i1, i2);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    std::vector<LeadingRational> fresh;
    for (const auto& [i1, i2] : cells) {
        const auto& q = next.oracle->qualify(n, i1, i2);
        if (!q.slab) continue;
        next.removed.push_back(*q.slab);
        for (const auto& w : q.witnesses) fresh.push_back({w, n, *q.line});
    }
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end(),
                            [](const LeadingRational& a, const LeadingRational& b) {
                                return a.point == b.point && a.level == b.level;
                            }),
                fresh.end());
    next.leading.insert(next.leading.end(), fresh.begin(), fresh.end());
    return next;
}

inline bool survives(const LevelState& state, const RatVec2& p) {
    if (!rect_chebyshev_contains(state.window, p))
        throw OutOfWindowError("survives: point outside window");
    return state.oracle->survives_point(state.level, p);
}

// No surviving deepest-grid cell may touch the avoidance neighbourhood
// Delta(pt, c(N) q^{-1-tau}).
inline bool avoidance_check(const LevelState& state, const RatPoint& pt) {
    const ConstructionParams& P = state.params;
    Real hw1 = Rat(P.cN(1)) * Real::pow(pt.q, -(1 + P.tau(1)));
    Real hw2 = Rat(P.cN(2)) * Real::pow(pt.q, -(1 + P.tau(2)));
    Rat up1 = hw1.enclosure(64).second, up2 = hw2.enclosure(64).second;
    GridSpec g = state.oracle->fine_grid(state.level);
    auto [a1, b1] = Construction::index_range(g, pt.x1() - up1, pt.x1() + up1, 1);
    auto [a2, b2] = Construction::index_range(g, pt.x2() - up2, pt.x2() + up2, 2);
    for (BigInt i1 = a1; i1 <= b1; ++i1)
        for (BigInt i2 = a2; i2 <= b2; ++i2) {
            RatRect cell = g.cell(i1, i2);
            // exact closed intersection with the (possibly irrational) rect
            if (Real(cell.lo1() - pt.x1()) > hw1 || Real(pt.x1() - cell.hi1()) > hw1) continue;
            if (Real(cell.lo2() - pt.x2()) > hw2 || Real(pt.x2() - cell.hi2()) > hw2) continue;
            if (state.oracle->cell_survives(state.level, i1, i2)) return false;
        }
    return true;
}

inline std::vector<LeadingRational> leading_rationals(const LevelState& state) {
    auto out = state.leading;
    std::sort(out.begin(), out.end());
    return out;
}

// c1 = (1/4) t^{-3} N^{-3} N^{-2(2+sigma)}; needs integral exponents.
inline Rat nesting_constant(const ConstructionParams& P) {
    Rat s = P.weights.sigma();
    Real c = Rat(1, 4) * Real::pow(P.t, Rat(-3)) * Real::pow(P.N, Rat(-3)) * Real::pow(P.N, -2 * (2 + s));
    if (!c.is_rational()) throw ConfigError("nesting constant irrational for these parameters");
    return c.rational_part();
}

// A surviving fine-grid cell of level n-1 inside the shrink of a leading
// rational, with area at least c1 times the shrink's.
inline RatRect nested_survivor_for(const LevelState& state, const LeadingRational& lr) {
    const ConstructionParams& P = state.params;
    long n = lr.level;
    GridSpec g = state.oracle->fine_grid(n - 1);
    Real hw1 = P.shrink_halfwidth(lr.point.q, 1), hw2 = P.shrink_halfwidth(lr.point.q, 2);
    auto bounds = [&](const Rat& x, const Real& hw, int axis) {
        BigInt cnt = g.count(axis);
        BigInt lo = real_ceil((Real(x) - hw) * Rat(cnt));
        BigInt hi = real_floor((Real(x) + hw) * Rat(cnt)) - 1;
        if (lo < 0) lo = 0;
        if (hi >= cnt) hi = cnt - 1;
        return std::make_pair(lo, hi);
    };
    auto [a1, b1] = bounds(lr.point.x1(), hw1, 1);
    auto [a2, b2] = bounds(lr.point.x2(), hw2, 2);
    Rat cell_area = g.side(1) * g.side(2);
    Real shrink_area = Rat(4) * hw1 * hw2;
    for (BigInt i1 = a1; i1 <= b1; ++i1)
        for (BigInt i2 = a2; i2 <= b2; ++i2) {
            RatRect cell = g.cell(i1, i2);
            if (!rect_contains_rect(state.window, cell)) continue;
            if (!state.oracle->cell_survives(n - 1, i1, i2)) continue;
            if (Real(cell_area) < Real(nesting_constant(P)) * shrink_area)
                throw VerificationError("nested_survivor_for: area below the nesting constant");
            return cell;
        }
    throw WindowTruncationError("nested_survivor_for: no surviving cell inside the shrink within window");
}

}  // namespace badapprox
