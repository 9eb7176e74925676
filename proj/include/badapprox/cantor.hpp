#pragma once

// The mass-carrying Cantor tree: nested layers of shrink rectangles around
// leading rationals, selected by t_select inside each parent's nested
// survivor cell, with exact rational mass split proportionally to area.

#include "badapprox/construction.hpp"
#include "badapprox/covering.hpp"
#include "badapprox/errors.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace badapprox {

struct CantorNode {
    RatPoint center;  // for the root: the cell center
    long layer = 0;
    Rat mass;
    long parent = -1;                        // index within the previous layer
    std::optional<RatRect> cell;             // root only: shrink = enlargement = cell
    std::optional<RatRect> nested_survivor;  // host used to select this node's children
};

inline RealRect node_shrink(const ConstructionParams& P, const CantorNode& v) {
    if (v.cell) return to_real(*v.cell);
    return RealRect{{Real(v.center.x1()), Real(v.center.x2())},
                    {P.shrink_halfwidth(v.center.q, 1), P.shrink_halfwidth(v.center.q, 2)}};
}

inline RealRect node_enlargement(const ConstructionParams& P, const CantorNode& v) {
    if (v.cell) return to_real(*v.cell);
    return RealRect{{Real(v.center.x1()), Real(v.center.x2())},
                    {P.enlarge_halfwidth(v.center.q, 1), P.enlarge_halfwidth(v.center.q, 2)}};
}

struct MassTree {
    ConstructionParams params;
    Rat epsilon;
    RatRect B;                                // the region the root was chosen in
    std::vector<std::vector<CantorNode>> layers;  // E_0 .. E_n
    std::vector<BigInt> G_sequence;           // denominator thresholds per layer (G_1, G_2, ...)
};

// First surviving level-1 cell (row-major) fully inside B, carrying mass 1.
inline CantorNode init_root(const LevelState& state, const RatRect& B) {
    GridSpec g = state.oracle->fine_grid(1);
    BigInt a1 = rat_ceil(B.lo1() * g.count(1)), b1 = rat_floor(B.hi1() * g.count(1)) - 1;
    BigInt a2 = rat_ceil(B.lo2() * g.count(2)), b2 = rat_floor(B.hi2() * g.count(2)) - 1;
    for (BigInt i1 = a1; i1 <= b1; ++i1)
        for (BigInt i2 = a2; i2 <= b2; ++i2)
            if (state.oracle->cell_survives(1, i1, i2)) {
                RatRect cell = g.cell(i1, i2);
                CantorNode root;
                Rat cx1 = cell.center.x1, cx2 = cell.center.x2;
                BigInt q = lcm(BigInt(cx1.get_den()), BigInt(cx2.get_den()));
                root.center = RatPoint{BigInt(cx1.get_num() * (q / cx1.get_den())),
                                       BigInt(cx2.get_num() * (q / cx2.get_den())), q};
                root.layer = 0;
                root.mass = 1;
                root.cell = cell;
                return root;
            }
    throw ConstructionInfeasibleError("init_root: no surviving cell inside B");
}

// Smallest denominator q with q^{rho2} > 3 * qt^{1+tau1}  (exact).
inline BigInt min_q_gap_condition(const ConstructionParams& P, const BigInt& qt) {
    Real rhs = Rat(3) * Real::pow(qt, 1 + P.weights.tau1);
    BigInt lo = 1, hi = 2;
    while (!(Real::pow(hi, P.exps.rho2) > rhs)) hi *= 2;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (Real::pow(mid, P.exps.rho2) > rhs)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

// Smallest denominator q with q^epsilon >= mass / area(shrink)  (exact).
inline BigInt min_q_density_condition(const Rat& epsilon, const Rat& ratio) {
    if (ratio <= 1) return 1;
    BigInt lo = 1, hi = 2;
    while (!(Real::pow(hi, epsilon) >= Real(ratio))) hi *= 2;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (Real::pow(mid, epsilon) >= Real(ratio))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

// Denominator threshold carried by G_n: every candidate with q at or above it
// satisfies both selection conditions against every layer-(n-1) node.
inline BigInt g_threshold(const MassTree& tree, long n) {
    if (n == 1) return 1;
    const ConstructionParams& P = tree.params;
    BigInt q = 1;
    for (const auto& v : tree.layers[n - 1]) {
        if (v.cell) continue;  // the root never enters the conditions
        q = std::max(q, min_q_gap_condition(P, v.center.q));
        Real area = Rat(4) * P.shrink_halfwidth(v.center.q, 1) * P.shrink_halfwidth(v.center.q, 2);
        if (!area.is_rational()) throw ConfigError("g_threshold: irrational shrink area");
        q = std::max(q, min_q_density_condition(tree.epsilon, Rat(v.mass / area.rational_part())));
    }
    return q;
}

// Smallest sequence index G > previous G with both conditions holding for
// every element from G on.
inline long choose_G(const MassTree& tree, long n, const std::vector<EnlargedRect>& seq) {
    if (n == 1) return 1;
    BigInt qmin = g_threshold(tree, n);
    for (const auto& r : seq)
        if (r.center.q >= qmin) return r.seq_index;
    throw DepthExhaustedError("choose_G: sequence exhausted before selection conditions hold");
}

// One expansion step: children of every layer-(n-1) node via t_select on its
// nested survivor, masses split proportionally to enlargement area.
inline void extend_tree(MassTree& tree, const LevelState& state, const std::vector<EnlargedRect>& seq) {
    long n = static_cast<long>(tree.layers.size());
    long G = choose_G(tree, n, seq);
    std::vector<CantorNode> layer;
    auto& parents = tree.layers[n - 1];
    for (size_t pi = 0; pi < parents.size(); ++pi) {
        CantorNode& parent = parents[pi];
        RatRect host = parent.cell ? *parent.cell : *parent.nested_survivor;
        std::vector<EnlargedRect> picked;
        try {
            picked = t_select(state, host, G, seq);
        } catch (const DensityShortfallError& e) {
            throw DensityShortfallError(
                "extend_tree: layer " + std::to_string(n) + ", parent " + std::to_string(pi) + ": " + e.what(),
                e.achieved);
        }
        Rat lambda_sum = 0;
        for (const auto& r : picked) lambda_sum += enlargement_area(r.center);
        for (const auto& r : picked) {
            CantorNode child;
            child.center = r.center;
            child.layer = n;
            child.mass = Rat(parent.mass * enlargement_area(r.center) / lambda_sum);
            child.parent = static_cast<long>(pi);
            layer.push_back(child);
        }
    }
    std::sort(layer.begin(), layer.end(), [](const CantorNode& a, const CantorNode& b) {
        return std::tie(a.center, a.parent) < std::tie(b.center, b.parent);
    });
    tree.G_sequence.push_back(g_threshold(tree, n));
    tree.layers.push_back(std::move(layer));
}

// Is pt a leading rational of level n, i.e. a slab witness of its coarse cell?
inline bool is_leading(const Construction& C, const RatPoint& pt, long n) {
    GridSpec g = C.coarse_grid(n);
    for (const auto& i1 : Construction::covering_indices(g, pt.x1(), 1))
        for (const auto& i2 : Construction::covering_indices(g, pt.x2(), 2)) {
            const auto& q = C.qualify(n, i1, i2);
            if (q.slab && std::binary_search(q.witnesses.begin(), q.witnesses.end(), pt)) return true;
        }
    return false;
}

// Exact comparison of a positive rational x against c * q^e (e rational).
inline int cmp_rat_vs_coeff_pow(const Rat& x, const Rat& c, const BigInt& q, const Rat& e) {
    // x ? c q^{p/r}  <=>  (x/c)^r ? q^p
    Rat lhs = rat_ipow(x / c, e.get_den().get_ui());
    Rat rhs = rat_ipow(Rat(q), e.get_num().get_si());
    return lhs < rhs ? -1 : lhs == rhs ? 0 : 1;
}

// Smallest q whose enlargement fits inside a host of these halfwidths.
inline BigInt min_q_fit(const ConstructionParams& P, const RatRect& host) {
    auto fits = [&](const BigInt& q) {
        return cmp_rat_vs_coeff_pow(host.halfwidth.x1, Rat(3), q, -P.exps.rho1) >= 0 &&
               cmp_rat_vs_coeff_pow(host.halfwidth.x2, Rat(3), q, -P.exps.rho2) >= 0;
    };
    BigInt lo = 1, hi = 2;
    while (!fits(hi)) hi *= 2;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (fits(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

// Candidate children for one host: leading rationals with denominators in
// [qa, qb] whose enlargement lies inside the host.
inline std::vector<RatPoint> host_candidates(const Construction& C, const RatRect& host, const BigInt& qa,
                                             const BigInt& qb) {
    const ConstructionParams& P = C.params();
    std::vector<RatPoint> out;
    auto raw = rationals_in_rect(host, qa, qb);
    for (const auto& pt : raw) {
        bool inside = true;
        for (int axis = 1; axis <= 2 && inside; ++axis) {
            Rat x = axis == 1 ? pt.x1() : pt.x2();
            Rat lo = axis == 1 ? host.lo1() : host.lo2();
            Rat hi = axis == 1 ? host.hi1() : host.hi2();
            if (x <= lo || hi <= x ||
                cmp_rat_vs_coeff_pow(x - lo, Rat(3), pt.q, -P.rho(axis)) < 0 ||
                cmp_rat_vs_coeff_pow(hi - x, Rat(3), pt.q, -P.rho(axis)) < 0)
                inside = false;
        }
        if (!inside) continue;
        if (is_leading(C, pt, P.level_of_denominator(pt.q))) out.push_back(pt);
    }
    return out;
}

// Full tree construction: per layer, compute the selection threshold, then
// enumerate candidates host by host in expanding denominator chunks until
// t_select reaches its density target everywhere.
inline MassTree grow_tree(const LevelState& state, const RatRect& B, const Rat& epsilon, long depth) {
    const ConstructionParams& P = state.params;
    MassTree tree{P, epsilon, B, {}, {}};
    tree.layers.push_back({init_root(state, B)});
    for (long n = 1; n <= depth; ++n) {
        auto& parents = tree.layers[n - 1];
        for (auto& v : parents)
            if (!v.cell && !v.nested_survivor) {
                LeadingRational lr{v.center, P.level_of_denominator(v.center.q), Line{}};
                v.nested_survivor = nested_survivor_for(state, lr);
            }
        BigInt q_start = g_threshold(tree, n);
        for (const auto& v : parents) {
            RatRect host = v.cell ? *v.cell : *v.nested_survivor;
            q_start = std::max(q_start, min_q_fit(P, host));
        }
        std::vector<EnlargedRect> seq;
        std::vector<RatPoint> centers;
        BigInt q_hi = q_start - 1;
        const BigInt q_cap = q_start * 4;
        while (true) {
            BigInt q_lo = q_hi + 1;
            q_hi = q_lo + std::max(BigInt(1024), BigInt(q_start / 512));
            if (q_hi > q_cap) q_hi = q_cap;
            for (const auto& v : parents) {
                RatRect host = v.cell ? *v.cell : *v.nested_survivor;
                auto cs = host_candidates(*state.oracle, host, q_lo, q_hi);
                centers.insert(centers.end(), cs.begin(), cs.end());
            }
            std::sort(centers.begin(), centers.end());
            centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
            std::vector<LeadingRational> lead;
            lead.reserve(centers.size());
            for (const auto& c : centers)
                lead.push_back({c, P.level_of_denominator(c.q), Line{}});
            seq = enumerate_R_sequence(lead, P.exps);
            try {
                extend_tree(tree, state, seq);
                break;
            } catch (const DensityShortfallError&) {
                if (q_hi >= q_cap) throw;
            } catch (const DepthExhaustedError&) {
                if (q_hi >= q_cap) throw;
            }
        }
    }
    return tree;
}

// Smallest sup-norm ball radius whose ball can intersect both shrinks: half
// the larger per-axis gap between the two rectangles (zero if they touch).
inline Real separation_min_radius(const ConstructionParams& P, const CantorNode& a,
                                  const CantorNode& b) {
    RealRect ra = node_shrink(P, a), rb = node_shrink(P, b);
    Real gap(Rat(0));
    for (int axis = 1; axis <= 2; ++axis) {
        Real alo = axis == 1 ? ra.lo1() : ra.lo2(), ahi = axis == 1 ? ra.hi1() : ra.hi2();
        Real blo = axis == 1 ? rb.lo1() : rb.lo2(), bhi = axis == 1 ? rb.hi1() : rb.hi2();
        Real g1 = alo - bhi, g2 = blo - ahi;
        if (g1 > gap) gap = g1;
        if (g2 > gap) gap = g2;
    }
    return Rat(1, 2) * gap;
}

// Distinct same-layer nodes can only be met by a common ball of radius at
// least d^{-rho1} of the smaller-denominator member.
inline bool separation_holds(const ConstructionParams& P, const CantorNode& a,
                             const CantorNode& b) {
    const BigInt& d = a.center.q <= b.center.q ? a.center.q : b.center.q;
    return separation_min_radius(P, a, b) >= Real::pow(d, -P.exps.rho1);
}

// Upper evaluation of mu(F): total mass of deepest-layer shrinks meeting F.
inline Rat mass_of_rect(const MassTree& tree, const RatRect& F) {
    const auto& deepest = tree.layers.back();
    RealRect rf = to_real(F);
    Rat total = 0;
    for (const auto& v : deepest)
        if (rect_intersects(node_shrink(tree.params, v), rf)) total += v.mass;
    return total;
}

// Chain of nodes whose shrinks contain x, from the root down; stops at the
// first layer with no containing node.
inline std::vector<CantorNode> membership_witnesses(const MassTree& tree, const RatVec2& x) {
    std::vector<CantorNode> chain;
    Vec2<Real> rx{Real(x.x1), Real(x.x2)};
    for (const auto& layer : tree.layers) {
        bool found = false;
        for (const auto& v : layer) {
            if (rect_chebyshev_contains(node_shrink(tree.params, v), rx)) {
                chain.push_back(v);
                found = true;
                break;
            }
        }
        if (!found) break;
    }
    return chain;
}

}  // namespace badapprox
