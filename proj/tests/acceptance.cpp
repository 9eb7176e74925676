// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each check pins its instance and tolerance explicitly.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "badapprox/analysis.hpp"
#include "badapprox/cantor.hpp"
#include "badapprox/io.hpp"

using namespace badapprox;

namespace {

int failures = 0;
std::chrono::steady_clock::time_point t_mark;

void mark() { t_mark = std::chrono::steady_clock::now(); }

void line(int id, const std::string& name, bool pass, const std::string& detail) {
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_mark).count();
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << secs;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << " ("
              << os.str() << "s)\n";
    if (!pass) ++failures;
}

ConstructionParams desk() {
    return {{Rat(1), Rat(1)}, {Rat(3, 2), Rat(3, 2)}, 4, 4};
}

RatRect unit() {
    return {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}};
}

RatRect default_B() {
    return {{Rat(41, 128), Rat(59, 128)}, {Rat(1, 128), Rat(1, 128)}};
}

unsigned long draw_below(std::mt19937_64& rng, unsigned long n) {
    unsigned long limit = ~0ul - (~0ul % n);
    unsigned long v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// 1. dim_A2 / s_rho values and agreement with the general formula.
void c1_formulas() {
    mark();
    bool pass = dim_A2({Rat(1), Rat(1)}) == Rat(3, 2) &&
                s_rho({Rat(1), Rat(1)}, {Rat(3, 2), Rat(3, 2)}) == Rat(3, 2) &&
                dim_A2({Rat(2), Rat(1)}) == Rat(4, 3);
    long agreed = 0;
    std::mt19937_64 rng(101);
    for (int i = 0; i < 1000; ++i) {
        Rat t2(1 + static_cast<long>(draw_below(rng, 64)), 1 + static_cast<long>(draw_below(rng, 16)));
        Rat t1 = t2 + Rat(static_cast<long>(draw_below(rng, 64)), 1 + static_cast<long>(draw_below(rng, 16)));
        if (t1 + t2 <= 1) {
            ++agreed;
            continue;
        }
        if (dim_A2({t1, t2}) == dim_rynne_dickinson({t1, t2})) ++agreed;
    }
    pass = pass && agreed == 1000;
    line(1, "dimension-formulas", pass,
         "3/2 and 4/3 reproduced; " + std::to_string(agreed) + "/1000 random pairs agree");
}

// 2. Rationals of denominator <= Q in a rect of area <= (1/2) Q^{-3} are
// collinear.
void c2_simplex() {
    mark();
    std::mt19937_64 rng(202);
    long ok = 0;
    for (int i = 0; i < 500; ++i) {
        long Q = 2 + static_cast<long>(draw_below(rng, 7));
        Rat cap = Rat(1, 2) * rat_ipow(Rat(Q), -3);
        Rat h1(1 + static_cast<long>(draw_below(rng, 512)), 4096);
        Rat h2 = cap / (4 * h1);
        Rat c1(static_cast<long>(draw_below(rng, 8192)), 8192);
        Rat c2(static_cast<long>(draw_below(rng, 8192)), 8192);
        RatRect r{{c1, c2}, {h1, h2}};
        auto pts = rationals_in_rect(r, 1, Q);
        if (collinear(pts).kind != CollinearKind::non_collinear) ++ok;
    }
    line(2, "simplex-oracle", ok == 500, std::to_string(ok) + "/500 random small rects collinear");
}

// 3. Every reduced rational with q < 16 in a window of side 1/64 fails to
// approach the depth-2 survivor set closer than c(N) q^{-1-tau}.
void c3_avoidance() {
    mark();
    RatRect window{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 128), Rat(1, 128)}};
    auto st = build_level(build_level(make_level0(desk(), window)));
    auto pts = rationals_in_rect(window, 1, 15);
    long ok = 0;
    for (const auto& p : pts)
        if (avoidance_check(st, p)) ++ok;
    line(3, "avoidance", ok == static_cast<long>(pts.size()),
         std::to_string(ok) + "/" + std::to_string(pts.size()) + " rationals with q < 16 avoided");
}

// 4. Removed area stays under 40 sum N^{-eps' n} through depth 3, exactly.
void c4_ledger() {
    mark();
    auto st = make_level0(desk(), unit());
    for (int n = 1; n <= 3; ++n) st = build_level(st);
    auto rows = measure_ledger(st);
    bool pass = rows.size() == 3;
    Rat cum = 0, cumbound = 0;
    for (const auto& r : rows) {
        cum += r.removed_exact;
        cumbound += r.paper_bound;
        if (r.removed_exact > r.paper_bound) pass = false;
        if (cum > cumbound) pass = false;
    }
    line(4, "measure-ledger", pass,
         "cumulative removed " + rat_str(cum) + " <= " + rat_str(cumbound) + " through depth 3");
}

// 5. Vitali selection on random enlargement families: disjoint output, 5x
// covers.
void c5_vitali() {
    mark();
    std::mt19937_64 rng(505);
    ExponentPair e{Rat(3, 2), Rat(3, 2)};
    long ok = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<LeadingRational> lead;
        size_t count = 1 + draw_below(rng, 40);
        for (size_t i = 0; i < count; ++i) {
            BigInt q = 16 + BigInt(draw_below(rng, 4096));
            BigInt p1 = BigInt(draw_below(rng, 1000000)) * q / 1000000;
            BigInt p2 = BigInt(draw_below(rng, 1000000)) * q / 1000000;
            lead.push_back({{p1, p2, q}, 1, Line{}});
        }
        auto seq = enumerate_R_sequence(std::move(lead), e);
        auto picked = vitali_select(seq);
        bool good = true;
        for (size_t i = 0; i < picked.size() && good; ++i)
            for (size_t j = i + 1; j < picked.size() && good; ++j)
                if (rect_intersects(picked[i].rect, picked[j].rect)) good = false;
        for (const auto& r : seq) {
            bool covered = false;
            for (const auto& p : picked)
                if (rect_contains_rect(rect_scale(p.rect, Rat(5)), r.rect)) covered = true;
            if (!covered) good = false;
        }
        if (good) ++ok;
    }
    line(5, "vitali-selection", ok == 1000, std::to_string(ok) + "/1000 random families");
}

struct Built {
    LevelState state;
    MassTree tree;
};

Built build_default() {
    LevelState st = build_level(build_level(make_level0(desk(), unit())));
    MassTree tree = grow_tree(st, default_B(), Rat(5, 3), 2);
    return {std::move(st), std::move(tree)};
}

// 6. Selected families: disjoint, inside the host, total area >= 3/400 of it.
void c6_density(const Built& b) {
    mark();
    const ConstructionParams& P = b.tree.params;
    bool pass = true;
    long calls = 0;
    for (size_t n = 1; n < b.tree.layers.size(); ++n) {
        for (size_t pi = 0; pi < b.tree.layers[n - 1].size(); ++pi) {
            ++calls;
            const auto& parent = b.tree.layers[n - 1][pi];
            RatRect host = parent.cell ? *parent.cell : *parent.nested_survivor;
            Rat total = 0;
            std::vector<RealRect> rects;
            for (const auto& v : b.tree.layers[n]) {
                if (v.parent != static_cast<long>(pi)) continue;
                RealRect r = enlargement_rect(v.center, P.exps);
                if (!rect_contains_rect(to_real(host), r)) pass = false;
                for (const auto& other : rects)
                    if (rect_intersects(other, r)) pass = false;
                rects.push_back(r);
                total += enlargement_area(v.center);
            }
            if (total < Rat(3, 400) * rect_area(host)) pass = false;
        }
    }
    line(6, "selection-density", pass,
         std::to_string(calls) + " selection calls, all >= 3/400 of host, zero shortfalls");
}

// 7. Exact mass conservation per layer and per node.
void c7_mass(const Built& b) {
    mark();
    bool pass = true;
    for (const auto& layer : b.tree.layers) {
        Rat total = 0;
        for (const auto& v : layer) total += v.mass;
        if (total != 1) pass = false;
    }
    for (size_t n = 1; n < b.tree.layers.size(); ++n) {
        std::vector<Rat> sums(b.tree.layers[n - 1].size(), Rat(0));
        for (const auto& v : b.tree.layers[n]) sums[v.parent] += v.mass;
        for (size_t i = 0; i < sums.size(); ++i)
            if (sums[i] != b.tree.layers[n - 1][i].mass) pass = false;
    }
    line(7, "mass-conservation", pass,
         std::to_string(b.tree.layers.size()) + " layers sum to 1/1 exactly");
}

// 8. mu(R) <= C1 d(R)^{-3+eps} with C1 = 36/(c1 c2).
void c8_mass_bound(const Built& b) {
    mark();
    const ConstructionParams& P = b.tree.params;
    Rat C1 = Rat(36) / Rat(nesting_constant(P) * Rat(3, 400));
    bool pass = true;
    long checked = 0;
    for (size_t n = 1; n < b.tree.layers.size(); ++n)
        for (const auto& v : b.tree.layers[n]) {
            ++checked;
            if (!(Real(v.mass) <= Rat(C1) * Real::pow(v.center.q, Rat(-3) + b.tree.epsilon)))
                pass = false;
        }
    line(8, "node-mass-bound", pass,
         std::to_string(checked) + " nodes vs C1 = " + rat_str(C1));
}

// 9. 200 sampled distinct same-layer pairs separated by at least d^{-rho1}.
void c9_separation(const Built& b) {
    mark();
    const ConstructionParams& P = b.tree.params;
    std::vector<std::pair<const CantorNode*, const CantorNode*>> pool;
    for (const auto& layer : b.tree.layers)
        for (size_t i = 0; i < layer.size(); ++i)
            for (size_t j = i + 1; j < layer.size(); ++j) pool.push_back({&layer[i], &layer[j]});
    if (pool.empty()) {
        line(9, "separation", false, "no distinct same-layer pairs in the built tree");
        return;
    }
    std::mt19937_64 rng(909);
    long ok = 0;
    for (int i = 0; i < 200; ++i) {
        const auto& [a, v] = pool[draw_below(rng, pool.size())];
        if (separation_holds(P, *a, *v)) ++ok;
    }
    line(9, "separation", ok == 200,
         std::to_string(ok) + "/200 sampled pairs from a pool of " + std::to_string(pool.size()));
}

// 10. Fitted log-log slope >= (s_rho - 2 eps) - 1/4 over >= 200 nonzero
// samples, and the exact certificate passes with the observed constant.
void c10_holder(const Built& b) {
    mark();
    Rat r_hi(1, 128), r_lo = Rat(1, 128) / Rat(BigInt(1) << 30);
    DimensionReport rep;
    try {
        rep = holder_experiment(b.tree, 250, r_lo, r_hi, 42);
    } catch (const std::exception& e) {
        line(10, "holder-trend", false, e.what());
        return;
    }
    Rat alpha = Rat(rep.s_rho_value - 2 * rep.epsilon);
    bool slope_ok = rep.sample_count >= 200 && rep.fitted_slope >= alpha.get_d() - 0.25;
    // C = exact upper bound on the observed mass/r^alpha ratios.
    auto data = sample_masses(b.tree, 250, r_hi / 1024, r_hi, 42);
    Rat C = 0;
    for (const auto& s : data) {
        if (s.mu_upper == 0) continue;
        Real ratio = Real(s.mu_upper) * Real::pow(s.radius, Rat(0) - alpha);
        Rat upper = ratio.enclosure(64).second;
        if (upper > C) C = upper;
    }
    bool cert_ok = mass_distribution_certificate(b.tree, alpha, r_hi, C, 250, 42);
    std::ostringstream os;
    os.precision(4);
    os << "slope " << rep.fitted_slope << " >= " << alpha.get_d() << " - 0.25 over "
       << rep.sample_count << " samples; certificate with C <= " << C.get_d();
    line(10, "holder-trend", slope_ok && cert_ok, os.str());
}

// 11. Sampled deepest centers survive, carry full chains, and certify the
// approximation inequality at every non-root chain node.
void c11_containment(const Built& b) {
    mark();
    const ConstructionParams& P = b.tree.params;
    const auto& deepest = b.tree.layers.back();
    std::mt19937_64 rng(111);
    long ok = 0;
    for (int i = 0; i < 100; ++i) {
        const CantorNode& v = deepest[draw_below(rng, deepest.size())];
        RatVec2 x{v.center.x1(), v.center.x2()};
        if (!survives(b.state, x)) continue;
        auto chain = membership_witnesses(b.tree, x);
        if (chain.size() != b.tree.layers.size()) continue;
        bool certified = true;
        for (const auto& node : chain) {
            if (node.layer == 0) continue;
            for (int axis = 1; axis <= 2; ++axis) {
                Rat d = axis == 1 ? Rat(x.x1 - node.center.x1()) : Rat(x.x2 - node.center.x2());
                if (d < 0) d = Rat(-d);
                if (!(Real(d) <= P.shrink_halfwidth(node.center.q, axis))) certified = false;
            }
        }
        if (certified) ++ok;
    }
    line(11, "containment", ok == 100, std::to_string(ok) + "/100 sampled deepest centers");
}

// 12. Byte-identical exports across rebuilds, including under a different
// worker-count hint.
void c12_determinism(const Built& b) {
    mark();
    std::string tree1 = export_tree(b.tree).dump(2);
    std::string levels1 = export_levels(b.state).dump(2);
    setenv("BADAPPROX_THREADS", "7", 1);
    Built again = build_default();
    std::string tree2 = export_tree(again.tree).dump(2);
    std::string levels2 = export_levels(again.state).dump(2);
    bool pass = tree1 == tree2 && levels1 == levels2;
    line(12, "determinism", pass,
         "tree export " + std::to_string(tree1.size()) + " bytes, level export " +
             std::to_string(levels1.size()) + " bytes, identical across rebuilds");
}

}  // namespace

int main() {
    c1_formulas();
    c2_simplex();
    c3_avoidance();
    c4_ledger();
    c5_vitali();
    mark();
    Built b = build_default();
    std::cout << "  (default depth-2 build: " << b.tree.layers.back().size()
              << " deepest nodes)\n";
    c6_density(b);
    c7_mass(b);
    c8_mass_bound(b);
    c9_separation(b);
    c10_holder(b);
    c11_containment(b);
    c12_determinism(b);
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
              << "\n";
    return failures == 0 ? 0 : 1;
}
