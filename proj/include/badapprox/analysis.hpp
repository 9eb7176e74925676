#pragma once
// Dimension formulas and empirical regularity checks for the built objects.
//
// The closed-form dimension values are exact rationals. The Holder-slope
// experiment summarizes exact mass evaluations with a floating-point
// least-squares fit; every inequality certificate stays in exact arithmetic.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "badapprox/cantor.hpp"
#include "badapprox/construction.hpp"
#include "badapprox/errors.hpp"
#include "badapprox/params.hpp"

namespace badapprox {

// Target dimension for weighted approximation in the plane.
inline Rat dim_A2(const WeightPair& w) {
    w.validate();
    Rat a = (3 + w.tau1 - w.tau2) / (1 + w.tau1);
    Rat b = Rat(3) / (1 + w.tau2);
    return std::min(a, b);
}

// General-dimension formula; taus must be nonincreasing, positive, sum > 1.
inline Rat dim_rynne_dickinson(const std::vector<Rat>& taus) {
    const size_t m = taus.size();
    if (m == 0) throw ConfigError("dim_rynne_dickinson: empty weight list");
    Rat sum = 0;
    for (size_t i = 0; i < m; ++i) {
        if (taus[i] <= 0) throw ConfigError("dim_rynne_dickinson: weights must be positive");
        if (i > 0 && taus[i] > taus[i - 1])
            throw ConfigError("dim_rynne_dickinson: weights must be nonincreasing");
        sum += taus[i];
    }
    if (sum <= 1) throw ConfigError("dim_rynne_dickinson: weight sum must exceed 1");
    Rat best;
    bool first = true;
    for (size_t i = 0; i < m; ++i) {
        Rat num = Rat(static_cast<long>(m) + 1);
        for (size_t k = i; k < m; ++k) num += taus[i] - taus[k];
        Rat v = num / (1 + taus[i]);
        if (first || v < best) {
            best = v;
            first = false;
        }
    }
    return best;
}

// Construction-dependent variant: the selection exponents enter through a
// third term that caps the achievable local decay.
inline Rat s_rho(const WeightPair& w, const ExponentPair& e) {
    Rat a = (3 + w.tau1 - w.tau2) / (1 + w.tau1);
    Rat b = Rat(3) / (1 + w.tau2);
    Rat c = 1 + e.rho2 / (1 + w.tau2);
    return std::min({a, b, c});
}

struct DimensionReport {
    Rat s;
    Rat s_rho_value;
    Rat epsilon;
    double fitted_slope = 0.0;
    long sample_count = 0;
    std::pair<double, double> r_range{0.0, 0.0};
};

struct MassSample {
    long sample_id;
    RatVec2 center;
    Rat radius;
    Rat mu_upper;
};

namespace detail {

// Deterministic uniform draw in [0, n). std::uniform_int_distribution is
// implementation-defined, so exports would differ across standard libraries.
inline unsigned long draw_below(std::mt19937_64& rng, unsigned long n) {
    if (n == 0) throw std::logic_error("draw_below: empty range");
    unsigned long limit = ~0ul - (~0ul % n);
    unsigned long v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// Log-uniform rational radius in [r_lo, r_hi], quantized to 2^-24 steps in
// log-space so the result stays an exact rational.
inline Rat draw_radius(std::mt19937_64& rng, const Rat& r_lo, const Rat& r_hi) {
    double llo = std::log(r_lo.get_d());
    double lhi = std::log(r_hi.get_d());
    unsigned long grid = 1ul << 24;
    double u = static_cast<double>(draw_below(rng, grid)) / static_cast<double>(grid);
    double r = std::exp(llo + u * (lhi - llo));
    // Snap to a dyadic rational inside [r_lo, r_hi].
    Rat snapped(static_cast<long>(std::ldexp(r, 40)), 1);
    snapped /= Rat(BigInt(1) << 40);
    if (snapped < r_lo) snapped = r_lo;
    if (snapped > r_hi) snapped = r_hi;
    return snapped;
}

}  // namespace detail

// Draw balls around deepest-layer node centers and record exact upper mass
// evaluations. Centers are taken from the support because the measure is
// zero elsewhere and zero-mass samples carry no slope information.
inline std::vector<MassSample> sample_masses(const MassTree& tree, long samples, const Rat& r_lo,
                                             const Rat& r_hi, long seed) {
    if (tree.layers.empty() || tree.layers.back().empty())
        throw PreconditionError("sample_masses: empty tree");
    if (!(r_lo > 0 && r_lo < r_hi)) throw ConfigError("sample_masses: need 0 < r_lo < r_hi");
    const auto& deepest = tree.layers.back();
    std::mt19937_64 rng(static_cast<unsigned long>(seed));
    std::vector<MassSample> out;
    out.reserve(samples);
    for (long i = 0; i < samples; ++i) {
        const CantorNode& v = deepest[detail::draw_below(rng, deepest.size())];
        RatVec2 x{v.center.x1(), v.center.x2()};
        Rat r = detail::draw_radius(rng, r_lo, r_hi);
        RatRect ball{x, {r, r}};
        out.push_back({i, x, r, mass_of_rect(tree, ball)});
    }
    return out;
}

// Least-squares slope of log(mass) against log(radius) over nonzero samples.
inline DimensionReport holder_experiment(const MassTree& tree, long samples, const Rat& r_lo,
                                         const Rat& r_hi, long seed) {
    if (tree.layers.size() < 3)
        throw PreconditionError("holder_experiment: tree depth must be at least 2");
    auto data = sample_masses(tree, samples, r_lo, r_hi, seed);
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : data)
        if (s.mu_upper > 0) pts.emplace_back(std::log(s.radius.get_d()), std::log(s.mu_upper.get_d()));
    if (pts.size() < 10)
        throw VerificationError("holder_experiment: fewer than 10 nonzero-mass samples");
    double mx = 0, my = 0;
    for (auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    DimensionReport rep;
    const WeightPair& w = tree.params.weights;
    rep.s = dim_A2(w);
    rep.s_rho_value = s_rho(w, tree.params.exps);
    rep.epsilon = tree.epsilon;
    rep.fitted_slope = sxx > 0 ? sxy / sxx : 0.0;
    rep.sample_count = static_cast<long>(pts.size());
    rep.r_range = {r_lo.get_d(), r_hi.get_d()};
    return rep;
}

// Exact check of mass(B(x,r)) <= C * r^alpha over sampled balls of radius
// <= r_o. Cross-multiplied through integer powers, no rounding.
inline bool mass_distribution_certificate(const MassTree& tree, const Rat& alpha, const Rat& r_o,
                                          const Rat& C, long samples, long seed) {
    if (tree.layers.empty() || tree.layers.back().empty())
        throw PreconditionError("mass_distribution_certificate: empty tree");
    Rat r_lo = r_o / 1024;
    auto data = sample_masses(tree, samples, r_lo, r_o, seed);
    unsigned long den = alpha.get_den().get_ui();
    long num = alpha.get_num().get_si();
    for (const auto& s : data) {
        if (s.radius > r_o) continue;
        // mu <= C r^{num/den}  <=>  (mu/C)^den <= r^num (both sides positive)
        if (s.mu_upper == 0) continue;
        if (C == 0) return false;
        Rat lhs = rat_ipow(Rat(s.mu_upper / C), static_cast<long>(den));
        Rat rhs = rat_ipow(s.radius, num);
        if (lhs > rhs) return false;
    }
    return true;
}

struct LedgerRow {
    long level;
    Rat removed_exact;
    Rat paper_bound;
};

// Per-level removed area inside the window (union bounded by the sum of
// slab areas), normalized by window area, next to the geometric-series term
// it must stay under.
inline std::vector<LedgerRow> measure_ledger(const LevelState& state) {
    const ConstructionParams& P = state.params;
    Rat warea = rect_area(state.window);
    if (warea == 0) throw PreconditionError("measure_ledger: degenerate window");
    Rat epsp = P.exps.eps_prime(P.weights);
    std::vector<LedgerRow> rows;
    for (long n = 1; n <= state.level; ++n) {
        Rat removed = 0;
        for (const auto& s : state.removed)
            if (s.level == n) removed += slab_rect_area(s, state.window);
        Real term = Real::pow(BigInt(P.N), Rat(-n) * epsp);
        if (!term.is_rational())
            throw VerificationError("measure_ledger: bound term is not rational");
        Rat bound = Rat(40 * term.rational_part());
        rows.push_back({n, Rat(removed / warea), bound});
    }
    return rows;
}

}  // namespace badapprox
