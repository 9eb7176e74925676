#pragma once

// Weight/exponent parameter selection and the derived per-level constants:
// grid orders ell(n), slab widths delta(n), the avoidance radius c(N).

#include "badapprox/errors.hpp"
#include "badapprox/geom.hpp"
#include "badapprox/rat.hpp"
#include "badapprox/realx.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace badapprox {

// tau1 >= tau2 > 0, tau1 + tau2 > 1.
struct WeightPair {
    Rat tau1, tau2;

    Rat sigma() const { return tau1 + tau2; }

    void validate() const {
        if (!(tau2 > 0)) throw ConfigError("weights: tau2 must be positive");
        if (!(tau1 >= tau2)) throw ConfigError("weights: tau1 >= tau2 required");
        if (!(tau1 + tau2 > 1)) throw ConfigError("weights: tau1 + tau2 > 1 required");
    }
};

// rho1 + rho2 = 3, rho1 >= rho2 >= 1, and 1 + tau_i - rho_i > 0.
struct ExponentPair {
    Rat rho1, rho2;

    void validate(const WeightPair& w) const {
        if (rho1 + rho2 != 3) throw ConfigError("exponents: rho1 + rho2 = 3 required");
        if (!(rho1 >= rho2) || !(rho2 >= 1)) throw ConfigError("exponents: rho1 >= rho2 >= 1 required");
        if (!(1 + w.tau1 - rho1 > 0) || !(1 + w.tau2 - rho2 > 0))
            throw ConfigError("exponents: 1 + tau_i - rho_i > 0 required");
    }

    // Slack driving the removed-measure series: min_i (1 + tau_i - rho_i).
    Rat eps_prime(const WeightPair& w) const { return std::min(1 + w.tau1 - rho1, 1 + w.tau2 - rho2); }
};

// Largest-admissible-rho2 rule with denominator bound D.
inline ExponentPair choose_exponents(const WeightPair& w, long D = 16) {
    w.validate();
    if (w.tau2 > Rat(1, 2)) return ExponentPair{Rat(3, 2), Rat(3, 2)};
    // Largest k/D with 1 <= k/D < 1 + tau2; it must also exceed 2 - tau1 so
    // that 1 + tau1 - rho1 > 0 survives.
    Rat upper = 1 + w.tau2;
    BigInt k = rat_ceil(upper * D) - 1;  // largest k with k/D < upper
    Rat r2 = make_rat(k, BigInt(D));
    if (r2 > Rat(3, 2)) r2 = Rat(3, 2);
    if (!(r2 >= 1) || !(r2 > 2 - w.tau1))
        throw ConfigError("choose_exponents: denominator bound D too small for these weights");
    ExponentPair e{3 - r2, r2};
    e.validate(w);
    return e;
}

// N = smallest b-th power >= minimum, t = smallest b-th power > 2, where
// b = lcm of the exponent denominators (so N^rho_i, t^rho_i are integers).
inline std::pair<BigInt, BigInt> choose_base(const ExponentPair& e, const BigInt& minimum) {
    unsigned long b = std::lcm(e.rho1.get_den().get_ui(), e.rho2.get_den().get_ui());
    auto smallest_power = [b](const BigInt& floor_value, bool strict) {
        BigInt r = iroot(floor_value, b);
        while (ipow(r, b) < floor_value || (strict && ipow(r, b) == floor_value)) ++r;
        if (r < 1) r = 1;
        return ipow(r, b);
    };
    BigInt N = smallest_power(std::max(minimum, BigInt(1)), false);
    BigInt t = smallest_power(BigInt(2), true);
    return {N, t};
}

// Full parameter set plus the exact derived quantities.
struct ConstructionParams {
    WeightPair weights;
    ExponentPair exps;
    BigInt N, t;

    void validate() const {
        weights.validate();
        exps.validate(weights);
        if (!(t > 2)) throw ConfigError("params: t > 2 required");
        if (!(N >= 2)) throw ConfigError("params: N >= 2 required");
        (void)pow_exact(N, exps.rho1);
        (void)pow_exact(t, exps.rho1);
        (void)pow_exact(N, exps.rho2);
        (void)pow_exact(t, exps.rho2);
    }

    Rat tau(int axis) const { return axis == 1 ? weights.tau1 : weights.tau2; }
    Rat rho(int axis) const { return axis == 1 ? exps.rho1 : exps.rho2; }

    // base^e for rational e with integral result; throws if not an integer.
    static BigInt pow_exact(const BigInt& base, const Rat& e) {
        if (e < 0) throw ConfigError("pow_exact: nonnegative exponent expected");
        unsigned long den = e.get_den().get_ui();
        BigInt root;
        if (!is_perfect_power(base, den, &root))
            throw ConfigError("params: " + base.get_str() + "^(" + rat_str(e) + ") is not an integer");
        return ipow(root, e.get_num().get_ui());
    }

    // Per-axis cell count of the order-n grid on this axis: t^rho_i N^{n rho_i}.
    BigInt axis_count(long n, int axis) const {
        return pow_exact(t, rho(axis)) * ipow(pow_exact(N, rho(axis)), static_cast<unsigned long>(n));
    }

    Rat cell_side(long n, int axis) const { return make_rat(BigInt(1), axis_count(n, axis)); }

    // ell_i(n) = ceil((n+2)(1+tau_i)/rho_i).
    long ell(long n, int axis) const {
        Rat v = Rat(n + 2) * (1 + tau(axis)) / rho(axis);
        return rat_ceil(v).get_si();
    }

    // delta_i(n) = t^{-rho_i} N^{-(n+2)(1+tau_i)}, exact real.
    Real delta_real(long n, int axis) const {
        return Real::pow(t, -rho(axis)) * Real::pow(N, -(Rat(n + 2) * (1 + tau(axis))));
    }

    bool delta_is_rational(long n, int axis) const { return delta_real(n, axis).is_rational(); }

    // Rational delta, required by the slab machinery.
    Rat delta(long n, int axis) const {
        Real d = delta_real(n, axis);
        if (!d.is_rational())
            throw ConfigError("params: delta_" + std::to_string(axis) + "(" + std::to_string(n) +
                              ") is irrational for this (N, t, tau); pick N, t as higher powers");
        return d.rational_part();
    }

    RatVec2 delta_vec(long n) const { return {delta(n, 1), delta(n, 2)}; }

    // c_i(N) = t^{-rho_i} N^{-3(1+tau_i)} = delta_i(1).
    Real cN_real(int axis) const { return delta_real(1, axis); }
    Rat cN(int axis) const { return delta(1, axis); }

    // Shrink halfwidth q^{-(1+tau_i)} and enlargement halfwidth 3 q^{-rho_i}.
    Real shrink_halfwidth(const BigInt& q, int axis) const { return Real::pow(q, -(1 + tau(axis))); }
    Real enlarge_halfwidth(const BigInt& q, int axis) const { return Rat(3) * Real::pow(q, -rho(axis)); }

    // Construction level of a denominator: smallest n with q < N^n.
    long level_of_denominator(const BigInt& q) const {
        long n = 1;
        BigInt power = N;
        while (q >= power) {
            power *= N;
            ++n;
        }
        return n;
    }
};

// Grid V_{n1,n2}: axis-i cells of side t^{-rho_i} N^{-n_i rho_i}.
struct GridSpec {
    ConstructionParams params;
    long n1 = 0, n2 = 0;

    BigInt count(int axis) const { return params.axis_count(axis == 1 ? n1 : n2, axis); }
    Rat side(int axis) const { return params.cell_side(axis == 1 ? n1 : n2, axis); }

    // Index of the cell containing x on this axis (clamped to the grid).
    BigInt index_of(const Rat& x, int axis) const {
        BigInt i = rat_floor(x * count(axis));
        if (i < 0) i = 0;
        if (i >= count(axis)) i = count(axis) - 1;
        return i;
    }

    RatRect cell(const BigInt& i1, const BigInt& i2) const {
        Rat s1 = side(1), s2 = side(2);
        return RatRect{{(Rat(i1) + Rat(1, 2)) * s1, (Rat(i2) + Rat(1, 2)) * s2}, {s1 / 2, s2 / 2}};
    }
};

}  // namespace badapprox
