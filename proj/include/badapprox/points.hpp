#pragma once

// Enumeration of rational points with bounded shared denominator in
// rectangles and on lines, plus Dirichlet-style approximation witnesses.

#include "badapprox/geom.hpp"
#include "badapprox/rat.hpp"
#include "badapprox/realx.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace badapprox {

// Reduced shared-denominator representative of a rational point in [0,1]^2:
// 0 <= p1, p2 <= q, gcd(p1, p2, q) = 1.
struct RatPoint {
    BigInt p1, p2, q;

    Rat x1() const { return make_rat(p1, q); }
    Rat x2() const { return make_rat(p2, q); }

    bool operator==(const RatPoint& o) const { return p1 == o.p1 && p2 == o.p2 && q == o.q; }
    bool operator<(const RatPoint& o) const {
        if (q != o.q) return q < o.q;
        if (p1 != o.p1) return p1 < o.p1;
        return p2 < o.p2;
    }
};

namespace detail {

struct Frac {
    BigInt num, den;
};

// Consecutive Farey-F_Q neighbours a/b <= x <= c/d (Stern-Brocot descent
// with bulk steps; O(log) iterations). Requires 0 <= x <= 1, Q >= 1.
inline std::pair<Frac, Frac> farey_neighbors(const Rat& x, const BigInt& Q) {
    BigInt a = 0, b = 1, c = 1, d = 0;
    const BigInt &u = x.get_num(), &v = x.get_den();
    while (true) {
        // Try to move the left endpoint toward x: a/b += k * c/d.
        // (a + kc)/(b + kd) <= x  <=>  k (cv - ud) <= ub - av.
        BigInt denl = c * v - u * d;
        bool advanced = false;
        if (denl > 0) {
            BigInt k = (u * b - a * v) / denl;
            if (d > 0) k = std::min(k, BigInt((Q - b) / d));
            if (k > 0) {
                a += k * c;
                b += k * d;
                advanced = true;
            }
        } else {
            // x >= c/d: only possible when c/d = 1/0 sentinel was replaced; x == c/d handled below.
        }
        // Move the right endpoint toward x: c/d += k * a/b, keeping c/d >= x.
        // (c + ka)/(d + kb) >= x  <=>  k (ub - av) <= cv - ud.
        BigInt denr = u * b - a * v;
        if (denr > 0) {
            BigInt k = (c * v - u * d) / denr;
            if (b > 0) k = std::min(k, BigInt((Q - d) / b));
            if (k > 0) {
                c += k * a;
                d += k * b;
                advanced = true;
            }
        }
        if (!advanced) break;
    }
    return {Frac{a, b}, Frac{c, d}};
}

// Next term after consecutive F_Q terms x1/y1 < x2/y2.
inline Frac farey_next(const Frac& f1, const Frac& f2, const BigInt& Q) {
    BigInt k = (f1.den + Q) / f2.den;
    return Frac{k * f2.num - f1.num, k * f2.den - f1.den};
}

// All reduced fractions a/b in [lo, hi] with 1 <= b <= Q, ascending.
// Output-sensitive: cost ~ number of F_Q terms in [lo, hi].
inline std::vector<Frac> farey_in_interval(const Rat& lo, const Rat& hi, const BigInt& Q) {
    std::vector<Frac> out;
    if (lo > hi || Q < 1) return out;
    Rat clo = std::max(lo, Rat(0)), chi = std::min(hi, Rat(1));
    if (clo > chi) return out;
    auto [left, right] = farey_neighbors(clo, Q);
    Frac prev = left, cur = right;
    if (make_rat(left.num, left.den) == clo) {
        // clo itself is an F_Q term; its successor comes from the unimodular
        // right neighbour: maximize den of (right + t * left) within Q.
        out.push_back(left);
        BigInt t = (Q - right.den) / left.den;
        cur = Frac{right.num + t * left.num, right.den + t * left.den};
    }
    while (cur.den > 0 && make_rat(cur.num, cur.den) <= chi) {
        out.push_back(cur);
        Frac nxt = farey_next(prev, cur, Q);
        prev = cur;
        cur = nxt;
    }
    return out;
}

inline void push_point(std::vector<RatPoint>& out, BigInt p1, BigInt p2, BigInt q, bool reduced_only) {
    if (reduced_only && gcd(gcd(p1, p2), q) != 1) return;
    out.push_back(RatPoint{std::move(p1), std::move(p2), std::move(q)});
}

}  // namespace detail

// All RatPoints with qmin <= q <= qmax in the closed rect ∩ [0,1]^2, each
// once, sorted by (q, p1, p2). reduced_only=false enumerates every
// shared-denominator representation instead (no gcd filter).
inline std::vector<RatPoint> rationals_in_rect(const RatRect& r, const BigInt& qmin, const BigInt& qmax,
                                               bool reduced_only = true) {
    std::vector<RatPoint> out;
    if (qmin > qmax) return out;
    Rat lo1 = std::max(r.lo1(), Rat(0)), hi1 = std::min(r.hi1(), Rat(1));
    Rat lo2 = std::max(r.lo2(), Rat(0)), hi2 = std::min(r.hi2(), Rat(1));
    if (lo1 > hi1 || lo2 > hi2) return out;

    BigInt lo = std::max(qmin, BigInt(1));
    Rat w1 = hi1 - lo1;

    // Cost heuristic: direct per-q scan is O(qmax) iterations; the Farey walk
    // on the narrower axis is ~ width * qmax^2 steps. Use the walk only when
    // it is clearly cheaper (deep levels over tiny windows).
    bool narrow = w1 * Rat(qmax) * Rat(qmax) < Rat(qmax - lo);
    if (!narrow) {
        for (BigInt q = lo; q <= qmax; ++q) {
            BigInt p1a = std::max(BigInt(0), rat_ceil(lo1 * q));
            BigInt p1b = std::min(q, rat_floor(hi1 * q));
            if (p1a > p1b) continue;
            BigInt p2a = std::max(BigInt(0), rat_ceil(lo2 * q));
            BigInt p2b = std::min(q, rat_floor(hi2 * q));
            for (BigInt p1 = p1a; p1 <= p1b; ++p1)
                for (BigInt p2 = p2a; p2 <= p2b; ++p2) detail::push_point(out, p1, p2, q, reduced_only);
        }
        return out;
    }

    for (const auto& f : detail::farey_in_interval(lo1, hi1, qmax)) {
        // p1/q with p1/q = f reduced: q = k * f.den, p1 = k * f.num.
        for (BigInt k = 1; k * f.den <= qmax; ++k) {
            BigInt q = k * f.den;
            if (q < lo) continue;
            BigInt p1 = k * f.num;
            BigInt p2a = std::max(BigInt(0), rat_ceil(lo2 * q));
            BigInt p2b = std::min(q, rat_floor(hi2 * q));
            for (BigInt p2 = p2a; p2 <= p2b; ++p2) detail::push_point(out, p1, p2, q, reduced_only);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// All RatPoints exactly on l inside within ∩ [0,1]^2 with qmin <= q <= qmax,
// via the extended-gcd parametrization of a p1 + b p2 = c q per q.
inline std::vector<RatPoint> rationals_on_line(const Line& l, const RatRect& within, const BigInt& qmin,
                                               const BigInt& qmax, bool reduced_only = true) {
    std::vector<RatPoint> out;
    if (qmin > qmax) return out;
    Rat lo1 = std::max(within.lo1(), Rat(0)), hi1 = std::min(within.hi1(), Rat(1));
    Rat lo2 = std::max(within.lo2(), Rat(0)), hi2 = std::min(within.hi2(), Rat(1));
    if (lo1 > hi1 || lo2 > hi2) return out;

    BigInt g, s0, t0;
    mpz_gcdext(g.get_mpz_t(), s0.get_mpz_t(), t0.get_mpz_t(), l.a.get_mpz_t(), l.b.get_mpz_t());

    for (BigInt q = std::max(qmin, BigInt(1)); q <= qmax; ++q) {
        BigInt m = l.c * q;
        if (m % g != 0) continue;
        BigInt mul = m / g;
        // Base solution; steps (b/g, -a/g).
        BigInt p1 = s0 * mul, p2 = t0 * mul;
        BigInt d1 = l.b / g, d2 = -l.a / g;
        BigInt p1a = std::max(BigInt(0), rat_ceil(lo1 * q));
        BigInt p1b = std::min(q, rat_floor(hi1 * q));
        BigInt p2a = std::max(BigInt(0), rat_ceil(lo2 * q));
        BigInt p2b = std::min(q, rat_floor(hi2 * q));
        if (p1a > p1b || p2a > p2b) continue;
        if (d1 == 0) {
            if (p1 < p1a || p1 > p1b) continue;
            for (BigInt v2 = p2a; v2 <= p2b; ++v2)
                if (l.a * p1 + l.b * v2 == m) detail::push_point(out, p1, v2, q, reduced_only);
            continue;
        }
        // Range of k with p1 + k d1 in [p1a, p1b].
        BigInt ka, kb;
        if (d1 > 0) {
            ka = rat_ceil(make_rat(p1a - p1, d1));
            kb = rat_floor(make_rat(p1b - p1, d1));
        } else {
            ka = rat_ceil(make_rat(p1b - p1, d1));
            kb = rat_floor(make_rat(p1a - p1, d1));
        }
        for (BigInt k = ka; k <= kb; ++k) {
            BigInt v1 = p1 + k * d1, v2 = p2 + k * d2;
            if (v2 < p2a || v2 > p2b) continue;
            detail::push_point(out, v1, v2, q, reduced_only);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

enum class CollinearKind { empty, line, non_collinear };

struct Collinearity {
    CollinearKind kind = CollinearKind::empty;
    std::optional<Line> line;
};

// Canonical line through all points if one exists. Empty input is a distinct
// sentinel; a single point yields the horizontal line through it.
inline Collinearity collinear(const std::vector<RatPoint>& points) {
    if (points.empty()) return {CollinearKind::empty, std::nullopt};
    if (points.size() == 1)
        return {CollinearKind::line, make_line(Rat(0), Rat(1), points[0].x2())};
    // First pair of distinct points fixes the line.
    const RatPoint& p0 = points[0];
    size_t j = 1;
    while (j < points.size() && points[j].x1() == p0.x1() && points[j].x2() == p0.x2()) ++j;
    if (j == points.size()) return {CollinearKind::line, make_line(Rat(0), Rat(1), p0.x2())};
    Line l = line_through(p0.x1(), p0.x2(), points[j].x1(), points[j].x2());
    for (const auto& p : points)
        if (!line_contains(l, p.x1(), p.x2())) return {CollinearKind::non_collinear, std::nullopt};
    return {CollinearKind::line, l};
}

// All p/q with q <= qmax and |x_i - p_i/q| < q^{-rho_i} strictly, i = 1, 2.
inline std::vector<RatPoint> dirichlet_witnesses(const RatVec2& x, const RatVec2& exponents, const BigInt& qmax) {
    if (exponents.x1 <= 0 || exponents.x2 <= 0)
        throw std::domain_error("dirichlet_witnesses: positive exponents required");
    std::vector<RatPoint> out;
    for (BigInt q = 1; q <= qmax; ++q) {
        // |q x_i - p_i| < q^{1 - rho_i}; rational upper bound on the radius.
        auto bound = [&](const Rat& rho) {
            return Real::pow(q, Rat(1) - rho).enclosure(32).second;
        };
        Rat u1 = bound(exponents.x1), u2 = bound(exponents.x2);
        BigInt a1 = std::max(BigInt(0), rat_ceil(x.x1 * q - u1));
        BigInt b1 = std::min(q, rat_floor(x.x1 * q + u1));
        BigInt a2 = std::max(BigInt(0), rat_ceil(x.x2 * q - u2));
        BigInt b2 = std::min(q, rat_floor(x.x2 * q + u2));
        for (BigInt p1 = a1; p1 <= b1; ++p1) {
            Rat d1 = abs(x.x1 - make_rat(p1, q));
            bool ok1 = (d1 == 0) || cmp_pow_rat(q, -exponents.x1, d1) > 0;
            if (!ok1) continue;
            for (BigInt p2 = a2; p2 <= b2; ++p2) {
                Rat d2 = abs(x.x2 - make_rat(p2, q));
                bool ok2 = (d2 == 0) || cmp_pow_rat(q, -exponents.x2, d2) > 0;
                if (ok2) detail::push_point(out, p1, p2, q, true);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace badapprox
