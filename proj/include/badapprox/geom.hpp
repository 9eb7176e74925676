#pragma once

// Exact axis-aligned rectangles, rational lines, slabs, and the convex
// polygon clipping that computes slab areas. The scalar is a template
// parameter: grid geometry runs on Rat, covering/tree geometry on Real.

#include "badapprox/rat.hpp"
#include "badapprox/realx.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace badapprox {

template <class T>
struct Vec2 {
    T x1, x2;
};

using RatVec2 = Vec2<Rat>;

// Closed axis-aligned rectangle given by center and positive halfwidths,
// i.e. Delta(center, halfwidth) in the sup-norm.
template <class T>
struct Rect {
    Vec2<T> center;
    Vec2<T> halfwidth;

    T lo1() const { return center.x1 - halfwidth.x1; }
    T hi1() const { return center.x1 + halfwidth.x1; }
    T lo2() const { return center.x2 - halfwidth.x2; }
    T hi2() const { return center.x2 + halfwidth.x2; }
};

using RatRect = Rect<Rat>;
using RealRect = Rect<Real>;

template <class T>
Rect<T> make_rect(T cx1, T cx2, T h1, T h2) {
    if (!(h1 > T(0)) || !(h2 > T(0))) throw std::invalid_argument("make_rect: halfwidths must be positive");
    return Rect<T>{{std::move(cx1), std::move(cx2)}, {std::move(h1), std::move(h2)}};
}

template <class T, class S>
Rect<T> rect_scale(const Rect<T>& r, const S& a) {
    if (!(T(a) > T(0))) throw std::invalid_argument("rect_scale: scale must be positive");
    return Rect<T>{r.center, {r.halfwidth.x1 * a, r.halfwidth.x2 * a}};
}

// Closed-rectangle overlap (boundary contact counts).
template <class T>
bool rect_intersects(const Rect<T>& a, const Rect<T>& b) {
    return a.lo1() <= b.hi1() && b.lo1() <= a.hi1() && a.lo2() <= b.hi2() && b.lo2() <= a.hi2();
}

template <class T, class U>
bool rect_chebyshev_contains(const Rect<T>& r, const Vec2<U>& p) {
    T d1 = T(p.x1) - r.center.x1;
    T d2 = T(p.x2) - r.center.x2;
    if (d1 < T(0)) d1 = -d1;
    if (d2 < T(0)) d2 = -d2;
    return d1 <= r.halfwidth.x1 && d2 <= r.halfwidth.x2;
}

template <class T>
bool rect_contains_rect(const Rect<T>& outer, const Rect<T>& inner) {
    return outer.lo1() <= inner.lo1() && inner.hi1() <= outer.hi1() && outer.lo2() <= inner.lo2() &&
           inner.hi2() <= outer.hi2();
}

template <class T>
T rect_area(const Rect<T>& r) {
    return r.halfwidth.x1 * r.halfwidth.x2 * T(4);
}

// Line {a x1 + b x2 = c} in canonical form: a, b, c coprime integers with
// (a, b) lexicographically positive, so structural equality is semantic
// equality.
struct Line {
    BigInt a, b, c;

    bool operator==(const Line& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const Line& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

inline Line make_line(const Rat& a, const Rat& b, const Rat& c) {
    if (a == 0 && b == 0) throw std::invalid_argument("make_line: (a,b) must be nonzero");
    BigInt den = a.get_den();
    den = den * b.get_den() / gcd(den, b.get_den());
    den = den * c.get_den() / gcd(den, c.get_den());
    BigInt ia = a.get_num() * (den / a.get_den());
    BigInt ib = b.get_num() * (den / b.get_den());
    BigInt ic = c.get_num() * (den / c.get_den());
    BigInt g = gcd(gcd(abs(ia), abs(ib)), abs(ic));
    if (g == 0) g = 1;
    ia /= g;
    ib /= g;
    ic /= g;
    if (ia < 0 || (ia == 0 && ib < 0)) {
        ia = -ia;
        ib = -ib;
        ic = -ic;
    }
    return Line{ia, ib, ic};
}

inline Line line_through(const Rat& x1, const Rat& y1, const Rat& x2, const Rat& y2) {
    // (y2-y1)(x - x1) = (x2-x1)(y - y1)
    Rat a = y2 - y1;
    Rat b = x1 - x2;
    Rat c = a * x1 + b * y1;
    return make_line(a, b, c);
}

inline Rat line_eval(const Line& l, const Rat& x1, const Rat& x2) {
    return Rat(l.a) * x1 + Rat(l.b) * x2 - Rat(l.c);
}

inline bool line_contains(const Line& l, const Rat& x1, const Rat& x2) { return line_eval(l, x1, x2) == 0; }

// Slab removed at a construction level: the neighbourhood Delta(L, delta) of
// the segment L = line ∩ host, handled through the half-plane hull
// {|a x1 + b x2 - c| <= |a| delta1 + |b| delta2} and the 5x host bound.
struct SegmentNeighborhood {
    Line line;
    RatRect host;   // the V_{level,level} cell the hyperplane lives in
    RatVec2 delta;  // delta(level) of the active parameters
    int level = 0;
};

inline Rat slab_halfthickness(const SegmentNeighborhood& s) {
    return Rat(abs(s.line.a)) * s.delta.x1 + Rat(abs(s.line.b)) * s.delta.x2;
}

// Convex polygon with exact rational vertices, counterclockwise.
using Polygon = std::vector<RatVec2>;

inline Polygon rect_polygon(const RatRect& r) {
    return {{r.lo1(), r.lo2()}, {r.hi1(), r.lo2()}, {r.hi1(), r.hi2()}, {r.lo1(), r.hi2()}};
}

// Clip polygon against half-plane {a x1 + b x2 <= c} (Sutherland-Hodgman).
inline Polygon clip_halfplane(const Polygon& poly, const Rat& a, const Rat& b, const Rat& c) {
    Polygon out;
    auto inside = [&](const RatVec2& p) { return a * p.x1 + b * p.x2 <= c; };
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const RatVec2& cur = poly[i];
        const RatVec2& nxt = poly[(i + 1) % n];
        bool cin = inside(cur), nin = inside(nxt);
        if (cin) out.push_back(cur);
        if (cin != nin) {
            Rat fc = a * cur.x1 + b * cur.x2 - c;
            Rat fn = a * nxt.x1 + b * nxt.x2 - c;
            Rat t = fc / (fc - fn);  // fc != fn since exactly one side is inside
            out.push_back({cur.x1 + t * (nxt.x1 - cur.x1), cur.x2 + t * (nxt.x2 - cur.x2)});
        }
    }
    return out;
}

inline Rat polygon_area(const Polygon& poly) {
    if (poly.size() < 3) return Rat(0);
    Rat twice(0);
    for (size_t i = 0; i < poly.size(); ++i) {
        const RatVec2& p = poly[i];
        const RatVec2& q = poly[(i + 1) % poly.size()];
        twice += p.x1 * q.x2 - q.x1 * p.x2;
    }
    if (twice < 0) twice = -twice;
    return twice / 2;
}

// Exact area of the hull {|a x1 + b x2 - c| <= |a| d1 + |b| d2} ∩ r.
inline Rat slab_rect_area(const SegmentNeighborhood& s, const RatRect& r) {
    Rat w = slab_halfthickness(s);
    Rat a(s.line.a), b(s.line.b), c(s.line.c);
    Polygon poly = rect_polygon(r);
    poly = clip_halfplane(poly, a, b, c + w);
    poly = clip_halfplane(poly, -a, -b, w - c);
    return polygon_area(poly);
}

// Does the closed rect meet the hull ∩ 5*host? This is the removal predicate
// used by the construction.
inline bool slab_intersects_rect(const SegmentNeighborhood& s, const RatRect& r) {
    if (!rect_intersects(rect_scale(s.host, Rat(5)), r)) return false;
    // Range of a x1 + b x2 over r vs the band [c - w, c + w].
    Rat a(s.line.a), b(s.line.b);
    Rat lo = a * (a >= 0 ? r.lo1() : r.hi1()) + b * (b >= 0 ? r.lo2() : r.hi2());
    Rat hi = a * (a >= 0 ? r.hi1() : r.lo1()) + b * (b >= 0 ? r.hi2() : r.lo2());
    Rat w = slab_halfthickness(s);
    Rat c(s.line.c);
    return lo <= c + w && c - w <= hi;
}

}  // namespace badapprox
