#pragma once

// Exact arithmetic over the field extension generated by radicals of
// positive integers: a value is a rational plus a finite sum of rational
// multiples of canonical radicals M^(1/r).
//
// Canonical radical: r >= 2, M >= 2 r-th-power-free, and the gcd of r with
// all prime exponents of M is 1. Distinct canonical radicals are linearly
// independent over Q (Besicovitch/Mordell), so the zero test is structural
// and the sign of a nonzero value is decidable by interval refinement with
// integer n-th roots.
//
// This is what makes quantities like 3q^{-3/2} first-class citizens: every
// comparison in the covering/tree layers stays exact, including sums of two
// different radicals where a single cross-multiplication is not enough.

#include "badapprox/rat.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace badapprox {

struct Radical {
    unsigned long r;  // root index, >= 2
    BigInt m;         // radicand, >= 2, r-th-power-free, index-reduced

    bool operator<(const Radical& o) const {
        if (r != o.r) return r < o.r;
        return m < o.m;
    }
    bool operator==(const Radical& o) const { return r == o.r && m == o.m; }
};

class Real {
  public:
    Real() : rational_(0) {}
    Real(const Rat& q) : rational_(q) {}            // NOLINT implicit by design
    Real(long v) : rational_(v, 1) {}               // NOLINT

    bool is_rational() const { return terms_.empty(); }

    const Rat& rational_part() const { return rational_; }

    // base^exponent for base > 0 rational, exponent rational.
    static Real pow(const Rat& base, const Rat& exponent) {
        if (base <= 0) throw std::domain_error("Real::pow: positive base required");
        std::map<BigInt, Rat> exps;  // prime -> rational exponent
        for (const auto& [p, e] : factorize(base.get_num()))
            exps[p] += Rat(static_cast<long>(e), 1) * exponent;
        for (const auto& [p, e] : factorize(base.get_den()))
            exps[p] -= Rat(static_cast<long>(e), 1) * exponent;
        return from_prime_powers(Rat(1), exps);
    }

    static Real pow(const BigInt& base, const Rat& exponent) { return pow(Rat(base), exponent); }

    Real operator-() const {
        Real out;
        out.rational_ = -rational_;
        for (const auto& [rad, c] : terms_) out.terms_.emplace(rad, -c);
        return out;
    }

    Real& operator+=(const Real& o) {
        rational_ += o.rational_;
        for (const auto& [rad, c] : o.terms_) {
            Rat& mine = terms_[rad];
            mine += c;
            if (mine == 0) terms_.erase(rad);
        }
        return *this;
    }
    Real& operator-=(const Real& o) { return *this += -o; }

    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }

    friend Real operator*(const Real& a, const Real& b) {
        Real out;
        out.rational_ = a.rational_ * b.rational_;
        auto add_term = [&out](const Real& t) { out += t; };
        if (b.rational_ != 0)
            for (const auto& [rad, c] : a.terms_) add_term(make_radical_term(c * b.rational_, rad));
        if (a.rational_ != 0)
            for (const auto& [rad, c] : b.terms_) add_term(make_radical_term(a.rational_ * c, rad));
        for (const auto& [ra, ca] : a.terms_)
            for (const auto& [rb, cb] : b.terms_) add_term(mul_radicals(ca * cb, ra, rb));
        return out;
    }

    Real& operator*=(const Real& o) { return *this = *this * o; }

    // -1 / 0 / +1.
    int sign() const {
        if (terms_.empty()) return sgn(rational_);
        for (unsigned prec = 64; prec <= 1u << 16; prec *= 2) {
            auto [lo, hi] = enclosure(prec);
            if (lo > 0) return 1;
            if (hi < 0) return -1;
            if (lo == 0 && hi == 0) return 0;
        }
        // Unreachable for canonical nonzero values; a hit here means the
        // independence assumption was violated.
        throw std::logic_error("Real::sign: enclosure failed to separate from zero");
    }

    friend int cmp(const Real& a, const Real& b) { return (a - b).sign(); }
    friend bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Real& a, const Real& b) {
        Real d = a - b;
        return d.terms_.empty() && d.rational_ == 0;
    }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

    double to_double() const {
        auto [lo, hi] = enclosure(96);
        return Rat((lo + hi) / 2).get_d();
    }

    // Exact rational enclosure lo <= value <= hi at roughly `prec` bits.
    std::pair<Rat, Rat> enclosure(unsigned prec) const {
        Rat lo = rational_, hi = rational_;
        for (const auto& [rad, c] : terms_) {
            // rad.m^(1/rad.r) in [a, a+1] / 2^prec.
            BigInt scaled = rad.m << (static_cast<unsigned long>(prec) * rad.r);
            BigInt a = iroot(scaled, rad.r);
            Rat vlo = make_rat(a, BigInt(1) << prec);
            Rat vhi = make_rat(a + 1, BigInt(1) << prec);
            if (c >= 0) {
                lo += c * vlo;
                hi += c * vhi;
            } else {
                lo += c * vhi;
                hi += c * vlo;
            }
        }
        return {lo, hi};
    }

  private:
    Rat rational_;
    std::map<Radical, Rat> terms_;

    static Real make_radical_term(const Rat& coeff, const Radical& rad) {
        Real out;
        if (coeff != 0) out.terms_.emplace(rad, coeff);
        return out;
    }

    static Real mul_radicals(const Rat& coeff, const Radical& a, const Radical& b) {
        std::map<BigInt, Rat> exps;
        for (const auto& [p, e] : factorize(a.m)) exps[p] += Rat(static_cast<long>(e), static_cast<long>(a.r));
        for (const auto& [p, e] : factorize(b.m)) exps[p] += Rat(static_cast<long>(e), static_cast<long>(b.r));
        return from_prime_powers(coeff, exps);
    }

    // coeff * prod p^e with rational exponents e, brought to canonical form.
    static Real from_prime_powers(Rat coeff, const std::map<BigInt, Rat>& exps) {
        unsigned long r = 1;
        for (const auto& [p, e] : exps) {
            (void)p;
            r = std::lcm(r, e.get_den().get_ui());
        }
        BigInt m = 1;
        std::map<BigInt, unsigned long> frac;  // prime -> exponent numerator over r
        for (const auto& [p, e] : exps) {
            // e = floor(e) + k/r with 0 <= k < r.
            BigInt fl = rat_floor(e);
            Rat fracpart = e - Rat(fl);
            BigInt knum = fracpart.get_num() * (static_cast<long>(r) / fracpart.get_den().get_si());
            unsigned long k = knum.get_ui();
            if (fracpart == 0) k = 0;
            if (fl >= 0)
                coeff *= Rat(ipow(p, fl.get_ui()));
            else
                coeff *= Rat(BigInt(1), ipow(p, BigInt(-fl).get_ui()));
            if (k) frac[p] = k;
        }
        Real out;
        if (coeff == 0) return out;
        if (frac.empty()) {
            out.rational_ = coeff;
            return out;
        }
        unsigned long g = r;
        for (const auto& [p, k] : frac) {
            (void)p;
            g = std::gcd(g, k);
        }
        r /= g;
        for (auto& [p, k] : frac) {
            k /= g;
            m *= ipow(p, k);
        }
        out.terms_.emplace(Radical{r, m}, coeff);
        return out;
    }
};

inline Real operator*(const Rat& a, const Real& b) { return Real(a) * b; }
inline Real operator*(const Real& a, const Rat& b) { return a * Real(b); }

inline BigInt real_floor(const Real& v) {
    if (v.is_rational()) return rat_floor(v.rational_part());
    // An irrational value cannot sit on an integer, so the enclosure converges.
    for (unsigned prec = 64;; prec *= 2) {
        auto [lo, hi] = v.enclosure(prec);
        BigInt a = rat_floor(lo), b = rat_floor(hi);
        if (a == b) return a;
        if (prec > (1u << 22)) throw std::logic_error("real_floor: enclosure failed to converge");
    }
}

inline BigInt real_ceil(const Real& v) { return -real_floor(-v); }

}  // namespace badapprox
