#pragma once

// Exact rational scalar and big-integer helpers shared by every module.
// Rat is GMP's canonicalized rational: gcd(|num|, den) = 1, den > 0.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace badapprox {

using BigInt = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(const BigInt& num, const BigInt& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p/q" or "p" (decimal digit strings, optional leading '-').
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            BigInt n(s);
            return Rat(n);
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("parse_rat: denominator must be positive: " + s);
        Rat r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("parse_rat: malformed rational: " + s);
    }
}

// Canonical "p/q" form; integers still rendered with the denominator ("3/1")
// keeps exports unambiguous and round-trippable.
inline std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline Rat rat_ipow(const Rat& base, long e) {
    if (e >= 0) {
        Rat out(ipow(base.get_num(), static_cast<unsigned long>(e)),
                ipow(base.get_den(), static_cast<unsigned long>(e)));
        out.canonicalize();
        return out;
    }
    if (base == 0) throw std::domain_error("rat_ipow: zero base with negative exponent");
    Rat out(ipow(base.get_den(), static_cast<unsigned long>(-e)),
            ipow(base.get_num(), static_cast<unsigned long>(-e)));
    out.canonicalize();
    return out;
}

inline BigInt rat_floor(const Rat& r) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return out;
}

inline BigInt rat_ceil(const Rat& r) {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return out;
}

// floor(x^(1/n)) for x >= 0.
inline BigInt iroot(const BigInt& x, unsigned long n) {
    BigInt out;
    mpz_root(out.get_mpz_t(), x.get_mpz_t(), n);
    return out;
}

inline bool is_perfect_power(const BigInt& x, unsigned long n, BigInt* root = nullptr) {
    BigInt r = iroot(x, n);
    bool ok = ipow(r, n) == x;
    if (ok && root) *root = r;
    return ok;
}

// Prime factorization by trial division. Bases handed to this are small
// (denominators, grid counts), so this is never a bottleneck; results cached.
inline const std::map<BigInt, unsigned long>& factorize(const BigInt& n) {
    static thread_local std::map<BigInt, std::map<BigInt, unsigned long>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n <= 0) throw std::domain_error("factorize: positive input required");
    std::map<BigInt, unsigned long> f;
    BigInt m = n;
    for (BigInt p = 2; p * p <= m;) {
        if (m % p == 0) {
            unsigned long e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            f[p] = e;
        }
        p += (p == 2) ? 1 : 2;
    }
    if (m > 1) f[m] += 1;
    return cache.emplace(n, std::move(f)).first->second;
}

// a^p vs b^p-style helper: exact comparison base^(num/den) <=> rhs for
// positive base and rhs, by clearing the exponent denominator.
// Returns -1, 0, +1 for <, =, >.
inline int cmp_pow_rat(const BigInt& base, const Rat& exponent, const Rat& rhs) {
    if (base <= 0 || rhs <= 0) throw std::domain_error("cmp_pow_rat: positive operands required");
    // base^(en/ed) vs rhs  <=>  base^en vs rhs^ed (en may be negative).
    const BigInt& en = exponent.get_num();
    const BigInt& ed = exponent.get_den();
    unsigned long edl = ed.get_ui();
    Rat lhs = (en >= 0) ? Rat(ipow(base, en.get_ui()))
                        : Rat(1, ipow(base, BigInt(-en).get_ui()));
    Rat r = rat_ipow(rhs, static_cast<long>(edl));
    return cmp(lhs, r);
}

}  // namespace badapprox
