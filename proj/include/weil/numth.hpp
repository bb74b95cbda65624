#pragma once

#include "weil/exact.hpp"

#include <vector>

namespace weil {

bool is_prime(long long n);
std::vector<long long> prime_factors(const BigInt& n);  // distinct primes of |n|
long long mod_pos(long long a, long long m);
long long inv_mod(long long a, long long m);           // gcd(a, m) = 1
long long vp(long long x, long long p);                // x != 0
long long ipow(long long b, long long e);

struct ValUnit {
    long long valuation = 0;
    Rational unit;
};
ValUnit valuation_split(const Rational& x, long long p);

// Jacobi symbol extended by (x/y) = (x/|y|) and (x/1) = 1.  Rationals are
// accepted when their denominator is prime to y.
int legendre(const Rational& x, long long y);
inline int legendre(long long x, long long y) { return legendre(Rational(x), y); }

struct EpsData {
    ExactScalar eps;  // 1 if K = 1 mod 4, i if K = 3 mod 4
    int eps_bit = 0;  // (K - 1)/2 mod 2
    int sigma_bit = 0;  // 1 iff K < 0
};
EpsData eps_data(long long K);
int eps_bit(long long K);

bool zeta8_identity_check(long long x);

struct Place {
    long long p = 0;  // 0 encodes the real place
    static Place real() { return Place{0}; }
    static Place prime(long long q) { return Place{q}; }
    bool is_real() const { return p == 0; }
};

int hilbert(const Rational& a, const Rational& b, Place place);
inline int hilbert(long long a, long long b, Place place) {
    return hilbert(Rational(a), Rational(b), place);
}
bool hilbert_product_check(long long a, long long b);

// The p-part of x modulo 1: the unique r in [0, 1) with p-power denominator
// and x - r in Z_(p).
Rational p_fraction(const Rational& x, long long p);
Rational frac(const Rational& x);  // x mod 1 in [0, 1)
// chi_p(x) = e(p_fraction(x, p)); the product over all p of chi_p is e.
ExactScalar chi_p(const Rational& x, long long p);
ExactScalar e_of(const Rational& x);

}  // namespace weil
