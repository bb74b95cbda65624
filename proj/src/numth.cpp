#include "weil/numth.hpp"
#include "weil/errors.hpp"

#include <numeric>

namespace weil {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long long> prime_factors(const BigInt& n) {
    BigInt r = mp::abs(n);
    std::vector<long long> out;
    for (long long p = 2; BigInt(p) * p <= r; ++p) {
        if (r % p != 0) continue;
        out.push_back(p);
        while (r % p == 0) r /= p;
    }
    if (r > 1) out.push_back(static_cast<long long>(r));
    return out;
}

long long mod_pos(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

long long inv_mod(long long a, long long m) {
    if (m == 1) return 0;
    long long g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
    while (a1 != 0) {
        long long q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw ValidationError("inv_mod: not invertible");
    return mod_pos(x, m);
}

long long vp(long long x, long long p) {
    if (x == 0) throw ValidationError("valuation of zero");
    long long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

long long ipow(long long b, long long e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

ValUnit valuation_split(const Rational& x, long long p) {
    if (x == 0) throw ValidationError("valuation_split: zero has no valuation");
    BigInt n = mp::numerator(x), d = mp::denominator(x);
    long long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    while (d % p == 0) {
        d /= p;
        --v;
    }
    return {v, Rational(n) / Rational(d)};
}

namespace {

int jacobi(BigInt a, BigInt n) {
    // n odd positive
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int r = static_cast<int>(n % 8);
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

}  // namespace

int legendre(const Rational& x, long long y) {
    if (y % 2 == 0) throw ValidationError("legendre: lower argument must be odd");
    BigInt m = y < 0 ? -y : y;
    if (m == 1) return 1;
    BigInt d = mp::denominator(x);
    if (mp::gcd(d, m) != 1) throw ValidationError("legendre: denominator not prime to modulus");
    return jacobi(mp::numerator(x), m) * jacobi(d, m);
}

int eps_bit(long long K) {
    if (K % 2 == 0) throw ValidationError("eps_bit: argument must be odd");
    return static_cast<int>(mod_pos((K - 1) / 2, 2));
}

EpsData eps_data(long long K) {
    if (K % 2 == 0) throw ValidationError("eps_data: argument must be odd");
    EpsData r;
    r.eps_bit = eps_bit(K);
    r.eps = r.eps_bit ? root_of_unity(1, 4) : ExactScalar(1LL);
    r.sigma_bit = K < 0 ? 1 : 0;
    return r;
}

bool zeta8_identity_check(long long x) {
    ExactScalar lhs = ExactScalar(static_cast<long long>(legendre(2, x))) * eps_data(x).eps;
    return lhs == zeta8(1 - x);
}

namespace {

// unit u = n/d of Z_2 (both odd): its class mod 8
long long unit_mod8(const Rational& u) {
    long long n = static_cast<long long>(mp::numerator(u) % 8);
    long long d = static_cast<long long>(mp::denominator(u) % 8);
    return mod_pos(mod_pos(n, 8) * inv_mod(d, 8), 8);
}

}  // namespace

int hilbert(const Rational& a, const Rational& b, Place place) {
    if (a == 0 || b == 0) throw ValidationError("hilbert: arguments must be nonzero");
    if (place.is_real()) return (a < 0 && b < 0) ? -1 : 1;
    const long long p = place.p;
    if (!is_prime(p)) throw ValidationError("hilbert: place must be a prime");
    auto [va, ua] = valuation_split(a, p);
    auto [vb, ub] = valuation_split(b, p);
    int s = 1;
    if (p == 2) {
        long long x = unit_mod8(ua), y = unit_mod8(ub);
        if (eps_bit(x) && eps_bit(y)) s = -s;
        if (mod_pos(vb, 2) && legendre(2, x) == -1) s = -s;
        if (mod_pos(va, 2) && legendre(2, y) == -1) s = -s;
        return s;
    }
    if (mod_pos(va * vb, 2) && eps_bit(p)) s = -s;
    if (mod_pos(vb, 2)) s *= legendre(ua, p);
    if (mod_pos(va, 2)) s *= legendre(ub, p);
    return s;
}

bool hilbert_product_check(long long a, long long b) {
    int prod = hilbert(a, b, Place::real());
    BigInt n = BigInt(2) * a * b;
    for (long long p : prime_factors(n)) prod *= hilbert(a, b, Place::prime(p));
    return prod == 1;
}

Rational frac(const Rational& x) {
    BigInt n = mp::numerator(x), d = mp::denominator(x);
    BigInt r = n % d;
    if (r < 0) r += d;
    return Rational(r) / Rational(d);
}

Rational p_fraction(const Rational& x, long long p) {
    BigInt n = mp::numerator(x), d = mp::denominator(x);
    BigInt pk = 1;
    while (d % p == 0) {
        d /= p;
        pk *= p;
    }
    if (pk == 1) return Rational(0);
    // n / (pk d) = u / pk + (integral at p), with u = n d^{-1} mod pk
    BigInt dm = d % pk;
    BigInt inv = 0;
    {
        // extended Euclid over BigInt
        BigInt g = pk, x0 = 0, x1 = 1, a1 = dm;
        while (a1 != 0) {
            BigInt q = g / a1;
            BigInt t = g - q * a1;
            g = a1;
            a1 = t;
            t = x0 - q * x1;
            x0 = x1;
            x1 = t;
        }
        inv = x0 % pk;
        if (inv < 0) inv += pk;
    }
    BigInt u = (n % pk) * inv % pk;
    if (u < 0) u += pk;
    return Rational(u) / Rational(pk);
}

ExactScalar e_of(const Rational& x) {
    Rational f = frac(x);
    BigInt d = mp::denominator(f);
    if (d > BigInt(1) << 24) throw CapError("e_of: denominator too large for a cyclotomic order");
    return root_of_unity(static_cast<long long>(mp::numerator(f)), static_cast<long long>(d));
}

ExactScalar chi_p(const Rational& x, long long p) { return e_of(p_fraction(x, p)); }

}  // namespace weil
