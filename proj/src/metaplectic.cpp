#include "weil/metaplectic.hpp"
#include "weil/errors.hpp"

#include <cmath>
#include <numbers>

namespace weil {

namespace {

long long mul_checked(long long x, long long y) {
    long long r;
    if (__builtin_mul_overflow(x, y, &r)) throw CapError("SL2Z entry overflow");
    return r;
}

long long add_checked(long long x, long long y) {
    long long r;
    if (__builtin_add_overflow(x, y, &r)) throw CapError("SL2Z entry overflow");
    return r;
}

long long odd_part(long long x) {
    while (x % 2 == 0) x /= 2;
    return x;
}

}  // namespace

SL2Z SL2Z::make(long long a, long long b, long long c, long long d) {
    if (add_checked(mul_checked(a, d), -mul_checked(b, c)) != 1)
        throw ValidationError("matrix does not have determinant 1");
    return {a, b, c, d};
}

std::string SL2Z::to_string() const {
    return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
           std::to_string(d) + "]]";
}

SL2Z operator*(const SL2Z& x, const SL2Z& y) {
    return {add_checked(mul_checked(x.a, y.a), mul_checked(x.b, y.c)),
            add_checked(mul_checked(x.a, y.b), mul_checked(x.b, y.d)),
            add_checked(mul_checked(x.c, y.a), mul_checked(x.d, y.c)),
            add_checked(mul_checked(x.c, y.b), mul_checked(x.d, y.d))};
}

Mat2Q Mat2Q::from(const SL2Z& m) { return {Rational(m.a), Rational(m.b), Rational(m.c), Rational(m.d)}; }

Mat2Q operator*(const Mat2Q& x, const Mat2Q& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

int kubota_cocycle(const Mat2Q& A, const Mat2Q& B, Place place) {
    const Rational &c = A.c, &d = A.d, &e = B.a, &g = B.c, &h = B.d;
    if (c == 0 && g == 0) return hilbert(d, h, place);
    if (c == 0) return hilbert(d, g, place);
    if (g == 0) return hilbert(c, h, place);
    Rational x = c * e + d * g;
    if (x == 0) return hilbert(-c, -g, place);
    return hilbert(c, g, place) * hilbert(x, -c * g, place);
}

int cgxde_direct(const Rational& c, const Rational& g, const Rational& d, const Rational& e, Place place) {
    Rational x = c * e + d * g;
    if (c == 0 || g == 0 || x == 0) throw ValidationError("cgxde: c, g and ce+dg must be nonzero");
    return hilbert(c, g, place) * hilbert(x, -c * g, place);
}

int cgxde_form(const Rational& c, const Rational& g, const Rational& d, const Rational& e, Place place) {
    Rational x = c * e + d * g;
    if (c == 0 || g == 0 || x == 0) throw ValidationError("cgxde: c, g and ce+dg must be nonzero");
    if (d == 0) return hilbert(e, -c * g, place);
    if (e == 0) return hilbert(d, -c * g, place);
    return hilbert(d, c * x, place) * hilbert(e, g * x, place) * hilbert(d, e, place);
}

MpZElement mp_mul(const MpZElement& x, const MpZElement& y) {
    return {x.mat * y.mat, kubota_cocycle(x.mat, y.mat, Place::real()) * x.eps * y.eps};
}

MpZElement mp_inv(const MpZElement& x) {
    // (A, e)(A^-1, s) = (I, sigma(A, A^-1) e s) must be (I, 1)
    SL2Z inv = x.mat.inverse();
    return {inv, kubota_cocycle(x.mat, inv, Place::real()) * x.eps};
}

MpZElement mp_pow(const MpZElement& x, long long k) {
    MpZElement base = k < 0 ? mp_inv(x) : x;
    MpZElement r{SL2Z{}, 1};
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) r = mp_mul(r, base);
    return r;
}

MpZElement mp_T(long long k) { return {SL2Z::T(k), 1}; }
MpZElement mp_S() { return {SL2Z::S(), 1}; }
MpZElement mp_Z() { return mp_mul(mp_S(), mp_S()); }

namespace {

// argument in [-pi, pi) of the exact complex number re + i im
double arg_exact(const Rational& re, const Rational& im) {
    if (im == 0) {
        if (re == 0) throw InvariantError("arg of zero");
        return re > 0 ? 0.0 : -std::numbers::pi;
    }
    return std::atan2(static_cast<double>(im), static_cast<double>(re));
}

}  // namespace

int branch_sign_at_i(const SL2Z& A, const SL2Z& B) {
    // j(B, i) = h + g i; B i = (f + e i)/(h + g i); j(A, B i) = ((cf + dh) + (ce + dg) i)/(h + g i)
    Rational g(B.c), h(B.d);
    Rational n = h * h + g * g;
    Rational re1 = Rational(A.c * B.b + A.d * B.d), im1 = Rational(A.c * B.a + A.d * B.c);
    // divide (re1 + i im1) by (h + g i): multiply by (h - g i)/n
    Rational jre = (re1 * h + im1 * g) / n, jim = (im1 * h - re1 * g) / n;
    SL2Z AB = A * B;
    double s = arg_exact(jre, jim) + arg_exact(h, g) - arg_exact(Rational(AB.d), Rational(AB.c));
    // s is 0 or +-2 pi exactly; halving gives a sign
    if (std::abs(s) < 1.0) return 1;
    if (std::abs(std::abs(s) - 2 * std::numbers::pi) < 1.0) return -1;
    throw InvariantError("branch check: argument sum is not a multiple of 2 pi");
}

SL2Z word_matrix(const Word& w) {
    SL2Z m;
    for (const Token& t : w) {
        switch (t.kind) {
            case Token::TPow: m = m * SL2Z::T(t.k); break;
            case Token::S: m = m * SL2Z::S(); break;
            case Token::SInv: m = m * SL2Z::S().inverse(); break;
        }
    }
    return m;
}

MpZElement word_element(const Word& w) {
    MpZElement x{SL2Z{}, 1};
    const MpZElement s = mp_S(), sinv = mp_inv(mp_S());
    for (const Token& t : w) {
        switch (t.kind) {
            case Token::TPow: x = mp_mul(x, mp_T(t.k)); break;
            case Token::S: x = mp_mul(x, s); break;
            case Token::SInv: x = mp_mul(x, sinv); break;
        }
    }
    return x;
}

std::string word_string(const Word& w) {
    std::string s;
    for (const Token& t : w) {
        if (!s.empty()) s += " ";
        if (t.kind == Token::TPow) s += "T^" + std::to_string(t.k);
        else s += t.kind == Token::S ? "S" : "S^-1";
    }
    return s.empty() ? "1" : s;
}

namespace {

// cancel S S^-1 pairs and merge T powers
Word simplify(const Word& w) {
    Word out;
    for (const Token& t : w) {
        if (!out.empty()) {
            Token& b = out.back();
            if (t.kind == Token::TPow && b.kind == Token::TPow) {
                b.k += t.k;
                if (b.k == 0) out.pop_back();
                continue;
            }
            if ((t.kind == Token::S && b.kind == Token::SInv) || (t.kind == Token::SInv && b.kind == Token::S)) {
                out.pop_back();
                continue;
            }
        }
        if (t.kind != Token::TPow || t.k != 0) out.push_back(t);
    }
    return out;
}

// Euclid on the bottom row by right multiplication with T^k S; step is 1 or 2.
Word euclid(const SL2Z& A, long long step) {
    SL2Z m = A;
    std::vector<long long> ks;
    while (m.c != 0) {
        long long period = step * (m.c < 0 ? -m.c : m.c);
        long long target = ((m.d % period) + period) % period;  // d + c k for some k
        if (target > period / 2) target -= period;
        long long k = (target - m.d) / m.c;
        m = m * SL2Z::T(k) * SL2Z::S();
        ks.push_back(k);
    }
    // m = +-T^b
    Word w;
    if (m.a == -1) {
        w.push_back({Token::S, 0});
        w.push_back({Token::S, 0});
        if (m.b != 0) w.push_back({Token::TPow, -m.b});
    } else if (m.b != 0) {
        w.push_back({Token::TPow, m.b});
    }
    for (auto it = ks.rbegin(); it != ks.rend(); ++it) {
        w.push_back({Token::SInv, 0});
        if (*it != 0) w.push_back({Token::TPow, -*it});
    }
    return simplify(w);
}

}  // namespace

Word decompose_ST(const SL2Z& A) {
    Word w = euclid(A, 1);
    if (!(word_matrix(w) == A)) throw InvariantError("decompose_ST: word does not multiply out");
    return w;
}

bool gamma_odd_member(const SL2Z& A) {
    return (A.a % 2 == 0 || A.c % 2 == 0) && (A.b % 2 == 0 || A.d % 2 == 0);
}

Word decompose_T2S(const SL2Z& A) {
    if (!gamma_odd_member(A)) throw ValidationError("decompose_T2S: matrix is not in Gamma_odd");
    Word w = euclid(A, 2);
    for (const Token& t : w)
        if (t.kind == Token::TPow && t.k % 2 != 0) throw InvariantError("decompose_T2S: odd T power");
    if (!(word_matrix(w) == A)) throw InvariantError("decompose_T2S: word does not multiply out");
    return w;
}

bool in_gamma1_4(const SL2Z& A) { return A.c % 4 == 0 && ((A.a % 4) + 4) % 4 == 1; }

int iota_lift(const SL2Z& A, long long p) {
    if (!is_prime(p)) throw ValidationError("iota_lift: p must be prime");
    if (p == 2 && !in_gamma1_4(A)) throw ValidationError("iota_lift: p = 2 needs a matrix in Gamma_1(4)");
    if (A.c == 0) return 1;
    long long v = vp(A.c, p);
    if (v == 0) return 1;
    long long ap = A.a;
    while (ap % p == 0) ap /= p;
    return hilbert(Rational(ap), Rational(BigInt(ipow(p, v))), Place::prime(p));
}

Mp2Q2Element i_map(const MpZElement& x) {
    if (x.mat.c == 0) return {x.mat, x.eps};
    return {x.mat, legendre(x.mat.a, odd_part(x.mat.c)) * x.eps};
}

MpZElement gamma4_lift(const SL2Z& A) {
    if (!in_gamma1_4(A)) throw ValidationError("gamma4_lift: matrix is not in Gamma_1(4)");
    if (A.c == 0) return {A, 1};
    long long v = vp(A.c, 2);
    int s = (v % 2 == 1) ? legendre(2, A.a) : 1;
    return {A, s * legendre(A.a, odd_part(A.c))};
}

SL2Z random_sl2z(std::mt19937& g, long long bound) {
    std::uniform_int_distribution<long long> u(-bound, bound);
    for (;;) {  // rejection keeps the distribution uniform
        long long a = u(g), b = u(g), c = u(g), d = u(g);
        if (a * d - b * c == 1) return {a, b, c, d};
    }
}

SL2Z random_gamma_odd(std::mt19937& g, long long bound) {
    for (;;) {
        SL2Z A = random_sl2z(g, bound);
        if (gamma_odd_member(A)) return A;
    }
}

MpZElement random_mp(std::mt19937& g, long long bound) {
    SL2Z A = random_sl2z(g, bound);
    return {A, std::bernoulli_distribution(0.5)(g) ? 1 : -1};
}

}  // namespace weil
