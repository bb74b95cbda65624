#pragma once

#include "weil/numth.hpp"

#include <random>
#include <string>
#include <vector>

namespace weil {

struct SL2Z {
    long long a = 1, b = 0, c = 0, d = 1;

    static SL2Z make(long long a, long long b, long long c, long long d);  // checks ad - bc = 1
    static SL2Z T(long long k = 1) { return {1, k, 0, 1}; }
    static SL2Z S() { return {0, -1, 1, 0}; }
    static SL2Z minus_identity() { return {-1, 0, 0, -1}; }

    SL2Z inverse() const { return {d, -b, -c, a}; }
    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
    std::string to_string() const;
    friend bool operator==(const SL2Z&, const SL2Z&) = default;
};
SL2Z operator*(const SL2Z& x, const SL2Z& y);  // throws CapError on int64 overflow

// 2x2 matrix over Q with determinant 1
struct Mat2Q {
    Rational a, b, c, d;
    static Mat2Q from(const SL2Z& m);
};
Mat2Q operator*(const Mat2Q& x, const Mat2Q& y);

int kubota_cocycle(const Mat2Q& A, const Mat2Q& B, Place place);
inline int kubota_cocycle(const SL2Z& A, const SL2Z& B, Place place) {
    return kubota_cocycle(Mat2Q::from(A), Mat2Q::from(B), place);
}
int cgxde_form(const Rational& c, const Rational& g, const Rational& d, const Rational& e, Place place);
// the fifth-case expression (c,g)(ce+dg,-cg) it rewrites
int cgxde_direct(const Rational& c, const Rational& g, const Rational& d, const Rational& e, Place place);

// (A, eps sqrt j(A, tau)) with the branch of argument in [-pi/2, pi/2)
struct MpZElement {
    SL2Z mat;
    int eps = 1;
    friend bool operator==(const MpZElement&, const MpZElement&) = default;
};
MpZElement mp_mul(const MpZElement& x, const MpZElement& y);
MpZElement mp_inv(const MpZElement& x);
MpZElement mp_pow(const MpZElement& x, long long k);
MpZElement mp_T(long long k = 1);
MpZElement mp_S();
MpZElement mp_Z();  // S^2

// sign of sqrt j(A,B tau) sqrt j(B,tau) / sqrt j(AB,tau) at tau = i
int branch_sign_at_i(const SL2Z& A, const SL2Z& B);

struct Token {
    enum Kind { TPow, S, SInv } kind = TPow;
    long long k = 0;  // exponent for TPow
    friend bool operator==(const Token&, const Token&) = default;
};
using Word = std::vector<Token>;
SL2Z word_matrix(const Word& w);
MpZElement word_element(const Word& w);  // product of (T^k, +1), (S, +1), (S, +1)^{-1}
std::string word_string(const Word& w);

Word decompose_ST(const SL2Z& A);
bool gamma_odd_member(const SL2Z& A);
Word decompose_T2S(const SL2Z& A);  // only T^{2k} and S^{+-1} tokens

bool in_gamma1_4(const SL2Z& A);
int iota_lift(const SL2Z& A, long long p);

struct Mp2Q2Element {
    SL2Z mat;
    int eps = 1;
};
Mp2Q2Element i_map(const MpZElement& x);
MpZElement gamma4_lift(const SL2Z& A);

// uniform over matrices with all |entries| <= bound
SL2Z random_sl2z(std::mt19937& g, long long bound);
SL2Z random_gamma_odd(std::mt19937& g, long long bound);
MpZElement random_mp(std::mt19937& g, long long bound);

}  // namespace weil
