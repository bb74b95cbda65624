#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "weil/errors.hpp"
#include "weil/jordan.hpp"
#include "weil/numth.hpp"

#include <numeric>
#include <random>

using namespace weil;
using testing::approx;
using testing::lat;
using testing::near;

namespace {

long long pow_ll(long long b, long long e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// p-part of n/d mod 1 in doubles: write d = p^k d', return (n * d'^{-1} mod p^k) / p^k
double p_frac_oracle(const Rational& x, long long p) {
    long long n = static_cast<long long>(mp::numerator(x)), d = static_cast<long long>(mp::denominator(x));
    long long pk = 1;
    while (d % p == 0) {
        d /= p;
        pk *= p;
    }
    if (pk == 1) return 0;
    long long inv = 1;
    for (long long t = 1; t < pk; ++t)
        if ((d % pk) * t % pk == 1) inv = t;
    long long r = ((n % pk) * inv % pk + pk) % pk;
    return static_cast<double>(r) / static_cast<double>(pk);
}

// sum over M/p^v M of chi_p(a/c eta^2/2 + a (x, eta)/c), in doubles
std::complex<double> gauss_oracle(const GramLattice& L, long long p, long long a, long long c, const RatVector& x) {
    const int m = L.rank();
    long long v = 0;
    for (long long t = c < 0 ? -c : c; t % p == 0; t /= p) ++v;
    const long long pv = pow_ll(p, v);
    const RatMatrix G = to_rational(L.gram());
    std::vector<long long> eta(static_cast<std::size_t>(m), 0);
    std::complex<double> s = 0;
    for (;;) {
        RatVector e(m);
        for (int i = 0; i < m; ++i) e(i) = Rational(eta[static_cast<std::size_t>(i)]);
        const Rational arg = Rational(a) / Rational(c) * ((e.transpose() * G * e)(0, 0) / 2 + (x.transpose() * G * e)(0, 0));
        s += testing::e_d(p_frac_oracle(arg, p));
        int i = 0;
        while (i < m && ++eta[static_cast<std::size_t>(i)] == pv) eta[static_cast<std::size_t>(i++)] = 0;
        if (i == m) break;
    }
    return s;
}

// gamma(M_p) from sum_{gamma in D_M} chi_p(q(gamma)) = gamma(M_p) sqrt|D_p| |D_{p'}|
std::complex<double> weil_index_oracle(const GramLattice& L, long long p) {
    const RatMatrix Gi = inverse(to_rational(L.gram()));
    const int m = L.rank();
    long long det = static_cast<long long>(abs(L.det()));
    std::vector<long long> v(static_cast<std::size_t>(m), 0);
    std::complex<double> s = 0;
    long long count = 0;
    for (;;) {
        RatVector x(m);
        for (int i = 0; i < m; ++i) x(i) = Rational(v[static_cast<std::size_t>(i)]);
        s += testing::e_d(p_frac_oracle((x.transpose() * Gi * x)(0, 0) / 2, p));
        ++count;
        int i = 0;
        while (i < m && ++v[static_cast<std::size_t>(i)] == det) v[static_cast<std::size_t>(i++)] = 0;
        if (i == m) break;
    }
    s *= static_cast<double>(det) / static_cast<double>(count);
    long long dp = 1;
    while (det % p == 0) {
        det /= p;
        dp *= p;
    }
    return s / (std::sqrt(static_cast<double>(dp)) * static_cast<double>(det));
}

RatMatrix block_gram(const JordanDecomposition& jd, const GramLattice& L) {
    const RatMatrix G = to_rational(L.gram());
    const Eigen::Index m = jd.basis.cols();
    RatMatrix B(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) B(i, j) = (jd.basis.col(i).transpose() * G * jd.basis.col(j))(0, 0);
    return B;
}

GramLattice change_basis(const GramLattice& L, const std::vector<std::vector<long long>>& P) {
    const int m = L.rank();
    std::vector<std::vector<long long>> rows(static_cast<std::size_t>(m), std::vector<long long>(static_cast<std::size_t>(m), 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            long long s = 0;
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    s += P[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                         static_cast<long long>(L.gram()(k, l)) * P[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
    return GramLattice::from_rows(rows);
}

std::vector<GramLattice> all_corpus() {
    std::vector<GramLattice> out;
    for (const auto& r : testing::even_corpus()) out.push_back(lat(r));
    for (const auto& r : testing::odd_corpus()) out.push_back(lat(r));
    return out;
}

}  // namespace

TEST_CASE("decomposition examples") {
    JordanDecomposition jd = jordan_decompose(lat({{2}}), 2);
    REQUIRE(jd.components.size() == 1);
    CHECK(jd.components[0].symbol() == "2^+1_1");
    jd = jordan_decompose(lat({{0, 1}, {1, 0}}), 2);
    REQUIRE(jd.components.size() == 1);
    CHECK(jd.components[0].symbol() == "1^+2_II");
    jd = jordan_decompose(lat({{2, 1}, {1, 2}}), 3);
    REQUIRE(jd.components.size() == 2);
    CHECK(jd.components[0].q() == 1);
    CHECK(jd.components[1].q() == 3);
    CHECK(jd.components[1].n == 1);
    jd = jordan_decompose(lat({{1}}), 2);
    REQUIRE(jd.components.size() == 1);
    CHECK(jd.components[0].odd);
    CHECK(jd.components[0].t == 1);
    CHECK_THROWS_AS(jordan_decompose(lat({{2}}), 4), ValidationError);
}

TEST_CASE("decompositions recompose and satisfy symbol invariants") {
    for (const GramLattice& L : all_corpus())
        for (long long p : {2LL, 3LL, 5LL, 7LL}) {
            const JordanDecomposition jd = jordan_decompose(L, p);
            const RatMatrix B = block_gram(jd, L);
            int total = 0;
            BigInt pdelta = 1;
            for (std::size_t k = 0; k < jd.components.size(); ++k) {
                const JordanComponent& comp = jd.components[k];
                total += comp.n;
                for (int i = 0; i < comp.n; ++i) pdelta *= comp.q();
                if (k > 0) CHECK(comp.e > jd.components[k - 1].e);
                if (p == 2 && comp.odd) {
                    CHECK((comp.t - comp.n) % 2 == 0);
                    if (comp.n == 1) CHECK(comp.eps == ((comp.t == 1 || comp.t == 7) ? 1 : -1));
                }
                if (p == 2 && !comp.odd) CHECK(comp.n % 2 == 0);
                // block entries over q have a p-unit determinant
                const auto& cols = jd.columns[k];
                RatMatrix blk(comp.n, comp.n);
                for (int i = 0; i < comp.n; ++i)
                    for (int j = 0; j < comp.n; ++j)
                        blk(i, j) = B(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]) / Rational(comp.q());
                CHECK(valuation_split(determinant(blk), p).valuation == 0);
                // orthogonal to every other block
                for (std::size_t k2 = 0; k2 < jd.components.size(); ++k2) {
                    if (k2 == k) continue;
                    for (int i : cols)
                        for (int j : jd.columns[k2]) CHECK(B(i, j) == 0);
                }
            }
            CHECK(total == L.rank());
            BigInt dp = 1, det = abs(L.det());
            while (det % p == 0) {
                det /= p;
                dp *= p;
            }
            CHECK(pdelta == dp);
        }
}

TEST_CASE("component Weil indices") {
    JordanComponent c2{2, 1, 1, 1, true, 1};
    CHECK(weil_index_component(c2) == zeta8(1));
    JordanComponent c3{3, 1, 1, 1, false, 0};
    CHECK(weil_index_component(c3) == root_of_unity(-1, 4));
    JordanComponent u{2, 0, 2, 1, false, 0};
    CHECK(weil_index_component(u) == ExactScalar(1));
    CHECK(weil_index_scaled(c3, 2) == root_of_unity(1, 4));
    CHECK(weil_index_scaled(c2, 3) == -zeta8(3));
    CHECK(weil_index_scaled(c2, 1) == weil_index_component(c2));
    CHECK_THROWS_AS(weil_index_scaled(c3, 3), ValidationError);
}

TEST_CASE("scaled components agree with the scaling rule") {
    for (const GramLattice& L : all_corpus())
        for (long long p : {2LL, 3LL, 5LL}) {
            for (const JordanComponent& comp : jordan_decompose(L, p).components) {
                if (p == 2 && comp.odd && comp.e == 0 && !L.is_even()) continue;
                for (long long a : {1LL, -1LL, 3LL, 5LL, 7LL, -3LL, 11LL}) {
                    if (a % p == 0) continue;
                    CHECK(weil_index_component(scale_component(comp, a)) == weil_index_scaled(comp, a));
                }
                // q and p^2 q carry the same index
                JordanComponent up = comp;
                up.e += 2;
                CHECK(weil_index_component(up) == weil_index_component(comp));
            }
        }
}

TEST_CASE("lattice Weil indices") {
    CHECK(weil_index_lattice(lat({{2}}), 2) == zeta8(1));
    CHECK(weil_index_lattice(lat({{0, 1}, {1, 0}}), 2) == ExactScalar(1));
    CHECK(weil_index_lattice(lat({{2, 1}, {1, 2}}), 3) == zeta8(2));
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        ExactScalar prod(1);
        for (long long p : {2LL, 3LL, 5LL, 7LL}) {
            const ExactScalar g = weil_index_lattice(L, p);
            CHECK(near(approx(g), weil_index_oracle(L, p), 1e-8));
            prod *= g;
            const GramLattice Lm = scaled(L, -1);
            CHECK(weil_index_lattice(Lm, p) == g.conj());
            if (p != 2) {
                long long dp = 1;
                for (long long d = static_cast<long long>(abs(L.det())); d % p == 0; d /= p) dp *= p;
                CHECK(g * g == ExactScalar(legendre(-1, dp)));
            }
        }
        CHECK(prod == zeta8(signature(L)));
    }
}

TEST_CASE("indices multiply over direct sums") {
    const auto& C = testing::even_corpus();
    for (std::size_t i = 0; i < C.size(); ++i)
        for (std::size_t j = i; j < C.size(); j += 2) {
            const GramLattice A = lat(C[i]), B = lat(C[j]), S = direct_sum(A, B);
            for (long long p : {2LL, 3LL}) {
                CHECK(weil_index_lattice(S, p) == weil_index_lattice(A, p) * weil_index_lattice(B, p));
                for (long long c : {2LL, 3LL, 4LL}) {
                    if (S.rank() > 3 && c > 2) continue;
                    CHECK(gauss_sum_brute(S, p, 1, c) == gauss_sum_brute(A, p, 1, c) * gauss_sum_brute(B, p, 1, c));
                }
            }
        }
}

TEST_CASE("x_c examples") {
    const GramLattice A1 = lat({{2}});
    const DiscriminantForm D = discriminant_form(A1);
    const JordanDecomposition jd = jordan_decompose(A1, 2);
    XcChoice x = choose_xc(jd, D, 2);
    CHECK(x.element == 1);
    CHECK(x.t == 1);
    CHECK(choose_xc(jd, D, 1).element == 0);
    const GramLattice U = lat({{0, 1}, {1, 0}});
    for (long long c : {1LL, 2LL, 4LL}) CHECK(choose_xc(jordan_decompose(U, 2), discriminant_form(U), c).element == 0);
    CHECK(xc_phase(jd, 1, 2) == zeta8(1));
    CHECK(xc_phase(jd, 3, 2) == zeta8(3));
    CHECK(xc_phase(jordan_decompose(U, 2), 1, 2) == ExactScalar(1));
    CHECK_THROWS_AS(choose_xc(jd, D, 0), ValidationError);
}

TEST_CASE("x_c lies in D^{c*} and its phase matches direct evaluation") {
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        const DiscriminantForm D = discriminant_form(L);
        const JordanDecomposition jd = jordan_decompose(L, 2);
        for (long long c = 1; c <= 16; ++c) {
            const XcChoice x = choose_xc(jd, D, c);
            CHECK(in_Dcstar(D, c, x.element));
            for (long long a : {1LL, 3LL, -1LL, 5LL}) {
                if (c % 2 == 0 && a % 2 == 0) continue;
                CHECK(xc_phase(jd, a, c) == xc_phase_direct(jd, L, a, c));
            }
        }
    }
}

TEST_CASE("Gauss sum examples") {
    const GramLattice A1 = lat({{2}});
    CHECK(gauss_sum_closed(A1, 2, 1, 2) == ExactScalar(2));
    CHECK(gauss_sum_brute(A1, 2, 1, 2) == ExactScalar(2));
    CHECK(gauss_sum_brute(A1, 2, 1, 3) == ExactScalar(1));
    CHECK(gauss_sum_closed(A1, 2, 1, 4) == gauss_sum_brute(A1, 2, 1, 4));
    CHECK_THROWS_AS(gauss_sum_closed(A1, 2, 2, 4), ValidationError);
}

TEST_CASE("Gauss sums: closed form against two brute-force sums") {
    for (const GramLattice& L : all_corpus())
        for (long long p : {2LL, 3LL, 5LL}) {
            const JordanDecomposition jd = jordan_decompose(L, p);
            const DiscriminantForm D = discriminant_form(L);
            for (long long c = -8; c <= 8; ++c) {
                if (c == 0) continue;
                for (long long a = -8; a <= 8; ++a) {
                    if (std::gcd(a, c) != 1) continue;
                    CAPTURE(p);
                    CAPTURE(a);
                    CAPTURE(c);
                    const ExactScalar closed = gauss_sum_closed(jd, L.rank(), a, c);
                    CHECK(closed == gauss_sum_brute(L, p, a, c));
                    if (c > 0 && (a == 1 || a == -3)) {
                        const RatVector x = p == 2 ? choose_xc(jd, D, c).lift : RatVector::Constant(L.rank(), Rational(0));
                        CHECK(near(approx(closed), gauss_oracle(L, p, a, c, x), 1e-7));
                    }
                }
            }
        }
}

TEST_CASE("Gauss sums after a change of basis") {
    // x_c is built from the decomposition found for the given basis, so the sum itself may
    // move by a root of unity; closed and brute force must agree for every basis and the
    // absolute value is basis-free
    const std::vector<std::vector<std::vector<long long>>> changes = {
        {{1, 1}, {0, 1}}, {{2, 1}, {1, 1}}, {{0, 1}, {-1, 0}}, {{1, -3}, {1, -2}}};
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        if (L.rank() != 2) continue;
        for (const auto& P : changes) {
            const GramLattice L2 = change_basis(L, P);
            for (long long p : {2LL, 3LL})
                for (long long c = 1; c <= 8; ++c)
                    for (long long a : {1LL, 3LL, 5LL, -1LL}) {
                        if (std::gcd(a, c) != 1) continue;
                        const ExactScalar g1 = gauss_sum_closed(L, p, a, c), g2 = gauss_sum_closed(L2, p, a, c);
                        CHECK(g2 == gauss_sum_brute(L2, p, a, c));
                        CHECK(g1 * g1.conj() == g2 * g2.conj());
                        if (p != 2) CHECK(g1 == g2);
                    }
        }
    }
}

TEST_CASE("delta_Mp_c matches the subgroup count") {
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        const DiscriminantForm D = discriminant_form(L);
        for (long long c = 1; c <= 12; ++c) {
            long long prod = 1;
            for (long long p : {2LL, 3LL, 5LL, 7LL}) prod *= delta_Mp_c(jordan_decompose(L, p), c);
            CHECK(prod == static_cast<long long>(subsets_c(D, c).kernel.size()));
        }
    }
}

TEST_CASE("random forms: recomposition and index product") {
    std::mt19937 g(12);
    std::uniform_int_distribution<long long> u(-6, 6);
    int done = 0;
    while (done < 40) {
        long long a = 2 * u(g), b = u(g), d = 2 * u(g);
        if (a * d - b * b == 0) continue;
        const GramLattice L = lat({{a, b}, {b, d}});
        if (abs(L.det()) > 60) continue;
        ++done;
        ExactScalar prod(1);
        for (long long p : prime_factors(BigInt(2) * L.det())) prod *= weil_index_lattice(L, p);
        CHECK(prod == zeta8(signature(L)));
    }
}
