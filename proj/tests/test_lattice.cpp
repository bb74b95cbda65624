#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "weil/errors.hpp"
#include "weil/lattice.hpp"
#include "weil/numth.hpp"

#include <map>
#include <numeric>
#include <set>

using namespace weil;
using testing::lat;

namespace {

// Values v^T G^{-1} v / 2 for v in a box that covers Z^m / G Z^m uniformly.
std::vector<Rational> dual_norms(const GramLattice& L) {
    const RatMatrix Gi = inverse(to_rational(L.gram()));
    const int m = L.rank();
    long long det = static_cast<long long>(L.det());
    det = det < 0 ? -det : det;
    std::vector<Rational> out;
    std::vector<long long> v(static_cast<std::size_t>(m), 0);
    for (;;) {
        RatVector x(m);
        for (int i = 0; i < m; ++i) x(i) = Rational(v[static_cast<std::size_t>(i)]);
        out.push_back((x.transpose() * Gi * x)(0, 0) / 2);
        int i = 0;
        while (i < m && ++v[static_cast<std::size_t>(i)] == det) v[static_cast<std::size_t>(i++)] = 0;
        if (i == m) break;
    }
    return out;
}

bool unimodular_transform_ok(const SmithForm& s, const IntMatrix& A) {
    const auto mul = [](const IntMatrix& x, const IntMatrix& y) {
        IntMatrix z(x.rows(), y.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < y.cols(); ++j) {
                BigInt acc = 0;
                for (Eigen::Index k = 0; k < x.cols(); ++k) acc += x(i, k) * y(k, j);
                z(i, j) = acc;
            }
        return z;
    };
    const IntMatrix P = mul(mul(s.U, A), s.V);
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            if (P(i, j) != s.D(i, j)) return false;
            if (i != j && P(i, j) != 0) return false;
        }
    return true;
}

long long level_oracle(const GramLattice& L) {
    long long N = 1;
    for (const Rational& r : dual_norms(L)) N = std::lcm(N, static_cast<long long>(mp::denominator(r)));
    return N;
}

std::complex<double> milgram_oracle(const GramLattice& L) {
    const auto vals = dual_norms(L);
    long long det = static_cast<long long>(L.det());
    det = det < 0 ? -det : det;
    std::complex<double> s = 0;
    for (const Rational& r : vals) s += testing::e_d(static_cast<double>(r));
    // every class of Z^m / G Z^m appears |box| / det times
    return s * static_cast<double>(det) / static_cast<double>(vals.size());
}

}  // namespace

TEST_CASE("smith normal form") {
    auto snf = smith_normal_form(lat({{2, 1}, {1, 2}}).gram());
    CHECK(snf.D(0, 0) == 1);
    CHECK(snf.D(1, 1) == 3);
    CHECK(unimodular_transform_ok(snf, lat({{2, 1}, {1, 2}}).gram()));
    snf = smith_normal_form(lat({{2, 0}, {0, 4}}).gram());
    CHECK(snf.D(0, 0) == 2);
    CHECK(snf.D(1, 1) == 4);
    const IntMatrix A = lat({{4, 6, 2}, {6, 0, 8}, {2, 8, 10}}).gram();
    snf = smith_normal_form(A);
    CHECK(unimodular_transform_ok(snf, A));
    for (int i = 0; i + 1 < 3; ++i) CHECK(snf.D(i + 1, i + 1) % snf.D(i, i) == 0);
    CHECK(abs(determinant(to_rational(snf.U))) == 1);
    CHECK(abs(determinant(to_rational(snf.V))) == 1);
}

TEST_CASE("lattice validation") {
    CHECK_THROWS_AS(lat({{1, 2}, {3, 4}}), ValidationError);
    CHECK_THROWS_AS(lat({{1, 1}, {1, 1}}), ValidationError);
    CHECK_THROWS_AS(lat({{1, 2}}), ValidationError);
    CHECK(lat({{2}}).is_even());
    CHECK_FALSE(lat({{1, 0}, {0, 2}}).is_even());
}

TEST_CASE("signature and level examples") {
    CHECK(signature(lat({{2}})) == 1);
    CHECK(signature(lat({{0, 1}, {1, 0}})) == 0);
    CHECK(signature(lat({{-2}})) == -1);
    CHECK(signature(lat({{0, 2}, {2, 0}})) == 0);
    CHECK(signature(lat({{0, 1, 0}, {1, 0, 0}, {0, 0, -4}})) == -1);
    CHECK(level(lat({{2}})) == 4);
    CHECK(level(lat({{0, 1}, {1, 0}})) == 1);
    CHECK(level(lat({{2, 1}, {1, 2}})) == 3);
}

TEST_CASE("level and Milgram against the dual-lattice enumeration") {
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        CAPTURE(rows.size());
        CHECK(level(L) == level_oracle(L));
        const DiscriminantForm D = discriminant_form(L);
        const ExactScalar s = milgram_sum(D);
        CHECK(testing::near(testing::approx(s), milgram_oracle(L), 1e-8));
        CHECK(s == zeta8(signature(L)) * sqrt_rat(Rational(D.delta())));
    }
}

TEST_CASE("milgram examples") {
    CHECK(milgram_sum(discriminant_form(lat({{2}}))) == ExactScalar(1) + root_of_unity(1, 4));
    CHECK(milgram_sum(discriminant_form(lat({{0, 1}, {1, 0}}))) == ExactScalar(1));
    CHECK(milgram_sum(discriminant_form(lat({{2, 1}, {1, 2}}))) == root_of_unity(1, 4) * sqrt_rat(Rational(3)));
    CHECK_THROWS_AS(milgram_sum(discriminant_form(lat({{1}}))), ValidationError);
}

TEST_CASE("discriminant form examples") {
    DiscriminantForm D = discriminant_form(lat({{2}}));
    REQUIRE(D.orders() == std::vector<long long>{2});
    CHECK(D.quad_gen(0) == Rational(1, 4));
    CHECK(D.bilinear_gen(0, 0) == Rational(1, 2));
    CHECK(D.level() == 4);

    D = discriminant_form(lat({{0, 1}, {1, 0}}));
    CHECK(D.size() == 1);

    D = discriminant_form(lat({{2, 1}, {1, 2}}));
    REQUIRE(D.orders() == std::vector<long long>{3});
    CHECK((D.quad_gen(0) == Rational(1, 3) || D.quad_gen(0) == Rational(2, 3)));
}

TEST_CASE("discriminant form tables are consistent") {
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        const DiscriminantForm D = discriminant_form(L);
        long long prod = 1;
        for (long long d : D.orders()) prod *= d;
        CHECK(prod == D.delta());
        CHECK(BigInt(D.delta()) == abs(L.det()));
        std::multiset<Rational> from_form, from_oracle;
        for (std::size_t g = 0; g < D.size(); ++g) {
            from_form.insert(D.q(g));
            // nondegeneracy
            bool paired = g == 0;
            for (std::size_t h = 0; h < D.size(); ++h) {
                const Rational polar = frac(D.q(D.add(g, h)) - D.q(g) - D.q(h));
                CHECK(polar == D.b(g, h));
                if (D.b(g, h) != 0) paired = true;
            }
            CHECK(paired);
            CHECK(D.index(D.element(g)) == g);
        }
        // the q-value multiset is an invariant: compare against the dual-lattice box
        std::map<Rational, long long> hist;
        const auto vals = dual_norms(L);
        for (const Rational& r : vals) ++hist[frac(r)];
        const long long rep = static_cast<long long>(vals.size()) / D.delta();
        for (auto& [r, k] : hist) {
            REQUIRE(k % rep == 0);
            for (long long i = 0; i < k / rep; ++i) from_oracle.insert(r);
        }
        CHECK(from_form == from_oracle);
    }
}

TEST_CASE("odd lattices: q is defined mod 1/2") {
    for (const auto& rows : testing::odd_corpus()) {
        const DiscriminantForm D = discriminant_form(lat(rows));
        CHECK_FALSE(D.is_even());
        const RatMatrix G = to_rational(D.gram());
        for (std::size_t g = 0; g < D.size(); ++g) {
            const RatVector x = D.lift(g);
            CHECK(frac((x.transpose() * G * x)(0, 0) / 2) == D.q(g));
            // another lift of the same class moves the norm by a multiple of 1/2 only
            for (int i = 0; i < D.rank(); ++i) {
                RatVector y = x;
                y(i) += 1;
                CHECK(frac((y.transpose() * G * y)(0, 0) - 2 * D.q(g)) == 0);
            }
        }
    }
}

TEST_CASE("direct sums give orthogonal sums of forms") {
    const auto& C = testing::even_corpus();
    for (std::size_t i = 0; i < C.size(); ++i)
        for (std::size_t j = i; j < C.size(); j += 3) {
            const GramLattice A = lat(C[i]), B = lat(C[j]);
            const DiscriminantForm DA = discriminant_form(A), DB = discriminant_form(B);
            const DiscriminantForm DS = discriminant_form(direct_sum(A, B));
            CHECK(DS.delta() == DA.delta() * DB.delta());
            CHECK(DS.level() == std::lcm(DA.level(), DB.level()));
            CHECK(DS.signature() == DA.signature() + DB.signature());
            std::multiset<Rational> lhs, rhs;
            for (std::size_t g = 0; g < DS.size(); ++g) lhs.insert(DS.q(g));
            for (std::size_t g = 0; g < DA.size(); ++g)
                for (std::size_t h = 0; h < DB.size(); ++h) rhs.insert(frac(DA.q(g) + DB.q(h)));
            CHECK(lhs == rhs);
            CHECK(milgram_sum(DS) == milgram_sum(DA) * milgram_sum(DB));
        }
}

TEST_CASE("p-parts") {
    DiscriminantForm A1 = discriminant_form(lat({{2}}));
    CHECK(p_part(A1, 2).form.size() == 2);
    CHECK(p_part(A1, 3).form.size() == 1);
    DiscriminantForm D = discriminant_form(lat({{2, 0}, {0, 6}}));
    PPart p3 = p_part(D, 3), p2 = p_part(D, 2);
    CHECK(p3.form.size() == 3);
    CHECK(p2.form.size() == 4);
    for (std::size_t i = 0; i < p3.form.size(); ++i) {
        CHECK(p3.projection[p3.inclusion[i]] == i);
        CHECK(D.q(p3.inclusion[i]) == p3.form.q(i));
    }
    // orthogonality of the decomposition
    for (std::size_t i = 0; i < p2.form.size(); ++i)
        for (std::size_t k = 0; k < p3.form.size(); ++k) CHECK(D.b(p2.inclusion[i], p3.inclusion[k]) == 0);
}

TEST_CASE("interesting primes") {
    CHECK(interesting_primes(lat({{2}})) == std::vector<long long>{2});
    CHECK(interesting_primes(lat({{0, 1}, {1, 0}})).empty());
    CHECK(interesting_primes(lat({{2, 1}, {1, 2}})) == std::vector<long long>{3});
    CHECK(interesting_primes(lat({{2, 0}, {0, 6}})) == std::vector<long long>{2, 3});
}

TEST_CASE("level predicates over the even corpus") {
    for (const auto& rows : testing::even_corpus()) {
        const GramLattice L = lat(rows);
        const DiscriminantForm D = discriminant_form(L);
        const long long N = D.level(), delta = D.delta();
        for (long long p = 2; p <= 50; ++p)
            if (is_prime(p)) CHECK((delta % p == 0) == (N % p == 0));
        if (L.rank() % 2 == 1) CHECK(N % 4 == 0);
        CHECK((2 * delta) % N == 0);
        CHECK(delta % D.exponent() == 0);
    }
}

TEST_CASE("c-subsets") {
    DiscriminantForm A1 = discriminant_form(lat({{2}}));
    CSubsets s = subsets_c(A1, 2);
    CHECK(s.kernel.size() == 2);
    CHECK(s.image == std::vector<std::size_t>{0});
    s = subsets_c(A1, 1);
    CHECK(s.kernel == std::vector<std::size_t>{0});
    CHECK(s.image.size() == 2);
    s = subsets_c(discriminant_form(lat({{2, 1}, {1, 2}})), 3);
    CHECK(s.kernel.size() == 3);
    CHECK(s.image.size() == 1);
    s = subsets_c(A1, 0);
    CHECK(s.kernel.size() == 2);
    CHECK(s.image.size() == 1);

    for (const auto& rows : testing::even_corpus()) {
        const DiscriminantForm D = discriminant_form(lat(rows));
        for (long long c = -12; c <= 12; ++c) {
            if (c == 0) continue;
            s = subsets_c(D, c);
            CHECK(static_cast<long long>(s.kernel.size() * s.image.size()) == D.delta());
            const std::set<std::size_t> K(s.kernel.begin(), s.kernel.end()), I(s.image.begin(), s.image.end());
            for (std::size_t x : s.kernel)
                for (std::size_t y : s.kernel) CHECK(K.count(D.add(x, y)));
            // the image is the orthogonal complement of the kernel
            for (std::size_t x : s.image)
                for (std::size_t y : s.kernel) CHECK(D.b(x, y) == 0);
            for (std::size_t g = 0; g < D.size(); ++g) CHECK(I.count(D.scale(g, c)));
        }
    }
}

TEST_CASE("coset D^{c*}") {
    DiscriminantForm A1 = discriminant_form(lat({{2}}));
    CHECK(coset_Dcstar(A1, 1).size() == 2);
    CHECK(coset_Dcstar(A1, 2) == std::vector<std::size_t>{1});
    DiscriminantForm U = discriminant_form(lat({{0, 1}, {1, 0}}));
    for (long long c = 1; c <= 5; ++c) CHECK(coset_Dcstar(U, c) == std::vector<std::size_t>{0});

    for (const auto& rows : testing::even_corpus()) {
        const DiscriminantForm D = discriminant_form(lat(rows));
        for (long long c = -12; c <= 12; ++c) {
            if (c == 0) continue;
            const auto cs = coset_Dcstar(D, c);
            const CSubsets s = subsets_c(D, c);
            CHECK(cs.size() == s.image.size());
            // brute-force membership
            std::size_t count = 0;
            for (std::size_t beta = 0; beta < D.size(); ++beta) {
                bool in = true;
                for (std::size_t mu : s.kernel)
                    if (frac(Rational(c) * D.q(mu) + D.b(beta, mu)) != 0) in = false;
                CHECK(in == in_Dcstar(D, c, beta));
                count += in;
            }
            CHECK(count == cs.size());
        }
    }
}

TEST_CASE("beta_c^2/2 examples and independence of alpha") {
    DiscriminantForm A1 = discriminant_form(lat({{2}}));
    CHECK(beta_c_sq_half(A1, 2, 1, 1) == 0);
    CHECK(beta_c_sq_half(A1, 1, 0, 1) == Rational(1, 4));
    CHECK_THROWS_AS(beta_c_sq_half(A1, 2, 1, 0), ValidationError);

    for (const auto& rows : testing::even_corpus()) {
        const DiscriminantForm D = discriminant_form(lat(rows));
        for (long long c = 1; c <= 8; ++c) {
            const auto cs = coset_Dcstar(D, c);
            const std::size_t xc = cs.front();
            for (std::size_t beta : cs) {
                // every alpha with x_c + c alpha = beta gives the same value
                std::set<Rational> vals;
                for (std::size_t alpha = 0; alpha < D.size(); ++alpha)
                    if (D.add(xc, D.scale(alpha, c)) == beta)
                        vals.insert(frac(Rational(c) * D.q(alpha) + D.b(xc, alpha)));
                REQUIRE(vals.size() == 1);
                CHECK(*vals.begin() == beta_c_sq_half(D, c, xc, beta));
            }
        }
    }
}

TEST_CASE("enumeration cap") {
    CHECK_THROWS_AS(discriminant_form(lat({{400, 0}, {0, 400}})), CapError);
}
