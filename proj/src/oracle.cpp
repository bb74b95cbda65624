// Independent evaluations of the representation: generator words and the r0 sum.
#include "weil/errors.hpp"
#include "weil/numth.hpp"
#include "weil/weilrep.hpp"

#include <map>
#include <numeric>

namespace weil {

namespace {

// Matrix over Z[x]/(x^H + 1), H = R/2, which maps onto Z[zeta_R].
class GroupRingMatrix {
public:
    GroupRingMatrix(std::size_t n, long long R) : n_(n), R_(R), H_(R / 2), v_(n * n * (R / 2), 0) {
        for (std::size_t i = 0; i < n; ++i) at(i, i)[0] = 1;
    }

    long long* at(std::size_t r, std::size_t c) { return &v_[(r * n_ + c) * H_]; }
    const long long* at(std::size_t r, std::size_t c) const { return &v_[(r * n_ + c) * H_]; }
    std::size_t dim() const { return n_; }
    long long order() const { return R_; }

    // dst += x^k * src
    void add_shifted(long long* dst, const long long* src, long long k) const {
        k = mod_pos(k, R_);
        for (long long j = 0; j < H_; ++j) {
            if (!src[j]) continue;
            long long e = j + k;
            long long val = src[j];
            if (e >= R_) e -= R_;
            if (e >= H_) {
                e -= H_;
                val = -val;
            }
            if (__builtin_add_overflow(dst[e], val, &dst[e])) throw CapError("oracle: coefficient overflow");
        }
    }

    // column c *= x^k
    void rotate_column(std::size_t c, long long k) {
        std::vector<long long> tmp(static_cast<std::size_t>(H_));
        for (std::size_t r = 0; r < n_; ++r) {
            std::fill(tmp.begin(), tmp.end(), 0);
            add_shifted(tmp.data(), at(r, c), k);
            std::copy(tmp.begin(), tmp.end(), at(r, c));
        }
    }

    void negate() {
        for (auto& x : v_) x = -x;
    }

    std::vector<long long> full(std::size_t r, std::size_t c) const {
        std::vector<long long> out(static_cast<std::size_t>(R_), 0);
        std::copy(at(r, c), at(r, c) + H_, out.begin());
        return out;
    }

    std::vector<long long>& raw() { return v_; }

    // rewrite every entry in the canonical basis of Z[zeta_R] to stop coefficient growth
    void reduce() {
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c) {
                ExactScalar e = ExactScalar::from_group_ring(static_cast<int>(R_), full(r, c));
                if (e.order() != R_) e = e.embed(static_cast<int>(R_));
                const auto coeffs = e.coeffs();
                long long* dst = at(r, c);
                std::fill(dst, dst + H_, 0);
                for (std::size_t k = 0; k < coeffs.size(); ++k) {
                    if (mp::denominator(coeffs[k]) != 1) throw InvariantError("oracle: non-integral reduction");
                    dst[k] = static_cast<long long>(mp::numerator(coeffs[k]));
                }
            }
    }

private:
    std::size_t n_;
    long long R_, H_;
    std::vector<long long> v_;
};

}  // namespace

WeilOperator rho_oracle(const LatticeData& ld, const MpZElement& x) {
    const DiscriminantForm& D = ld.form();
    const bool odd = !ld.is_even();
    const Word w = odd ? decompose_T2S(x.mat) : decompose_ST(x.mat);
    const MpZElement we = word_element(w);
    if (!(we.mat == x.mat)) throw InvariantError("rho_oracle: word does not multiply out");

    const long long den = D.denom();
    const long long R = std::lcm(den, 8LL);
    const long long per_q = R / den, per8 = R / 8;
    const std::size_t n = D.size();
    GroupRingMatrix M(n, R);
    int s = 0;  // pending factors 1/sqrt(Delta)

    for (const Token& t : w) {
        if (t.kind == Token::TPow) {
            if (odd && t.k % 2 != 0) throw InvariantError("rho_oracle: odd T power on an odd lattice");
            const long long k = mod_pos(t.k, 2 * den);
            for (std::size_t g = 0; g < n; ++g) M.rotate_column(g, mod_pos(k * D.q_num(g), den) * per_q);
            continue;
        }
        // right multiplication by rho(S^{+-1}); the adjoint conjugates every phase
        const long long sign = t.kind == Token::S ? 1 : -1;
        GroupRingMatrix out(n, R);
        std::fill(out.raw().begin(), out.raw().end(), 0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t g = 0; g < n; ++g)
                for (std::size_t d = 0; d < n; ++d)
                    out.add_shifted(out.at(r, g), M.at(r, d),
                                    sign * (-D.b_num(g, d) * per_q - D.signature() * per8));
        M = std::move(out);
        M.reduce();
        ++s;
    }
    // (I, -1) acts by (-1)^sgn
    if (we.eps != x.eps && mod_pos(D.signature(), 2) == 1) M.negate();

    const Rational inv_delta = Rational(1) / Rational(ld.delta());
    ExactScalar scale(1);
    for (int i = 0; i < s / 2; ++i) scale *= ExactScalar(inv_delta);
    if (s % 2) scale *= sqrt_rat(inv_delta);

    WeilOperator out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t g = 0; g < n; ++g)
            out(r, g) = ExactScalar::from_group_ring(static_cast<int>(R), M.full(r, g)) * scale;
    return out;
}

WeilOperator r0_direct(const LatticeData& ld, const SL2Z& A) {
    if (A.c == 0) throw ValidationError("r0_direct: c must be nonzero");
    const DiscriminantForm& D = ld.form();
    const int m = ld.rank();
    const long long ac = A.c < 0 ? -A.c : A.c;
    long double terms = static_cast<long double>(D.size()) * static_cast<long double>(D.size());
    long double eta_count = 1;
    for (int i = 0; i < m; ++i) eta_count *= static_cast<long double>(ac);
    if (eta_count > 1e6 || eta_count * terms > 2e7) throw CapError("r0_direct: enumeration cap exceeded");

    const RatMatrix G = to_rational(ld.lattice().gram());
    const Rational c(A.c), a(A.a), d(A.d);
    const std::size_t n = D.size();
    WeilOperator out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t g = 0; g < n; ++g) {
        const RatVector gl = D.lift(g);
        const Rational g2 = (gl.transpose() * G * gl)(0, 0);
        for (std::size_t dl = 0; dl < n; ++dl) {
            const RatVector base = D.lift(dl);
            std::map<Rational, long long> hist;
            std::vector<long long> eta(static_cast<std::size_t>(m), 0);
            for (;;) {
                RatVector v = base;
                for (int i = 0; i < m; ++i) v(i) += Rational(eta[static_cast<std::size_t>(i)]);
                const Rational gv = (gl.transpose() * G * v)(0, 0);
                const Rational v2 = (v.transpose() * G * v)(0, 0);
                ++hist[frac(d / c * g2 / 2 - gv / c + a / c * v2 / 2)];
                int i = 0;
                while (i < m && ++eta[static_cast<std::size_t>(i)] == ac) eta[static_cast<std::size_t>(i++)] = 0;
                if (i == m) break;
            }
            long long L = 1;
            for (const auto& [r, k] : hist) L = std::lcm(L, static_cast<long long>(mp::denominator(r)));
            std::vector<long long> coeffs(static_cast<std::size_t>(L), 0);
            for (const auto& [r, k] : hist)
                coeffs[static_cast<std::size_t>(mp::numerator(r) * (L / static_cast<long long>(mp::denominator(r))))] += k;
            out(static_cast<Eigen::Index>(dl), static_cast<Eigen::Index>(g)) =
                ExactScalar::from_group_ring(static_cast<int>(L), coeffs);
        }
    }
    Rational norm = Rational(1) / Rational(D.delta());
    for (int i = 0; i < m; ++i) norm /= Rational(ac);
    const ExactScalar scale = sqrt_rat(norm);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = out(i) * scale;
    return out;
}

bool braun_check(const LatticeData& ld, long long c) {
    const long long N = ld.level();
    if (c == 0 || c % N != 0) throw ValidationError("braun_check: N must divide the nonzero c");
    const int m = ld.rank();
    const long long ac = c < 0 ? -c : c;
    long double count = 1;
    for (int i = 0; i < m; ++i) count *= static_cast<long double>(ac);
    if (count > 1e6) throw CapError("braun_check: enumeration cap exceeded");
    const IntMatrix& G = ld.lattice().gram();
    const long long R = 2 * ac;
    std::vector<long long> coeffs(static_cast<std::size_t>(R), 0);
    std::vector<long long> eta(static_cast<std::size_t>(m), 0);
    for (;;) {
        long long n2 = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                n2 += static_cast<long long>(G(i, j)) * eta[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(j)];
        // e(n2 / 2c)
        long long k = mod_pos(c > 0 ? n2 : -n2, R);
        ++coeffs[static_cast<std::size_t>(k)];
        int i = 0;
        while (i < m && ++eta[static_cast<std::size_t>(i)] == ac) eta[static_cast<std::size_t>(i++)] = 0;
        if (i == m) break;
    }
    const ExactScalar lhs = ExactScalar::from_group_ring(static_cast<int>(R), coeffs);
    Rational rad = Rational(ld.delta());
    for (int i = 0; i < m; ++i) rad *= Rational(ac);
    ExactScalar rhs = zeta8(ld.sgn()) * sqrt_rat(rad);
    if (c < 0) rhs = rhs.conj();
    return lhs == rhs;
}

}  // namespace weil
