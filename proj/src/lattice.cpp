#include "weil/lattice.hpp"
#include "weil/errors.hpp"
#include "weil/numth.hpp"

#include <algorithm>
#include <numeric>

namespace weil {

namespace {

void swap_rows(IntMatrix& A, Eigen::Index i, Eigen::Index j) {
    if (i != j) A.row(i).swap(A.row(j));
}
void swap_cols(IntMatrix& A, Eigen::Index i, Eigen::Index j) {
    if (i != j) A.col(i).swap(A.col(j));
}
// row_i += k * row_j
void add_row(IntMatrix& A, Eigen::Index i, Eigen::Index j, const BigInt& k) {
    for (Eigen::Index c = 0; c < A.cols(); ++c) A(i, c) += k * A(j, c);
}
void add_col(IntMatrix& A, Eigen::Index i, Eigen::Index j, const BigInt& k) {
    for (Eigen::Index r = 0; r < A.rows(); ++r) A(r, i) += k * A(r, j);
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw ValidationError("smith_normal_form: matrix must be square");
    if (determinant(to_rational(A)) == 0) throw ValidationError("smith_normal_form: singular matrix");
    IntMatrix D = A;
    IntMatrix U = IntMatrix::Identity(n, n), V = IntMatrix::Identity(n, n);
    for (Eigen::Index t = 0; t < n; ++t) {
        while (true) {
            // smallest nonzero entry of the trailing block goes to (t, t)
            Eigen::Index pi = -1, pj = -1;
            for (Eigen::Index i = t; i < n; ++i)
                for (Eigen::Index j = t; j < n; ++j)
                    if (D(i, j) != 0 && (pi < 0 || mp::abs(D(i, j)) < mp::abs(D(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            swap_rows(D, t, pi);
            swap_rows(U, t, pi);
            swap_cols(D, t, pj);
            swap_cols(V, t, pj);
            bool clean = true;
            for (Eigen::Index i = t + 1; i < n; ++i) {
                if (D(i, t) == 0) continue;
                BigInt k = floor_div(D(i, t), D(t, t));
                add_row(D, i, t, -k);
                add_row(U, i, t, -k);
                if (D(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                BigInt k = floor_div(D(t, j), D(t, t));
                add_col(D, j, t, -k);
                add_col(V, j, t, -k);
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block
            Eigen::Index bad = -1;
            for (Eigen::Index i = t + 1; i < n && bad < 0; ++i)
                for (Eigen::Index j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            add_row(D, t, bad, BigInt(1));
            add_row(U, t, bad, BigInt(1));
        }
        if (D(t, t) < 0) {
            D.row(t) *= BigInt(-1);
            U.row(t) *= BigInt(-1);
        }
    }
    return {U, D, V};
}

RatMatrix to_rational(const IntMatrix& A) {
    RatMatrix R(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) R(i, j) = Rational(A(i, j));
    return R;
}

Rational determinant(const RatMatrix& A0) {
    RatMatrix A = A0;
    const Eigen::Index n = A.rows();
    Rational det = 1;
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = c;
        while (piv < n && A(piv, c) == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != c) {
            A.row(piv).swap(A.row(c));
            det = -det;
        }
        det *= A(c, c);
        for (Eigen::Index r = c + 1; r < n; ++r) {
            if (A(r, c) == 0) continue;
            Rational f = A(r, c) / A(c, c);
            for (Eigen::Index k = c; k < n; ++k) A(r, k) -= f * A(c, k);
        }
    }
    return det;
}

RatMatrix inverse(const RatMatrix& A0) {
    const Eigen::Index n = A0.rows();
    RatMatrix A = A0;
    RatMatrix I = RatMatrix::Identity(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = c;
        while (piv < n && A(piv, c) == 0) ++piv;
        if (piv == n) throw ValidationError("inverse: singular matrix");
        A.row(piv).swap(A.row(c));
        I.row(piv).swap(I.row(c));
        Rational inv = Rational(1) / A(c, c);
        A.row(c) *= inv;
        I.row(c) *= inv;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c || A(r, c) == 0) continue;
            Rational f = A(r, c);
            A.row(r) -= f * A.row(c);
            I.row(r) -= f * I.row(c);
        }
    }
    return I;
}

GramLattice::GramLattice(IntMatrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() == 0 || gram_.rows() != gram_.cols())
        throw ValidationError("gram matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < gram_.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (gram_(i, j) != gram_(j, i)) throw ValidationError("gram matrix must be symmetric");
    Rational d = determinant(to_rational(gram_));
    if (d == 0) throw ValidationError("gram matrix must be nondegenerate");
    det_ = mp::numerator(d);
    for (Eigen::Index i = 0; i < gram_.rows(); ++i)
        if (gram_(i, i) % 2 != 0) even_ = false;
}

GramLattice GramLattice::from_rows(const std::vector<std::vector<long long>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    IntMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw ValidationError("gram matrix must be square");
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = BigInt(rows[i][j]);
    }
    return GramLattice(g);
}

int signature(const GramLattice& L) {
    RatMatrix A = to_rational(L.gram());
    Eigen::Index n = A.rows();
    int pos = 0, neg = 0;
    std::vector<Eigen::Index> live(n);
    std::iota(live.begin(), live.end(), 0);
    // congruence-diagonalize: x -> P^T A P keeps the inertia
    while (!live.empty()) {
        Eigen::Index piv = -1;
        for (auto i : live)
            if (A(i, i) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) {
            Eigen::Index a = -1, b = -1;
            for (auto i : live)
                for (auto j : live)
                    if (i != j && A(i, j) != 0 && a < 0) {
                        a = i;
                        b = j;
                    }
            if (a < 0) break;  // remaining block is zero (cannot happen for det != 0)
            // e_a + e_b has norm 2 A(a, b) != 0
            for (Eigen::Index k = 0; k < n; ++k) A(a, k) += A(b, k);
            for (Eigen::Index k = 0; k < n; ++k) A(k, a) += A(k, b);
            piv = a;
        }
        Rational d = A(piv, piv);
        (d > 0 ? pos : neg) += 1;
        for (auto j : live) {
            if (j == piv || A(piv, j) == 0) continue;
            Rational f = A(piv, j) / d;
            for (Eigen::Index k = 0; k < n; ++k) A(j, k) -= f * A(piv, k);
            for (Eigen::Index k = 0; k < n; ++k) A(k, j) -= f * A(k, piv);
        }
        live.erase(std::find(live.begin(), live.end(), piv));
    }
    return pos - neg;
}

long long level(const GramLattice& L) {
    RatMatrix Gi = inverse(to_rational(L.gram()));
    long long N = 1;
    for (Eigen::Index i = 0; i < Gi.rows(); ++i)
        for (Eigen::Index j = 0; j < Gi.cols(); ++j) {
            Rational v = (i == j) ? Gi(i, j) / 2 : Gi(i, j);
            N = lcm_ll(N, static_cast<long long>(mp::denominator(v)));
        }
    return N;
}

GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
    const int n = a.rank(), m = b.rank();
    IntMatrix g = IntMatrix::Constant(n + m, n + m, BigInt(0));
    g.topLeftCorner(n, n) = a.gram();
    g.bottomRightCorner(m, m) = b.gram();
    return GramLattice(g);
}

GramLattice scaled(const GramLattice& L, long long k) {
    IntMatrix g = L.gram();
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) *= k;
    return GramLattice(g);
}

DiscriminantForm::DiscriminantForm(const IntMatrix& gram, RatMatrix lifts,
                                   std::vector<long long> orders, int signature, long long level,
                                   bool even)
    : gram_(gram), lifts_(std::move(lifts)), orders_(std::move(orders)), signature_(signature),
      level_(level), even_(even) {
    size_ = 1;
    for (long long d : orders_) {
        stride_.push_back(size_);
        size_ *= static_cast<std::size_t>(d);
        exponent_ = lcm_ll(exponent_, d);
        if (size_ > enumeration_cap) throw CapError("discriminant group exceeds enumeration cap");
    }
    den_ = 2 * exponent_;
    const std::size_t k = orders_.size();
    RatMatrix G = to_rational(gram_);
    bgen_.assign(k, std::vector<long long>(k, 0));
    qgen_.assign(k, 0);
    auto numer = [&](const Rational& v) {
        Rational w = frac(v) * den_;
        if (mp::denominator(w) != 1) throw InvariantError("form value outside (1/2e)Z");
        return static_cast<long long>(mp::numerator(w));
    };
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            Rational v = (lifts_.col(i).transpose() * G * lifts_.col(j))(0, 0);
            bgen_[i][j] = numer(v);
        }
        Rational v = (lifts_.col(i).transpose() * G * lifts_.col(i))(0, 0) / 2;
        qgen_[i] = numer(v);
    }
    qnum_.resize(size_);
    std::vector<long long> c(k, 0);
    for (std::size_t idx = 0; idx < size_; ++idx) {
        long long s = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!c[i]) continue;
            s += (c[i] * c[i] % den_) * qgen_[i] % den_;
            for (std::size_t j = i + 1; j < k; ++j) s += (c[i] * c[j] % den_) * bgen_[i][j] % den_;
            s %= den_;
        }
        qnum_[idx] = s;
        for (std::size_t i = 0; i < k; ++i) {
            if (++c[i] < orders_[i]) break;
            c[i] = 0;
        }
    }
}

long long DiscriminantForm::b_num(std::size_t x, std::size_t y) const {
    long long s = 0;
    const std::size_t k = orders_.size();
    for (std::size_t i = 0; i < k; ++i) {
        long long ci = static_cast<long long>(coord(x, i));
        if (!ci) continue;
        for (std::size_t j = 0; j < k; ++j) {
            long long cj = static_cast<long long>(coord(y, j));
            if (cj) s = (s + (ci * cj % den_) * bgen_[i][j]) % den_;
        }
    }
    return s;
}

Rational DiscriminantForm::q(std::size_t idx) const { return Rational(qnum_[idx]) / Rational(den_); }
Rational DiscriminantForm::b(std::size_t i, std::size_t j) const {
    return Rational(b_num(i, j)) / Rational(den_);
}
Rational DiscriminantForm::bilinear_gen(std::size_t i, std::size_t j) const {
    return Rational(bgen_[i][j]) / Rational(den_);
}
Rational DiscriminantForm::quad_gen(std::size_t i) const {
    return Rational(qgen_[i]) / Rational(den_);
}

std::size_t DiscriminantForm::coord(std::size_t idx, std::size_t i) const {
    return (idx / stride_[i]) % static_cast<std::size_t>(orders_[i]);
}

DFElement DiscriminantForm::element(std::size_t idx) const {
    DFElement e;
    for (std::size_t i = 0; i < orders_.size(); ++i) e.coords.push_back(static_cast<long long>(coord(idx, i)));
    return e;
}

std::size_t DiscriminantForm::index(const DFElement& e) const {
    if (e.coords.size() != orders_.size()) throw ValidationError("element has wrong length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i)
        idx += static_cast<std::size_t>(mod_pos(e.coords[i], orders_[i])) * stride_[i];
    return idx;
}

std::size_t DiscriminantForm::add(std::size_t x, std::size_t y) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i)
        idx += (coord(x, i) + coord(y, i)) % static_cast<std::size_t>(orders_[i]) * stride_[i];
    return idx;
}

std::size_t DiscriminantForm::neg(std::size_t x) const { return scale(x, -1); }

std::size_t DiscriminantForm::scale(std::size_t x, long long c) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        long long d = orders_[i];
        long long v = mod_pos(mod_pos(c, d) * static_cast<long long>(coord(x, i)), d);
        idx += static_cast<std::size_t>(v) * stride_[i];
    }
    return idx;
}

RatVector DiscriminantForm::lift(std::size_t idx) const {
    RatVector v = RatVector::Constant(rank(), Rational(0));
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        long long c = static_cast<long long>(coord(idx, i));
        if (c) v += lifts_.col(i) * Rational(c);
    }
    return v;
}

std::size_t DiscriminantForm::index_of_lift(const RatVector& x) const {
    if (!has_lift_map()) throw InvariantError("form has no lift map");
    RatVector y = to_rational(lift_map_) * x;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        const Rational& v = y(static_cast<Eigen::Index>(i));
        BigInt d = mp::denominator(v);
        long long o = orders_[i];
        // coordinates are integral away from primes not dividing o; invert the rest
        BigInt g = mp::gcd(d, BigInt(o));
        if (g != 1) throw ValidationError("vector is not in the dual lattice");
        long long n = static_cast<long long>(mp::numerator(v) % o);
        long long dm = static_cast<long long>(d % o);
        idx += static_cast<std::size_t>(mod_pos(n * inv_mod(dm, o), o)) * stride_[i];
    }
    return idx;
}

DiscriminantForm discriminant_form(const GramLattice& L) {
    const int m = L.rank();
    SmithForm snf = smith_normal_form(L.gram());
    RatMatrix Gi = inverse(to_rational(L.gram()));
    RatMatrix Ui = inverse(to_rational(snf.U));
    std::vector<long long> orders;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < m; ++i) {
        BigInt d = snf.D(i, i);
        if (d != 1) {
            if (d > BigInt(DiscriminantForm::enumeration_cap))
                throw CapError("discriminant group exceeds enumeration cap");
            orders.push_back(static_cast<long long>(d));
            keep.push_back(i);
        }
    }
    RatMatrix lifts(m, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        lifts.col(static_cast<Eigen::Index>(c)) = Gi * Ui.col(keep[c]);
    DiscriminantForm D(L.gram(), lifts, orders, signature(L), level(L), L.is_even());
    IntMatrix UG = snf.U * L.gram();
    IntMatrix rows(static_cast<Eigen::Index>(keep.size()), m);
    for (std::size_t c = 0; c < keep.size(); ++c) rows.row(static_cast<Eigen::Index>(c)) = UG.row(keep[c]);
    D.set_lift_map(rows);
    return D;
}

PPart p_part(const DiscriminantForm& D, long long p) {
    std::vector<std::size_t> projection, inclusion;
    std::vector<long long> orders, cofactor;
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < D.orders().size(); ++i) {
        long long d = D.orders()[i], pk = 1;
        while (d % p == 0) {
            d /= p;
            pk *= p;
        }
        if (pk > 1) {
            orders.push_back(pk);
            cofactor.push_back(d);
            gens.push_back(i);
        }
    }
    const int m = D.rank();
    RatMatrix lifts(m, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t c = 0; c < gens.size(); ++c)
        lifts.col(static_cast<Eigen::Index>(c)) = D.lifts().col(static_cast<Eigen::Index>(gens[c])) * Rational(cofactor[c]);
    long long Np = 1, N = D.level();
    while (N % p == 0) {
        N /= p;
        Np *= p;
    }
    DiscriminantForm Dp(D.gram(), lifts, orders, D.signature(), Np, D.is_even());
    // CRT idempotent: 1 mod the p-part of the exponent, 0 mod the rest
    long long e = D.exponent(), pe = 1;
    while (e % p == 0) {
        e /= p;
        pe *= p;
    }
    long long idem = (e == 1) ? 1 : mod_pos(e * inv_mod(e, pe), e * pe);
    if (pe == 1) idem = 0;
    projection.resize(D.size());
    for (std::size_t idx = 0; idx < D.size(); ++idx) {
        std::size_t x = D.scale(idx, idem);
        DFElement el;
        for (std::size_t c = 0; c < gens.size(); ++c)
            el.coords.push_back(static_cast<long long>(D.coord(x, gens[c])) / cofactor[c]);
        projection[idx] = Dp.index(el);
    }
    inclusion.resize(Dp.size());
    for (std::size_t j = 0; j < Dp.size(); ++j) {
        DFElement el(std::vector<long long>(D.orders().size(), 0));
        for (std::size_t c = 0; c < gens.size(); ++c)
            el.coords[gens[c]] = static_cast<long long>(Dp.coord(j, c)) * cofactor[c];
        inclusion[j] = D.index(el);
    }
    return PPart{p, std::move(Dp), std::move(projection), std::move(inclusion)};
}

std::vector<long long> interesting_primes(const GramLattice& L) { return prime_factors(L.det()); }

CSubsets subsets_c(const DiscriminantForm& D, long long c) {
    CSubsets s;
    std::vector<char> seen(D.size(), 0);
    for (std::size_t i = 0; i < D.size(); ++i) {
        std::size_t ci = D.scale(i, c);
        if (ci == 0) s.kernel.push_back(i);
        if (!seen[ci]) {
            seen[ci] = 1;
        }
    }
    for (std::size_t i = 0; i < D.size(); ++i)
        if (seen[i]) s.image.push_back(i);
    return s;
}

std::vector<std::size_t> kernel_generators(const DiscriminantForm& D, long long c) {
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < D.orders().size(); ++i) {
        long long d = D.orders()[i];
        long long g = std::gcd(mod_pos(c, d), d);
        if (g == 0) g = d;
        // kernel of c on Z/d is generated by d/g
        DFElement el(std::vector<long long>(D.orders().size(), 0));
        el.coords[i] = (d / g) % d;
        if (el.coords[i] != 0) gens.push_back(D.index(el));
    }
    return gens;
}

namespace {

long long element_order(const DiscriminantForm& D, std::size_t x) {
    long long o = 1;
    for (std::size_t i = 0; i < D.orders().size(); ++i) {
        long long d = D.orders()[i];
        long long g = std::gcd(static_cast<long long>(D.coord(x, i)), d);
        o = lcm_ll(o, d / g);
    }
    return o;
}

}  // namespace

long long q_num_odd_part(const DiscriminantForm& D, std::size_t x) {
    long long v = D.q_num(x);
    if (D.is_even()) return v;
    long long k = element_order(D, x);
    if (k % 2 == 0) return v;
    // of the two values mod 1/2, take the one with odd denominator
    const long long den = D.denom();
    if ((k * k % den) * v % den != 0) v = (v + den / 2) % den;
    return v;
}

bool in_Dcstar(const DiscriminantForm& D, long long c, std::size_t beta) {
    const long long den = D.denom();
    for (std::size_t mu : kernel_generators(D, c)) {
        long long v = mod_pos(mod_pos(c, den) * q_num_odd_part(D, mu) + D.b_num(beta, mu), den);
        if (v != 0) return false;
    }
    return true;
}

std::vector<std::size_t> coset_Dcstar(const DiscriminantForm& D, long long c) {
    if (c == 0) return {0};
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < D.size(); ++b)
        if (in_Dcstar(D, c, b)) out.push_back(b);
    return out;
}

std::size_t divide_by(const DiscriminantForm& D, long long c, std::size_t target) {
    DFElement el(std::vector<long long>(D.orders().size(), 0));
    for (std::size_t i = 0; i < D.orders().size(); ++i) {
        long long d = D.orders()[i];
        long long t = static_cast<long long>(D.coord(target, i));
        long long cm = mod_pos(c, d);
        long long g = std::gcd(cm, d);
        if (g == 0) g = d;
        if (t % g != 0) return D.size();
        long long dd = d / g;
        el.coords[i] = dd == 1 ? 0 : mod_pos((t / g) * inv_mod(cm / g, dd), dd);
    }
    return D.index(el);
}

long long a_beta_c_sq_half_num(const DiscriminantForm& D, long long a, long long c, std::size_t xc,
                               std::size_t beta) {
    if (c == 0) return 0;
    const long long den = D.denom();
    std::size_t diff = D.add(beta, D.neg(xc));
    std::size_t alpha = divide_by(D, c, diff);
    if (alpha == D.size()) throw ValidationError("beta - x_c is not divisible by c");
    long long ac = mod_pos(mod_pos(a, den) * mod_pos(c, den), den);
    long long v = ac * D.q_num(alpha) % den + mod_pos(a, den) * D.b_num(xc, alpha) % den;
    return v % den;
}

Rational beta_c_sq_half(const DiscriminantForm& D, long long c, std::size_t xc, std::size_t beta) {
    if (c == 0) return Rational(0);
    if (!in_Dcstar(D, c, beta)) throw ValidationError("beta is not in D_M^{c*}");
    return Rational(a_beta_c_sq_half_num(D, 1, c, xc, beta)) / Rational(D.denom());
}

ExactScalar milgram_sum(const DiscriminantForm& D) {
    if (!D.is_even()) throw ValidationError("milgram_sum: lattice must be even");
    std::vector<long long> count(static_cast<std::size_t>(D.denom()), 0);
    for (std::size_t i = 0; i < D.size(); ++i) ++count[static_cast<std::size_t>(D.q_num(i))];
    ExactScalar s;
    for (std::size_t k = 0; k < count.size(); ++k)
        if (count[k]) s += root_of_unity(static_cast<long long>(k), D.denom()) * ExactScalar(count[k]);
    return s;
}

}  // namespace weil
