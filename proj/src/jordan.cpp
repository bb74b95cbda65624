#include "weil/jordan.hpp"
#include "weil/errors.hpp"
#include "weil/numth.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>

namespace weil {

long long JordanComponent::q() const { return ipow(p, e); }

std::string JordanComponent::symbol() const {
    std::string s = std::to_string(q()) + "^" + (eps > 0 ? "+" : "-") + std::to_string(n);
    if (p == 2) s += odd ? "_" + std::to_string(t) : "_II";
    return s;
}

namespace {

constexpr long long kInfVal = LLONG_MAX / 4;

long long val(const Rational& x, long long p) {
    if (x == 0) return kInfVal;
    return valuation_split(x, p).valuation;
}

// a p-adic unit n/d reduced modulo m (m a power of p)
long long unit_mod(const Rational& u, long long m) {
    BigInt n = mp::numerator(u) % m, d = mp::denominator(u) % m;
    return mod_pos(mod_pos(static_cast<long long>(n), m) * inv_mod(static_cast<long long>(d), m), m);
}

int kronecker2(long long u) {  // (2/u) for odd u
    long long r = mod_pos(u, 8);
    return (r == 1 || r == 7) ? 1 : -1;
}

struct Splitter {
    long long p;
    RatMatrix B, H;
    std::vector<std::vector<int>> blocks;

    void add_col(int k, int i, const Rational& f) {  // b_k += f b_i
        if (f == 0) return;
        B.col(k) += B.col(i) * f;
        H.col(k) += H.col(i) * f;
        H.row(k) += H.row(i) * f;
    }

    void run(std::vector<int> rest) {
        while (!rest.empty()) {
            long long v = kInfVal;
            for (int i : rest)
                for (int j : rest) v = std::min(v, val(H(i, j), p));
            if (v == kInfVal) throw InvariantError("jordan: degenerate remainder");
            int piv = -1;
            for (int i : rest)
                if (val(H(i, i), p) == v) {
                    piv = i;
                    break;
                }
            int pi = -1, pj = -1;
            if (piv < 0) {
                for (int i : rest)
                    for (int j : rest)
                        if (pi < 0 && i != j && val(H(i, j), p) == v) {
                            pi = i;
                            pj = j;
                        }
                if (p != 2) {
                    add_col(pi, pj, Rational(1));
                    piv = pi;
                }
            }
            if (piv >= 0) {
                for (int k : rest)
                    if (k != piv) add_col(k, piv, -H(piv, k) / H(piv, piv));
                blocks.push_back({piv});
                rest.erase(std::find(rest.begin(), rest.end(), piv));
                continue;
            }
            const Rational a = H(pi, pi), b = H(pi, pj), c = H(pj, pj);
            const Rational det = a * c - b * b;
            for (int k : rest) {
                if (k == pi || k == pj) continue;
                Rational u = H(pi, k), w = H(pj, k);
                Rational x = (c * u - b * w) / det, y = (a * w - b * u) / det;
                add_col(k, pi, -x);
                add_col(k, pj, -y);
            }
            blocks.push_back({pi, pj});
            rest.erase(std::find(rest.begin(), rest.end(), pi));
            rest.erase(std::find(rest.begin(), rest.end(), pj));
        }
    }

    long long block_val(const std::vector<int>& blk) const {
        if (blk.size() == 1) return val(H(blk[0], blk[0]), p);
        return val(H(blk[0], blk[1]), p);
    }
};

}  // namespace

JordanDecomposition jordan_decompose(const GramLattice& L, long long p) {
    if (!is_prime(p)) throw ValidationError("jordan_decompose: p must be prime");
    const int m = L.rank();
    Splitter sp{p, RatMatrix::Identity(m, m), to_rational(L.gram()), {}};
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    sp.run(all);

    std::map<long long, std::vector<std::vector<int>>> groups;
    for (const auto& blk : sp.blocks) groups[sp.block_val(blk)].push_back(blk);

    JordanDecomposition jd;
    jd.p = p;
    for (auto& [e, blks] : groups) {
        // a scale with both odd and even blocks is odd; diagonalize it fully
        bool has_odd = std::any_of(blks.begin(), blks.end(), [](const auto& b) { return b.size() == 1; });
        if (p == 2 && has_odd) {
            std::vector<std::vector<int>> flat;
            int anchor = -1;
            for (const auto& b : blks)
                if (b.size() == 1) anchor = b[0];
            for (const auto& b : blks) {
                if (b.size() == 1) {
                    if (b[0] != anchor) flat.push_back(b);
                    continue;
                }
                sp.add_col(anchor, b[0], Rational(1));
                Splitter sub{p, sp.B, sp.H, {}};
                sub.run({anchor, b[0], b[1]});
                sp.B = sub.B;
                sp.H = sub.H;
                for (const auto& nb : sub.blocks) {
                    if (nb.size() != 1 || sp.block_val(nb) != e)
                        throw InvariantError("jordan: odd component did not diagonalize");
                    if (nb[0] != anchor) flat.push_back(nb);
                }
            }
            flat.push_back({anchor});
            blks = flat;
        }
        JordanComponent comp;
        comp.p = p;
        comp.e = static_cast<int>(e);
        comp.n = 0;
        comp.odd = p == 2 && has_odd;
        const Rational qe = Rational(BigInt(ipow(p, e)));
        Rational disc = 1;
        long long tsum = 0;
        std::vector<int> cols;
        for (const auto& b : blks) {
            comp.n += static_cast<int>(b.size());
            cols.insert(cols.end(), b.begin(), b.end());
            if (b.size() == 1) {
                Rational u = sp.H(b[0], b[0]) / qe;
                disc *= u;
                if (p == 2) tsum += unit_mod(u, 8);
            } else {
                disc *= (sp.H(b[0], b[0]) * sp.H(b[1], b[1]) - sp.H(b[0], b[1]) * sp.H(b[0], b[1])) /
                        (qe * qe);
            }
        }
        if (p == 2) {
            comp.eps = kronecker2(unit_mod(disc, 8));
            comp.t = comp.odd ? static_cast<int>(mod_pos(tsum, 8)) : 0;
        } else {
            comp.eps = legendre(disc, p);
        }
        jd.components.push_back(comp);
        jd.columns.push_back(cols);
    }
    jd.basis = sp.B;
    return jd;
}

ExactScalar weil_index_component(const JordanComponent& c) {
    ExactScalar sign = (c.eps < 0 && c.e % 2 == 1) ? ExactScalar(-1) : ExactScalar(1);
    if (c.p == 2) return sign * zeta8(c.odd ? c.t : 0);
    long long q8 = 1;
    for (int i = 0; i < c.e; ++i) q8 = q8 * (c.p % 8) % 8;
    return sign * zeta8(mod_pos(static_cast<long long>(c.n) * (1 - q8), 8));
}

JordanComponent scale_component(const JordanComponent& c, long long k) {
    if (k == 0) throw ValidationError("scale_component: zero scale");
    auto [l, unit] = valuation_split(Rational(k), c.p);
    long long u = static_cast<long long>(mp::numerator(unit));
    JordanComponent r = c;
    r.e += static_cast<int>(l);
    int s = c.p == 2 ? kronecker2(u) : legendre(u, c.p);
    if (c.n % 2 == 1) r.eps *= s;
    if (c.p == 2 && c.odd) r.t = static_cast<int>(mod_pos(c.t * mod_pos(u, 8), 8));
    return r;
}

namespace {

ExactScalar pow_signed(const ExactScalar& x, long long k) {
    return k >= 0 ? x.pow(k) : x.conj().pow(-k);  // x is a root of unity
}

}  // namespace

ExactScalar weil_index_scaled(const JordanComponent& c, long long a) {
    if (a % c.p == 0) throw ValidationError("weil_index_scaled: p divides a");
    ExactScalar g = weil_index_component(c);
    long long en = static_cast<long long>(c.e) * c.n;
    if (c.p != 2) {
        int s = en % 2 ? legendre(a, c.p) : 1;
        return ExactScalar(s) * g;
    }
    int s = en % 2 ? kronecker2(a) : 1;
    return ExactScalar(s) * pow_signed(g, mod_pos(a, 8));
}

ExactScalar weil_index_lattice(const JordanDecomposition& jd) {
    ExactScalar g(1);
    for (const auto& c : jd.components) g *= weil_index_component(c);
    return g;
}

ExactScalar weil_index_lattice(const GramLattice& L, long long p) {
    return weil_index_lattice(jordan_decompose(L, p));
}

long long delta_Mp_c(const JordanDecomposition& jd, long long c) {
    long long v = c == 0 ? kInfVal : vp(c, jd.p);
    long long d = 1;
    for (const auto& comp : jd.components) d *= ipow(jd.p, std::min<long long>(comp.e, v) * comp.n);
    return d;
}

std::size_t p_local_class(const DiscriminantForm& D, const RatVector& x, long long p) {
    RatVector y = to_rational(D.lift_map()) * x;
    DFElement el(std::vector<long long>(D.orders().size(), 0));
    for (std::size_t i = 0; i < D.orders().size(); ++i) {
        long long o = D.orders()[i], ps = 1;
        while (o % p == 0) {
            o /= p;
            ps *= p;
        }
        if (ps == 1) continue;
        const Rational& v = y(static_cast<Eigen::Index>(i));
        if (mp::denominator(v) % p == 0) throw ValidationError("vector is not in the local dual lattice");
        long long r = unit_mod(v, ps);  // valid for non-units too: only needs p-free denominator
        // z = r mod ps, z = 0 mod o
        long long z = o * mod_pos(r * inv_mod(o, ps), ps);
        el.coords[i] = z;
    }
    return D.index(el);
}

namespace {

const JordanComponent* component_at(const JordanDecomposition& jd, long long e, std::size_t* pos) {
    for (std::size_t i = 0; i < jd.components.size(); ++i)
        if (jd.components[i].e == e) {
            if (pos) *pos = i;
            return &jd.components[i];
        }
    return nullptr;
}

long long odd_part(long long x) {
    if (x == 0) return 1;
    while (x % 2 == 0) x /= 2;
    return x;
}

RatVector xc_lift(const JordanDecomposition& jd, long long c, int* t) {
    RatVector lift = RatVector::Constant(jd.basis.rows(), Rational(0));
    *t = 0;
    if (c == 0) return lift;
    std::size_t pos = 0;
    const JordanComponent* comp = component_at(jd, vp(c, 2), &pos);
    if (!comp || !comp->odd) return lift;
    for (int col : jd.columns[pos]) lift += jd.basis.col(col);
    lift /= Rational(2);
    *t = comp->t;
    return lift;
}

}  // namespace

XcChoice choose_xc(const JordanDecomposition& jd, const DiscriminantForm& D, long long c) {
    if (jd.p != 2) throw ValidationError("choose_xc: needs the 2-adic decomposition");
    if (c == 0) throw ValidationError("choose_xc: c must be nonzero");
    XcChoice r;
    r.lift = xc_lift(jd, c, &r.t);
    const JordanComponent* comp = component_at(jd, vp(c, 2), nullptr);
    r.odd = comp && comp->odd;
    // for odd c the half-sum is not in M* (odd lattices only); its class is taken as 0
    if (r.odd && c % 2 == 0) r.element = p_local_class(D, r.lift, 2);
    return r;
}

ExactScalar xc_phase(const JordanDecomposition& jd, long long a, long long c) {
    if (c == 0) return ExactScalar(1);
    const JordanComponent* comp = component_at(jd, vp(c, 2), nullptr);
    if (!comp || !comp->odd) return ExactScalar(1);
    long long av = c % 2 ? a : odd_part(a);
    return zeta8(mod_pos(mod_pos(av, 8) * mod_pos(odd_part(c), 8) * comp->t, 8));
}

ExactScalar xc_phase_direct(const JordanDecomposition& jd, const GramLattice& L, long long a,
                            long long c) {
    if (c == 0) return ExactScalar(1);
    int t = 0;
    RatVector x = xc_lift(jd, c, &t);
    Rational x2 = (x.transpose() * to_rational(L.gram()) * x)(0, 0) / 2;
    return chi_p(Rational(a) / Rational(c) * x2, 2);
}

ExactScalar gauss_sum_closed(const JordanDecomposition& jd, int rank, long long a, long long c) {
    const long long p = jd.p;
    if (c == 0) throw ValidationError("gauss_sum: c must be nonzero");
    if (a % p == 0 && c % p == 0) throw ValidationError("gauss_sum: a and c not coprime at p");
    long long v = vp(c, p);
    long long ap = a == 0 ? 1 : a;
    while (ap % p == 0) ap /= p;
    ExactScalar delta(1);
    for (const auto& comp : jd.components)
        if (comp.e + 1 <= v) delta *= weil_index_component(scale_component(comp, ap * c));
    Rational r = Rational(BigInt(ipow(p, v * rank))) * Rational(BigInt(delta_Mp_c(jd, c)));
    return sqrt_rat(r) * delta;
}

ExactScalar gauss_sum_closed(const GramLattice& L, long long p, long long a, long long c) {
    return gauss_sum_closed(jordan_decompose(L, p), L.rank(), a, c);
}

ExactScalar gauss_sum_brute(const GramLattice& L, long long p, long long a, long long c) {
    if (c == 0) throw ValidationError("gauss_sum: c must be nonzero");
    if (a % p == 0 && c % p == 0) throw ValidationError("gauss_sum: a and c not coprime at p");
    const int m = L.rank();
    const long long pv = ipow(p, vp(c, p));
    long double terms = 1;
    for (int i = 0; i < m; ++i) terms *= static_cast<long double>(pv);
    if (terms > 1e6) throw CapError("gauss_sum_brute: enumeration cap exceeded");
    RatVector xc = RatVector::Constant(m, Rational(0));
    if (p == 2) {
        int t = 0;
        xc = xc_lift(jordan_decompose(L, 2), c, &t);
    }
    RatMatrix G = to_rational(L.gram());
    RatVector Gx = G * xc;
    const Rational ac = Rational(a) / Rational(c);
    std::map<Rational, long long> hist;
    std::vector<long long> eta(m, 0);
    for (;;) {
        Rational quad = 0, lin = 0;
        for (int i = 0; i < m; ++i) {
            if (!eta[i]) continue;
            lin += Gx(i) * eta[i];
            for (int j = 0; j < m; ++j)
                if (eta[j]) quad += Rational(L.gram()(i, j) * eta[i] * eta[j]);
        }
        ++hist[p_fraction(ac * quad / 2 + ac * lin, p)];
        int i = 0;
        while (i < m && ++eta[i] == pv) eta[i++] = 0;
        if (i == m) break;
    }
    ExactScalar s;
    for (const auto& [r, k] : hist) s += chi_p(r, p) * ExactScalar(k);
    return s;
}

}  // namespace weil
