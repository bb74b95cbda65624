#include "weil/weilrep.hpp"
#include "weil/errors.hpp"
#include "weil/numth.hpp"

#include <algorithm>
#include <numeric>

namespace weil {

namespace {

long long odd_part_signed(long long x) {
    if (x == 0) return 1;
    while (x % 2 == 0) x /= 2;
    return x;
}

long long p_free(long long x, long long p) {
    if (x == 0) return 1;
    while (x % p == 0) x /= p;
    return x;
}

ExactScalar pow_root(const ExactScalar& x, long long k) {
    return k >= 0 ? x.pow(k) : x.conj().pow(-k);
}

ExactScalar sign_scalar(int s) { return ExactScalar(static_cast<long long>(s)); }

int sign_pow(int s, long long k) { return (s < 0 && k % 2 != 0) ? -1 : 1; }

WeilOperator zero_operator(std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(n);
    return WeilOperator::Constant(dim, dim, ExactScalar(0));
}

// root_of_unity(k, den) for all residues k, premultiplied by K
std::vector<ExactScalar> phase_table(const ExactScalar& K, long long den) {
    std::vector<ExactScalar> t;
    t.reserve(static_cast<std::size_t>(den));
    for (long long k = 0; k < den; ++k) t.push_back(K * root_of_unity(k, den));
    return t;
}

}  // namespace

LatticeData::LatticeData(GramLattice L) : L_(std::move(L)), D_(discriminant_form(L_)) {
    primes_ = prime_factors(L_.det());
    if (std::find(primes_.begin(), primes_.end(), 2) == primes_.end()) primes_.insert(primes_.begin(), 2);
}

const JordanDecomposition& LatticeData::jordan(long long p) const {
    auto it = jordan_.find(p);
    if (it == jordan_.end()) it = jordan_.emplace(p, jordan_decompose(L_, p)).first;
    return it->second;
}

const PPart& LatticeData::part(long long p) const {
    auto it = parts_.find(p);
    if (it == parts_.end()) it = parts_.emplace(p, std::make_unique<PPart>(p_part(D_, p))).first;
    return *it->second;
}

WeilOperator rho_T(const DiscriminantForm& D) {
    if (!D.is_even()) throw ValidationError("rho_T: T does not act for odd lattices; use T^2");
    WeilOperator m = zero_operator(D.size());
    for (std::size_t g = 0; g < D.size(); ++g) m(g, g) = root_of_unity(D.q_num(g), D.denom());
    return m;
}

WeilOperator rho_T2(const DiscriminantForm& D) {
    WeilOperator m = zero_operator(D.size());
    for (std::size_t g = 0; g < D.size(); ++g) m(g, g) = root_of_unity(2 * D.q_num(g), D.denom());
    return m;
}

WeilOperator rho_S(const DiscriminantForm& D) {
    const ExactScalar kappa = zeta8(-D.signature()) * sqrt_rat(Rational(1) / Rational(D.delta()));
    const auto table = phase_table(kappa, D.denom());
    WeilOperator m = zero_operator(D.size());
    for (std::size_t g = 0; g < D.size(); ++g)
        for (std::size_t d = 0; d < D.size(); ++d)
            m(d, g) = table[static_cast<std::size_t>(mod_pos(-D.b_num(g, d), D.denom()))];
    return m;
}

WeilOperator rho_Z(const DiscriminantForm& D) {
    WeilOperator m = zero_operator(D.size());
    const ExactScalar z = zeta8(-2 * D.signature());
    for (std::size_t g = 0; g < D.size(); ++g) m(D.neg(g), g) = z;
    return m;
}

PGenerators rho_p_generators(const LatticeData& ld, long long p) {
    if (!ld.is_even()) throw ValidationError("rho_p_generators: lattice must be even");
    const PPart& pp = ld.part(p);
    const DiscriminantForm& Dp = pp.form;
    PGenerators r;
    r.p = p;
    r.T = zero_operator(Dp.size());
    r.S = zero_operator(Dp.size());
    const ExactScalar kappa =
        weil_index_lattice(ld.jordan(p)).conj() * sqrt_rat(Rational(1) / Rational(Dp.delta()));
    for (std::size_t g = 0; g < Dp.size(); ++g) {
        r.T(g, g) = chi_p(Dp.q(g), p);
        for (std::size_t d = 0; d < Dp.size(); ++d) r.S(d, g) = kappa * chi_p(-Dp.b(g, d), p);
    }
    return r;
}

ExactScalar xi_p(const LatticeData& ld, const SL2Z& A, int eps, long long p) {
    const int m = ld.rank();
    const JordanDecomposition& jd = ld.jordan(p);
    const long long a = A.a, c = A.c;
    const long long vc = c == 0 ? -1 : vp(c, p);  // -1 stands for infinity
    auto divides_c = [&](const JordanComponent& comp) { return vc < 0 || comp.e <= vc; };
    const long long v_delta = ld.delta() == 1 ? 0 : vp(ld.delta(), p);

    if (p != 2) {
        const long long ap = p_free(a, p);
        ExactScalar r = sign_scalar(legendre(ap, ipow(p, v_delta)));
        for (const auto& comp : jd.components)
            if (!divides_c(comp)) r *= weil_index_component(scale_component(comp, ap * c)).conj();
        return r;
    }

    const long long a2 = odd_part_signed(a);
    const long long c2 = odd_part_signed(c);
    int s = sign_pow(eps, m) * sign_pow(legendre(a, c2), m);
    if ((m * eps_bit(a2) * eps_bit(c2)) % 2) s = -s;
    s *= sign_pow(legendre(2, a2), (vc < 0 ? 0 : vc) * m);
    s *= sign_pow(legendre(2, a2), v_delta);
    // for c = 0 the exponent is 1 - a2 (a = d = -1 otherwise flips the sign for odd m)
    ExactScalar r = sign_scalar(s) * pow_root(weil_index_lattice(jd), c == 0 ? 1 - a2 : a2 - 1);
    for (const auto& comp : jd.components)
        if (!divides_c(comp)) r *= weil_index_component(scale_component(comp, a2 * c)).conj();
    return r;
}

namespace {

// the common assembly of the closed formula; xi2_extra multiplies the 2-adic root
WeilOperator assemble_closed(const LatticeData& ld, const MpZElement& x, const ExactScalar& xi2_extra) {
    const DiscriminantForm& D = ld.form();
    const SL2Z& A = x.mat;
    const long long a = A.a, b = A.b, c = A.c, d = A.d;
    const long long den = D.denom();

    ExactScalar K = xi2_extra;
    for (long long p : ld.primes()) K *= xi_p(ld, A, x.eps, p);

    std::vector<std::size_t> coset{0};
    std::size_t xc = 0;
    long long delta_c = ld.delta();
    if (c != 0) {
        xc = choose_xc(ld.jordan(2), D, c).element;
        coset = coset_Dcstar(D, c);
        delta_c = static_cast<long long>(subsets_c(D, c).kernel.size());
    }
    K *= sqrt_rat(Rational(delta_c) / Rational(ld.delta()));
    const auto table = phase_table(K, den);

    std::vector<long long> beta_phase(coset.size());
    for (std::size_t i = 0; i < coset.size(); ++i)
        beta_phase[i] = a_beta_c_sq_half_num(D, a, c, xc, coset[i]);

    const long long bm = mod_pos(b, den), bdm = mod_pos(mod_pos(b, den) * mod_pos(d, den), den);
    WeilOperator m = zero_operator(D.size());
    for (std::size_t g = 0; g < D.size(); ++g) {
        const std::size_t dg = D.scale(g, d);
        const long long base = bdm * D.q_num(g) % den;
        for (std::size_t i = 0; i < coset.size(); ++i) {
            const std::size_t beta = coset[i];
            long long ph = (beta_phase[i] + bm * D.b_num(g, beta) % den + base) % den;
            m(D.add(beta, dg), g) = table[static_cast<std::size_t>(ph)];
        }
    }
    return m;
}

}  // namespace

WeilOperator rho_closed(const LatticeData& ld, const MpZElement& x) {
    if (!ld.is_even()) throw ValidationError("rho_closed: lattice must be even");
    return assemble_closed(ld, x, ExactScalar(1));
}

WeilOperator rho_closed_odd(const LatticeData& ld, const MpZElement& x) {
    if (ld.is_even()) throw ValidationError("rho_closed_odd: lattice must be odd");
    if (!gamma_odd_member(x.mat)) throw ValidationError("rho_closed_odd: matrix is not in Gamma_odd");
    const long long a = x.mat.a, c = x.mat.c;
    const JordanDecomposition& jd = ld.jordan(2);
    int t1 = 0;
    for (const auto& comp : jd.components)
        if (comp.e == 0 && comp.odd) t1 = comp.t;
    const long long a2 = odd_part_signed(a), c2 = odd_part_signed(c);
    ExactScalar extra = zeta8(mod_pos((a - a2) % 8 * mod_pos(c2, 8) * t1, 8));
    // For odd c the half-sum x_c is not in M*, and the sum runs over D_M^c instead of
    // x_c + D_M^c; the shift leaves the constant e(-a x_c^2 / 2c), seen 2-adically.
    if (c % 2 != 0) extra *= xc_phase_direct(jd, ld.lattice(), -a, c);
    return assemble_closed(ld, x, extra);
}

WeilOperator rho(const LatticeData& ld, const MpZElement& x) {
    return ld.is_even() ? rho_closed(ld, x) : rho_closed_odd(ld, x);
}

ExactScalar phi_char(const LatticeData& ld, const MpZElement& x) {
    if (!ld.is_even()) throw ValidationError("phi_char: lattice must be even");
    const long long N = ld.level();
    const SL2Z& A = x.mat;
    if (A.c % N != 0) throw ValidationError("phi_char: N does not divide c");
    const int m = ld.rank();
    const long long a = A.a, c = A.c;
    const long long delta = ld.delta();
    const long long v2d = vp(delta, 2);
    const long long delta_odd = delta >> v2d;
    int s = 1;
    if (m % 2) {
        // m odd forces 2 | N, so a is odd
        const long long c2 = odd_part_signed(c);
        const long long v2c = c == 0 ? 0 : vp(c, 2);
        s = x.eps * legendre(a, c2);
        if (eps_bit(a) && eps_bit(c2)) s = -s;
        s *= sign_pow(legendre(2, a), v2c);
    }
    if (v2d) s *= sign_pow(legendre(2, a), v2d);
    s *= legendre(a, delta_odd);
    // same c = 0 exponent convention as in xi_2
    return sign_scalar(s) * pow_root(weil_index_lattice(ld.jordan(2)), c == 0 ? 1 - a : a - 1);
}

KernelDescriptor kernel_descriptor(const LatticeData& ld) {
    if (!ld.is_even()) throw ValidationError("kernel_descriptor: lattice must be even");
    KernelDescriptor kd;
    kd.N = ld.level();
    kd.Ntilde = ld.form().exponent();
    kd.m = ld.rank();
    const ExactScalar g2 = weil_index_lattice(ld.jordan(2));
    kd.gamma2_sq = g2 * g2;
    kd.v2_delta = vp(ld.delta(), 2);
    const long long v2n = vp(kd.Ntilde, 2);
    const bool case_i = v2n == 1 && kd.gamma2_sq != ExactScalar(1);
    const bool case_ii = kd.m % 2 == 0 && v2n == 2 && kd.v2_delta % 2 == 1;
    kd.base = (case_i || case_ii) ? KernelDescriptor::GammaN : KernelDescriptor::Gamma;
    kd.lift = kd.m % 2 == 1;
    return kd;
}

bool in_kernel_base(const KernelDescriptor& kd, const SL2Z& A) {
    const long long mod = kd.base == KernelDescriptor::Gamma ? kd.Ntilde : kd.N;
    return A.b % kd.N == 0 && A.c % kd.N == 0 && mod_pos(A.a - 1, mod) == 0 && mod_pos(A.d - 1, mod) == 0;
}

bool is_in_kernel(const LatticeData& ld, const MpZElement& x) { return is_identity(rho(ld, x)); }

bool weil_reciprocity_check(const LatticeData& ld) {
    ExactScalar g(1);
    for (long long p : ld.primes()) g *= weil_index_lattice(ld.jordan(p));
    return g == zeta8(ld.sgn());
}

bool tensor_check(const LatticeData& ld) {
    if (!ld.is_even()) throw ValidationError("tensor_check: lattice must be even");
    const DiscriminantForm& D = ld.form();
    std::vector<PGenerators> gens;
    std::vector<const PPart*> parts;
    for (long long p : prime_factors(ld.lattice().det())) {
        gens.push_back(rho_p_generators(ld, p));
        parts.push_back(&ld.part(p));
    }
    const WeilOperator T = rho_T(D), S = rho_S(D);
    for (std::size_t g = 0; g < D.size(); ++g)
        for (std::size_t d = 0; d < D.size(); ++d) {
            ExactScalar t(g == d ? 1 : 0), s(1);
            for (std::size_t k = 0; k < gens.size(); ++k) {
                const std::size_t gp = parts[k]->projection[g], dp = parts[k]->projection[d];
                t *= gens[k].T(dp, gp);
                s *= gens[k].S(dp, gp);
            }
            if (t != T(d, g) || s != S(d, g)) return false;
        }
    return true;
}

}  // namespace weil
