#include "weil/verify.hpp"
#include "weil/errors.hpp"
#include "weil/jordan.hpp"
#include "weil/numth.hpp"

#include <map>
#include <numeric>
#include <random>
#include <tuple>

namespace weil {

namespace {

void fail(SuiteResult& r, const std::string& what) {
    if (r.ok) r.detail = what;
    r.ok = false;
}

SuiteResult named(const std::string& name) {
    SuiteResult r;
    r.name = name;
    return r;
}

SuiteResult skip(const std::string& name, const std::string& why) {
    SuiteResult r = named(name);
    r.skipped = true;
    r.detail = why;
    return r;
}

std::string describe(const MpZElement& x) { return x.mat.to_string() + " eps " + std::to_string(x.eps); }

MpZElement sample(std::mt19937& g, const LatticeData& ld, long long bound) {
    SL2Z A = ld.is_even() ? random_sl2z(g, bound) : random_gamma_odd(g, bound);
    return {A, std::bernoulli_distribution(0.5)(g) ? 1 : -1};
}

long long sl2_order_mod(long long N) {
    long long n = N * N * N;
    long long num = 1, den = 1;
    for (long long p : prime_factors(BigInt(N))) {
        num *= p * p - 1;
        den *= p * p;
    }
    return n / den * num;
}

SuiteResult closed_vs_oracle(const LatticeData& ld, const VerifyOptions& opt) {
    SuiteResult r = named("closed_vs_oracle");
    std::mt19937 g(opt.seed);
    const int n = ld.is_even() ? opt.closed_samples_even : opt.closed_samples_odd;
    for (int i = 0; i < n; ++i) {
        MpZElement x = sample(g, ld, opt.entry_bound);
        ++r.checks;
        if (rho(ld, x) != rho_oracle(ld, x)) fail(r, "closed formula differs from the word oracle at " + describe(x));
    }
    return r;
}

SuiteResult gauss_sums(const LatticeData& ld) {
    SuiteResult r = named("gauss_sums");
    for (long long p : {2LL, 3LL, 5LL}) {
        const JordanDecomposition& jd = ld.jordan(p);
        for (long long c = -8; c <= 8; ++c) {
            if (c == 0) continue;
            for (long long a = -8; a <= 8; ++a) {
                if (std::gcd(a, c) != 1) continue;
                ++r.checks;
                if (gauss_sum_closed(jd, ld.rank(), a, c) != gauss_sum_brute(ld.lattice(), p, a, c))
                    fail(r, "p=" + std::to_string(p) + " a=" + std::to_string(a) + " c=" + std::to_string(c));
            }
        }
    }
    return r;
}

SuiteResult milgram(const LatticeData& ld) {
    if (!ld.is_even()) return skip("milgram", "odd lattice");
    SuiteResult r = named("milgram");
    ++r.checks;
    if (milgram_sum(ld.form()) != zeta8(ld.sgn()) * sqrt_rat(Rational(ld.delta())))
        fail(r, "Milgram sum differs from zeta8^sgn sqrt(Delta)");
    return r;
}

SuiteResult reciprocity(const LatticeData& ld) {
    SuiteResult r = named("weil_reciprocity");
    ++r.checks;
    if (!weil_reciprocity_check(ld)) fail(r, "product of local Weil indices is not zeta8^sgn");
    return r;
}

SuiteResult group_law(const LatticeData& ld, const VerifyOptions& opt) {
    SuiteResult r = named("group_law_unitarity");
    std::mt19937 g(opt.seed + 1);
    for (int i = 0; i < opt.pair_samples; ++i) {
        MpZElement x = sample(g, ld, opt.entry_bound), y = sample(g, ld, opt.entry_bound);
        const WeilOperator rx = rho(ld, x), ry = rho(ld, y);
        r.checks += 2;
        if (rho(ld, mp_mul(x, y)) != product(rx, ry)) fail(r, "rho(xy) != rho(x)rho(y) at " + describe(x) + ", " + describe(y));
        if (!is_identity(product(rx, adjoint(rx)))) fail(r, "not unitary at " + describe(x));
    }
    const DiscriminantForm& D = ld.form();
    const WeilOperator S = rho_S(D), Z = rho_Z(D);
    const WeilOperator S2 = product(S, S);
    const WeilOperator Z2 = product(Z, Z);
    r.checks += 4;
    if (S2 != Z) fail(r, "rho(S)^2 != rho(Z)");
    if (!is_identity(product(Z2, Z2))) fail(r, "rho(Z)^4 != I");
    const ExactScalar sgn_sign = ld.sgn() % 2 ? ExactScalar(-1) : ExactScalar(1);
    if (Z2 != WeilOperator::Identity(Z.rows(), Z.cols()) * sgn_sign) fail(r, "rho(Z)^2 != (-1)^sgn");
    if (ld.is_even()) {
        const WeilOperator ST = product(S, rho_T(D));
        if (product(product(ST, ST), ST) != Z) fail(r, "rho((ST)^3) != rho(Z)");
    } else if (rho(ld, mp_mul(mp_S(), mp_S())) != Z) {
        fail(r, "closed rho(S^2) != rho(Z)");
    }
    return r;
}

SuiteResult kernel(const LatticeData& ld) {
    if (!ld.is_even()) return skip("kernel", "odd lattice: only direct is_in_kernel tests apply");
    const long long N = ld.level();
    if (sl2_order_mod(N) > 2000) return skip("kernel", "level too large for residue exhaustion");
    SuiteResult r = named("kernel");
    const KernelDescriptor kd = kernel_descriptor(ld);
    for (const auto& [A1, A2] : residue_lifts(N)) {
        const bool base = in_kernel_base(kd, A1);
        for (const SL2Z& A : {A1, A2}) {
            int hits = 0;
            for (int eps : {1, -1}) hits += is_in_kernel(ld, {A, eps});
            ++r.checks;
            const int expected = base ? (kd.lift ? 1 : 2) : 0;
            if (hits != expected) fail(r, "kernel count " + std::to_string(hits) + " at " + A.to_string());
        }
        if (kd.m % 2 == 0) {
            ++r.checks;
            if (rho(ld, {A1, 1}) != rho(ld, {A2, 1}) || rho(ld, {A1, 1}) != rho(ld, {A1, -1}))
                fail(r, "rho does not factor mod N at " + A1.to_string());
        }
    }
    return r;
}

SuiteResult phi(const LatticeData& ld, const VerifyOptions& opt) {
    if (!ld.is_even()) return skip("phi_character", "odd lattice");
    SuiteResult r = named("phi_character");
    const long long N = ld.level();
    std::mt19937 g(opt.seed + 2);
    auto draw = [&]() {
        for (;;) {
            MpZElement x = random_mp(g, opt.entry_bound);
            if (x.mat.c % N == 0) return x;
        }
    };
    for (int i = 0; i < opt.phi_samples; ++i) {
        MpZElement x = draw(), y = draw();
        r.checks += 2;
        if (phi_char(ld, x) != rho(ld, x)(0, 0)) fail(r, "phi differs from the e_0 coefficient at " + describe(x));
        if (phi_char(ld, mp_mul(x, y)) != phi_char(ld, x) * phi_char(ld, y))
            fail(r, "phi not multiplicative at " + describe(x) + ", " + describe(y));
    }
    return r;
}

SuiteResult braun(const LatticeData& ld) {
    SuiteResult r = named("braun");
    const long long N = ld.level();
    for (long long c = N; c <= std::max(12LL, N); c += N) {
        r.checks += 2;
        try {
            if (!braun_check(ld, c) || !braun_check(ld, -c)) fail(r, "c=" + std::to_string(c));
        } catch (const CapError&) {
            --r.checks;
            --r.checks;
        }
    }
    return r;
}

SuiteResult tensor(const LatticeData& ld) {
    if (!ld.is_even()) return skip("tensor", "odd lattice");
    SuiteResult r = named("tensor");
    ++r.checks;
    if (!tensor_check(ld)) fail(r, "tensor product of p-parts differs from rho_T/rho_S");
    return r;
}

SuiteResult predicates(const LatticeData& ld) {
    SuiteResult r = named("lattice_predicates");
    const DiscriminantForm& D = ld.form();
    const long long N = ld.level(), Nt = D.exponent(), delta = ld.delta();
    if (ld.is_even()) {
        for (long long p = 2; p <= 50; ++p) {
            if (!is_prime(p)) continue;
            ++r.checks;
            if ((delta % p == 0) != (N % p == 0)) fail(r, "p | Delta and p | N disagree at p=" + std::to_string(p));
        }
        if (ld.rank() % 2 == 1) {
            ++r.checks;
            if (N % 4 != 0) fail(r, "odd rank but 4 does not divide N");
        }
        r.checks += 2;
        if ((2 * delta) % N != 0) fail(r, "N does not divide 2 Delta");
        if (delta % Nt != 0) fail(r, "exponent does not divide Delta");
    }
    for (long long c = -12; c <= 12; ++c) {
        if (c == 0) continue;
        const CSubsets s = subsets_c(D, c);
        ++r.checks;
        if (static_cast<long long>(s.kernel.size() * s.image.size()) != delta)
            fail(r, "|D_c| |D^c| != Delta at c=" + std::to_string(c));
    }
    return r;
}

SuiteResult cocycle(const VerifyOptions& opt) {
    SuiteResult r = named("cocycle");
    std::mt19937 g(opt.seed + 3);
    const Place places[] = {Place::real(), Place::prime(2), Place::prime(3), Place::prime(5)};
    for (int i = 0; i < opt.cocycle_samples; ++i) {
        SL2Z A = random_sl2z(g, 12), B = random_sl2z(g, 12), C = random_sl2z(g, 12);
        for (const Place& pl : places) {
            ++r.checks;
            int lhs = kubota_cocycle(A, B, pl) * kubota_cocycle(A * B, C, pl);
            int rhs = kubota_cocycle(A, B * C, pl) * kubota_cocycle(B, C, pl);
            if (lhs != rhs) fail(r, "2-cocycle identity fails at place " + std::to_string(pl.p));
        }
        ++r.checks;
        if (branch_sign_at_i(A, B) != kubota_cocycle(A, B, Place::real()))
            fail(r, "modular branch sign differs from the real cocycle");
    }
    return r;
}

SuiteResult lifts(const VerifyOptions& opt) {
    SuiteResult r = named("lifts");
    std::mt19937 g(opt.seed + 4);
    auto gamma14 = [&]() {
        for (;;) {
            SL2Z A = random_sl2z(g, 40);
            if (in_gamma1_4(A)) return A;
        }
    };
    for (int i = 0; i < opt.cocycle_samples; ++i) {
        MpZElement x = random_mp(g, 20), y = random_mp(g, 20);
        Mp2Q2Element ix = i_map(x), iy = i_map(y), ixy = i_map(mp_mul(x, y));
        ++r.checks;
        if (ixy.eps != kubota_cocycle(x.mat, y.mat, Place::prime(2)) * ix.eps * iy.eps)
            fail(r, "i_map not multiplicative at " + describe(x) + ", " + describe(y));
        for (long long p : {3LL, 5LL}) {
            ++r.checks;
            if (iota_lift(x.mat * y.mat, p) !=
                kubota_cocycle(x.mat, y.mat, Place::prime(p)) * iota_lift(x.mat, p) * iota_lift(y.mat, p))
                fail(r, "iota not a homomorphism at p=" + std::to_string(p));
        }
        SL2Z A = gamma14(), B = gamma14();
        r.checks += 2;
        if (iota_lift(A * B, 2) != kubota_cocycle(A, B, Place::prime(2)) * iota_lift(A, 2) * iota_lift(B, 2))
            fail(r, "iota not a homomorphism at p=2");
        if (gamma4_lift(A * B) != mp_mul(gamma4_lift(A), gamma4_lift(B)))
            fail(r, "gamma4_lift not multiplicative at " + A.to_string() + ", " + B.to_string());
    }
    return r;
}

}  // namespace

std::vector<std::pair<SL2Z, SL2Z>> residue_lifts(long long N) {
    if (N < 1) throw ValidationError("residue_lifts: N must be positive");
    const long long want = sl2_order_mod(N);
    if (want > 20000) throw CapError("residue_lifts: SL2(Z/N) too large");
    using Key = std::tuple<long long, long long, long long, long long>;
    std::map<Key, std::vector<SL2Z>> found;
    std::size_t complete = 0;
    for (long long B = 1; complete < static_cast<std::size_t>(want); ++B) {
        if (B > 8 * N + 8) throw InvariantError("residue_lifts: search did not cover SL2(Z/N)");
        found.clear();
        complete = 0;
        for (long long a = -B; a <= B; ++a)
            for (long long b = -B; b <= B; ++b)
                for (long long c = -B; c <= B; ++c) {
                    // solve ad - bc = 1 for d in range
                    std::vector<long long> ds;
                    if (a != 0) {
                        if ((1 + b * c) % a == 0) ds.push_back((1 + b * c) / a);
                    } else if (b * c == -1) {
                        for (long long d = -B; d <= B; ++d) ds.push_back(d);
                    }
                    for (long long d : ds) {
                        if (d < -B || d > B) continue;
                        Key k{mod_pos(a, N), mod_pos(b, N), mod_pos(c, N), mod_pos(d, N)};
                        auto& v = found[k];
                        if (v.size() < 2) {
                            v.push_back({a, b, c, d});
                            if (v.size() == 2) ++complete;
                        }
                    }
                }
    }
    std::vector<std::pair<SL2Z, SL2Z>> out;
    for (const auto& [k, v] : found) out.emplace_back(v[0], v[1]);
    return out;
}

std::vector<SuiteResult> verify_lattice(const LatticeData& ld, const VerifyOptions& opt) {
    std::vector<SuiteResult> out;
    out.push_back(closed_vs_oracle(ld, opt));
    out.push_back(gauss_sums(ld));
    out.push_back(milgram(ld));
    out.push_back(reciprocity(ld));
    out.push_back(group_law(ld, opt));
    out.push_back(kernel(ld));
    out.push_back(phi(ld, opt));
    out.push_back(braun(ld));
    out.push_back(tensor(ld));
    out.push_back(predicates(ld));
    out.push_back(cocycle(opt));
    out.push_back(lifts(opt));
    return out;
}

}  // namespace weil
