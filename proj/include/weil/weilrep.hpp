#pragma once

#include "weil/jordan.hpp"
#include "weil/lattice.hpp"
#include "weil/metaplectic.hpp"

#include <map>
#include <memory>
#include <vector>

namespace weil {

// Columns and rows are indexed by the canonical element order of the discriminant form.
using WeilOperator = ExactMatrix;

// Everything about one lattice that the representation needs, computed once.
class LatticeData {
public:
    explicit LatticeData(GramLattice L);

    const GramLattice& lattice() const { return L_; }
    const DiscriminantForm& form() const { return D_; }
    int rank() const { return L_.rank(); }
    int sgn() const { return D_.signature(); }
    long long level() const { return D_.level(); }
    long long delta() const { return D_.delta(); }
    bool is_even() const { return L_.is_even(); }
    // primes entering the closed formula: 2 and the primes dividing Delta
    const std::vector<long long>& primes() const { return primes_; }
    const JordanDecomposition& jordan(long long p) const;
    const PPart& part(long long p) const;

private:
    GramLattice L_;
    DiscriminantForm D_;
    std::vector<long long> primes_;
    mutable std::map<long long, JordanDecomposition> jordan_;
    mutable std::map<long long, std::unique_ptr<PPart>> parts_;
};

WeilOperator rho_T(const DiscriminantForm& D);
WeilOperator rho_T2(const DiscriminantForm& D);  // rho(T^2), defined for odd lattices too
WeilOperator rho_S(const DiscriminantForm& D);
WeilOperator rho_Z(const DiscriminantForm& D);

struct PGenerators {
    long long p = 2;
    WeilOperator T, S;  // on D_{M_p}
};
PGenerators rho_p_generators(const LatticeData& ld, long long p);

// product of generator operators along an S, T (or S, T^2) word
WeilOperator rho_oracle(const LatticeData& ld, const MpZElement& x);
// the r0 sum; equals rho(A, eps) up to one scalar of modulus 1
WeilOperator r0_direct(const LatticeData& ld, const SL2Z& A);

ExactScalar xi_p(const LatticeData& ld, const SL2Z& A, int eps, long long p);
WeilOperator rho_closed(const LatticeData& ld, const MpZElement& x);      // even lattices
WeilOperator rho_closed_odd(const LatticeData& ld, const MpZElement& x);  // odd lattices, Gamma_odd
// dispatches on the parity of the lattice
WeilOperator rho(const LatticeData& ld, const MpZElement& x);

ExactScalar phi_char(const LatticeData& ld, const MpZElement& x);

struct KernelDescriptor {
    enum Base { Gamma, GammaN } base = Gamma;
    bool lift = false;  // true: a lift of the base group; false: its double cover
    long long N = 1, Ntilde = 1;
    int m = 0;
    ExactScalar gamma2_sq;  // gamma(f_2)^2
    long long v2_delta = 0;
};
KernelDescriptor kernel_descriptor(const LatticeData& ld);
// membership of the matrix in the base group (a, d = 1 mod Ntilde, b, c = 0 mod N or Gamma(N))
bool in_kernel_base(const KernelDescriptor& kd, const SL2Z& A);
bool is_in_kernel(const LatticeData& ld, const MpZElement& x);

bool braun_check(const LatticeData& ld, long long c);
bool weil_reciprocity_check(const LatticeData& ld);
bool tensor_check(const LatticeData& ld);

}  // namespace weil
