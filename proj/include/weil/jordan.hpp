#pragma once

#include "weil/lattice.hpp"

#include <string>
#include <vector>

namespace weil {

// q^{eps n} for odd p; q^{eps n}_t (odd = true) or q^{eps n}_II for p = 2.
struct JordanComponent {
    long long p = 2;
    int e = 0;  // q = p^e
    int n = 1;
    int eps = 1;
    bool odd = false;  // t-type, only meaningful for p = 2
    int t = 0;         // in [0, 8)
    long long q() const;
    std::string symbol() const;
    friend bool operator==(const JordanComponent&, const JordanComponent&) = default;
};

struct JordanDecomposition {
    long long p = 2;
    std::vector<JordanComponent> components;  // strictly increasing e
    RatMatrix basis;                           // columns in M-basis coordinates
    std::vector<std::vector<int>> columns;     // basis columns of each component
};

JordanDecomposition jordan_decompose(const GramLattice& L, long long p);

ExactScalar weil_index_component(const JordanComponent& c);
// symbol of the component with its form multiplied by k != 0
JordanComponent scale_component(const JordanComponent& c, long long k);
// Weil index of the scaled component via the unit-scaling rule; p must not divide a
ExactScalar weil_index_scaled(const JordanComponent& c, long long a);
ExactScalar weil_index_lattice(const JordanDecomposition& jd);
ExactScalar weil_index_lattice(const GramLattice& L, long long p);

// |D_{M_p,c}| computed from the symbol
long long delta_Mp_c(const JordanDecomposition& jd, long long c);

struct XcChoice {
    RatVector lift;          // half-sum of the orthogonal basis, M-basis coordinates
    std::size_t element = 0;  // class in D_M (2-part only), 0 when the lift is not in M*
    bool odd = false;
    int t = 0;
};
XcChoice choose_xc(const JordanDecomposition& jd, const DiscriminantForm& D, long long c);
ExactScalar xc_phase(const JordanDecomposition& jd, long long a, long long c);
ExactScalar xc_phase_direct(const JordanDecomposition& jd, const GramLattice& L, long long a,
                            long long c);

// class in D_M whose p-part is represented by x in M_p^* and whose other parts vanish
std::size_t p_local_class(const DiscriminantForm& D, const RatVector& x, long long p);

ExactScalar gauss_sum_closed(const GramLattice& L, long long p, long long a, long long c);
ExactScalar gauss_sum_brute(const GramLattice& L, long long p, long long a, long long c);
ExactScalar gauss_sum_closed(const JordanDecomposition& jd, int rank, long long a, long long c);

}  // namespace weil
