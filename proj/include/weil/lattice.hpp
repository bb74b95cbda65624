#pragma once

#include "weil/exact.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace weil {

using IntMatrix = Mat<BigInt>;
using RatMatrix = Mat<Rational>;
using RatVector = Vec<Rational>;

struct SmithForm {
    IntMatrix U, D, V;  // U * A * V = D
};
SmithForm smith_normal_form(const IntMatrix& A);

Rational determinant(const RatMatrix& A);
RatMatrix inverse(const RatMatrix& A);  // throws on singular input
RatMatrix to_rational(const IntMatrix& A);

class GramLattice {
public:
    explicit GramLattice(IntMatrix gram);
    static GramLattice from_rows(const std::vector<std::vector<long long>>& rows);

    const IntMatrix& gram() const { return gram_; }
    int rank() const { return static_cast<int>(gram_.rows()); }
    bool is_even() const { return even_; }
    const BigInt& det() const { return det_; }

private:
    IntMatrix gram_;
    BigInt det_;
    bool even_ = true;
};

int signature(const GramLattice& L);
long long level(const GramLattice& L);
GramLattice direct_sum(const GramLattice& a, const GramLattice& b);
GramLattice scaled(const GramLattice& L, long long k);

struct DFElement {
    std::vector<long long> coords;
    friend bool operator==(const DFElement&, const DFElement&) = default;
};

// D_M = M*/M with generators g_i of orders d_i.  Elements are enumerated in
// mixed radix (first coordinate fastest); the index is the canonical key.
class DiscriminantForm {
public:
    static constexpr std::size_t enumeration_cap = 100000;

    DiscriminantForm(const IntMatrix& gram, RatMatrix lifts, std::vector<long long> orders,
                     int signature, long long level, bool even);

    const std::vector<long long>& orders() const { return orders_; }
    std::size_t size() const { return size_; }
    long long delta() const { return static_cast<long long>(size_); }
    int signature() const { return signature_; }
    long long level() const { return level_; }
    long long exponent() const { return exponent_; }
    bool is_even() const { return even_; }
    int rank() const { return static_cast<int>(gram_.rows()); }
    const IntMatrix& gram() const { return gram_; }
    const RatMatrix& lifts() const { return lifts_; }  // columns: generator lifts in M*

    // all values below are numerators over denom() = 2 * exponent(), taken mod denom()
    long long denom() const { return den_; }
    long long q_num(std::size_t idx) const { return qnum_[idx]; }
    long long b_num(std::size_t i, std::size_t j) const;
    Rational q(std::size_t idx) const;           // gamma^2/2 mod 1 of the canonical lift
    Rational b(std::size_t i, std::size_t j) const;  // (gamma, delta) mod 1
    Rational bilinear_gen(std::size_t i, std::size_t j) const;  // generator table
    Rational quad_gen(std::size_t i) const;

    DFElement element(std::size_t idx) const;
    std::size_t index(const DFElement& e) const;
    std::size_t coord(std::size_t idx, std::size_t i) const;
    std::size_t add(std::size_t i, std::size_t j) const;
    std::size_t neg(std::size_t i) const;
    std::size_t scale(std::size_t i, long long c) const;
    RatVector lift(std::size_t idx) const;  // canonical lift in M*, M-basis coordinates
    // class of a vector of M* (M-basis coordinates); only for forms built by discriminant_form
    std::size_t index_of_lift(const RatVector& x) const;
    bool has_lift_map() const { return lift_map_.size() > 0; }
    void set_lift_map(IntMatrix UG) { lift_map_ = std::move(UG); }
    const IntMatrix& lift_map() const { return lift_map_; }

private:
    IntMatrix gram_;
    RatMatrix lifts_;
    std::vector<long long> orders_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 1;
    int signature_ = 0;
    long long level_ = 1;
    long long exponent_ = 1;
    bool even_ = true;
    long long den_ = 2;
    std::vector<std::vector<long long>> bgen_;
    std::vector<long long> qgen_;
    std::vector<long long> qnum_;
    IntMatrix lift_map_;  // rows for nontrivial generators of U * G
};

DiscriminantForm discriminant_form(const GramLattice& L);

struct PPart {
    long long p = 2;
    DiscriminantForm form;
    std::vector<std::size_t> projection;  // index in D_M -> index in D_{M_p}
    std::vector<std::size_t> inclusion;   // index in D_{M_p} -> index in D_M
};
PPart p_part(const DiscriminantForm& D, long long p);

std::vector<long long> interesting_primes(const GramLattice& L);

struct CSubsets {
    std::vector<std::size_t> kernel;  // D_{M,c}
    std::vector<std::size_t> image;   // D_M^c
};
CSubsets subsets_c(const DiscriminantForm& D, long long c);
std::vector<std::size_t> kernel_generators(const DiscriminantForm& D, long long c);
std::vector<std::size_t> coset_Dcstar(const DiscriminantForm& D, long long c);
// q numerator; for odd lattices and elements of odd order, the representative mod 1/2
// whose denominator is odd
long long q_num_odd_part(const DiscriminantForm& D, std::size_t x);
bool in_Dcstar(const DiscriminantForm& D, long long c, std::size_t beta);

// An alpha with c * alpha = target, or size() if none exists.
std::size_t divide_by(const DiscriminantForm& D, long long c, std::size_t target);

// beta_c^2/2 = c alpha^2/2 + (x_c, alpha) mod 1 where beta = x_c + c alpha
Rational beta_c_sq_half(const DiscriminantForm& D, long long c, std::size_t xc, std::size_t beta);
// same value as a numerator over D.denom(), multiplied by a first (for odd lattices
// only a * beta_c^2/2 is well defined)
long long a_beta_c_sq_half_num(const DiscriminantForm& D, long long a, long long c, std::size_t xc,
                               std::size_t beta);

ExactScalar milgram_sum(const DiscriminantForm& D);

}  // namespace weil
