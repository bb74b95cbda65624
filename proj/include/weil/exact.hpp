#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

// Boost 1.74 probes const_iterator, which Eigen 3.4 sets to void for 2-D matrices.
namespace boost::multiprecision::detail {
template <class S, int R, int C, int O, int MR, int MC>
struct is_byte_container<Eigen::Matrix<S, R, C, O, MR, MC>> : std::false_type {};
}  // namespace boost::multiprecision::detail

namespace weil {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Element of Q(zeta_L), stored as integer numerators over one common
// denominator in the power basis 1, z, ..., z^(phi(L)-1) reduced mod Phi_L.
class ExactScalar {
public:
    ExactScalar();
    ExactScalar(long long n);  // NOLINT: integers embed implicitly
    ExactScalar(int n) : ExactScalar(static_cast<long long>(n)) {}
    explicit ExactScalar(const Rational& r);

    static ExactScalar from_coeffs(int order, const std::vector<Rational>& coeffs);
    static ExactScalar monomial(int order, int k, const Rational& c = Rational(1));
    // sum_k c[k] zeta_order^k for an element of the group ring Z[x]/(x^order - 1)
    static ExactScalar from_group_ring(int order, const std::vector<long long>& c);

    int order() const { return order_; }
    std::vector<Rational> coeffs() const;
    bool is_zero() const;
    bool is_rational() const;
    Rational rational_value() const;  // requires is_rational()

    // Same element written in Q(zeta_L); order() must divide L.
    ExactScalar embed(int L) const;
    ExactScalar conj() const;
    ExactScalar pow(long long e) const;  // e >= 0

    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    ExactScalar operator-() const;
    friend bool operator==(const ExactScalar& a, const ExactScalar& b);
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    std::string to_string() const;

private:
    void normalize();

    int order_ = 1;
    std::vector<BigInt> num_;
    BigInt den_ = 1;
};

// e(num/den) = exp(2 pi i num/den)
ExactScalar root_of_unity(long long num, long long den);
inline ExactScalar zeta8(long long k) { return root_of_unity(k, 8); }
ExactScalar sqrt_rat(const Rational& r);

inline ExactScalar scalar_add(const ExactScalar& a, const ExactScalar& b) { return a + b; }
inline ExactScalar scalar_mul(const ExactScalar& a, const ExactScalar& b) { return a * b; }
inline ExactScalar scalar_conj(const ExactScalar& a) { return a.conj(); }
inline bool scalar_eq(const ExactScalar& a, const ExactScalar& b) { return a == b; }

// Rigorous enclosure [re_lo, re_hi] x [im_lo, im_hi] of the standard embedding.
struct ComplexInterval {
    std::string re_lo, re_hi, im_lo, im_hi;  // decimal strings, outward rounded
    double re_mid = 0, im_mid = 0, radius = 0;
    bool contains(double re, double im) const;
    double width() const;
};
ComplexInterval eval_numeric(const ExactScalar& a, unsigned precision_bits);

long long euler_phi(long long n);
std::vector<BigInt> cyclotomic_polynomial(int L);

std::string to_string(const Rational& r);
Rational parse_rational(const std::string& s);

using ExactMatrix = Mat<ExactScalar>;
ExactMatrix adjoint(const ExactMatrix& m);
ExactMatrix product(const ExactMatrix& a, const ExactMatrix& b);
bool is_identity(const ExactMatrix& m);

}  // namespace weil

namespace Eigen {
template <>
struct NumTraits<weil::ExactScalar> : GenericNumTraits<weil::ExactScalar> {
    using Real = weil::ExactScalar;
    using NonInteger = weil::ExactScalar;
    using Nested = weil::ExactScalar;
    using Literal = weil::ExactScalar;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 50,
        MulCost = 200
    };
    static inline int digits10() { return 0; }
};
}  // namespace Eigen
