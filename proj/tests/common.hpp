#pragma once

#include "weil/exact.hpp"
#include "weil/lattice.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <vector>

namespace weil {
// lets doctest and Eigen print scalars and operators in failure messages
inline std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.to_string(); }
}  // namespace weil

namespace testing {

using Rows = std::vector<std::vector<long long>>;

inline const std::vector<Rows>& even_corpus() {
    static const std::vector<Rows> c = {{{2}},           {{-2}},          {{4}},
                                        {{6}},           {{2, 1}, {1, 2}}, {{0, 1}, {1, 0}},
                                        {{2, 0}, {0, 4}}, {{2, 1}, {1, 4}}, {{0, 2}, {2, 0}}};
    return c;
}

inline const std::vector<Rows>& odd_corpus() {
    static const std::vector<Rows> c = {{{1}}, {{3}}, {{5}}, {{1, 0}, {0, 2}}, {{1, 0}, {0, 1}}};
    return c;
}

inline weil::GramLattice lat(const Rows& r) { return weil::GramLattice::from_rows(r); }

// Plain double evaluation of the power-basis coefficients, independent of the MPFR path.
inline std::complex<double> approx(const weil::ExactScalar& x) {
    const auto cs = x.coeffs();
    std::complex<double> s = 0;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (cs[k] == 0) continue;
        double c = static_cast<double>(cs[k]);
        s += c * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / x.order());
    }
    return s;
}

inline std::complex<double> e_d(double x) { return std::polar(1.0, 2 * std::numbers::pi * x); }

inline bool near(std::complex<double> a, std::complex<double> b, double tol = 1e-9) {
    return std::abs(a - b) < tol;
}

}  // namespace testing
