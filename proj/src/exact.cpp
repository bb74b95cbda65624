#include "weil/exact.hpp"
#include "weil/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace weil {

namespace {

struct CycloContext {
    int L = 1;
    int phi = 1;
    // reduce[j] = x^j mod Phi_L as sparse (index, coefficient) pairs, 0 <= j < L
    std::vector<std::vector<std::pair<int, long long>>> reduce;
};

std::vector<BigInt> poly_divide_exact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
    // both monic, coefficient i is x^i
    const std::size_t dn = den.size() - 1;
    std::vector<BigInt> q(num.size() - dn, BigInt(0));
    for (std::size_t i = num.size(); i-- > dn;) {
        BigInt c = num[i];
        if (c == 0) continue;
        q[i - dn] = c;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dn; ++i)
        if (num[i] != 0) throw InvariantError("cyclotomic division left a remainder");
    return q;
}

std::map<int, std::vector<BigInt>>& phi_cache() {
    static std::map<int, std::vector<BigInt>> cache;
    return cache;
}
std::mutex& phi_mutex() {
    static std::mutex m;
    return m;
}

std::vector<BigInt> cyclo_locked(int L) {
    auto& cache = phi_cache();
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
    std::vector<BigInt> p(L + 1, BigInt(0));
    p[0] = -1;
    p[L] = 1;
    for (int d = 1; d < L; ++d)
        if (L % d == 0) p = poly_divide_exact(p, cyclo_locked(d));
    cache[L] = p;
    return p;
}

const CycloContext& context(int L) {
    static std::mutex m;
    static std::map<int, std::unique_ptr<CycloContext>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(L);
    if (it != cache.end()) return *it->second;

    std::vector<BigInt> phi_poly;
    {
        std::lock_guard<std::mutex> lk(phi_mutex());
        phi_poly = cyclo_locked(L);
    }
    auto ctx = std::make_unique<CycloContext>();
    ctx->L = L;
    ctx->phi = static_cast<int>(phi_poly.size()) - 1;
    const int n = ctx->phi;
    std::vector<long long> cur(n, 0);
    cur[0] = 1;
    ctx->reduce.resize(L);
    for (int j = 0; j < L; ++j) {
        auto& row = ctx->reduce[j];
        for (int k = 0; k < n; ++k)
            if (cur[k] != 0) row.emplace_back(k, cur[k]);
        // multiply by x and reduce the overflow term
        long long top = cur[n - 1];
        for (int k = n - 1; k > 0; --k) cur[k] = cur[k - 1];
        cur[0] = 0;
        if (top != 0)
            for (int k = 0; k < n; ++k) cur[k] -= top * static_cast<long long>(phi_poly[k]);
    }
    auto& ref = *ctx;
    cache[L] = std::move(ctx);
    return ref;
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

BigInt big_gcd(const BigInt& a, const BigInt& b) { return mp::gcd(a, b); }

}  // namespace

long long euler_phi(long long n) {
    long long r = n;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

std::vector<BigInt> cyclotomic_polynomial(int L) {
    std::lock_guard<std::mutex> lk(phi_mutex());
    return cyclo_locked(L);
}

ExactScalar::ExactScalar() : num_(1, BigInt(0)) {}

ExactScalar::ExactScalar(long long n) : num_(1, BigInt(n)) {}

ExactScalar::ExactScalar(const Rational& r)
    : num_(1, mp::numerator(r)), den_(mp::denominator(r)) {}

ExactScalar ExactScalar::from_coeffs(int order, const std::vector<Rational>& coeffs) {
    const auto& ctx = context(order);
    if (static_cast<int>(coeffs.size()) != ctx.phi)
        throw ValidationError("coefficient vector length must be phi(order)");
    ExactScalar r;
    r.order_ = order;
    BigInt den = 1;
    for (const auto& c : coeffs) den = den / big_gcd(den, mp::denominator(c)) * mp::denominator(c);
    r.den_ = den;
    r.num_.assign(ctx.phi, BigInt(0));
    for (int k = 0; k < ctx.phi; ++k)
        r.num_[k] = mp::numerator(coeffs[k]) * (den / mp::denominator(coeffs[k]));
    r.normalize();
    return r;
}

ExactScalar ExactScalar::monomial(int order, int k, const Rational& c) {
    const auto& ctx = context(order);
    k %= order;
    if (k < 0) k += order;
    ExactScalar r;
    r.order_ = order;
    r.num_.assign(ctx.phi, BigInt(0));
    for (auto [idx, v] : ctx.reduce[k]) r.num_[idx] = mp::numerator(c) * v;
    r.den_ = mp::denominator(c);
    r.normalize();
    return r;
}

ExactScalar ExactScalar::from_group_ring(int order, const std::vector<long long>& c) {
    if (static_cast<int>(c.size()) != order) throw ValidationError("group ring vector has wrong length");
    const auto& ctx = context(order);
    std::vector<long long> acc(ctx.phi, 0);
    bool wide = false;
    for (int k = 0; k < order && !wide; ++k) {
        if (!c[k]) continue;
        for (auto [idx, v] : ctx.reduce[k])
            if (__builtin_mul_overflow(c[k], v, &v) || __builtin_add_overflow(acc[idx], v, &acc[idx])) wide = true;
    }
    ExactScalar r;
    r.order_ = order;
    r.num_.assign(ctx.phi, BigInt(0));
    if (!wide) {
        for (int k = 0; k < ctx.phi; ++k) r.num_[k] = acc[k];
    } else {
        for (int k = 0; k < order; ++k)
            if (c[k])
                for (auto [idx, v] : ctx.reduce[k]) r.num_[idx] += BigInt(c[k]) * v;
    }
    r.normalize();
    return r;
}

std::vector<Rational> ExactScalar::coeffs() const {
    std::vector<Rational> out;
    out.reserve(num_.size());
    for (const auto& n : num_) out.emplace_back(Rational(n) / Rational(den_));
    return out;
}

bool ExactScalar::is_zero() const {
    for (const auto& n : num_)
        if (n != 0) return false;
    return true;
}

bool ExactScalar::is_rational() const {
    for (std::size_t k = 1; k < num_.size(); ++k)
        if (num_[k] != 0) return false;
    return true;
}

Rational ExactScalar::rational_value() const {
    if (!is_rational()) throw InvariantError("scalar is not rational");
    return Rational(num_[0]) / Rational(den_);
}

void ExactScalar::normalize() {
    if (is_zero()) {
        den_ = 1;
        return;
    }
    BigInt g = mp::abs(den_);
    for (const auto& n : num_) {
        if (g == 1) break;
        if (n != 0) g = big_gcd(g, mp::abs(n));
    }
    if (den_ < 0) g = -g;
    if (g != 1) {
        for (auto& n : num_) n /= g;
        den_ /= g;
    }
}

ExactScalar ExactScalar::embed(int L) const {
    if (L == order_) return *this;
    if (L % order_ != 0) throw InvariantError("embed: order does not divide target");
    const auto& ctx = context(L);
    const int s = L / order_;
    ExactScalar r;
    r.order_ = L;
    r.num_.assign(ctx.phi, BigInt(0));
    r.den_ = den_;
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] == 0) continue;
        for (auto [idx, v] : ctx.reduce[static_cast<int>(k) * s]) r.num_[idx] += num_[k] * v;
    }
    return r;
}

ExactScalar ExactScalar::conj() const {
    const auto& ctx = context(order_);
    ExactScalar r;
    r.order_ = order_;
    r.num_.assign(ctx.phi, BigInt(0));
    r.den_ = den_;
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] == 0) continue;
        int e = (order_ - static_cast<int>(k)) % order_;
        for (auto [idx, v] : ctx.reduce[e]) r.num_[idx] += num_[k] * v;
    }
    r.normalize();
    return r;
}

ExactScalar ExactScalar::pow(long long e) const {
    ExactScalar result(1LL), base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    int L = lcm_int(order_, o.order_);
    if (L != order_) *this = embed(L);
    const ExactScalar& b = (o.order_ == L) ? o : o.embed(L);
    if (den_ == b.den_) {
        for (std::size_t k = 0; k < num_.size(); ++k) num_[k] += b.num_[k];
    } else {
        BigInt g = big_gcd(den_, b.den_);
        BigInt fa = b.den_ / g, fb = den_ / g;
        for (std::size_t k = 0; k < num_.size(); ++k) num_[k] = num_[k] * fa + b.num_[k] * fb;
        den_ *= fa;
    }
    normalize();
    return *this;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r = *this;
    for (auto& n : r.num_) n = -n;
    return r;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    if (is_zero() || o.is_zero()) return *this = ExactScalar();
    if (o.order_ == 1 && o.is_rational()) {
        for (auto& n : num_) n *= o.num_[0];
        den_ *= o.den_;
        normalize();
        return *this;
    }
    if (order_ == 1) {
        ExactScalar r = o;
        for (auto& n : r.num_) n *= num_[0];
        r.den_ *= den_;
        r.normalize();
        return *this = r;
    }
    int L = lcm_int(order_, o.order_);
    const ExactScalar a = (order_ == L) ? *this : embed(L);
    const ExactScalar b = (o.order_ == L) ? o : o.embed(L);
    const auto& ctx = context(L);
    std::vector<BigInt> acc(L, BigInt(0));
    std::vector<char> used(L, 0);
    for (int i = 0; i < ctx.phi; ++i) {
        if (a.num_[i] == 0) continue;
        for (int j = 0; j < ctx.phi; ++j) {
            if (b.num_[j] == 0) continue;
            int e = (i + j) % L;
            acc[e] += a.num_[i] * b.num_[j];
            used[e] = 1;
        }
    }
    order_ = L;
    num_.assign(ctx.phi, BigInt(0));
    for (int e = 0; e < L; ++e) {
        if (!used[e] || acc[e] == 0) continue;
        for (auto [idx, v] : ctx.reduce[e]) num_[idx] += acc[e] * v;
    }
    den_ = a.den_ * b.den_;
    normalize();
    return *this;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
    if (a.order_ == b.order_) return a.den_ == b.den_ && a.num_ == b.num_;
    int L = lcm_int(a.order_, b.order_);
    ExactScalar x = a.embed(L), y = b.embed(L);
    x.normalize();
    y.normalize();
    return x.den_ == y.den_ && x.num_ == y.num_;
}

std::string ExactScalar::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << weil::to_string(Rational(num_[k]) / Rational(den_)) << ")";
        if (k > 0) os << "*z" << order_ << "^" << k;
    }
    if (first) os << "0";
    return os.str();
}

ExactScalar root_of_unity(long long num, long long den) {
    if (den < 1) throw ValidationError("root_of_unity: denominator must be positive");
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = den;
    num /= g;
    den /= g;
    num %= den;
    if (num < 0) num += den;
    return ExactScalar::monomial(static_cast<int>(den), static_cast<int>(num));
}

namespace {

ExactScalar sqrt_prime(long long p) {
    if (p == 2) return zeta8(1) + zeta8(-1);
    // quadratic Gauss sum sum_x e(x^2/p) equals sqrt(p) or i*sqrt(p)
    ExactScalar g;
    for (long long x = 0; x < p; ++x) g += root_of_unity(x * x % p, p);
    if (p % 4 == 1) return g;
    return g * root_of_unity(-1, 4);
}

}  // namespace

ExactScalar sqrt_rat(const Rational& r) {
    if (r <= 0) throw ValidationError("sqrt_rat: argument must be positive");
    static std::mutex m;
    static std::map<std::pair<BigInt, BigInt>, ExactScalar> cache;
    auto key = std::make_pair(mp::numerator(r), mp::denominator(r));
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    BigInt n = key.first * key.second;
    BigInt square = 1;
    ExactScalar result(1LL);
    BigInt rest = n;
    for (long long p = 2; BigInt(p) * p <= rest; ++p) {
        int k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        for (int i = 0; i < k / 2; ++i) square *= p;
        if (k % 2) result *= sqrt_prime(p);
    }
    if (rest > 1) {
        if (rest > BigInt(1000000000)) throw CapError("sqrt_rat: radicand too large");
        result *= sqrt_prime(static_cast<long long>(rest));
    }
    result *= ExactScalar(Rational(square) / Rational(key.second));
    auto num = eval_numeric(result, 64);
    if (!(num.re_mid > 0) || std::abs(num.im_mid) > 1e-9 * (1 + num.re_mid))
        throw InvariantError("sqrt_rat: constructed root is not on the positive real axis");
    std::lock_guard<std::mutex> lock(m);
    cache.emplace(key, result);
    return result;
}

bool ComplexInterval::contains(double re, double im) const {
    return std::stod(re_lo) <= re && re <= std::stod(re_hi) && std::stod(im_lo) <= im &&
           im <= std::stod(im_hi);
}

double ComplexInterval::width() const {
    return std::max(std::stod(re_hi) - std::stod(re_lo), std::stod(im_hi) - std::stod(im_lo));
}

ComplexInterval eval_numeric(const ExactScalar& a, unsigned precision_bits) {
    using Float = mp::mpfr_float;
    if (precision_bits < 32) throw ValidationError("eval_numeric: precision must be >= 32 bits");
    const unsigned work = precision_bits + 40;
    const unsigned digits10 = static_cast<unsigned>(work * 0.30103) + 2;
    Float::default_precision(digits10);
    const int L = a.order();
    const auto cs = a.coeffs();
    Float re(0), im(0), abs_sum(0);
    Float twopi = Float(2) * boost::math::constants::pi<Float>();
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (cs[k] == 0) continue;
        Float c = Float(mp::numerator(cs[k])) / Float(mp::denominator(cs[k]));
        Float ang = twopi * Float(static_cast<long long>(k)) / Float(L);
        re += c * mp::cos(ang);
        im += c * mp::sin(ang);
        abs_sum += mp::abs(c);
    }
    // every rounded operation costs at most a few ulps at the working precision
    Float ulp = mp::ldexp(Float(1), -static_cast<int>(work) + 6);
    Float rad = (abs_sum + 1) * Float(static_cast<long long>(cs.size() + 16)) * ulp;
    const unsigned out_digits = static_cast<unsigned>(precision_bits * 0.30103) + 3;
    Float fmt = mp::pow(Float(10), -static_cast<int>(out_digits) + 2);
    Float rre = rad + (mp::abs(re) + 1) * fmt;
    Float rim = rad + (mp::abs(im) + 1) * fmt;
    ComplexInterval out;
    auto s = [&](const Float& x) { return x.str(out_digits, std::ios_base::scientific); };
    out.re_lo = s(re - rre);
    out.re_hi = s(re + rre);
    out.im_lo = s(im - rim);
    out.im_hi = s(im + rim);
    out.re_mid = static_cast<double>(re);
    out.im_mid = static_cast<double>(im);
    out.radius = static_cast<double>(mp::max(rre, rim));
    return out;
}

std::string to_string(const Rational& r) {
    if (mp::denominator(r) == 1) return mp::numerator(r).str();
    return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw ValidationError("zero denominator in rational '" + s + "'");
        return Rational(n) / Rational(d);
    } catch (const std::runtime_error&) {
        throw ValidationError("malformed rational '" + s + "'");
    }
}

ExactMatrix adjoint(const ExactMatrix& m) {
    ExactMatrix r(m.cols(), m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(j, i) = m(i, j).conj();
    return r;
}

ExactMatrix product(const ExactMatrix& a, const ExactMatrix& b) {
    ExactMatrix r(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            ExactScalar s;
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

bool is_identity(const ExactMatrix& m) {
    if (m.rows() != m.cols()) return false;
    const ExactScalar one(1LL);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != (i == j ? one : ExactScalar())) return false;
    return true;
}

}  // namespace weil
