#pragma once

// Configurable-precision real and complex arithmetic on top of MPFR.
//
// Every BigReal carries its own precision in bits; binary operations produce
// a result at the larger of the two operand precisions, so no global state is
// involved and values can be computed on any thread.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cmhecke {

inline mpfr_prec_t bits_for_digits(int digits)
{
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

// Decimal working precision P. Series and sums run with kGuardDigits extra.
struct Precision {
    static constexpr int kGuardDigits = 10;
    static constexpr int kMinDigits = 20;

    int digits = 50;

    mpfr_prec_t working_bits() const { return bits_for_digits(digits + kGuardDigits); }

    // 10^(-digits + offset); tolerances are stated relative to P.
    double tolerance_exponent(int offset) const { return -digits + offset; }
};

class BigReal {
public:
    explicit BigReal(mpfr_prec_t bits = 64)
    {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }

    BigReal(long value, mpfr_prec_t bits)
    {
        mpfr_init2(v_, bits);
        mpfr_set_si(v_, value, MPFR_RNDN);
    }

    static BigReal from_string(const std::string& text, mpfr_prec_t bits)
    {
        BigReal r(bits);
        if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
            throw std::invalid_argument("not a decimal number: " + text);
        }
        return r;
    }

    static BigReal from_double(double x, mpfr_prec_t bits)
    {
        BigReal r(bits);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }

    static BigReal ratio(long num, long den, mpfr_prec_t bits)
    {
        BigReal r(num, bits);
        mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
        return r;
    }

    BigReal(const BigReal& other)
    {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }

    BigReal(BigReal&& other) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }

    BigReal& operator=(const BigReal& other)
    {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigReal& operator=(BigReal&& other) noexcept
    {
        mpfr_swap(v_, other.v_);
        return *this;
    }

    ~BigReal() { mpfr_clear(v_); }

    mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long round_to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    long floor_to_long() const { return mpfr_get_si(v_, MPFR_RNDD); }

    // Decimal base-10 exponent-form string with `digits` significant digits.
    std::string to_string(int digits) const
    {
        char* buf = nullptr;
        if (mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_) < 0) {
            throw std::runtime_error("mpfr_asprintf failed");
        }
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    // log10 |x|, -inf for zero.
    double log10_abs() const
    {
        if (is_zero()) {
            return -std::numeric_limits<double>::infinity();
        }
        BigReal t(53);
        mpfr_abs(t.v_, v_, MPFR_RNDN);
        mpfr_log10(t.v_, t.v_, MPFR_RNDN);
        return t.to_double();
    }

    BigReal operator-() const
    {
        BigReal r(bits());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigReal& operator+=(const BigReal& y) { return apply(y, mpfr_add); }
    BigReal& operator-=(const BigReal& y) { return apply(y, mpfr_sub); }
    BigReal& operator*=(const BigReal& y) { return apply(y, mpfr_mul); }
    BigReal& operator/=(const BigReal& y) { return apply(y, mpfr_div); }
    BigReal& operator+=(long y) { mpfr_add_si(v_, v_, y, MPFR_RNDN); return *this; }
    BigReal& operator-=(long y) { mpfr_sub_si(v_, v_, y, MPFR_RNDN); return *this; }
    BigReal& operator*=(long y) { mpfr_mul_si(v_, v_, y, MPFR_RNDN); return *this; }
    BigReal& operator/=(long y) { mpfr_div_si(v_, v_, y, MPFR_RNDN); return *this; }

    friend BigReal operator+(BigReal x, const BigReal& y) { return x += y; }
    friend BigReal operator-(BigReal x, const BigReal& y) { return x -= y; }
    friend BigReal operator*(BigReal x, const BigReal& y) { return x *= y; }
    friend BigReal operator/(BigReal x, const BigReal& y) { return x /= y; }
    friend BigReal operator+(BigReal x, long y) { return x += y; }
    friend BigReal operator-(BigReal x, long y) { return x -= y; }
    friend BigReal operator*(BigReal x, long y) { return x *= y; }
    friend BigReal operator/(BigReal x, long y) { return x /= y; }
    friend BigReal operator+(long x, BigReal y) { return y += x; }
    friend BigReal operator*(long x, BigReal y) { return y *= x; }
    friend BigReal operator-(long x, const BigReal& y)
    {
        BigReal r(y.bits());
        mpfr_si_sub(r.v_, x, y.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(long x, const BigReal& y)
    {
        BigReal r(y.bits());
        mpfr_si_div(r.v_, x, y.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigReal& x, const BigReal& y) { return mpfr_less_p(x.v_, y.v_) != 0; }
    friend bool operator>(const BigReal& x, const BigReal& y) { return mpfr_greater_p(x.v_, y.v_) != 0; }
    friend bool operator<=(const BigReal& x, const BigReal& y) { return mpfr_lessequal_p(x.v_, y.v_) != 0; }
    friend bool operator>=(const BigReal& x, const BigReal& y) { return mpfr_greaterequal_p(x.v_, y.v_) != 0; }
    friend bool operator==(const BigReal& x, const BigReal& y) { return mpfr_equal_p(x.v_, y.v_) != 0; }

    // Bitwise identity including precision.
    bool identical(const BigReal& y) const
    {
        if (bits() != y.bits()) {
            return false;
        }
        if (mpfr_nan_p(v_) && mpfr_nan_p(y.v_)) {
            return true;
        }
        return mpfr_equal_p(v_, y.v_) && mpfr_signbit(v_) == mpfr_signbit(y.v_);
    }

private:
    using Op = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

    BigReal& apply(const BigReal& y, Op op)
    {
        if (y.bits() > bits()) {
            mpfr_prec_round(v_, y.bits(), MPFR_RNDN);
        }
        op(v_, v_, y.v_, MPFR_RNDN);
        return *this;
    }

    mpfr_t v_;
};

namespace detail {
template <class F>
BigReal unary(const BigReal& x, F f)
{
    BigReal r(x.bits());
    f(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
} // namespace detail

inline BigReal abs(const BigReal& x) { return detail::unary(x, mpfr_abs); }
inline BigReal sqrt(const BigReal& x) { return detail::unary(x, mpfr_sqrt); }
inline BigReal cbrt(const BigReal& x) { return detail::unary(x, mpfr_cbrt); }
inline BigReal exp(const BigReal& x) { return detail::unary(x, mpfr_exp); }
inline BigReal log(const BigReal& x) { return detail::unary(x, mpfr_log); }
inline BigReal sin(const BigReal& x) { return detail::unary(x, mpfr_sin); }
inline BigReal cos(const BigReal& x) { return detail::unary(x, mpfr_cos); }
inline BigReal sinh(const BigReal& x) { return detail::unary(x, mpfr_sinh); }
inline BigReal cosh(const BigReal& x) { return detail::unary(x, mpfr_cosh); }
inline BigReal tanh(const BigReal& x) { return detail::unary(x, mpfr_tanh); }

inline BigReal root(const BigReal& x, unsigned long k)
{
    BigReal r(x.bits());
    mpfr_rootn_ui(r.raw(), x.raw(), k, MPFR_RNDN);
    return r;
}

inline BigReal pow(const BigReal& x, long e)
{
    BigReal r(x.bits());
    mpfr_pow_si(r.raw(), x.raw(), e, MPFR_RNDN);
    return r;
}

inline BigReal const_pi(mpfr_prec_t bits)
{
    BigReal r(bits);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

// 10^e at the given precision.
inline BigReal pow10(long e, mpfr_prec_t bits)
{
    BigReal r(10, bits);
    mpfr_pow_si(r.raw(), r.raw(), e, MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------------------

class BigComplex {
public:
    explicit BigComplex(mpfr_prec_t bits = 64) : re_(bits), im_(bits) {}
    BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit BigComplex(BigReal re) : re_(std::move(re)), im_(re_.bits()) {}

    const BigReal& re() const { return re_; }
    const BigReal& im() const { return im_; }
    BigReal& re() { return re_; }
    BigReal& im() { return im_; }
    mpfr_prec_t bits() const { return std::max(re_.bits(), im_.bits()); }

    BigComplex conj() const { return {re_, -im_}; }
    BigComplex operator-() const { return {-re_, -im_}; }
    // Multiplication by i.
    BigComplex times_i() const { return {-im_, re_}; }

    BigReal norm_sq() const { return re_ * re_ + im_ * im_; }
    BigReal abs() const
    {
        BigReal r(bits());
        mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
        return r;
    }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    BigComplex& operator+=(const BigComplex& y)
    {
        re_ += y.re_;
        im_ += y.im_;
        return *this;
    }
    BigComplex& operator-=(const BigComplex& y)
    {
        re_ -= y.re_;
        im_ -= y.im_;
        return *this;
    }
    BigComplex& operator*=(const BigComplex& y)
    {
        // (a + bi)(c + di) = (ac - bd) + (ad + bc) i
        BigReal ac = re_ * y.re_;
        BigReal bd = im_ * y.im_;
        im_ *= y.re_;
        BigReal ad = re_ * y.im_;
        im_ += ad;
        re_ = std::move(ac);
        re_ -= bd;
        return *this;
    }
    BigComplex& operator/=(const BigComplex& y)
    {
        const BigReal den = y.norm_sq();
        *this *= y.conj();
        re_ /= den;
        im_ /= den;
        return *this;
    }
    BigComplex& operator*=(const BigReal& s)
    {
        re_ *= s;
        im_ *= s;
        return *this;
    }
    BigComplex& operator/=(const BigReal& s)
    {
        re_ /= s;
        im_ /= s;
        return *this;
    }
    BigComplex& operator*=(long s)
    {
        re_ *= s;
        im_ *= s;
        return *this;
    }
    BigComplex& operator/=(long s)
    {
        re_ /= s;
        im_ /= s;
        return *this;
    }
    BigComplex& operator+=(const BigReal& s)
    {
        re_ += s;
        return *this;
    }
    BigComplex& operator-=(const BigReal& s)
    {
        re_ -= s;
        return *this;
    }

    friend BigComplex operator+(BigComplex x, const BigComplex& y) { return x += y; }
    friend BigComplex operator-(BigComplex x, const BigComplex& y) { return x -= y; }
    friend BigComplex operator*(BigComplex x, const BigComplex& y) { return x *= y; }
    friend BigComplex operator/(BigComplex x, const BigComplex& y) { return x /= y; }
    friend BigComplex operator*(BigComplex x, const BigReal& s) { return x *= s; }
    friend BigComplex operator*(const BigReal& s, BigComplex x) { return x *= s; }
    friend BigComplex operator/(BigComplex x, const BigReal& s) { return x /= s; }
    friend BigComplex operator*(BigComplex x, long s) { return x *= s; }
    friend BigComplex operator/(BigComplex x, long s) { return x /= s; }
    friend BigComplex operator+(BigComplex x, const BigReal& s) { return x += s; }
    friend BigComplex operator-(BigComplex x, const BigReal& s) { return x -= s; }

    bool identical(const BigComplex& y) const { return re_.identical(y.re_) && im_.identical(y.im_); }

private:
    BigReal re_;
    BigReal im_;
};

inline BigComplex reciprocal(const BigComplex& z)
{
    const BigReal den = z.norm_sq();
    return {z.re() / den, -z.im() / den};
}

// |x - y|
inline BigReal distance(const BigComplex& x, const BigComplex& y) { return (x - y).abs(); }

// ---------------------------------------------------------------------------

struct ConstantSet {
    mpfr_prec_t bits;
    BigReal pi;
    BigReal sqrt3;
    BigReal cbrt2;   // 2^(1/3)
    BigReal cbrt4;   // 2^(2/3)
    BigComplex i;
    BigComplex tau;  // (-1 + sqrt(3) i)/2
    BigComplex sqrt_minus3;  // sqrt(3) i

    BigComplex embed(long a, long b) const
    {
        // a + b tau = (a - b/2) + (b sqrt(3)/2) i
        BigReal re(a, bits);
        re -= BigReal::ratio(b, 2, bits);
        BigReal im = sqrt3 * b;
        im /= 2;
        return {std::move(re), std::move(im)};
    }
};

inline ConstantSet constants(mpfr_prec_t bits)
{
    BigReal two(2, bits);
    BigReal s3 = sqrt(BigReal(3, bits));
    BigReal c2 = cbrt(two);
    BigReal c4 = cbrt(BigReal(4, bits));
    BigComplex i{BigReal(0, bits), BigReal(1, bits)};
    BigComplex tau{BigReal::ratio(-1, 2, bits), s3 / 2};
    BigComplex sm3{BigReal(0, bits), s3};
    return {bits, const_pi(bits), s3, c2, c4, i, tau, sm3};
}

inline ConstantSet constants(Precision p)
{
    if (p.digits < Precision::kMinDigits) {
        throw std::invalid_argument("precision must be at least 20 digits");
    }
    return constants(p.working_bits());
}

// ---------------------------------------------------------------------------
// Deterministic reduction and a fixed-order parallel map.
// ---------------------------------------------------------------------------

namespace detail {
template <class T>
T tree_sum(std::span<const T> terms)
{
    if (terms.size() == 1) {
        return terms[0];
    }
    const std::size_t mid = terms.size() / 2;
    T left = tree_sum(terms.subspan(0, mid));
    left += tree_sum(terms.subspan(mid));
    return left;
}
} // namespace detail

// Balanced pairwise sum with a split point fixed by the sequence length alone,
// so the rounding sequence never depends on how the terms were produced.
inline BigComplex deterministic_sum(std::span<const BigComplex> terms, mpfr_prec_t bits)
{
    if (terms.empty()) {
        return BigComplex(bits);
    }
    return detail::tree_sum(terms);
}

inline BigReal deterministic_sum(std::span<const BigReal> terms, mpfr_prec_t bits)
{
    if (terms.empty()) {
        return BigReal(bits);
    }
    return detail::tree_sum(terms);
}

// Evaluates f(0..n-1) on `workers` threads and returns the results in index
// order. The first exception thrown by any task is rethrown on the caller.
template <class F>
auto parallel_map(std::size_t n, unsigned workers, F&& f) -> std::vector<decltype(f(std::size_t{0}))>
{
    using T = decltype(f(std::size_t{0}));
    std::vector<std::optional<T>> slots(n);
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < n; i += workers) {
                slots[i].emplace(f(i));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace cmhecke
