#pragma once

// Exact arithmetic in the Eisenstein integers Z[tau], tau^2 + tau + 1 = 0.
//
// Elements are a + b*tau with 64-bit coefficients. Every product is formed in
// 128-bit arithmetic and checked, so an overflow raises instead of wrapping.
// The ring is Euclidean for the norm a^2 - ab + b^2, which gives gcds, CRT
// idempotents, and power-residue symbols by exponentiation modulo a prime.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace cmhecke {

using Int = std::int64_t;
using Wide = __int128;

namespace detail {

inline Int narrow(Wide v)
{
    if (v > static_cast<Wide>(std::numeric_limits<Int>::max()) ||
        v < static_cast<Wide>(std::numeric_limits<Int>::min())) {
        throw std::overflow_error("Eisenstein integer coefficient overflow");
    }
    return static_cast<Int>(v);
}

// Floor division for a positive divisor.
inline Wide floor_div(Wide n, Wide d)
{
    Wide q = n / d;
    if ((n % d != 0) && (n < 0)) {
        --q;
    }
    return q;
}

inline Wide floor_mod(Wide n, Wide d)
{
    return n - floor_div(n, d) * d;
}

// Nearest integer to n/d (d > 0), exact halves rounded toward zero.
inline Wide round_half_toward_zero(Wide n, Wide d)
{
    const Wide q = floor_div(n, d);
    const Wide r = n - q * d;
    if (2 * r < d) {
        return q;
    }
    if (2 * r > d) {
        return q + 1;
    }
    return (q >= 0) ? q : q + 1;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e != 0) {
        if (e & 1U) {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1U;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
inline bool is_rational_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) {
            return n == p;
        }
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

class EisensteinInt {
public:
    constexpr EisensteinInt() = default;
    constexpr EisensteinInt(Int a, Int b = 0) : a_(a), b_(b) {}

    static constexpr EisensteinInt tau() { return {0, 1}; }
    // sqrt(-3) = 1 + 2 tau
    static constexpr EisensteinInt sqrt_minus3() { return {1, 2}; }

    constexpr Int a() const { return a_; }
    constexpr Int b() const { return b_; }

    Int norm() const
    {
        const Wide a = a_;
        const Wide b = b_;
        return detail::narrow(a * a - a * b + b * b);
    }

    // tau-bar = -1 - tau
    EisensteinInt conj() const { return {detail::narrow(static_cast<Wide>(a_) - b_), detail::narrow(-static_cast<Wide>(b_))}; }

    constexpr bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_unit() const { return norm() == 1; }
    constexpr bool is_rational() const { return b_ == 0; }

    // Twice the real part of the complex embedding.
    Int trace() const { return detail::narrow(2 * static_cast<Wide>(a_) - b_); }

    EisensteinInt operator-() const { return {detail::narrow(-static_cast<Wide>(a_)), detail::narrow(-static_cast<Wide>(b_))}; }

    friend EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y)
    {
        return {detail::narrow(static_cast<Wide>(x.a_) + y.a_), detail::narrow(static_cast<Wide>(x.b_) + y.b_)};
    }
    friend EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y)
    {
        return {detail::narrow(static_cast<Wide>(x.a_) - y.a_), detail::narrow(static_cast<Wide>(x.b_) - y.b_)};
    }
    friend EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y)
    {
        const Wide ac = static_cast<Wide>(x.a_) * y.a_;
        const Wide bd = static_cast<Wide>(x.b_) * y.b_;
        const Wide cross = static_cast<Wide>(x.a_) * y.b_ + static_cast<Wide>(x.b_) * y.a_;
        return {detail::narrow(ac - bd), detail::narrow(cross - bd)};
    }
    EisensteinInt& operator+=(const EisensteinInt& y) { return *this = *this + y; }
    EisensteinInt& operator-=(const EisensteinInt& y) { return *this = *this - y; }
    EisensteinInt& operator*=(const EisensteinInt& y) { return *this = *this * y; }

    friend constexpr bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
    friend constexpr auto operator<=>(const EisensteinInt&, const EisensteinInt&) = default;

private:
    Int a_ = 0;
    Int b_ = 0;
};

// The six units in a fixed order: 1, -1, tau, -tau, tau^2, -tau^2.
inline const std::array<EisensteinInt, 6>& units()
{
    static const std::array<EisensteinInt, 6> table{
        EisensteinInt{1, 0}, EisensteinInt{-1, 0}, EisensteinInt{0, 1},
        EisensteinInt{0, -1}, EisensteinInt{-1, -1}, EisensteinInt{1, 1}};
    return table;
}

inline std::array<EisensteinInt, 6> associates(const EisensteinInt& x)
{
    std::array<EisensteinInt, 6> out;
    for (std::size_t i = 0; i < 6; ++i) {
        out[i] = units()[i] * x;
    }
    return out;
}

// Associate with the largest real part (2a - b), ties broken by larger b.
inline EisensteinInt canonical_associate(const EisensteinInt& x)
{
    if (x.is_zero()) {
        return x;
    }
    EisensteinInt best = x;
    for (const auto& y : associates(x)) {
        if (y.trace() > best.trace() || (y.trace() == best.trace() && y.b() > best.b())) {
            best = y;
        }
    }
    return best;
}

inline bool are_associates(const EisensteinInt& x, const EisensteinInt& y)
{
    for (const auto& z : associates(x)) {
        if (z == y) {
            return true;
        }
    }
    return false;
}

struct DivMod {
    EisensteinInt quotient;
    EisensteinInt remainder;
};

inline DivMod divmod(const EisensteinInt& x, const EisensteinInt& y)
{
    if (y.is_zero()) {
        throw std::domain_error("division by zero in Z[tau]");
    }
    // x / y = x * conj(y) / N(y), rounded coordinatewise in the (1, tau) basis.
    const Wide n = y.norm();
    const Wide ya = y.a();
    const Wide yb = y.b();
    const Wide ca = ya - yb;   // conj(y) = (a - b) - b tau
    const Wide cb = -yb;
    const Wide xa = x.a();
    const Wide xb = x.b();
    const Wide bd = xb * cb;
    const Wide pa = xa * ca - bd;
    const Wide pb = xa * cb + xb * ca - bd;
    const EisensteinInt q{detail::narrow(detail::round_half_toward_zero(pa, n)),
                          detail::narrow(detail::round_half_toward_zero(pb, n))};
    return {q, x - q * y};
}

inline EisensteinInt mod(const EisensteinInt& x, const EisensteinInt& m) { return divmod(x, m).remainder; }

inline bool divides(const EisensteinInt& d, const EisensteinInt& x) { return mod(x, d).is_zero(); }

// Exact quotient; throws if d does not divide x.
inline EisensteinInt exact_div(const EisensteinInt& x, const EisensteinInt& d)
{
    auto [q, r] = divmod(x, d);
    if (!r.is_zero()) {
        throw std::domain_error("inexact division in Z[tau]");
    }
    return q;
}

inline bool congruent(const EisensteinInt& x, const EisensteinInt& y, const EisensteinInt& m)
{
    return divides(m, x - y);
}

inline EisensteinInt gcd(EisensteinInt x, EisensteinInt y)
{
    if (x.is_zero() && y.is_zero()) {
        throw std::domain_error("gcd(0, 0) is undefined");
    }
    while (!y.is_zero()) {
        EisensteinInt r = mod(x, y);
        x = y;
        y = r;
    }
    return canonical_associate(x);
}

struct ExtendedGcd {
    EisensteinInt g;  // not normalized
    EisensteinInt s;
    EisensteinInt t;  // s*x + t*y == g
};

inline ExtendedGcd extended_gcd(const EisensteinInt& x, const EisensteinInt& y)
{
    EisensteinInt r0 = x, r1 = y;
    EisensteinInt s0{1}, s1{0};
    EisensteinInt t0{0}, t1{1};
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1;
        r1 = r;
        EisensteinInt s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
        EisensteinInt t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    return {r0, s0, t0};
}

inline bool coprime(const EisensteinInt& x, const EisensteinInt& y)
{
    return gcd(x, y).is_unit();
}

// Inverse of a unit.
inline EisensteinInt unit_inverse(const EisensteinInt& u)
{
    if (!u.is_unit()) {
        throw std::domain_error("not a unit");
    }
    return u.conj();
}

inline bool is_prime(const EisensteinInt& x)
{
    if (x.is_zero() || x.is_unit()) {
        return false;
    }
    const auto n = static_cast<std::uint64_t>(x.norm());
    if (is_rational_prime(n)) {
        return true;
    }
    for (const auto& y : associates(x)) {
        if (y.b() == 0 && y.a() > 0) {
            const auto q = static_cast<std::uint64_t>(y.a());
            return q % 3 == 2 && is_rational_prime(q);
        }
    }
    return false;
}

inline EisensteinInt pow(EisensteinInt base, std::uint64_t e)
{
    EisensteinInt r{1};
    while (e != 0) {
        if (e & 1U) {
            r *= base;
        }
        e >>= 1U;
        if (e != 0) {
            base *= base;
        }
    }
    return r;
}

inline EisensteinInt powmod(EisensteinInt base, std::uint64_t e, const EisensteinInt& m)
{
    EisensteinInt r = mod(EisensteinInt{1}, m);
    base = mod(base, m);
    while (e != 0) {
        if (e & 1U) {
            r = mod(r * base, m);
        }
        e >>= 1U;
        if (e != 0) {
            base = mod(base * base, m);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text form "a+b*t". Parsing accepts any arrangement of integer and t-terms,
// e.g. "13+12t", "1-12*t", "-t", "7"; whitespace is ignored.
// ---------------------------------------------------------------------------

inline std::string to_string(const EisensteinInt& x)
{
    std::string s = std::to_string(x.a());
    if (x.b() >= 0) {
        s += '+';
    }
    s += std::to_string(x.b());
    s += "*t";
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const EisensteinInt& x)
{
    return os << to_string(x);
}

inline EisensteinInt parse_eisenstein(std::string_view text)
{
    std::string s;
    for (char ch : text) {
        if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') {
            s += ch;
        }
    }
    if (s.empty()) {
        throw std::invalid_argument("empty Eisenstein integer");
    }
    Wide a = 0;
    Wide b = 0;
    std::size_t i = 0;
    bool any = false;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
        } else if (any) {
            throw std::invalid_argument("malformed Eisenstein integer: " + std::string(text));
        }
        Wide coeff = 0;
        bool digits = false;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            coeff = coeff * 10 + (s[i] - '0');
            if (coeff > static_cast<Wide>(std::numeric_limits<Int>::max())) {
                throw std::invalid_argument("Eisenstein coefficient out of range: " + std::string(text));
            }
            digits = true;
            ++i;
        }
        bool tau_term = false;
        if (i < s.size() && s[i] == '*') {
            if (!digits) {
                throw std::invalid_argument("malformed Eisenstein integer: " + std::string(text));
            }
            ++i;
            if (i >= s.size() || s[i] != 't') {
                throw std::invalid_argument("malformed Eisenstein integer: " + std::string(text));
            }
        }
        if (i < s.size() && s[i] == 't') {
            tau_term = true;
            ++i;
            if (!digits) {
                coeff = 1;
                digits = true;
            }
        }
        if (!digits) {
            throw std::invalid_argument("malformed Eisenstein integer: " + std::string(text));
        }
        (tau_term ? b : a) += sign * coeff;
        any = true;
    }
    return {detail::narrow(a), detail::narrow(b)};
}

// ---------------------------------------------------------------------------
// Roots of unity (-1)^s tau^k; values of the power-residue symbols.
// ---------------------------------------------------------------------------

class UnitRoot {
public:
    constexpr UnitRoot() = default;
    constexpr UnitRoot(bool negative, int tau_exp) : negative_(negative), tau_exp_(((tau_exp % 3) + 3) % 3) {}

    static constexpr UnitRoot one() { return {}; }
    static constexpr UnitRoot minus_one() { return {true, 0}; }
    static UnitRoot from_sign(int sign) { return {sign < 0, 0}; }

    static UnitRoot from_unit(const EisensteinInt& u)
    {
        for (int s = 0; s < 2; ++s) {
            for (int k = 0; k < 3; ++k) {
                const UnitRoot r{s == 1, k};
                if (r.value() == u) {
                    return r;
                }
            }
        }
        throw std::domain_error("not a unit: " + to_string(u));
    }

    constexpr bool negative() const { return negative_; }
    constexpr int tau_exp() const { return tau_exp_; }
    constexpr bool is_one() const { return !negative_ && tau_exp_ == 0; }

    // Only meaningful for k == 0.
    int sign() const
    {
        if (tau_exp_ != 0) {
            throw std::domain_error("unit root is not real");
        }
        return negative_ ? -1 : 1;
    }

    EisensteinInt value() const
    {
        EisensteinInt v{1};
        for (int k = 0; k < tau_exp_; ++k) {
            v *= EisensteinInt::tau();
        }
        return negative_ ? -v : v;
    }

    constexpr UnitRoot conj() const { return {negative_, 3 - tau_exp_}; }

    UnitRoot pow(unsigned e) const
    {
        UnitRoot r;
        for (unsigned i = 0; i < e % 6; ++i) {
            r = r * *this;
        }
        return r;
    }

    friend constexpr UnitRoot operator*(const UnitRoot& x, const UnitRoot& y)
    {
        return {x.negative_ != y.negative_, x.tau_exp_ + y.tau_exp_};
    }

    friend constexpr bool operator==(const UnitRoot&, const UnitRoot&) = default;

private:
    bool negative_ = false;
    int tau_exp_ = 0;
};

// ---------------------------------------------------------------------------
// Residue rings Z[tau]/(m) with a canonical box of representatives from the
// Hermite normal form of the ideal: {p + q tau : 0 <= p < d1, 0 <= q < d2}.
// ---------------------------------------------------------------------------

class ResidueRing {
public:
    explicit ResidueRing(const EisensteinInt& m) : modulus_(m)
    {
        if (m.is_zero()) {
            throw std::domain_error("residue ring modulo zero");
        }
        // Z-basis of (m): m = (a, b) and m*tau = (-b, a - b).
        const Wide a = m.a();
        const Wide b = m.b();
        const Wide v1a = a, v1b = b;
        const Wide v2a = -b, v2b = a - b;
        auto [g, u, v] = int_xgcd(v1b, v2b);
        // w = u*v1 + v*v2 has tau-coordinate g.
        Wide wa = u * v1a + v * v2a;
        Wide d2 = g;
        if (d2 < 0) {
            d2 = -d2;
            wa = -wa;
        }
        const Wide d1 = static_cast<Wide>(m.norm()) / d2;
        d1_ = detail::narrow(d1);
        d2_ = detail::narrow(d2);
        x_ = detail::narrow(detail::floor_mod(wa, d1));
    }

    const EisensteinInt& modulus() const { return modulus_; }
    std::size_t size() const { return static_cast<std::size_t>(d1_) * static_cast<std::size_t>(d2_); }

    EisensteinInt reduce(const EisensteinInt& z) const
    {
        const Wide k = detail::floor_div(z.b(), d2_);
        const Wide q = static_cast<Wide>(z.b()) - k * d2_;
        const Wide p = detail::floor_mod(static_cast<Wide>(z.a()) - k * x_, d1_);
        return {detail::narrow(p), detail::narrow(q)};
    }

    std::size_t index(const EisensteinInt& z) const
    {
        const EisensteinInt r = reduce(z);
        return static_cast<std::size_t>(r.a()) + static_cast<std::size_t>(d1_) * static_cast<std::size_t>(r.b());
    }

    EisensteinInt element(std::size_t i) const
    {
        const auto d1 = static_cast<std::size_t>(d1_);
        return {static_cast<Int>(i % d1), static_cast<Int>(i / d1)};
    }

private:
    struct Xgcd {
        Wide g, u, v;
    };
    static Xgcd int_xgcd(Wide x, Wide y)
    {
        Wide r0 = x, r1 = y, u0 = 1, u1 = 0, v0 = 0, v1 = 1;
        while (r1 != 0) {
            const Wide q = r0 / r1;
            Wide t = r0 - q * r1;
            r0 = r1;
            r1 = t;
            t = u0 - q * u1;
            u0 = u1;
            u1 = t;
            t = v0 - q * v1;
            v0 = v1;
            v1 = t;
        }
        return {r0, u0, v0};
    }

    EisensteinInt modulus_;
    Int d1_ = 1;
    Int d2_ = 1;
    Int x_ = 0;
};

// ---------------------------------------------------------------------------
// Factorization and power-residue symbols.
// ---------------------------------------------------------------------------

struct PrimePower {
    EisensteinInt prime;  // canonical associate
    int exponent = 0;
};

// A prime of norm p for a rational prime p = 1 (mod 3).
inline EisensteinInt prime_above(Int p)
{
    if (p % 3 != 1 || !is_rational_prime(static_cast<std::uint64_t>(p))) {
        throw std::invalid_argument("prime_above expects a rational prime = 1 mod 3");
    }
    const auto up = static_cast<std::uint64_t>(p);
    for (std::uint64_t g = 2; g < up; ++g) {
        const std::uint64_t r = detail::powmod(g, (up - 1) / 3, up);
        if (r != 1) {
            // r is a primitive cube root of unity mod p, so p splits as
            // gcd(p, tau - r) * conjugate.
            return gcd(EisensteinInt{p}, EisensteinInt{-static_cast<Int>(r), 1});
        }
    }
    throw std::logic_error("no cube root of unity found");
}

inline std::vector<PrimePower> factor(EisensteinInt x)
{
    if (x.is_zero()) {
        throw std::domain_error("cannot factor zero");
    }
    std::vector<PrimePower> out;
    Int n = x.norm();
    auto strip = [&](const EisensteinInt& pi) {
        int e = 0;
        while (true) {
            auto [q, r] = divmod(x, pi);
            if (!r.is_zero()) {
                break;
            }
            x = q;
            ++e;
        }
        if (e > 0) {
            out.push_back({canonical_associate(pi), e});
        }
    };
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) {
            continue;
        }
        while (n % p == 0) {
            n /= p;
        }
        if (p == 3) {
            strip(EisensteinInt::sqrt_minus3());
        } else if (p % 3 == 2) {
            strip(EisensteinInt{p});
        } else {
            const EisensteinInt pi = prime_above(p);
            strip(pi);
            strip(pi.conj());
        }
    }
    if (n > 1) {
        if (n == 3) {
            strip(EisensteinInt::sqrt_minus3());
        } else if (n % 3 == 1) {
            const EisensteinInt pi = prime_above(n);
            strip(pi);
            strip(pi.conj());
        } else {
            // n is a rational prime = 2 mod 3 appearing to an odd power: impossible
            // for a norm, unless it was already stripped as p^2.
            throw std::logic_error("inconsistent norm factorization");
        }
    }
    if (!x.is_unit()) {
        throw std::logic_error("factorization left a non-unit cofactor");
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& l, const PrimePower& r) {
        return std::pair(l.prime.norm(), l.prime) < std::pair(r.prime.norm(), r.prime);
    });
    return out;
}

// (alpha / pi)_d for a prime pi coprime to 6 and alpha.
inline UnitRoot prime_residue_symbol(const EisensteinInt& alpha, const EisensteinInt& pi, int degree)
{
    const auto q = static_cast<std::uint64_t>(pi.norm());
    const std::uint64_t e = (q - 1) / static_cast<std::uint64_t>(degree);
    const EisensteinInt r = powmod(alpha, e, pi);
    for (int s = 0; s < 2; ++s) {
        for (int k = 0; k < 3; ++k) {
            const UnitRoot u{s == 1, k};
            if (!divides(pi, r - u.value())) {
                continue;
            }
            if ((degree == 2 && k != 0) || (degree == 3 && s != 0)) {
                throw std::logic_error("power residue has the wrong order");
            }
            return u;
        }
    }
    throw std::domain_error("power residue is not a root of unity; modulus " + to_string(pi) + " not prime or not coprime");
}

// Power-residue symbol (alpha / beta)_d, d in {2, 3, 6}, extended
// multiplicatively over the prime factorization of beta. Requires beta coprime
// to 6 and to alpha; a unit beta gives 1.
inline UnitRoot power_residue_symbol(const EisensteinInt& alpha, const EisensteinInt& beta, int degree)
{
    if (degree != 2 && degree != 3 && degree != 6) {
        throw std::invalid_argument("symbol degree must be 2, 3 or 6");
    }
    if (beta.is_zero()) {
        throw std::domain_error("symbol with zero denominator");
    }
    if (beta.is_unit()) {
        return UnitRoot::one();
    }
    const Int n = beta.norm();
    if (n % 2 == 0 || n % 3 == 0) {
        throw std::domain_error("symbol denominator " + to_string(beta) + " is divisible by 2 or sqrt(-3)");
    }
    if (!coprime(alpha, beta)) {
        throw std::domain_error("symbol arguments " + to_string(alpha) + ", " + to_string(beta) + " are not coprime");
    }
    UnitRoot r;
    for (const auto& [pi, e] : factor(beta)) {
        r = r * prime_residue_symbol(alpha, pi, degree).pow(static_cast<unsigned>(e));
    }
    return r;
}

inline int quadratic_symbol(const EisensteinInt& alpha, const EisensteinInt& beta)
{
    return power_residue_symbol(alpha, beta, 2).sign();
}

// ---------------------------------------------------------------------------
// Admissible prime lists.
// ---------------------------------------------------------------------------

enum class Congruence { mod12, mod4sqrt3 };

inline EisensteinInt congruence_modulus(Congruence c)
{
    return c == Congruence::mod12 ? EisensteinInt{12} : EisensteinInt{4, 8};
}

inline std::string to_string(Congruence c)
{
    return c == Congruence::mod12 ? "12" : "4sqrt-3";
}

// Primes pi = 1 (mod m) with N(pi) <= norm_bound, sorted by (norm, a, b).
// The congruence picks exactly one associate per prime ideal because the six
// units stay distinct modulo m.
inline std::vector<EisensteinInt> find_primes(Int norm_bound, Congruence flag = Congruence::mod12)
{
    if (norm_bound < 1) {
        throw std::invalid_argument("norm bound must be >= 1");
    }
    const EisensteinInt m = congruence_modulus(flag);
    // pi = 1 + m t and |pi| <= sqrt(bound) give |t| <= (sqrt(bound) + 1)/|m|.
    const long double tmax_abs = (std::sqrt(static_cast<long double>(norm_bound)) + 1.0L) /
                                 std::sqrt(static_cast<long double>(m.norm()));
    // |coord| <= 2|t|/sqrt(3) for the (1, tau) coordinates.
    const Int box = static_cast<Int>(tmax_abs * 2.0L / std::sqrt(3.0L)) + 2;
    std::vector<EisensteinInt> out;
    for (Int i = -box; i <= box; ++i) {
        for (Int j = -box; j <= box; ++j) {
            const EisensteinInt pi = EisensteinInt{1} + m * EisensteinInt{i, j};
            const Int n = pi.norm();
            if (n > norm_bound || n < 2) {
                continue;
            }
            if (is_prime(pi)) {
                out.push_back(pi);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const EisensteinInt& l, const EisensteinInt& r) {
        return std::tuple(l.norm(), l.a(), l.b()) < std::tuple(r.norm(), r.a(), r.b());
    });
    return out;
}

// D = pi_1 ... pi_n with distinct admissible primes; n = 0 means D = 1.
class SquarefreeD {
public:
    SquarefreeD() = default;

    explicit SquarefreeD(std::vector<EisensteinInt> primes, Congruence flag = Congruence::mod12)
        : primes_(std::move(primes)), flag_(flag)
    {
        if (primes_.size() > 30) {
            throw std::invalid_argument("at most 30 primes are supported");
        }
        const EisensteinInt m = congruence_modulus(flag_);
        for (std::size_t k = 0; k < primes_.size(); ++k) {
            const auto& pi = primes_[k];
            if (!is_prime(pi)) {
                throw std::invalid_argument(to_string(pi) + " is not prime in Z[tau]");
            }
            if (!congruent(pi, EisensteinInt{1}, m)) {
                throw std::invalid_argument(to_string(pi) + " is not = 1 mod " + to_string(flag_));
            }
            for (std::size_t j = 0; j < k; ++j) {
                if (are_associates(primes_[j], pi)) {
                    throw std::invalid_argument("primes " + to_string(primes_[j]) + " and " + to_string(pi) + " are associate");
                }
            }
            product_ *= pi;
        }
    }

    const std::vector<EisensteinInt>& primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    Congruence flag() const { return flag_; }
    const EisensteinInt& value() const { return product_; }

    // Closed under conjugation as a set of prime ideals, so D is rational.
    bool conjugation_stable() const { return product_.is_rational(); }

private:
    std::vector<EisensteinInt> primes_;
    Congruence flag_ = Congruence::mod12;
    EisensteinInt product_{1};
};

// A subset T of {1..n} as a bit mask; bit k-1 selects pi_k.
class SubsetSelector {
public:
    SubsetSelector() = default;
    SubsetSelector(const SquarefreeD& d, std::uint32_t mask) : mask_(mask), n_(d.size())
    {
        if (n_ < 32 && (mask >> n_) != 0) {
            throw std::invalid_argument("subset mask selects primes beyond n");
        }
        for (std::size_t k = 0; k < n_; ++k) {
            (contains(k) ? d_t_ : d_hat_) *= d.primes()[k];
        }
    }

    static SubsetSelector empty(const SquarefreeD& d) { return {d, 0}; }
    static SubsetSelector full(const SquarefreeD& d)
    {
        return {d, d.size() == 0 ? 0U : static_cast<std::uint32_t>((std::uint64_t{1} << d.size()) - 1)};
    }

    std::uint32_t mask() const { return mask_; }
    std::size_t n() const { return n_; }
    bool contains(std::size_t k) const { return ((mask_ >> k) & 1U) != 0; }
    std::size_t cardinality() const { return static_cast<std::size_t>(__builtin_popcount(mask_)); }
    bool is_empty() const { return mask_ == 0; }
    bool is_full() const { return cardinality() == n_; }

    const EisensteinInt& d_t() const { return d_t_; }
    const EisensteinInt& d_hat() const { return d_hat_; }

private:
    std::uint32_t mask_ = 0;
    std::size_t n_ = 0;
    EisensteinInt d_t_{1};
    EisensteinInt d_hat_{1};
};

// ---------------------------------------------------------------------------
// Negation-symmetric reduced residue system modulo D.
// ---------------------------------------------------------------------------

struct ResidueSystem {
    EisensteinInt modulus{1};
    std::vector<EisensteinInt> reps;
    std::size_t count() const { return reps.size(); }
};

// Reduced residues modulo D built by CRT over the primes. Classes are visited
// in lexicographic order of their residue tuples; each class is emitted
// together with its negation (as the exact element -c), so entries 2i and
// 2i+1 are negatives of each other whenever D is not a unit.
inline ResidueSystem residue_system(const SquarefreeD& d)
{
    ResidueSystem rs;
    rs.modulus = d.value();
    const std::size_t n = d.size();
    if (n == 0) {
        rs.reps.push_back(EisensteinInt{0});
        return rs;
    }
    const EisensteinInt big_d = d.value();
    std::vector<ResidueRing> rings;
    std::vector<EisensteinInt> idempotents;
    std::vector<std::size_t> radix;  // nonzero classes per prime
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const EisensteinInt& pi = d.primes()[k];
        rings.emplace_back(pi);
        const EisensteinInt cofactor = exact_div(big_d, pi);
        auto [g, s, t] = extended_gcd(pi, cofactor);
        // s pi + t M = g (unit) => e = t M g^-1 is 1 mod pi and 0 mod M.
        idempotents.push_back(mod(t * cofactor * unit_inverse(g), big_d));
        radix.push_back(rings.back().size() - 1);
        total *= radix.back();
    }
    std::vector<bool> used(total, false);
    std::vector<std::size_t> digits(n, 0);
    rs.reps.reserve(total);
    auto flat = [&](const std::vector<std::size_t>& ds) {
        std::size_t f = 0;
        for (std::size_t k = 0; k < n; ++k) {
            f = f * radix[k] + ds[k];
        }
        return f;
    };
    for (std::size_t it = 0; it < total; ++it) {
        // digits -> residue tuple (index 0 of each ring is the zero class)
        if (!used[flat(digits)]) {
            EisensteinInt c{0};
            std::vector<std::size_t> neg(n);
            for (std::size_t k = 0; k < n; ++k) {
                const EisensteinInt r = rings[k].element(digits[k] + 1);
                c += r * idempotents[k];
                neg[k] = rings[k].index(-r) - 1;
            }
            c = mod(c, big_d);
            used[flat(digits)] = true;
            used[flat(neg)] = true;
            rs.reps.push_back(c);
            rs.reps.push_back(-c);
        }
        for (std::size_t k = n; k-- > 0;) {
            if (++digits[k] < radix[k]) {
                break;
            }
            digits[k] = 0;
        }
    }
    return rs;
}

} // namespace cmhecke
