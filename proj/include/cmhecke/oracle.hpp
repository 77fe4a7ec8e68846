#pragma once

// Independent L-value oracles: the D = 1 closed form, a smoothed Dirichlet
// series for the curve y^2 = x^3 + d^3 over Q built from point counts, and the
// same for the Hecke L-series over Q(sqrt -3) built from character values.
// Root numbers are never assumed; they are solved from two smoothing
// parameters and must have modulus 1.

#include "cmhecke/eisenstein.hpp"
#include "cmhecke/hecke.hpp"
#include "cmhecke/numerics.hpp"
#include "cmhecke/weierstrass.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cmhecke {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Point counting.
// ---------------------------------------------------------------------------

struct PointCount {
    Int field_size = 0;
    Int points = 0;  // projective, including the point at infinity
    Int trace = 0;   // q + 1 - #E
};

namespace detail {

inline void hasse_check(const PointCount& pc)
{
    const auto t = static_cast<double>(pc.trace);
    if (t * t > 4.0 * static_cast<double>(pc.field_size)) {
        throw std::logic_error("Hasse bound violated: a = " + std::to_string(pc.trace) + ", q = " + std::to_string(pc.field_size));
    }
}

} // namespace detail

// y^2 = x^3 + d^3 over F_p.
inline PointCount count_points_fp(Int d, Int p)
{
    if (p < 5 || !is_rational_prime(static_cast<std::uint64_t>(p)) || d % p == 0) {
        throw std::domain_error("bad reduction at p = " + std::to_string(p));
    }
    const Wide dm = detail::floor_mod(d, p);
    const Wide b = dm * dm % p * dm % p;
    std::vector<std::uint32_t> roots(static_cast<std::size_t>(p), 0);
    for (Int y = 0; y < p; ++y) {
        ++roots[static_cast<std::size_t>(static_cast<Wide>(y) * y % p)];
    }
    Int affine = 0;
    for (Int x = 0; x < p; ++x) {
        const Wide v = (static_cast<Wide>(x) * x % p * x + b) % p;
        affine += roots[static_cast<std::size_t>(v)];
    }
    PointCount pc{p, affine + 1, p + 1 - (affine + 1)};
    detail::hasse_check(pc);
    return pc;
}

// y^2 = x^3 + D^3 over the residue field Z[tau]/(pi).
inline PointCount count_points(const EisensteinInt& d, const EisensteinInt& pi)
{
    if (!is_prime(pi)) {
        throw std::invalid_argument(to_string(pi) + " is not prime");
    }
    if (!coprime(pi, EisensteinInt{6} * d)) {
        throw std::domain_error("bad reduction at " + to_string(pi));
    }
    if (pi.norm() > 10'000'000) {
        throw std::invalid_argument("residue field too large for naive counting");
    }
    const ResidueRing f(pi);
    const std::size_t q = f.size();
    const EisensteinInt b = f.reduce(d * d * d);
    std::vector<std::uint32_t> roots(q, 0);
    for (std::size_t i = 0; i < q; ++i) {
        const EisensteinInt y = f.element(i);
        ++roots[f.index(y * y)];
    }
    Int affine = 0;
    for (std::size_t i = 0; i < q; ++i) {
        const EisensteinInt x = f.element(i);
        affine += roots[f.index(f.reduce(x * x) * x + b)];
    }
    const auto qi = static_cast<Int>(q);
    PointCount pc{qi, affine + 1, qi + 1 - (affine + 1)};
    detail::hasse_check(pc);
    return pc;
}

struct PsiMatch {
    Int trace = 0;
    std::vector<EisensteinInt> candidates;  // associates of pi with trace a_pi
    bool unique() const { return candidates.size() == 1; }
};

// The associates u pi whose trace 2a - b equals a_pi. Unique at split primes;
// at inert primes an associate and its conjugate share the trace.
inline PsiMatch psi_from_point_counts(const EisensteinInt& pi, const EisensteinInt& d)
{
    PsiMatch m;
    m.trace = count_points(d, pi).trace;
    for (const auto& u : associates(pi)) {
        if (u.trace() == m.trace) {
            m.candidates.push_back(u);
        }
    }
    if (m.candidates.empty()) {
        throw std::logic_error("no associate of " + to_string(pi) + " has trace " + std::to_string(m.trace));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Smoothed Dirichlet series with a solved root number.
// ---------------------------------------------------------------------------

struct FunctionalEquationFit {
    BigComplex value;        // L(1)
    BigComplex root_number;
    BigReal check_error;     // |L(1) from t3 - L(1)|
    Int conductor = 0;
    std::size_t terms = 0;
};

// Smallest M with sum_{m > M} 2 exp(-a m) < 10^-digits, a = 2 pi / (t_max sqrt N).
inline std::size_t series_cutoff(Int conductor, int digits, double t_max = 1.2)
{
    const double a = 2.0 * M_PI / (t_max * std::sqrt(static_cast<double>(conductor)));
    const double need = digits * std::log(10.0) + std::log(2.0 / (1.0 - std::exp(-a)));
    return static_cast<std::size_t>(std::ceil(need / a));
}

// L(1) = sum c_m/m e^{-2 pi m t/sqrt N} + W sum conj(c_m)/m e^{-2 pi m/(t sqrt N)}
// for a weight-2 series with level N; c[m] for m = 1..M (c[0] unused).
inline FunctionalEquationFit fit_functional_equation(const std::vector<EisensteinInt>& c, Int conductor, int digits)
{
    const mpfr_prec_t bits = bits_for_digits(digits + 15);
    const ConstantSet k = constants(bits);
    const BigReal root_n = sqrt(BigReal(conductor, bits));
    const std::size_t m_max = c.size() - 1;

    struct Sums {
        BigComplex a, b;
    };
    auto sums = [&](const BigReal& t) {
        const BigReal qa = exp(-(2 * k.pi * t / root_n));
        const BigReal qb = exp(-(2 * k.pi / (t * root_n)));
        BigReal ea = qa;
        BigReal eb = qb;
        std::vector<BigComplex> pa, pb;
        pa.reserve(m_max);
        pb.reserve(m_max);
        for (std::size_t m = 1; m <= m_max; ++m) {
            if (!c[m].is_zero()) {
                const BigComplex cm = k.embed(c[m].a(), c[m].b()) / static_cast<long>(m);
                pa.push_back(cm * ea);
                pb.push_back(cm.conj() * eb);
            }
            ea *= qa;
            eb *= qb;
        }
        return Sums{deterministic_sum(pa, bits), deterministic_sum(pb, bits)};
    };
    const BigReal t1(1, bits);
    const BigReal t2 = BigReal::ratio(6, 5, bits);
    const BigReal t3 = BigReal::ratio(11, 10, bits);
    const Sums s1 = sums(t1);
    const Sums s2 = sums(t2);
    const Sums s3 = sums(t3);
    const BigComplex denom = s2.b - s1.b;
    if (denom.abs() < pow10(-digits / 2, bits)) {
        throw OracleError("root number solve is ill-conditioned");
    }
    FunctionalEquationFit fit;
    fit.root_number = (s1.a - s2.a) / denom;
    const BigReal dev = abs(fit.root_number.abs() - 1);
    if (dev > pow10(-8, bits)) {
        throw OracleError("root number has modulus " + fit.root_number.abs().to_string(12) + "; conductor " +
                          std::to_string(conductor) + " is inconsistent");
    }
    fit.value = s1.a + fit.root_number * s1.b;
    fit.check_error = distance(s3.a + fit.root_number * s3.b, fit.value);
    fit.conductor = conductor;
    fit.terms = m_max;
    return fit;
}

// ---------------------------------------------------------------------------
// Dirichlet coefficients.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Int> smallest_prime_factors(std::size_t m)
{
    std::vector<Int> spf(m + 1, 0);
    for (std::size_t i = 2; i <= m; ++i) {
        if (spf[i] == 0) {
            for (std::size_t j = i; j <= m; j += i) {
                if (spf[j] == 0) {
                    spf[j] = static_cast<Int>(i);
                }
            }
        }
    }
    return spf;
}

// Fills c[m] for composite m from prime-power values already in c.
inline void multiplicative_fill(std::vector<EisensteinInt>& c, const std::vector<Int>& spf)
{
    const std::size_t m_max = c.size() - 1;
    for (std::size_t m = 2; m <= m_max; ++m) {
        const auto p = static_cast<std::size_t>(spf[m]);
        std::size_t pk = 1;
        std::size_t rest = m;
        while (rest % p == 0) {
            rest /= p;
            pk *= p;
        }
        if (rest != 1) {
            c[m] = c[pk] * c[rest];
        }
    }
}

} // namespace detail

// a_m of y^2 = x^3 + d^3 over Q, m <= m_max, from point counts.
inline std::vector<EisensteinInt> curve_coefficients(Int d, std::size_t m_max)
{
    std::vector<EisensteinInt> c(m_max + 1, EisensteinInt{0});
    if (m_max >= 1) {
        c[1] = EisensteinInt{1};
    }
    const auto spf = detail::smallest_prime_factors(m_max);
    for (std::size_t p = 2; p <= m_max; ++p) {
        if (spf[p] != static_cast<Int>(p)) {
            continue;
        }
        const auto pi = static_cast<Int>(p);
        const bool bad = p == 2 || p == 3 || d % pi == 0;
        const Int ap = bad ? 0 : count_points_fp(d, pi).trace;
        Int prev2 = 1;
        Int prev1 = ap;
        for (std::size_t pk = p; pk <= m_max; pk *= p) {
            c[pk] = EisensteinInt{prev1};
            const Int next = bad ? 0 : ap * prev1 - pi * prev2;
            prev2 = prev1;
            prev1 = next;
            if (pk > m_max / p) {
                break;
            }
        }
    }
    detail::multiplicative_fill(c, spf);
    return c;
}

// c_m = sum over ideals a of norm m of conj(psi(a)), psi = psi_{D_T^3}.
inline std::vector<EisensteinInt> hecke_coefficients(const EisensteinInt& d_t, std::size_t m_max)
{
    std::vector<EisensteinInt> c(m_max + 1, EisensteinInt{0});
    if (m_max >= 1) {
        c[1] = EisensteinInt{1};
    }
    const auto spf = detail::smallest_prime_factors(m_max);
    for (std::size_t p = 2; p <= m_max; ++p) {
        if (spf[p] != static_cast<Int>(p)) {
            continue;
        }
        const auto pi = static_cast<Int>(p);
        if (p % 3 == 1) {
            const EisensteinInt q = prime_above(pi);
            const EisensteinInt x = hecke_character(q, d_t).conj();
            const EisensteinInt y = hecke_character(q.conj(), d_t).conj();
            // c_{p^k} = (x^(k+1) - y^(k+1)) / (x - y) via the linear recursion
            const EisensteinInt s = x + y;
            const EisensteinInt n = x * y;
            EisensteinInt prev2{1};
            EisensteinInt prev1 = s;
            for (std::size_t pk = p; pk <= m_max; pk *= p) {
                c[pk] = prev1;
                const EisensteinInt next = s * prev1 - n * prev2;
                prev2 = prev1;
                prev1 = next;
                if (pk > m_max / p) {
                    break;
                }
            }
        } else if (p % 3 == 2) {
            // inert: one ideal of norm p^2
            const EisensteinInt x = hecke_character(EisensteinInt{pi}, d_t).conj();
            EisensteinInt power{1};
            std::size_t pk = p;
            for (std::size_t e = 1; pk <= m_max; ++e) {
                if (e % 2 == 0) {
                    power = power * x;
                    c[pk] = power;
                }
                if (pk > m_max / p) {
                    break;
                }
                pk *= p;
            }
        }
        // p = 3 ramified and p = 2 divide the conductor: c = 0
    }
    detail::multiplicative_fill(c, spf);
    return c;
}

// ---------------------------------------------------------------------------

enum class OracleMethod { closed_form, curve_q, afe };

inline std::string to_string(OracleMethod m)
{
    switch (m) {
    case OracleMethod::closed_form: return "closed-form";
    case OracleMethod::curve_q: return "curve-q";
    case OracleMethod::afe: return "afe";
    }
    return "?";
}

inline OracleMethod parse_oracle_method(std::string_view s)
{
    if (s == "closed-form") {
        return OracleMethod::closed_form;
    }
    if (s == "curve-q") {
        return OracleMethod::curve_q;
    }
    if (s == "afe") {
        return OracleMethod::afe;
    }
    throw std::invalid_argument("unknown oracle method: " + std::string(s));
}

struct OracleValue {
    OracleMethod method = OracleMethod::closed_form;
    BigComplex l;     // full L(conj psi, 1)
    BigComplex l_s;   // with the Euler factors at S removed
    std::optional<FunctionalEquationFit> fit;
};

// Default accuracy target of the series oracles (decimal digits).
inline constexpr int kOracleDigits = 20;

inline OracleValue oracle_l1(const SquarefreeD& d, const SubsetSelector& t, const LatticeContext& ctx, OracleMethod method,
                             int digits = kOracleDigits)
{
    OracleValue out;
    out.method = method;
    const BigComplex euler = euler_factor(d, t, ctx);
    switch (method) {
    case OracleMethod::closed_form: {
        if (!t.is_empty()) {
            throw std::invalid_argument("closed-form oracle needs T empty");
        }
        out.l = BigComplex(closed_form_l1(ctx));
        break;
    }
    case OracleMethod::curve_q: {
        if (!t.d_t().is_rational()) {
            throw std::invalid_argument("curve-q oracle needs a rational D_T");
        }
        const Int dq = t.d_t().a();
        const Int level = 36 * dq * dq;
        const auto c = curve_coefficients(dq, series_cutoff(level, digits));
        auto fit = fit_functional_equation(c, level, digits);
        out.l = BigComplex(fit.value.re(), fit.value.im());
        out.fit = std::move(fit);
        break;
    }
    case OracleMethod::afe: {
        const HeckeCharacterSpec spec(d, t);
        const Int level = spec.analytic_conductor();
        const auto c = hecke_coefficients(t.d_t(), series_cutoff(level, digits));
        auto fit = fit_functional_equation(c, level, digits);
        out.l = fit.value;
        out.fit = std::move(fit);
        break;
    }
    }
    out.l_s = out.l * euler;
    return out;
}

} // namespace cmhecke
