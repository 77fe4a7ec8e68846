#pragma once

// The Hecke character psi_{D_T^3} of y^2 = x^3 + D_T^3 over Q(sqrt -3) and the
// closed formula for L_S(conj psi_{D_T^3}, 1) as a finite sum of p-values at
// the division points sqrt(-3) c omega / D.

#include "cmhecke/eisenstein.hpp"
#include "cmhecke/numerics.hpp"
#include "cmhecke/weierstrass.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace cmhecke {

class CharacterError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct HeckeCharacterSpec {
    SquarefreeD d;
    SubsetSelector t;
    EisensteinInt conductor;      // 2 sqrt(-3) D_T
    std::vector<EisensteinInt> omitted;

    HeckeCharacterSpec(SquarefreeD d_in, SubsetSelector t_in)
        : d(std::move(d_in)),
          t(t_in),
          conductor(EisensteinInt{2} * EisensteinInt::sqrt_minus3() * t.d_t()),
          omitted(d.primes())
    {
    }

    const EisensteinInt& d_t() const { return t.d_t(); }

    // Level of the attached weight-2 newform: |disc K| * N(conductor).
    Int analytic_conductor() const { return 3 * conductor.norm(); }
};

// The unique associate congruent to 1 mod 3 (exists for x coprime to 3).
inline EisensteinInt primary_associate(const EisensteinInt& x)
{
    for (const auto& y : associates(x)) {
        if (congruent(y, EisensteinInt{1}, EisensteinInt{3})) {
            return y;
        }
    }
    throw std::domain_error(to_string(x) + " has no associate = 1 mod 3");
}

namespace detail {

inline EisensteinInt sextic_twist(const EisensteinInt& d_t, const EisensteinInt& alpha)
{
    const EisensteinInt top = EisensteinInt{4} * d_t * d_t * d_t;
    return power_residue_symbol(top, alpha, 6).conj().value() * alpha;
}

} // namespace detail

// psi(alpha) for a generator alpha = 1 mod 6 prime to 6D: the sextic
// definition conj((4 D_T^3 / alpha)_6) alpha, checked against the quadratic
// form (D_T / alpha)_2 alpha.
inline EisensteinInt psi_of_generator(const EisensteinInt& alpha, const HeckeCharacterSpec& spec)
{
    if (!congruent(alpha, EisensteinInt{1}, EisensteinInt{6})) {
        throw std::invalid_argument(to_string(alpha) + " is not = 1 mod 6");
    }
    if (!coprime(alpha, EisensteinInt{6} * spec.d.value())) {
        throw std::invalid_argument(to_string(alpha) + " is not prime to 6D");
    }
    const EisensteinInt sextic = detail::sextic_twist(spec.d_t(), alpha);
    const EisensteinInt quadratic = EisensteinInt{quadratic_symbol(spec.d_t(), alpha)} * alpha;
    if (!(sextic == quadratic)) {
        throw CharacterError("psi(" + to_string(alpha) + "): sextic form " + to_string(sextic) + " != quadratic form " +
                             to_string(quadratic));
    }
    return sextic;
}

// psi on the ideal (x): zero when (x) meets the conductor, otherwise the
// sextic twist of the primary generator.
inline EisensteinInt hecke_character(const EisensteinInt& x, const EisensteinInt& d_t)
{
    if (x.is_zero()) {
        throw std::domain_error("character of the zero ideal");
    }
    if (!coprime(x, EisensteinInt{6} * d_t)) {
        return EisensteinInt{0};
    }
    return detail::sextic_twist(d_t, primary_associate(x));
}

inline EisensteinInt hecke_character(const EisensteinInt& x, const HeckeCharacterSpec& spec)
{
    return hecke_character(x, spec.d_t());
}

// ---------------------------------------------------------------------------
// Cached per-class data for the formula.
// ---------------------------------------------------------------------------

struct ClassTerm {
    EisensteinInt c;
    ExactPoint z;             // sqrt(-3) c omega / D
    bool pole = false;
    BigComplex p;
    BigComplex dp;
    BigComplex zeta;          // only with zeta enabled
    BigComplex reciprocal;    // 1 / (p(z) + cbrt 2), zero at a pole
    std::vector<int> symbols; // (c / pi_k)_2
};

class FormulaWorkspace {
public:
    FormulaWorkspace(const SquarefreeD& d, const LatticeContext& ctx, unsigned workers = 1, bool with_zeta = false)
        : d_(d), ctx_(&ctx), rs_(residue_system(d)), with_zeta_(with_zeta)
    {
        const auto& primes = d_.primes();
        terms_ = parallel_map(rs_.count(), workers, [&](std::size_t i) {
            ClassTerm term;
            term.c = rs_.reps[i];
            term.z = division_point(term.c, d_.value());
            const mpfr_prec_t bits = ctx.bits();
            term.p = BigComplex(bits);
            term.dp = BigComplex(bits);
            term.zeta = BigComplex(bits);
            term.reciprocal = BigComplex(bits);
            const auto reduced = reduce_mod_lattice(term.z);
            if (reduced.residual.num.is_zero()) {
                term.pole = true;
            } else if (with_zeta) {
                auto v = weierstrass_all(term.z, ctx);
                term.p = std::move(v.p);
                term.dp = std::move(v.dp);
                term.zeta = std::move(v.zeta);
            } else {
                auto v = std::get<WpValue>(wp(term.z, ctx));
                term.p = std::move(v.p);
                term.dp = std::move(v.dp);
            }
            if (!term.pole) {
                term.reciprocal = reciprocal(term.p + ctx.k().cbrt2);
            }
            term.symbols.reserve(primes.size());
            for (const auto& pi : primes) {
                term.symbols.push_back(quadratic_symbol(term.c, pi));
            }
            return term;
        });
    }

    const SquarefreeD& d() const { return d_; }
    const LatticeContext& ctx() const { return *ctx_; }
    const ResidueSystem& residues() const { return rs_; }
    const std::vector<ClassTerm>& terms() const { return terms_; }
    bool has_zeta() const { return with_zeta_; }

    // (c / D_T)_2 for the i-th class.
    int chi(std::size_t i, const SubsetSelector& t) const
    {
        int s = 1;
        for (std::size_t k = 0; k < d_.size(); ++k) {
            if (t.contains(k)) {
                s *= terms_[i].symbols[k];
            }
        }
        return s;
    }

private:
    SquarefreeD d_;
    const LatticeContext* ctx_;
    ResidueSystem rs_;
    bool with_zeta_;
    std::vector<ClassTerm> terms_;
};

// ---------------------------------------------------------------------------

struct LValueReport {
    std::vector<EisensteinInt> primes;
    EisensteinInt d{1};
    std::uint32_t mask = 0;
    EisensteinInt d_t{1};
    int precision = 0;
    std::size_t term_count = 0;
    std::size_t pole_terms = 0;
    int two_symbol = 1;       // (2 / D_T)_2
    BigComplex sum1;
    Int sum2 = 0;
    BigComplex l_s;
    BigComplex l_adjusted;    // L = L_S / Euler factors outside T
    std::optional<std::string> oracle_method;
    std::optional<BigComplex> oracle_value;
    std::optional<BigReal> abs_diff;
    std::optional<double> wall_time;
};

inline int two_symbol(const SquarefreeD& d, const SubsetSelector& t)
{
    int s = 1;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (t.contains(k)) {
            s *= quadratic_symbol(EisensteinInt{2}, d.primes()[k]);
        }
    }
    return s;
}

// prod over pi_k not in T of (1 - (D_T / pi_k)_2 / pi_k)
inline BigComplex euler_factor(const SquarefreeD& d, const SubsetSelector& t, const LatticeContext& ctx)
{
    BigComplex f(BigReal(1, ctx.bits()), BigReal(ctx.bits()));
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (t.contains(k)) {
            continue;
        }
        const auto& pi = d.primes()[k];
        const int s = t.d_t().is_unit() ? 1 : quadratic_symbol(t.d_t(), pi);
        BigComplex inv = reciprocal(ctx.k().embed(pi.a(), pi.b()));
        f *= BigComplex(BigReal(1, ctx.bits()), BigReal(ctx.bits())) - inv * static_cast<long>(s);
    }
    return f;
}

inline BigComplex euler_adjust(const BigComplex& l_s, const SquarefreeD& d, const SubsetSelector& t, const LatticeContext& ctx)
{
    return l_s / euler_factor(d, t, ctx);
}

// -(omega / D) (2/D_T)_2 [ (sqrt3/4) sum1 - (cbrt4/(4 sqrt3)) sum2 ]
inline BigComplex formula_prefactor_apply(const BigComplex& bracket, const EisensteinInt& d, int two_sym,
                                          const LatticeContext& ctx)
{
    BigComplex scale = ctx.k().embed(d.a(), d.b());
    scale = reciprocal(scale) * ctx.omega();
    return -(scale * bracket) * static_cast<long>(two_sym);
}

inline BigComplex formula_bracket(const BigComplex& sum1, Int sum2, const LatticeContext& ctx)
{
    const auto& k = ctx.k();
    BigComplex out = sum1 * (k.sqrt3 / 4);
    out -= (k.cbrt4 / (4 * k.sqrt3)) * BigReal(static_cast<long>(sum2), ctx.bits());
    return out;
}

inline LValueReport formula_l1(const FormulaWorkspace& ws, const SubsetSelector& t)
{
    const auto start = std::chrono::steady_clock::now();
    const LatticeContext& ctx = ws.ctx();
    const auto& terms = ws.terms();
    std::vector<BigComplex> parts;
    parts.reserve(terms.size());
    Int sum2 = 0;
    std::size_t poles = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const int chi = ws.chi(i, t);
        sum2 += chi;
        poles += terms[i].pole ? 1 : 0;
        parts.push_back(terms[i].reciprocal * static_cast<long>(chi));
    }
    LValueReport r;
    r.primes = ws.d().primes();
    r.d = ws.d().value();
    r.mask = t.mask();
    r.d_t = t.d_t();
    r.precision = ctx.precision().digits;
    r.term_count = terms.size();
    r.pole_terms = poles;
    r.two_symbol = two_symbol(ws.d(), t);
    r.sum1 = deterministic_sum(parts, ctx.bits());
    r.sum2 = sum2;
    r.l_s = formula_prefactor_apply(formula_bracket(r.sum1, r.sum2, ctx), r.d, r.two_symbol, ctx);
    r.l_adjusted = euler_adjust(r.l_s, ws.d(), t, ctx);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// Closed form at D = 1 and its Euler-factor descendants: L(conj psi_1, 1) =
// cbrt4 omega / (4 sqrt3).
inline BigReal closed_form_l1(const LatticeContext& ctx)
{
    const auto& k = ctx.k();
    return k.cbrt4 * ctx.omega() / (4 * k.sqrt3);
}

// -(D/omega)(2/D_T)_2 L_S rebuilt from the report; equals the bracket.
inline BigComplex reconstruct_bracket(const LValueReport& r, const LatticeContext& ctx)
{
    BigComplex scale = ctx.k().embed(r.d.a(), r.d.b()) / ctx.omega();
    return -(scale * r.l_s) * static_cast<long>(r.two_symbol);
}

// ---------------------------------------------------------------------------
// Checks used by the proof of the formula.
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string measure;  // achieved error or exact value, as text
    std::string detail;
};

// sqrt(-3) omega / 6
inline ExactPoint sqrt_minus3_sixth() { return ExactPoint{EisensteinInt::sqrt_minus3(), 6}; }

inline std::vector<CheckResult> identity_checks(const FormulaWorkspace& ws, const SubsetSelector& t, std::size_t samples = 20,
                                                unsigned workers = 1)
{
    if (ws.d().value().is_unit()) {
        throw std::invalid_argument("identity checks need a non-unit D");
    }
    if (!ws.has_zeta()) {
        throw std::invalid_argument("identity checks need a workspace with zeta values");
    }
    const LatticeContext& ctx = ws.ctx();
    const auto& terms = ws.terms();
    const std::size_t n = terms.size();
    const mpfr_prec_t bits = ctx.bits();
    const BigReal tol = ctx.tolerance(12) * static_cast<long>(n);

    std::vector<BigComplex> zsum, psum;
    EisensteinInt conj_sum{0};
    for (std::size_t i = 0; i < n; ++i) {
        const long chi = ws.chi(i, t);
        zsum.push_back(terms[i].zeta * chi);
        psum.push_back(terms[i].dp * terms[i].reciprocal * chi);
        conj_sum += EisensteinInt{chi} * terms[i].c.conj();
    }
    std::vector<CheckResult> out;
    {
        const BigReal e = deterministic_sum(zsum, bits).abs();
        out.push_back({"sum chi(c) zeta(z_c) = 0", e <= tol, e.to_string(3), ""});
    }
    {
        const BigReal e = deterministic_sum(psum, bits).abs();
        out.push_back({"sum chi(c) p'(z_c)/(p(z_c) + cbrt2) = 0", e <= tol, e.to_string(3), ""});
    }
    out.push_back({"sum chi(c) conj(c) = 0 exactly", conj_sum.is_zero(), to_string(conj_sum), ""});

    // zeta(z_c + sqrt(-3) omega/6) = zeta(z_c) - pi i/(3 omega) - (i/2) cbrt4
    //                               + (p'(z_c) + 3i) / (2 (p(z_c) + cbrt2))
    std::vector<std::size_t> picks;
    if (samples == 0 || n <= samples) {
        for (std::size_t i = 0; i < n; ++i) {
            picks.push_back(i);
        }
    } else {
        for (std::size_t j = 0; j < samples; ++j) {
            picks.push_back(j * n / samples);
        }
    }
    const auto& k = ctx.k();
    const BigComplex shift_const(BigReal(bits), -(k.pi / (3 * ctx.omega())) - k.cbrt4 / 2);
    const BigComplex three_i(BigReal(bits), BigReal(3, bits));
    const auto residuals = parallel_map(picks.size(), workers, [&](std::size_t j) {
        const ClassTerm& term = terms[picks[j]];
        const BigComplex lhs = zeta(term.z + sqrt_minus3_sixth(), ctx);
        BigComplex rhs = term.zeta + shift_const;
        rhs += (term.dp + three_i) * term.reciprocal / 2;
        return distance(lhs, rhs);
    });
    BigReal worst(bits);
    std::size_t worst_at = 0;
    for (std::size_t j = 0; j < residuals.size(); ++j) {
        if (residuals[j] > worst) {
            worst = residuals[j];
            worst_at = picks[j];
        }
    }
    const bool ok = worst <= ctx.tolerance(10);
    out.push_back({"zeta(z_c + sqrt(-3) w/6) decomposition", ok, worst.to_string(3),
                   ok ? std::to_string(picks.size()) + " classes" : "worst at c = " + to_string(terms[worst_at].c)});
    return out;
}

// Sum over all subsets T of (D/omega)(2/D_T)_2 L_S(T), compared with
// -(sqrt3/4) sum_c prod_k (1 + (c/pi_k)_2) / (p(z_c) + cbrt2) + (cbrt4/(4 sqrt3)) #C.
struct AggregationCheck {
    BigComplex lhs;
    BigComplex rhs;
    BigReal error;
    bool passed = false;
};

inline AggregationCheck subset_aggregation(const FormulaWorkspace& ws)
{
    const LatticeContext& ctx = ws.ctx();
    const auto& k = ctx.k();
    const mpfr_prec_t bits = ctx.bits();
    const auto& d = ws.d();
    const std::uint32_t subsets = 1U << d.size();
    std::vector<BigComplex> lhs_parts;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        const SubsetSelector t(d, mask);
        const LValueReport r = formula_l1(ws, t);
        BigComplex v = ctx.k().embed(r.d.a(), r.d.b()) / ctx.omega() * r.l_s;
        lhs_parts.push_back(v * static_cast<long>(r.two_symbol));
    }
    std::vector<BigComplex> rhs_parts;
    for (const auto& term : ws.terms()) {
        long weight = 1;
        for (int s : term.symbols) {
            weight *= 1 + s;
        }
        rhs_parts.push_back(term.reciprocal * weight);
    }
    AggregationCheck out;
    out.lhs = deterministic_sum(lhs_parts, bits);
    out.rhs = -(deterministic_sum(rhs_parts, bits) * (k.sqrt3 / 4));
    out.rhs += (k.cbrt4 / (4 * k.sqrt3)) * BigReal(static_cast<long>(ws.terms().size()), bits);
    out.error = distance(out.lhs, out.rhs);
    out.passed = out.error <= ctx.tolerance(12) * static_cast<long>(ws.terms().size());
    return out;
}

// Runs the formula at P and P + 20 and compares.
struct EscalationCheck {
    BigReal difference;
    bool passed = false;
};

inline EscalationCheck precision_escalation(const SquarefreeD& d, const SubsetSelector& t, Precision p, unsigned workers = 1)
{
    const LatticeContext lo(p);
    const LatticeContext hi(Precision{p.digits + 20});
    const auto a = formula_l1(FormulaWorkspace(d, lo, workers), t);
    const auto b = formula_l1(FormulaWorkspace(d, hi, workers), t);
    EscalationCheck out;
    BigReal scale = b.l_s.abs();
    if (scale < BigReal(1, hi.bits())) {
        scale = BigReal(1, hi.bits());
    }
    out.difference = distance(a.l_s, b.l_s) / scale;
    out.passed = out.difference <= lo.tolerance(10);
    return out;
}

// ---------------------------------------------------------------------------
// Exact symbol identities used by the formula, over every class c and every
// nonempty subset T.
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> symbol_checks(const SquarefreeD& d)
{
    const ResidueSystem rs = residue_system(d);
    const EisensteinInt big_d = d.value();
    const std::uint32_t subsets = 1U << d.size();
    std::vector<CheckResult> out;
    auto fail_at = [](const EisensteinInt& c, std::uint32_t mask) {
        return "c = " + to_string(c) + ", T = " + std::to_string(mask);
    };

    {
        CheckResult r{"6c + D = 1 mod 6", true, "", ""};
        if (d.flag() == Congruence::mod12) {
            for (const auto& c : rs.reps) {
                if (!congruent(EisensteinInt{6} * c + big_d, EisensteinInt{1}, EisensteinInt{6})) {
                    r.passed = false;
                    r.detail = "c = " + to_string(c);
                    break;
                }
            }
        }
        r.measure = std::to_string(rs.count()) + " classes";
        out.push_back(r);
    }
    {
        CheckResult r{"(2 / (6c + D))_3 = 1", true, std::to_string(rs.count()) + " classes", ""};
        if (!big_d.is_unit()) {
            for (const auto& c : rs.reps) {
                if (!power_residue_symbol(EisensteinInt{2}, EisensteinInt{6} * c + big_d, 3).is_one()) {
                    r.passed = false;
                    r.detail = "c = " + to_string(c);
                    break;
                }
            }
        }
        out.push_back(r);
    }
    CheckResult minus_one{"(-1 / D_T)_2 = 1", true, "", ""};
    CheckResult chain{"(D_T/(6c+D))_2 = ((6c+D)/D_T)_2 = (2c/D_T)_2", true, "", ""};
    CheckResult psi{"psi(6c + D): sextic form = quadratic form", true, "", ""};
    CheckResult char_sum{"sum_c (c/D_T)_2 = #C [T empty] or 0", true, "", ""};
    CheckResult odd_sum{"sum_c (c/D_T)_2 conj(c) = 0", true, "", ""};
    std::size_t evaluations = 0;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        const SubsetSelector t(d, mask);
        const HeckeCharacterSpec spec(d, t);
        const EisensteinInt& d_t = t.d_t();
        if (!t.is_empty() && quadratic_symbol(EisensteinInt{-1}, d_t) != 1) {
            minus_one.passed = false;
            minus_one.detail = "T = " + std::to_string(mask);
        }
        Int sum = 0;
        EisensteinInt conj_sum{0};
        for (const auto& c : rs.reps) {
            const int chi = d_t.is_unit() ? 1 : quadratic_symbol(c, d_t);
            sum += chi;
            conj_sum += EisensteinInt{chi} * c.conj();
            if (big_d.is_unit()) {
                continue;
            }
            const EisensteinInt alpha = EisensteinInt{6} * c + big_d;
            if (!t.is_empty()) {
                const int s1 = quadratic_symbol(d_t, alpha);
                const int s2 = quadratic_symbol(alpha, d_t);
                const int s3 = quadratic_symbol(EisensteinInt{2} * c, d_t);
                if (chain.passed && !(s1 == s2 && s2 == s3)) {
                    chain.passed = false;
                    chain.detail = fail_at(c, mask);
                }
            }
            try {
                static_cast<void>(psi_of_generator(alpha, spec));
            } catch (const CharacterError&) {
                if (psi.passed) {
                    psi.passed = false;
                    psi.detail = fail_at(c, mask);
                }
            }
            ++evaluations;
        }
        const Int want = t.is_empty() ? static_cast<Int>(rs.count()) : 0;
        if (sum != want && char_sum.passed) {
            char_sum.passed = false;
            char_sum.detail = "T = " + std::to_string(mask) + ": " + std::to_string(sum);
        }
        if (!big_d.is_unit() && !conj_sum.is_zero() && odd_sum.passed) {
            odd_sum.passed = false;
            odd_sum.detail = "T = " + std::to_string(mask) + ": " + to_string(conj_sum);
        }
    }
    minus_one.measure = std::to_string(subsets - 1) + " subsets";
    chain.measure = psi.measure = std::to_string(evaluations) + " (c, T) pairs";
    char_sum.measure = odd_sum.measure = "exact";
    out.push_back(minus_one);
    out.push_back(chain);
    out.push_back(psi);
    out.push_back(char_sum);
    out.push_back(odd_sum);
    return out;
}

} // namespace cmhecke
