#include "cmhecke/weierstrass.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cmhecke;

namespace {

const LatticeContext& ctx50()
{
    static const LatticeContext ctx(Precision{50});
    return ctx;
}

BigComplex random_point(std::mt19937_64& rng, mpfr_prec_t bits, double box)
{
    std::uniform_real_distribution<double> u(-box, box);
    return {BigReal::from_double(u(rng), bits), BigReal::from_double(u(rng), bits)};
}

// Points whose distance to the lattice is at least 0.05 omega, so that
// relative errors stay meaningful.
BigComplex away_from_lattice(std::mt19937_64& rng, const LatticeContext& ctx, double box)
{
    for (;;) {
        BigComplex z = random_point(rng, ctx.bits(), box);
        if (reduce_mod_lattice(z, ctx).z.abs() > ctx.omega() / 20) {
            return z;
        }
    }
}

BigReal rel_err(const BigComplex& got, const BigComplex& want)
{
    BigReal scale = want.abs();
    if (scale < BigReal(1, got.bits())) {
        scale = BigReal(1, got.bits());
    }
    return (got - want).abs() / scale;
}

const WpValue& value(const WpResult& r) { return std::get<WpValue>(r); }

const char* const kOmega60 = "3.059908074114385749826388344617648717145657894321858992123";

} // namespace

TEST(Omega, LowPrecisionDigits)
{
    const auto r = compute_omega(Precision{20});
    EXPECT_EQ(r.omega.to_string(20).substr(0, 8), "3.059908");
    EXPECT_THROW(compute_omega(Precision{19}), std::invalid_argument);
}

TEST(Omega, TwoRoutesAgree)
{
    const auto& ctx = ctx50();
    const auto& r = ctx.omega_routes();
    EXPECT_LT(r.disagreement, ctx.tolerance(0));
    const BigReal want = BigReal::from_string(kOmega60, ctx.bits());
    EXPECT_LT(abs(r.quadrature - want), ctx.tolerance(1));
    EXPECT_LT(abs(r.lattice_sum - want), ctx.tolerance(1));
}

TEST(Omega, QuadratureMatchesClosedFormIntegral)
{
    // int_0^1 dx/(1+x^2) = pi/4
    const mpfr_prec_t bits = bits_for_digits(50);
    const BigReal v = tanh_sinh([](const BigReal& x) { return 1 / (1 + x * x); }, BigReal(0, bits), BigReal(1, bits), 45);
    EXPECT_LT(abs(v - const_pi(bits) / 4), pow10(-44, bits));
}

TEST(Lattice, NormalizedInvariant)
{
    const auto& ctx = ctx50();
    EXPECT_LT(abs(g3_scaled(ctx, BigReal(1, ctx.bits())) - 1), ctx.tolerance(2));
    EXPECT_LT(abs(g3_scaled(ctx, BigReal(2, ctx.bits())) - BigReal::ratio(1, 64, ctx.bits())), ctx.tolerance(2));
    EXPECT_LT(abs(g3_scaled(ctx, BigReal(3, ctx.bits())) * 729 - 1), ctx.tolerance(3));
}

TEST(Laurent, Seeds)
{
    const auto c = laurent_coefficients(12, bits_for_digits(30));
    EXPECT_TRUE(c[0].is_zero());
    EXPECT_TRUE(c[1].is_zero());
    EXPECT_EQ(c[2], BigReal::ratio(1, 28, bits_for_digits(30)));
    // only exponents 2k with k = 2 mod 3 survive when g2 = 0
    for (std::size_t k = 0; k < c.size(); ++k) {
        EXPECT_EQ(c[k].is_zero(), k % 3 != 2) << k;
    }
    EXPECT_THROW(laurent_coefficients(2, 64), std::invalid_argument);
}

TEST(Laurent, SatisfiesDifferentialEquationAsPowerSeries)
{
    // p'' = 6 p^2, coefficientwise: (2k)(2k-1) c_k = 6 (2 c_{k-2}... ) collected over
    // p^2 = z^-4 + 2 sum c_k z^(2k-2) + sum_{i+j=k} c_i c_j z^(2k).
    const int order = 40;
    const mpfr_prec_t bits = bits_for_digits(60);
    const auto c = laurent_coefficients(order, bits);
    for (int k = 2; k + 1 <= order; ++k) {
        // coefficient of z^(2k-2) on both sides
        const BigReal lhs = c[k] * static_cast<long>((2 * k) * (2 * k - 1));
        BigReal rhs = c[k] * 12;
        for (int i = 1; i < k - 1; ++i) {
            rhs += c[i] * c[k - 1 - i] * 6;
        }
        EXPECT_LT(abs(lhs - rhs), pow10(-60, bits)) << k;
    }
    EXPECT_EQ(series_order(Precision{50}), static_cast<int>(std::ceil(60 * std::log(10.0) / std::log(3.0))) + 8);
}

TEST(Reduction, Examples)
{
    const auto& ctx = ctx50();
    const auto r = reduce_mod_lattice(ExactPoint{EisensteinInt{7, 0}, 3});
    EXPECT_EQ(r.lattice, EisensteinInt(2, 0));
    EXPECT_EQ(r.residual, (ExactPoint{EisensteinInt{1}, 3}));
    const auto lat = reduce_mod_lattice(ExactPoint{EisensteinInt{5, -3}, 1});
    EXPECT_TRUE(lat.residual.num.is_zero());
    EXPECT_EQ(lat.lattice, EisensteinInt(5, -3));
    const BigComplex z = ctx.lattice_point(EisensteinInt{4, 9}) + ctx.to_complex(ExactPoint{EisensteinInt{1, 1}, 5});
    const auto rz = reduce_mod_lattice(z, ctx);
    EXPECT_EQ(rz.lattice, EisensteinInt(4, 9));
}

TEST(Reduction, LandsInTheVoronoiCell)
{
    const auto& ctx = ctx50();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const BigComplex z = random_point(rng, ctx.bits(), 40);
        const auto r = reduce_mod_lattice(z, ctx);
        ASSERT_LE(r.z.abs(), ctx.covering_radius() + ctx.tolerance(0));
        ASSERT_LT((r.z + ctx.lattice_point(r.lattice) - z).abs(), ctx.tolerance(0));
        for (const auto& u : units()) {
            // no neighbour is strictly closer
            ASSERT_LE(r.z.abs(), (r.z - ctx.lattice_point(u)).abs() + ctx.tolerance(0));
        }
    }
}

TEST(Wp, PoleAtLatticePoints)
{
    const auto& ctx = ctx50();
    EXPECT_TRUE(is_pole(wp(ExactPoint{EisensteinInt{0}, 1}, ctx)));
    EXPECT_TRUE(is_pole(wp(ExactPoint{EisensteinInt{3, 6}, 3}, ctx)));
    EXPECT_TRUE(is_pole(wp(ctx.lattice_point(EisensteinInt{-2, 7}), ctx)));
    EXPECT_THROW(weierstrass_all(ExactPoint{EisensteinInt{2, 1}, 1}, ctx), PoleError);
    EXPECT_FALSE(is_pole(wp(ExactPoint{EisensteinInt{1}, 3}, ctx)));
}

TEST(Wp, SpecialValueSuite)
{
    const auto suite = special_value_suite(ctx50(), 10);
    EXPECT_EQ(suite.size(), 17U);
    for (const auto& c : suite) {
        EXPECT_TRUE(c.passed) << c.name << " error " << c.error.to_string(3);
        EXPECT_LT(c.error, pow10(-40, ctx50().bits())) << c.name;
    }
}

TEST(Wp, SpecialValuesAtTwentyDigits)
{
    const LatticeContext ctx(Precision{20});
    for (const auto& c : special_value_suite(ctx, 10)) {
        EXPECT_TRUE(c.passed) << c.name;
    }
}

TEST(Wp, ExactAndFloatingArgumentsAgree)
{
    const auto& ctx = ctx50();
    for (const auto& p : {ExactPoint{EisensteinInt{1, 2}, 7}, ExactPoint{EisensteinInt{-13, 5}, 11}, ExactPoint{EisensteinInt{40, 3}, 13}}) {
        const auto a = weierstrass_all(p, ctx);
        const auto b = weierstrass_all(ctx.to_complex(p), ctx);
        EXPECT_LT(rel_err(a.p, b.p), ctx.tolerance(3));
        EXPECT_LT(rel_err(a.dp, b.dp), ctx.tolerance(3));
        EXPECT_LT(rel_err(a.zeta, b.zeta), ctx.tolerance(3));
    }
}

TEST(Wp, SymmetriesAtRandomPoints)
{
    const auto& ctx = ctx50();
    const BigComplex& tau = ctx.k().tau;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const BigComplex z = away_from_lattice(rng, ctx, 6);
        const auto v = weierstrass_all(z, ctx);
        // periodicity
        const EisensteinInt lambda{static_cast<Int>(rng() % 9) - 4, static_cast<Int>(rng() % 9) - 4};
        const auto shifted = weierstrass_all(z + ctx.lattice_point(lambda), ctx);
        EXPECT_LT(rel_err(shifted.p, v.p), ctx.tolerance(5));
        EXPECT_LT(rel_err(shifted.dp, v.dp), ctx.tolerance(5));
        EXPECT_LT(rel_err(shifted.zeta, v.zeta + quasi_period(lambda, ctx)), ctx.tolerance(5));
        // parity
        const auto neg = weierstrass_all(-z, ctx);
        EXPECT_LT(rel_err(neg.p, v.p), ctx.tolerance(5));
        EXPECT_LT(rel_err(neg.dp, -v.dp), ctx.tolerance(5));
        EXPECT_LT(rel_err(neg.zeta, -v.zeta), ctx.tolerance(5));
        // p(tau z) = tau p(z), p'(tau z) = p'(z), zeta(tau z) = tau^2 zeta(z)
        const auto rot = weierstrass_all(tau * z, ctx);
        EXPECT_LT(rel_err(rot.p, tau * v.p), ctx.tolerance(5));
        EXPECT_LT(rel_err(rot.dp, v.dp), ctx.tolerance(5));
        EXPECT_LT(rel_err(rot.zeta, tau * tau * v.zeta), ctx.tolerance(5));
        // real lattice: values at conj(z) are conjugates
        const auto cj = weierstrass_all(z.conj(), ctx);
        EXPECT_LT(rel_err(cj.p, v.p.conj()), ctx.tolerance(5));
        // differential equation
        const BigComplex residual = v.dp * v.dp - v.p * v.p * v.p * 4 + BigReal(1, ctx.bits());
        EXPECT_LT(residual.abs() / (v.p.abs() * v.p.norm_sq() + 1), ctx.tolerance(5));
    }
}

TEST(Wp, AdditionFormula)
{
    const auto& ctx = ctx50();
    std::mt19937_64 rng(37);
    for (int i = 0; i < 100; ++i) {
        const BigComplex z = away_from_lattice(rng, ctx, 3);
        const BigComplex w = away_from_lattice(rng, ctx, 3);
        const auto a = value(wp(z, ctx));
        const auto b = value(wp(w, ctx));
        if ((a.p - b.p).abs() < BigReal::ratio(1, 100, ctx.bits()) ||
            reduce_mod_lattice(z + w, ctx).z.abs() < ctx.omega() / 20) {
            continue;
        }
        const BigComplex slope = (a.dp - b.dp) / (a.p - b.p);
        const BigComplex want = slope * slope / 4 - a.p - b.p;
        EXPECT_LT(rel_err(value(wp(z + w, ctx)).p, want), ctx.tolerance(8));
        // duplication
        const BigComplex dup = a.p * a.p * 6 / (a.dp * 2);
        EXPECT_LT(rel_err(value(wp(z * 2, ctx)).p, dup * dup - a.p * 2), ctx.tolerance(8));
    }
}

TEST(Wp, FiniteDifferences)
{
    const auto& ctx = ctx50();
    const BigReal h = pow10(-50 / 3, ctx.bits());
    const BigComplex hc(h);
    std::mt19937_64 rng(19);
    for (int i = 0; i < 50; ++i) {
        const BigComplex z = away_from_lattice(rng, ctx, 3);
        const auto v = weierstrass_all(z, ctx);
        const auto up = weierstrass_all(z + hc, ctx);
        const auto dn = weierstrass_all(z - hc, ctx);
        const BigComplex dp = (up.p - dn.p) / (2 * h);
        const BigComplex ddp = (up.dp - dn.dp) / (2 * h);
        const BigComplex dzeta = (up.zeta - dn.zeta) / (2 * h);
        // central differences are accurate to O(h^2) ~ 1e-32
        EXPECT_LT(rel_err(dp, v.dp), pow10(-25, ctx.bits()));
        EXPECT_LT(rel_err(ddp, v.p * v.p * 6), pow10(-25, ctx.bits()));
        EXPECT_LT(rel_err(dzeta, -v.p), pow10(-25, ctx.bits()));
    }
    // p''(w/3) = 6 p(w/3)^2 = 6
    const BigComplex z3 = ctx.to_complex(ExactPoint{EisensteinInt{1}, 3});
    const BigComplex ddp = (weierstrass_all(z3 + hc, ctx).dp - weierstrass_all(z3 - hc, ctx).dp) / (2 * h);
    EXPECT_LT((ddp - BigComplex(BigReal(6, ctx.bits()))).abs(), pow10(-25, ctx.bits()));
}

TEST(Wp, TwoTorsionValuesSumToZero)
{
    // e1 + e2 + e3 = 0 and e1 e2 + e1 e3 + e2 e3 = g2/4 = 0
    const auto& ctx = ctx50();
    const auto e1 = value(wp(ExactPoint{EisensteinInt{1}, 2}, ctx)).p;
    const auto e2 = value(wp(ExactPoint{EisensteinInt{0, 1}, 2}, ctx)).p;
    const auto e3 = value(wp(ExactPoint{EisensteinInt{1, 1}, 2}, ctx)).p;
    EXPECT_LT((e1 + e2 + e3).abs(), ctx.tolerance(3));
    EXPECT_LT((e1 * e2 + e1 * e3 + e2 * e3).abs(), ctx.tolerance(3));
    EXPECT_LT((e1 * e2 * e3 * 4 - BigComplex(BigReal(1, ctx.bits()))).abs(), ctx.tolerance(3));
}

TEST(E1Star, PeriodicAndOdd)
{
    const auto& ctx = ctx50();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const BigComplex z = away_from_lattice(rng, ctx, 4);
        const BigComplex e = e1_star(z, ctx);
        const EisensteinInt lambda{static_cast<Int>(rng() % 7) - 3, static_cast<Int>(rng() % 7) - 3};
        EXPECT_LT(rel_err(e1_star(z + ctx.lattice_point(lambda), ctx), e), ctx.tolerance(5));
        EXPECT_LT(rel_err(e1_star(-z, ctx), -e), ctx.tolerance(5));
        // homogeneity: E1*(2z, 2L) = E1*(z, L)/2
        EXPECT_LT(rel_err(e1_star_scaled_lattice(z * 2, 2, ctx), e / 2), ctx.tolerance(5));
    }
}

TEST(E1Star, Examples)
{
    const auto& ctx = ctx50();
    const BigReal& w = ctx.omega();
    const BigReal& s3 = ctx.k().sqrt3;
    // E1*(w/2) = zeta(w/2) - eta * w/2 = 0
    EXPECT_LT(e1_star(ExactPoint{EisensteinInt{1}, 2}, ctx).abs(), ctx.tolerance(3));
    // E1*(w/3) = 1/sqrt3
    const BigComplex e3 = e1_star(ExactPoint{EisensteinInt{1}, 3}, ctx);
    EXPECT_LT((e3 - BigComplex(1 / s3)).abs(), ctx.tolerance(3));
    // E1* at a floating point equals E1* at the matching exact point
    const ExactPoint p{EisensteinInt{2, 5}, 9};
    EXPECT_LT((e1_star(p, ctx) - e1_star(ctx.to_complex(p), ctx)).abs(), ctx.tolerance(3));
    EXPECT_LT(abs(w - BigReal::from_string(kOmega60, ctx.bits())), ctx.tolerance(1));
}
