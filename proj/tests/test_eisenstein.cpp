#include "cmhecke/eisenstein.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace cmhecke;

namespace {

EisensteinInt random_element(std::mt19937_64& rng, Int box)
{
    std::uniform_int_distribution<Int> dist(-box, box);
    return {dist(rng), dist(rng)};
}

// Primes of Z[tau] coprime to 6 with norm below the bound, one per associate class.
std::vector<EisensteinInt> small_primes(Int bound)
{
    std::vector<EisensteinInt> out;
    for (Int p = 5; p <= bound; ++p) {
        if (!is_rational_prime(static_cast<std::uint64_t>(p))) {
            continue;
        }
        if (p % 3 == 1) {
            const EisensteinInt pi = prime_above(p);
            out.push_back(pi);
            out.push_back(canonical_associate(pi.conj()));
        } else if (p * p <= bound) {
            out.push_back(EisensteinInt{p});
        }
    }
    return out;
}

} // namespace

TEST(EisensteinInt, NormExamples)
{
    EXPECT_EQ(EisensteinInt::tau().norm(), 1);
    EXPECT_EQ((EisensteinInt{1, 2}).norm(), 3);
    EXPECT_EQ((EisensteinInt{13, 12}).norm(), 157);
    EXPECT_EQ((EisensteinInt{0}).norm(), 0);
}

TEST(EisensteinInt, NormIsMultiplicativeAndConjugationInvolutive)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto x = random_element(rng, 1000);
        const auto y = random_element(rng, 1000);
        EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
        EXPECT_EQ(x.conj().conj(), x);
        EXPECT_EQ(x * x.conj(), EisensteinInt{x.norm()});
        EXPECT_GE(x.norm(), 0);
    }
}

TEST(EisensteinInt, TauSatisfiesItsMinimalPolynomial)
{
    const auto t = EisensteinInt::tau();
    EXPECT_EQ(t * t + t + EisensteinInt{1}, EisensteinInt{0});
    EXPECT_EQ(t.conj(), EisensteinInt(-1, -1));
    EXPECT_EQ(EisensteinInt::sqrt_minus3() * EisensteinInt::sqrt_minus3(), EisensteinInt{-3});
}

TEST(EisensteinInt, ExactlySixUnits)
{
    std::set<std::pair<Int, Int>> found;
    for (Int a = -3; a <= 3; ++a) {
        for (Int b = -3; b <= 3; ++b) {
            if (EisensteinInt{a, b}.is_unit()) {
                found.insert({a, b});
            }
        }
    }
    std::set<std::pair<Int, Int>> want{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {-1, -1}, {1, 1}};
    EXPECT_EQ(found, want);
    for (const auto& u : units()) {
        EXPECT_EQ(u.norm(), 1);
        EXPECT_TRUE(u.is_unit());
    }
}

TEST(EisensteinInt, ParseAndPrintRoundTrip)
{
    EXPECT_EQ(parse_eisenstein("13+12t"), EisensteinInt(13, 12));
    EXPECT_EQ(parse_eisenstein("1-12*t"), EisensteinInt(1, -12));
    EXPECT_EQ(parse_eisenstein(" -11 + 12 * t "), EisensteinInt(-11, 12));
    EXPECT_EQ(parse_eisenstein("-t"), EisensteinInt(0, -1));
    EXPECT_EQ(parse_eisenstein("157"), EisensteinInt(157));
    EXPECT_EQ(to_string(EisensteinInt(13, 12)), "13+12*t");
    EXPECT_EQ(to_string(EisensteinInt(1, -12)), "1-12*t");
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto x = random_element(rng, 100000);
        EXPECT_EQ(parse_eisenstein(to_string(x)), x);
    }
    EXPECT_THROW(parse_eisenstein("1+2u"), std::invalid_argument);
    EXPECT_THROW(parse_eisenstein(""), std::invalid_argument);
}

TEST(DivMod, TrivialCases)
{
    const EisensteinInt x{17, -5};
    EXPECT_EQ(divmod(x, EisensteinInt{1}).quotient, x);
    EXPECT_EQ(divmod(x, EisensteinInt{1}).remainder, EisensteinInt{0});
    EXPECT_EQ(divmod(x, x).quotient, EisensteinInt{1});
    EXPECT_EQ(divmod(x, x).remainder, EisensteinInt{0});
    EXPECT_THROW(divmod(x, EisensteinInt{0}), std::domain_error);
}

TEST(DivMod, TieBreaksTowardZero)
{
    // (5 + t)/2 = 5/2 + t/2 rounds to 2 + 0t.
    const auto r = divmod(EisensteinInt{5, 1}, EisensteinInt{2});
    EXPECT_EQ(r.quotient, EisensteinInt{2});
    EXPECT_EQ(r.remainder, EisensteinInt(1, 1));
    EXPECT_LT(r.remainder.norm(), 4);
}

TEST(DivMod, EuclideanOnGrid)
{
    for (Int a = -12; a <= 12; ++a) {
        for (Int b = -12; b <= 12; ++b) {
            const EisensteinInt x{a, b};
            for (Int c = -4; c <= 4; ++c) {
                for (Int d = -4; d <= 4; ++d) {
                    const EisensteinInt y{c, d};
                    if (y.is_zero()) {
                        continue;
                    }
                    const auto [q, r] = divmod(x, y);
                    ASSERT_EQ(q * y + r, x);
                    ASSERT_LT(r.norm(), y.norm());
                }
            }
        }
    }
}

TEST(Gcd, Examples)
{
    const EisensteinInt x{7, 3};
    EXPECT_EQ(gcd(x, EisensteinInt{0}), canonical_associate(x));
    const EisensteinInt pi{13, 12};
    EXPECT_EQ(gcd(pi, pi.conj()), EisensteinInt{1});
    EXPECT_TRUE(are_associates(gcd(EisensteinInt{6}, EisensteinInt::sqrt_minus3()), EisensteinInt::sqrt_minus3()));
    EXPECT_THROW(gcd(EisensteinInt{0}, EisensteinInt{0}), std::domain_error);
}

TEST(Gcd, DividesBothAndIsDivisibleByCommonDivisors)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        const auto common = random_element(rng, 30);
        if (common.is_zero()) {
            continue;
        }
        const auto x = common * random_element(rng, 200);
        const auto y = common * random_element(rng, 200);
        if (x.is_zero() && y.is_zero()) {
            continue;
        }
        const auto g = gcd(x, y);
        EXPECT_TRUE(divides(g, x));
        EXPECT_TRUE(divides(g, y));
        EXPECT_TRUE(divides(common, g));
        EXPECT_EQ(g, canonical_associate(g));
        const auto e = extended_gcd(x, y);
        EXPECT_EQ(e.s * x + e.t * y, e.g);
        EXPECT_TRUE(are_associates(e.g, g));
    }
}

TEST(Primality, Examples)
{
    EXPECT_TRUE(is_prime(EisensteinInt{13, 12}));
    EXPECT_FALSE(is_prime(EisensteinInt{13}));
    EXPECT_TRUE(is_prime(EisensteinInt{2}));
    EXPECT_TRUE(is_prime(EisensteinInt::sqrt_minus3()));
    EXPECT_FALSE(is_prime(EisensteinInt{1}));
    EXPECT_FALSE(is_prime(EisensteinInt{7}));
    EXPECT_TRUE(is_prime(EisensteinInt{-11}));
}

TEST(Primality, SplitPrimesFactorIntoConjugates)
{
    for (Int p : {7, 13, 19, 31, 157, 397, 9973}) {
        const auto pi = prime_above(p);
        EXPECT_EQ(pi.norm(), p);
        EXPECT_TRUE(is_prime(pi));
        EXPECT_FALSE(are_associates(pi, pi.conj()));
        EXPECT_TRUE(are_associates(pi * pi.conj(), EisensteinInt{p}));
    }
}

TEST(Factor, RebuildsTheInput)
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const auto x = random_element(rng, 300);
        if (x.is_zero() || x.is_unit()) {
            continue;
        }
        EisensteinInt prod{1};
        for (const auto& [pi, e] : factor(x)) {
            EXPECT_TRUE(is_prime(pi));
            prod *= pow(pi, static_cast<std::uint64_t>(e));
        }
        EXPECT_TRUE(are_associates(prod, x));
    }
}

TEST(FindPrimes, Examples)
{
    const auto p157 = find_primes(157);
    EXPECT_NE(std::find(p157.begin(), p157.end(), EisensteinInt(13, 12)), p157.end());
    EXPECT_NE(std::find(p157.begin(), p157.end(), EisensteinInt(1, -12)), p157.end());
    EXPECT_TRUE(find_primes(100).empty());
    const auto p397 = find_primes(397);
    EXPECT_NE(std::find(p397.begin(), p397.end(), EisensteinInt(-11, 12)), p397.end());
}

TEST(FindPrimes, MatchesBruteForceScan)
{
    const Int bound = 5000;
    std::vector<EisensteinInt> brute;
    for (Int a = -200; a <= 200; ++a) {
        for (Int b = -200; b <= 200; ++b) {
            const EisensteinInt x{a, b};
            if (detail::floor_mod(a, 12) == 1 && detail::floor_mod(b, 12) == 0 && x.norm() <= bound && is_prime(x)) {
                brute.push_back(x);
            }
        }
    }
    std::sort(brute.begin(), brute.end(), [](const EisensteinInt& l, const EisensteinInt& r) {
        return std::tuple{l.norm(), l.a(), l.b()} < std::tuple{r.norm(), r.a(), r.b()};
    });
    EXPECT_EQ(find_primes(bound), brute);
    // one per associate class
    const auto got = find_primes(bound);
    for (std::size_t i = 0; i < got.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            EXPECT_FALSE(are_associates(got[i], got[j]));
        }
    }
}

TEST(FindPrimes, WeakerCongruenceContainsMod12)
{
    const auto strong = find_primes(3000, Congruence::mod12);
    const auto weak = find_primes(3000, Congruence::mod4sqrt3);
    EXPECT_GT(weak.size(), strong.size());
    for (const auto& pi : strong) {
        EXPECT_NE(std::find(weak.begin(), weak.end(), pi), weak.end());
    }
    for (const auto& pi : weak) {
        EXPECT_TRUE(congruent(pi, EisensteinInt{1}, congruence_modulus(Congruence::mod4sqrt3)));
    }
}

TEST(UnitRoot, ClosedUnderMultiplication)
{
    for (int s = 0; s < 2; ++s) {
        for (int k = 0; k < 3; ++k) {
            const UnitRoot x{s == 1, k};
            EXPECT_EQ(x.value().norm(), 1);
            EXPECT_EQ(UnitRoot::from_unit(x.value()), x);
            EXPECT_EQ((x * x.conj()), UnitRoot::one());
            EXPECT_EQ(x.pow(6), UnitRoot::one());
            for (int s2 = 0; s2 < 2; ++s2) {
                for (int k2 = 0; k2 < 3; ++k2) {
                    const UnitRoot y{s2 == 1, k2};
                    EXPECT_EQ((x * y).value(), x.value() * y.value());
                }
            }
        }
    }
}

TEST(ResidueSymbol, Examples)
{
    const EisensteinInt pi{13, 12};
    EXPECT_TRUE(power_residue_symbol(EisensteinInt{1}, pi, 2).is_one());
    for (const auto& d_t : {pi, EisensteinInt(1, -12), EisensteinInt(157), EisensteinInt(-11)}) {
        EXPECT_EQ(quadratic_symbol(EisensteinInt{-1}, d_t), 1);
    }
    const SquarefreeD d({pi});
    for (const auto& c : residue_system(d).reps) {
        EXPECT_TRUE(power_residue_symbol(EisensteinInt{2}, EisensteinInt{6} * c + d.value(), 3).is_one());
    }
    EXPECT_TRUE(power_residue_symbol(EisensteinInt{5, 3}, EisensteinInt{1}, 6).is_one());
}

TEST(ResidueSymbol, QuadraticMatchesBruteForceSquares)
{
    const EisensteinInt pi{13, 12};
    const ResidueRing f(pi);
    std::vector<bool> square(f.size(), false);
    for (std::size_t i = 1; i < f.size(); ++i) {
        const auto x = f.element(i);
        square[f.index(x * x)] = true;
    }
    for (std::size_t i = 1; i < f.size(); ++i) {
        const auto a = f.element(i);
        EXPECT_EQ(quadratic_symbol(a, pi), square[i] ? 1 : -1) << to_string(a);
    }
}

TEST(ResidueSymbol, CubicMatchesBruteForceCubes)
{
    for (const auto& pi : small_primes(400)) {
        const ResidueRing f(pi);
        std::vector<bool> cube(f.size(), false);
        for (std::size_t i = 1; i < f.size(); ++i) {
            const auto x = f.element(i);
            cube[f.index(x * x * x)] = true;
        }
        for (std::size_t i = 1; i < f.size(); ++i) {
            EXPECT_EQ(power_residue_symbol(f.element(i), pi, 3).is_one(), cube[i]);
        }
    }
}

TEST(ResidueSymbol, MultiplicativeInNumerator)
{
    std::mt19937_64 rng(23);
    const auto primes = small_primes(3000);
    int checked = 0;
    while (checked < 200) {
        // composite denominators exercise the Jacobi extension
        const auto beta = primes[rng() % primes.size()] * primes[rng() % primes.size()];
        const auto a = random_element(rng, 5000);
        const auto b = random_element(rng, 5000);
        if (a.is_zero() || b.is_zero() || !coprime(a * b, beta)) {
            continue;
        }
        for (int degree : {2, 3, 6}) {
            EXPECT_EQ(power_residue_symbol(a * b, beta, degree),
                      power_residue_symbol(a, beta, degree) * power_residue_symbol(b, beta, degree));
        }
        ++checked;
    }
}

TEST(ResidueSymbol, SexticFactorization)
{
    std::mt19937_64 rng(29);
    const auto primes = small_primes(3000);
    int checked = 0;
    while (checked < 200) {
        const auto beta = primes[rng() % primes.size()] * (rng() % 2 == 0 ? EisensteinInt{1} : primes[rng() % primes.size()]);
        const auto a = random_element(rng, 5000);
        if (a.is_zero() || !coprime(a, beta)) {
            continue;
        }
        const UnitRoot s6 = power_residue_symbol(a, beta, 6);
        EXPECT_EQ(s6.pow(3), power_residue_symbol(a, beta, 2));
        EXPECT_EQ(s6.pow(2), power_residue_symbol(a, beta, 3));
        EXPECT_EQ(power_residue_symbol(a, beta, 2).tau_exp(), 0);
        ++checked;
    }
}

TEST(ResidueSymbol, Errors)
{
    const EisensteinInt pi{13, 12};
    EXPECT_THROW(power_residue_symbol(pi, pi, 2), std::domain_error);
    EXPECT_THROW(power_residue_symbol(EisensteinInt{3}, EisensteinInt{2} * pi, 2), std::domain_error);
    EXPECT_THROW(power_residue_symbol(EisensteinInt{5}, EisensteinInt::sqrt_minus3() * pi, 2), std::domain_error);
    EXPECT_THROW(power_residue_symbol(EisensteinInt{5}, pi, 4), std::invalid_argument);
    EXPECT_THROW(power_residue_symbol(EisensteinInt{5}, EisensteinInt{0}, 2), std::domain_error);
}

TEST(SquarefreeD, Validation)
{
    EXPECT_NO_THROW(SquarefreeD({EisensteinInt(13, 12), EisensteinInt(1, -12)}));
    EXPECT_EQ(SquarefreeD({EisensteinInt(13, 12), EisensteinInt(1, -12)}).value(), EisensteinInt{157});
    EXPECT_THROW(SquarefreeD({EisensteinInt(13)}), std::invalid_argument);
    EXPECT_THROW(SquarefreeD({EisensteinInt(3, 1)}), std::invalid_argument);
    EXPECT_THROW(SquarefreeD({EisensteinInt(13, 12), EisensteinInt(13, 12)}), std::invalid_argument);
    EXPECT_EQ(SquarefreeD().value(), EisensteinInt{1});
    EXPECT_TRUE(SquarefreeD({EisensteinInt(13, 12), EisensteinInt(1, -12)}).conjugation_stable());
    EXPECT_FALSE(SquarefreeD({EisensteinInt(13, 12)}).conjugation_stable());
}

TEST(SubsetSelector, Divisors)
{
    const SquarefreeD d({EisensteinInt(13, 12), EisensteinInt(1, -12)});
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
        const SubsetSelector t(d, mask);
        EXPECT_EQ(t.d_t() * t.d_hat(), d.value());
    }
    EXPECT_EQ(SubsetSelector::empty(d).d_t(), EisensteinInt{1});
    EXPECT_EQ(SubsetSelector::full(d).d_t(), d.value());
    EXPECT_THROW(SubsetSelector(d, 4), std::invalid_argument);
}

namespace {

void expect_residue_invariants(const SquarefreeD& d, std::size_t want)
{
    const ResidueSystem rs = residue_system(d);
    ASSERT_EQ(rs.count(), want);
    if (d.value().is_unit()) {
        EXPECT_EQ(rs.reps, std::vector<EisensteinInt>{EisensteinInt{0}});
        return;
    }
    const ResidueRing ring(d.value());
    std::set<std::size_t> classes;
    for (const auto& c : rs.reps) {
        EXPECT_TRUE(coprime(c, d.value()));
        classes.insert(ring.index(c));
    }
    EXPECT_EQ(classes.size(), rs.count());
    for (std::size_t i = 0; i < rs.count(); i += 2) {
        EXPECT_EQ(rs.reps[i + 1], -rs.reps[i]);
    }
    for (const auto& c : rs.reps) {
        EXPECT_TRUE(classes.count(ring.index(-c)) == 1);
    }
}

} // namespace

TEST(ResidueSystem, Counts)
{
    expect_residue_invariants(SquarefreeD(), 1);
    expect_residue_invariants(SquarefreeD({EisensteinInt(13, 12)}), 156);
    expect_residue_invariants(SquarefreeD({EisensteinInt(-11)}), 120);
    expect_residue_invariants(SquarefreeD({EisensteinInt(13, 12), EisensteinInt(1, -12)}), 156 * 156);
}

TEST(ResidueSystem, Deterministic)
{
    const SquarefreeD d({EisensteinInt(13, 12), EisensteinInt(-11)});
    EXPECT_EQ(residue_system(d).reps, residue_system(d).reps);
}

TEST(CharacterSums, ExactOrthogonalityAndOddness)
{
    const SquarefreeD d({EisensteinInt(13, 12), EisensteinInt(1, -12)});
    const ResidueSystem rs = residue_system(d);
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
        const SubsetSelector t(d, mask);
        Int sum = 0;
        EisensteinInt odd{0};
        for (const auto& c : rs.reps) {
            const int chi = t.is_empty() ? 1 : quadratic_symbol(c, t.d_t());
            sum += chi;
            odd += EisensteinInt{chi} * c.conj();
        }
        EXPECT_EQ(sum, t.is_empty() ? static_cast<Int>(rs.count()) : 0);
        EXPECT_EQ(odd, EisensteinInt{0});
    }
}
