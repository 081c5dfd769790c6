#include <gtest/gtest.h>

#include <cmath>

#include "cokernel/error.hpp"
#include "cokernel/theory.hpp"
#include "oracles.hpp"

using namespace cokernel;

namespace {

const DomainId ZZ = DomainId::integers();
const DomainId ZI = DomainId::gaussian_integers();

PrimeIdealDesc zp(Word p) { return factor_rational_prime(ZZ, p)[0]; }

// Plain long double evaluation of prod_{j<=200} (1 - q^{-u-j}).
long double naive_product(Word q, int u) {
    long double r = 1;
    for (int j = 1; j <= 200; ++j) r *= 1 - std::pow(static_cast<long double>(q), -static_cast<long double>(u + j));
    return r;
}

}  // namespace

TEST(Theory, DocumentedValues) {
    const auto trivial = predicted_probability(ModuleType(), {zp(2)}, 0);
    EXPECT_NEAR(trivial.as_double(), 0.288788095086602421, 1e-9);
    EXPECT_LT(trivial.truncation_bound, Decimal(1e-9));
    EXPECT_GT(trivial.truncation_bound, Decimal(0));

    // The default tolerance leaves a tail near 1e-10; compare at a tighter one.
    const auto tight = predicted_probability(ModuleType(), {zp(2)}, 0, 1e-15);
    EXPECT_NEAR(tight.as_double(), 0.288788095086602421, 1e-12);

    const auto z3 = predicted_probability(ModuleType::parse(ZZ, "3:(1)"), {zp(3)}, 0, 1e-15);
    EXPECT_NEAR(z3.as_double(), 0.280063038963974, 1e-12);

    const auto u1 = predicted_probability(ModuleType(), {zp(2)}, 1, 1e-15);
    EXPECT_NEAR(u1.as_double(), 0.577576190173204843, 1e-12);

    const auto g5 = factor_rational_prime(ZI, 5);
    EXPECT_NEAR(predicted_probability(ModuleType(), {g5[0]}, 0, 1e-15).as_double(), 0.760332795871232, 1e-12);

    EXPECT_THROW(predicted_probability(ModuleType::parse(ZZ, "3:(1)"), {zp(2)}, 0), ParameterError);
    EXPECT_THROW(predicted_probability(ModuleType(), {zp(2)}, -1), ParameterError);
    EXPECT_THROW(predicted_probability(ModuleType(), {zp(2)}, 0, 0.0), ParameterError);
}

TEST(Theory, TruncationBoundIsHonest) {
    for (Word q : {2, 3, 4, 5, 9}) {
        for (int u : {0, 1, 3}) {
            for (double tol : {1e-3, 1e-6, 1e-9, 1e-15}) {
                const auto e = euler_product(q, u, tol);
                EXPECT_LT(e.truncation_bound, Decimal(tol));
                const long double exact = naive_product(q, u);
                EXPECT_LE(std::fabs(static_cast<long double>(e.as_double()) - exact),
                          e.truncation_bound.convert_to<long double>() + 1e-15L);
            }
        }
    }
}

TEST(Theory, TrivialModuleIsTheProduct) {
    for (int u : {0, 1, 2, 5}) {
        const auto v = predicted_probability(ModuleType(), {zp(3), zp(5)}, u, 1e-15);
        EXPECT_NEAR(v.as_double(), static_cast<double>(naive_product(3, u) * naive_product(5, u)), 1e-12);
    }
}

TEST(Theory, Moments) {
    EXPECT_EQ(predicted_moment(ModuleType(), 3), Rational(1));
    EXPECT_EQ(predicted_moment(ModuleType::parse(ZZ, "2:(1)"), 1), Rational(1, 2));
    EXPECT_EQ(predicted_moment(ModuleType::parse(ZZ, "3:(2,1)"), 2), Rational(1, 729));
    EXPECT_EQ(predicted_moment(ModuleType::parse(ZZ, "3:(2,1)"), 0), Rational(1));
}

TEST(Theory, FactorizesAcrossPrimes) {
    const auto p2 = zp(2), p3 = zp(3);
    for (int u : {0, 1, 2}) {
        for (const auto& a : enumerate_partitions(2, 2)) {
            for (const auto& b : enumerate_partitions(2, 2)) {
                ModuleType n, n2, n3;
                n.set(p2, a);
                n.set(p3, b);
                n2.set(p2, a);
                n3.set(p3, b);
                const double joint = predicted_probability(n, {p2, p3}, u, 1e-14).as_double();
                const double prod =
                    predicted_probability(n2, {p2}, u, 1e-14).as_double() * predicted_probability(n3, {p3}, u, 1e-14).as_double();
                EXPECT_NEAR(joint, prod, 1e-13);
            }
        }
    }
}

TEST(Theory, IncreasesWithUAtTrivialModule) {
    for (Word p : {2, 3, 7}) {
        double prev = 0;
        for (int u = 0; u <= 12; ++u) {
            const double v = predicted_probability(ModuleType(), {zp(p)}, u, 1e-15).as_double();
            EXPECT_GT(v, prev);
            EXPECT_LT(v, 1.0);
            prev = v;
        }
    }
}

// Over Z at u = 0: prod_k (1 - p^-k) / |Aut B|, with |Aut B| counted by brute force.
TEST(Theory, MatchesClassicalConstant) {
    for (Word p : {2, 3, 5}) {
        for (const auto& lambda : enumerate_partitions(3, 3)) {
            BigInt size = 1;
            for (int i = 0; i < lambda.weight(); ++i) size *= p;
            if (size > 256) continue;
            const auto aut = oracle::brute_force_count(lambda, {}, p, oracle::CountMode::aut);
            ModuleType b;
            b.set(zp(p), lambda);
            const double expect = static_cast<double>(naive_product(p, 0)) / aut.convert_to<double>();
            EXPECT_NEAR(predicted_probability(b, {zp(p)}, 0, 1e-15).as_double(), expect, 1e-12) << lambda.to_string();
        }
    }
}

TEST(Theory, PartialSumMatchesEnumeration) {
    const auto g5 = factor_rational_prime(ZI, 5);
    const std::vector<std::vector<PrimeIdealDesc>> sets = {{zp(2)}, {zp(3)}, {zp(2), zp(3)}, {g5[0], g5[1]}};
    for (const auto& primes : sets) {
        for (int u : {0, 1}) {
            for (int e = 0; e <= 3; ++e) {
                for (int l = 0; l <= 3; ++l) {
                    Decimal direct = 0;
                    for (const auto& t : enumerate_types(primes, e, l)) direct += predicted_probability(t, primes, u, 1e-15).value;
                    const auto dp = partial_sum(primes, u, e, l, 1e-15);
                    EXPECT_NEAR(dp.as_double(), direct.convert_to<double>(), 1e-12);
                }
            }
        }
    }
}

TEST(Theory, PartialSumExamplesAndMonotonicity) {
    EXPECT_NEAR(partial_sum({zp(2)}, 0, 1, 1).as_double(), 0.577576190173204843, 1e-9);
    EXPECT_NEAR(partial_sum({zp(2)}, 0, 0, 0).as_double(), 0.288788095086602421, 1e-9);
    const auto big = partial_sum({zp(2)}, 0, 20, 20);
    EXPECT_GT(big.value, Decimal(0.999));
    EXPECT_LT(big.value, 1 + big.truncation_bound);
    for (int e = 0; e <= 8; ++e) {
        for (int l = 0; l <= 8; ++l) {
            const auto here = partial_sum({zp(2)}, 0, e, l);
            EXPECT_LE(here.value, partial_sum({zp(2)}, 0, e + 1, l).value);
            EXPECT_LE(here.value, partial_sum({zp(2)}, 0, e, l + 1).value);
            EXPECT_LT(here.value, 1 + here.truncation_bound);
        }
    }
}
