#include <gtest/gtest.h>

#include <random>

#include "cokernel/dedekind.hpp"
#include "cokernel/error.hpp"

using namespace cokernel;

namespace {

const DomainId ZZ = DomainId::integers();
const DomainId ZI = DomainId::gaussian_integers();

Element gauss(std::int64_t a, std::int64_t b) { return Gaussian{a, b}; }
Element integer(std::int64_t a) { return Integer{a}; }

Element random_element(const DomainId& d, std::mt19937_64& rng) {
    auto small = [&] { return static_cast<std::int64_t>(rng() % 2001) - 1000; };
    switch (d.kind) {
        case DomainKind::integers: return integer(small());
        case DomainKind::gaussian_integers: return gauss(small(), small());
        case DomainKind::polynomials: {
            std::vector<std::int64_t> c(rng() % 7);
            for (auto& x : c) x = static_cast<std::int64_t>(rng() % d.characteristic);
            return make_polynomial(d, c);
        }
    }
    return integer(0);
}

bool small_prime(Word p) {
    for (Word d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return p >= 2;
}

}  // namespace

TEST(Dedekind, ParseAndFormat) {
    EXPECT_EQ(parse_element(ZZ, "-17"), integer(-17));
    EXPECT_EQ(parse_element(ZI, "2+i"), gauss(2, 1));
    EXPECT_EQ(parse_element(ZI, "2-i"), gauss(2, -1));
    EXPECT_EQ(parse_element(ZI, "-3i"), gauss(0, -3));
    EXPECT_EQ(parse_element(ZI, "i"), gauss(0, 1));
    EXPECT_EQ(parse_element(ZI, "1+2i"), gauss(1, 2));
    EXPECT_EQ(format_element(ZI, gauss(2, -1)), "2-i");
    EXPECT_EQ(format_element(ZI, gauss(3, 0)), "3");
    const auto F2 = DomainId::polynomials(2);
    EXPECT_EQ(parse_element(F2, "0,1,1"), make_polynomial(F2, {0, 1, 1}));
    EXPECT_EQ(format_element(F2, make_polynomial(F2, {1, 0, 3})), "1,0,1");
    EXPECT_THROW(parse_element(ZZ, "x"), ConfigError);
    EXPECT_THROW(DomainId::polynomials(4), ParameterError);
}

TEST(Dedekind, FactorRationalPrime) {
    auto z7 = factor_rational_prime(ZZ, 7);
    ASSERT_EQ(z7.size(), 1u);
    EXPECT_EQ(z7[0].q, 7u);
    EXPECT_EQ(z7[0].e, 1);
    EXPECT_EQ(z7[0].f, 1);

    auto g5 = factor_rational_prime(ZI, 5);
    ASSERT_EQ(g5.size(), 2u);
    EXPECT_EQ(g5[0].generator, gauss(2, 1));
    EXPECT_EQ(g5[1].generator, gauss(2, -1));
    EXPECT_EQ(g5[0].q, 5u);
    EXPECT_EQ(g5[0].label(), "2+i");

    auto g3 = factor_rational_prime(ZI, 3);
    ASSERT_EQ(g3.size(), 1u);
    EXPECT_EQ(g3[0].f, 2);
    EXPECT_EQ(g3[0].q, 9u);
    EXPECT_EQ(g3[0].kind, PrimeKind::gaussian_inert);

    auto g2 = factor_rational_prime(ZI, 2);
    ASSERT_EQ(g2.size(), 1u);
    EXPECT_EQ(g2[0].e, 2);
    EXPECT_EQ(g2[0].q, 2u);
    EXPECT_EQ(g2[0].generator, gauss(1, 1));

    EXPECT_THROW(factor_rational_prime(ZZ, 9), ParameterError);

    const auto F2 = DomainId::polynomials(2);
    auto px = factor_rational_prime(F2, Polynomial{{0, 1}});
    ASSERT_EQ(px.size(), 1u);
    EXPECT_EQ(px[0].q, 2u);
    auto pq = factor_rational_prime(F2, Polynomial{{1, 1, 1}});
    EXPECT_EQ(pq[0].q, 4u);
    EXPECT_THROW(factor_rational_prime(F2, Polynomial{{1, 0, 1}}), ParameterError);
}

// Sum of e*f over the primes above p equals the domain degree, and generator norms match.
TEST(Dedekind, NormConsistency) {
    for (Word p = 2; p < 200; ++p) {
        if (!small_prime(p)) continue;
        for (const auto& d : {ZZ, ZI}) {
            int total = 0;
            for (const auto& P : factor_rational_prime(d, p)) {
                total += P.e * P.f;
                Word q = 1;
                for (int i = 0; i < P.f; ++i) q *= p;
                EXPECT_EQ(P.q, q);
                if (d == ZI) {
                    const auto& g = std::get<Gaussian>(P.generator);
                    const auto norm = static_cast<Word>(g.re * g.re + g.im * g.im);
                    EXPECT_EQ(norm, P.kind == PrimeKind::gaussian_inert ? p * p : p);
                }
            }
            EXPECT_EQ(total, d == ZZ ? 1 : 2) << "p=" << p;
        }
    }
}

TEST(Dedekind, HenselRoots) {
    for (Word p = 5; p < 200; ++p) {
        if (!small_prime(p) || p % 4 != 1) continue;
        for (const auto& P : factor_rational_prime(ZI, p)) {
            const auto& g = std::get<Gaussian>(P.generator);
            // a + b r == 0 mod p
            const auto a = static_cast<__int128>(g.re), b = static_cast<__int128>(g.im);
            EXPECT_EQ(((a + b * static_cast<__int128>(P.split_root)) % static_cast<__int128>(p) + p) % p, 0);
            for (int K = 1; K <= 12; ++K) {
                const auto mod = detail::checked_pow(p, static_cast<unsigned>(K), Word{1} << 63);
                if (!mod) {
                    EXPECT_THROW(hensel_lift_root(P.split_root, p, K), PrecisionRangeError);
                    break;
                }
                const Word m = *mod;
                const Word r = hensel_lift_root(P.split_root, p, K);
                EXPECT_EQ((static_cast<unsigned __int128>(r) * r + 1) % m, 0u) << "p=" << p << " K=" << K;
                EXPECT_EQ(r % p, P.split_root);
            }
        }
    }
}

TEST(Dedekind, ReductionExamples) {
    const auto p5 = factor_rational_prime(ZZ, 5)[0];
    const auto seven = reduce_mod_prime_power(integer(7), p5, 3);
    EXPECT_EQ(seven.ring().coefficient_modulus(), 125u);
    EXPECT_EQ(seven.words()[0], 7u);

    const auto g = factor_rational_prime(ZI, 5)[0];
    EXPECT_EQ(reduce_mod_prime_power(gauss(0, 1), g, 1).words()[0], 3u);
    // The generator itself reduces to a non-unit.
    EXPECT_EQ(valuation(reduce_mod_prime_power(gauss(2, 1), g, 4)), 1);
    EXPECT_EQ(valuation(reduce_mod_prime_power(gauss(2, -1), g, 4)), 0);

    const auto F2 = DomainId::polynomials(2);
    const auto px = factor_rational_prime(F2, Polynomial{{0, 1}})[0];
    const auto img = reduce_mod_prime_power(make_polynomial(F2, {0, 1, 1}), px, 3);
    EXPECT_EQ(img.words()[0], 0b110u);

    const auto r2 = factor_rational_prime(ZI, 2)[0];
    EXPECT_EQ(valuation(reduce_mod_prime_power(gauss(1, 1), r2, 6)), 1);
    EXPECT_EQ(valuation(reduce_mod_prime_power(gauss(2, 0), r2, 6)), 2);
    EXPECT_EQ(valuation(reduce_mod_prime_power(gauss(4, 0), r2, 6)), 4);

    EXPECT_THROW(reduce_mod_prime_power(integer(1), p5, 40), PrecisionRangeError);
}

TEST(Dedekind, ReductionIsRingHomomorphism) {
    std::mt19937_64 rng(42);
    std::vector<PrimeIdealDesc> primes;
    for (Word p : {2, 3, 5, 7}) {
        for (const auto& P : factor_rational_prime(ZZ, p)) primes.push_back(P);
        for (const auto& P : factor_rational_prime(ZI, p)) primes.push_back(P);
    }
    for (Word p : {2, 3}) {
        const auto F = DomainId::polynomials(p);
        primes.push_back(factor_rational_prime(F, Polynomial{{0, 1}})[0]);
        primes.push_back(factor_rational_prime(F, Polynomial{{1, 1}})[0]);
    }
    primes.push_back(factor_rational_prime(DomainId::polynomials(2), Polynomial{{1, 1, 1}})[0]);
    primes.push_back(factor_rational_prime(DomainId::polynomials(3), Polynomial{{1, 0, 1}})[0]);
    for (const auto& P : primes) {
        for (int K : {1, 4, 9}) {
            const PrimeReduction red(P, K);
            SCOPED_TRACE(P.label() + " " + red.ring()->describe());
            EXPECT_EQ(red.reduce(elem_one(P.domain)), LocalElement::one(red.ring()));
            EXPECT_EQ(valuation(red.reduce(P.generator)), 1);
            for (int i = 0; i < 10000 / 9; ++i) {
                const auto x = random_element(P.domain, rng), y = random_element(P.domain, rng);
                ASSERT_EQ(red.reduce(elem_add(P.domain, x, y)), red.reduce(x) + red.reduce(y));
                ASSERT_EQ(red.reduce(elem_mul(P.domain, x, y)), red.reduce(x) * red.reduce(y));
            }
        }
    }
}

TEST(Dedekind, ElementaryQuotientIdeals) {
    auto z12 = elementary_quotient_ideals(ZZ, integer(12));
    ASSERT_EQ(z12.size(), 2u);
    EXPECT_EQ(z12[0].p, 2u);
    EXPECT_EQ(z12[0].dim, 1);
    EXPECT_EQ(z12[1].p, 3u);

    auto g5 = elementary_quotient_ideals(ZI, gauss(5, 0));
    ASSERT_EQ(g5.size(), 3u);
    std::vector<std::pair<std::string, int>> got;
    for (const auto& I : g5) {
        EXPECT_EQ(I.p, 5u);
        got.emplace_back(I.label, I.dim);
    }
    EXPECT_NE(std::find(got.begin(), got.end(), std::pair<std::string, int>{"5Z[i]", 2}), got.end());
    EXPECT_NE(std::find(got.begin(), got.end(), std::pair<std::string, int>{"(2+i)", 1}), got.end());
    EXPECT_NE(std::find(got.begin(), got.end(), std::pair<std::string, int>{"(2-i)", 1}), got.end());

    const auto F2 = DomainId::polynomials(2);
    auto fx = elementary_quotient_ideals(F2, make_polynomial(F2, {0, 0, 1}));
    ASSERT_EQ(fx.size(), 2u);
    EXPECT_EQ(fx[0].dim + fx[1].dim, 3);

    EXPECT_THROW(elementary_quotient_ideals(ZZ, integer(0)), ParameterError);
    EXPECT_THROW(elementary_quotient_ideals(ZZ, integer(-1)), ParameterError);
}

TEST(Dedekind, ResidueVectors) {
    auto z12 = elementary_quotient_ideals(ZZ, integer(12));
    EXPECT_EQ(residue_vector(integer(7), z12[1]), (std::vector<Word>{1}));
    for (const auto& I : elementary_quotient_ideals(ZI, gauss(5, 0))) {
        if (I.dim == 2) EXPECT_EQ(residue_vector(gauss(1, 2), I), (std::vector<Word>{1, 2}));
    }
    const auto F2 = DomainId::polynomials(2);
    for (const auto& I : elementary_quotient_ideals(F2, make_polynomial(F2, {0, 0, 1}))) {
        if (I.dim == 2) EXPECT_EQ(residue_vector(make_polynomial(F2, {0, 0, 0, 1}), I), (std::vector<Word>{0, 0}));
    }
}

TEST(Dedekind, ResidueVectorIsAdditiveAndKillsModulus) {
    std::mt19937_64 rng(8);
    const auto F3 = DomainId::polynomials(3);
    const std::vector<std::pair<DomainId, Element>> cases = {
        {ZZ, integer(60)},
        {ZI, gauss(5, 0)},
        {ZI, gauss(10, 0)},
        {ZI, gauss(2, 1)},
        {ZI, gauss(4, 0)},
        {ZI, gauss(3, 0)},
        {F3, make_polynomial(F3, {0, 0, 1, 1})},
    };
    for (const auto& [d, a] : cases) {
        for (const auto& I : elementary_quotient_ideals(d, a)) {
            SCOPED_TRACE(I.label);
            EXPECT_EQ(residue_vector(a, I), std::vector<Word>(static_cast<std::size_t>(I.dim), 0));
            for (int i = 0; i < 500; ++i) {
                const auto x = random_element(d, rng), y = random_element(d, rng);
                auto sum = residue_vector(x, I);
                const auto vy = residue_vector(y, I);
                for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = (sum[k] + vy[k]) % I.p;
                ASSERT_EQ(residue_vector(elem_add(d, x, y), I), sum);
                // a*y lies in I.
                ASSERT_EQ(residue_vector(elem_mul(d, a, y), I), std::vector<Word>(static_cast<std::size_t>(I.dim), 0));
            }
        }
    }
}
