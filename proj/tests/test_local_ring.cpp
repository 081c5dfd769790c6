#include <gtest/gtest.h>

#include <random>

#include "cokernel/error.hpp"
#include "cokernel/local_ring.hpp"

using namespace cokernel;

namespace {

struct RingCase {
    Word p;
    int f;
    int K;
    RingStyle style;
};

std::vector<RingCase> ring_cases() {
    return {
        {3, 1, 5, RingStyle::unramified},          {2, 1, 6, RingStyle::unramified},
        {5, 1, 3, RingStyle::unramified},          {2, 2, 4, RingStyle::unramified},
        {3, 2, 3, RingStyle::unramified},          {2, 3, 2, RingStyle::unramified},
        {2, 1, 5, RingStyle::equal_characteristic}, {2, 1, 63, RingStyle::equal_characteristic},
        {3, 1, 4, RingStyle::equal_characteristic}, {2, 2, 3, RingStyle::equal_characteristic},
        {5, 2, 2, RingStyle::equal_characteristic}, {2, 1, 5, RingStyle::ramified_gaussian},
        {2, 1, 6, RingStyle::ramified_gaussian},    {2, 1, 1, RingStyle::ramified_gaussian},
        {2, 1, 63, RingStyle::ramified_gaussian},   {2, 1, 40, RingStyle::unramified},
    };
}

LocalElement random_element(const LocalRingPtr& R, std::mt19937_64& rng) {
    std::vector<Word> w(R->width());
    for (auto& x : w) x = rng();
    return LocalElement(R, std::move(w));
}

LocalElement el(const LocalRingPtr& R, std::int64_t v) { return LocalElement::from_integer(R, v); }

}  // namespace

TEST(LocalRing, Construction) {
    auto z243 = make_local_ring(3, 1, 5, RingStyle::unramified);
    EXPECT_EQ(z243->coefficient_modulus(), 243u);
    EXPECT_EQ(z243->describe(), "Z/3^5");
    EXPECT_TRUE(z243->is_residue_ring_of_integers());

    auto f4 = make_local_ring(2, 2, 1, RingStyle::unramified);
    EXPECT_EQ(f4->residue_size(), 4u);
    EXPECT_EQ(f4->modulus(), (std::vector<Word>{1, 1, 1}));

    auto series = make_local_ring(2, 1, 3, RingStyle::equal_characteristic);
    EXPECT_TRUE(series->packed_binary());
    EXPECT_EQ(series->describe(), "F_2[[t]]/t^3");

    EXPECT_THROW(make_local_ring(4, 1, 2, RingStyle::unramified), ParameterError);
    EXPECT_THROW(make_local_ring(3, 1, 0, RingStyle::unramified), ParameterError);
    EXPECT_THROW(make_local_ring(3, 1, 2, RingStyle::ramified_gaussian), ParameterError);
    EXPECT_THROW(make_local_ring(3, 1, 40, RingStyle::unramified), PrecisionRangeError);
    EXPECT_EQ(max_precision(2, 1), 63);
    EXPECT_EQ(max_precision(3, 1), 39);
}

TEST(LocalRing, DocumentedExamples) {
    auto z243 = make_local_ring(3, 1, 5, RingStyle::unramified);
    EXPECT_TRUE((el(z243, 80) + el(z243, 163)).is_zero());
    EXPECT_EQ(valuation(el(z243, 12)), 1);
    EXPECT_EQ(valuation(LocalElement::zero(z243)), 5);

    auto z8 = make_local_ring(2, 1, 3, RingStyle::unramified);
    EXPECT_EQ(el(z8, 3) * el(z8, 3), el(z8, 1));
    EXPECT_EQ(unit_inverse(el(z8, 3)), el(z8, 3));

    auto z81 = make_local_ring(3, 1, 4, RingStyle::unramified);
    EXPECT_EQ(unit_inverse(el(z81, 7)), el(z81, 58));
    EXPECT_THROW(unit_inverse(el(z81, 6)), NonUnitError);

    auto f4 = make_local_ring(2, 2, 1, RingStyle::unramified);
    const LocalElement x(f4, {0, 1});
    EXPECT_EQ(x * x, LocalElement(f4, {1, 1}));
    EXPECT_EQ(unit_inverse(x), LocalElement(f4, {1, 1}));

    auto gr = make_local_ring(2, 2, 4, RingStyle::unramified);
    EXPECT_EQ(valuation(el(gr, 2)), 1);

    auto other = make_local_ring(3, 1, 4, RingStyle::unramified);
    EXPECT_THROW(el(z243, 1) + el(other, 1), UsageError);
}

TEST(LocalRing, RingAxioms) {
    std::mt19937_64 rng(20240601);
    for (const auto& c : ring_cases()) {
        auto R = LocalRing::make(c.p, c.f, c.K, c.style);
        SCOPED_TRACE(R->describe());
        const auto one = LocalElement::one(R);
        for (int i = 0; i < 10000; ++i) {
            const auto a = random_element(R, rng), b = random_element(R, rng), d = random_element(R, rng);
            ASSERT_EQ((a * b) * d, a * (b * d));
            ASSERT_EQ(a * b, b * a);
            ASSERT_EQ(a * (b + d), a * b + a * d);
            ASSERT_EQ((a + b) - b, a);
            ASSERT_EQ(a + (-a), LocalElement::zero(R));
            ASSERT_EQ(a * one, a);
        }
    }
}

TEST(LocalRing, ValuationIsAdditive) {
    std::mt19937_64 rng(7);
    for (const auto& c : ring_cases()) {
        auto R = LocalRing::make(c.p, c.f, c.K, c.style);
        SCOPED_TRACE(R->describe());
        const auto pi = LocalElement::uniformizer(R);
        for (int i = 0; i < 2000; ++i) {
            auto a = random_element(R, rng), b = random_element(R, rng);
            // Bias toward non-units.
            for (int k = static_cast<int>(rng() % 4); k > 0; --k) a = a * pi;
            for (int k = static_cast<int>(rng() % 4); k > 0; --k) b = b * pi;
            ASSERT_EQ(valuation(a * b), std::min(valuation(a) + valuation(b), c.K));
        }
    }
}

TEST(LocalRing, UniformizerNilpotencyIndex) {
    for (const auto& c : ring_cases()) {
        auto R = LocalRing::make(c.p, c.f, c.K, c.style);
        SCOPED_TRACE(R->describe());
        auto x = LocalElement::one(R);
        const auto pi = LocalElement::uniformizer(R);
        for (int k = 0; k < c.K; ++k) {
            ASSERT_FALSE(x.is_zero());
            ASSERT_EQ(valuation(x), k);
            x = x * pi;
        }
        EXPECT_TRUE(x.is_zero());
    }
}

TEST(LocalRing, UnitInverse) {
    std::mt19937_64 rng(99);
    for (const auto& c : ring_cases()) {
        auto R = LocalRing::make(c.p, c.f, c.K, c.style);
        SCOPED_TRACE(R->describe());
        const auto one = LocalElement::one(R);
        int seen = 0;
        for (int i = 0; i < 5000; ++i) {
            const auto a = random_element(R, rng);
            if (valuation(a) != 0) {
                EXPECT_THROW(unit_inverse(a), NonUnitError);
                continue;
            }
            ++seen;
            ASSERT_EQ(a * unit_inverse(a), one);
        }
        EXPECT_GT(seen, 0);
    }
}

TEST(LocalRing, DivideByUniformizerPower) {
    std::mt19937_64 rng(5);
    for (const auto& c : ring_cases()) {
        auto R = LocalRing::make(c.p, c.f, c.K, c.style);
        SCOPED_TRACE(R->describe());
        const auto pi = LocalElement::uniformizer(R);
        for (int i = 0; i < 2000; ++i) {
            auto a = random_element(R, rng);
            const int v = static_cast<int>(rng() % static_cast<Word>(c.K));
            for (int k = 0; k < v; ++k) a = a * pi;
            const int va = valuation(a);
            LocalElement q(R);
            R->divide_by_uniformizer_power(a.words(), va, q.mutable_words());
            auto back = q;
            for (int k = 0; k < va; ++k) back = back * pi;
            ASSERT_EQ(back, a);
            if (!a.is_zero()) ASSERT_EQ(valuation(q), 0);
        }
    }
}

// Exhaustive: the canonical forms number q^K and the units q^K (1 - 1/q).
TEST(LocalRing, ExhaustiveCounts) {
    const std::vector<RingCase> small = {
        {2, 1, 4, RingStyle::unramified},          {3, 1, 3, RingStyle::unramified},
        {2, 2, 3, RingStyle::unramified},          {2, 1, 5, RingStyle::equal_characteristic},
        {3, 1, 3, RingStyle::equal_characteristic}, {2, 2, 2, RingStyle::equal_characteristic},
        {2, 1, 1, RingStyle::ramified_gaussian},    {2, 1, 4, RingStyle::ramified_gaussian},
        {2, 1, 7, RingStyle::ramified_gaussian},    {2, 1, 10, RingStyle::ramified_gaussian},
    };
    for (const auto& c : small) {
        auto R = LocalRing::make(c.p, c.f, c.K, c.style);
        SCOPED_TRACE(R->describe());
        // Every word below this bound covers all canonical representatives.
        const Word bound = c.style == RingStyle::equal_characteristic
                               ? (R->packed_binary() ? (Word{1} << c.K) : c.p)
                               : R->coefficient_modulus();
        const std::size_t w = R->width();
        std::vector<Word> x(w, 0);
        std::uint64_t canonical = 0, units = 0;
        while (true) {
            if (R->is_canonical(x)) {
                ++canonical;
                if (R->valuation(x) == 0) ++units;
            }
            std::size_t i = 0;
            while (i < w && ++x[i] == bound) x[i++] = 0;
            if (i == w) break;
        }
        std::uint64_t qK = 1;
        for (int k = 0; k < c.K; ++k) qK *= R->residue_size();
        EXPECT_EQ(canonical, qK);
        EXPECT_EQ(units, qK - qK / R->residue_size());
    }
}

// Z[i]/(1+i)^K against Gaussian integer arithmetic: x == y iff v_2(N(x - y)) >= K.
TEST(LocalRing, RamifiedAgreesWithGaussianIntegers) {
    std::mt19937_64 rng(11);
    for (int K : {1, 2, 3, 6, 9, 20}) {
        auto R = make_local_ring(2, 1, K, RingStyle::ramified_gaussian);
        auto embed = [&](std::int64_t a, std::int64_t b) {
            std::vector<Word> re(2), im(2), i_unit{0, 1}, out(2);
            R->set_integer(a, re);
            R->set_integer(b, im);
            R->canonicalize(i_unit);
            R->mul(im, i_unit, im);
            R->add(re, im, out);
            return LocalElement(R, out);
        };
        auto congruent = [&](std::int64_t a, std::int64_t b) {
            const __int128 n = static_cast<__int128>(a) * a + static_cast<__int128>(b) * b;
            if (n == 0) return true;
            int v = 0;
            __int128 m = n;
            while (m % 2 == 0) {
                m /= 2;
                ++v;
            }
            return v >= K;
        };
        for (int i = 0; i < 3000; ++i) {
            const std::int64_t a = static_cast<std::int64_t>(rng() % 2001) - 1000;
            const std::int64_t b = static_cast<std::int64_t>(rng() % 2001) - 1000;
            const std::int64_t c = static_cast<std::int64_t>(rng() % 2001) - 1000;
            const std::int64_t d = static_cast<std::int64_t>(rng() % 2001) - 1000;
            const auto x = embed(a, b), y = embed(c, d);
            ASSERT_EQ(x * y, embed(a * c - b * d, a * d + b * c));
            ASSERT_EQ(x + y, embed(a + c, b + d));
            ASSERT_EQ(x == y, congruent(a - c, b - d));
        }
    }
}
