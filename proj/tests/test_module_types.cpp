#include <gtest/gtest.h>

#include "cokernel/error.hpp"
#include "cokernel/module_types.hpp"
#include "oracles.hpp"

using namespace cokernel;
using oracle::CountMode;

namespace {

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

const DomainId ZZ = DomainId::integers();
const DomainId ZI = DomainId::gaussian_integers();

// Partitions of weight w with q^w <= 256.
std::vector<Partition> oracle_range(Word q) {
    int max_weight = 0;
    for (Word s = q; s <= 256; s *= q) ++max_weight;
    std::vector<Partition> out;
    for (const auto& p : enumerate_partitions(max_weight, max_weight)) {
        if (p.weight() <= max_weight) out.push_back(p);
    }
    return out;
}

}  // namespace

TEST(Partition, BasicsAndParsing) {
    EXPECT_THROW(P({1, 2}), ParameterError);
    EXPECT_THROW(P({2, 0}), ParameterError);
    EXPECT_EQ(Partition::from_unsorted({1, 0, 3, 2}), P({3, 2, 1}));
    EXPECT_EQ(P({3, 1, 1}).conjugate(), (std::vector<int>{3, 1, 1}));
    EXPECT_EQ(P({2, 2}).conjugate(), (std::vector<int>{2, 2}));
    EXPECT_EQ(P({2, 1}).to_string(), "(2,1)");
    EXPECT_EQ(Partition().to_string(), "()");
    EXPECT_EQ(Partition::parse("(2, 1)"), P({2, 1}));
    EXPECT_EQ(Partition::parse("()"), Partition());
    EXPECT_THROW(Partition::parse("(1,2)"), ConfigError);
    EXPECT_THROW(Partition::parse("(a)"), ConfigError);
}

TEST(ModuleType, StringsRoundTrip) {
    ModuleType t;
    const auto p3 = factor_rational_prime(ZZ, 3)[0];
    const auto p5 = factor_rational_prime(ZZ, 5)[0];
    t.set(p5, P({1}));
    t.set(p3, P({2, 1}));
    EXPECT_EQ(t.to_string(), "3:(2,1)|5:(1)");
    EXPECT_EQ(ModuleType::parse(ZZ, "3:(2,1)|5:(1)"), t);
    t.set(p5, Partition());
    EXPECT_EQ(t.components().size(), 1u);
    EXPECT_EQ(ModuleType().to_string(), "∅");
    EXPECT_TRUE(ModuleType::parse(ZZ, "∅").is_trivial());

    const auto g = ModuleType::parse(ZI, "2+i:(1)|2-i:(1)");
    EXPECT_EQ(g.components().size(), 2u);
    EXPECT_EQ(ModuleType::parse(ZI, g.to_string()), g);
    EXPECT_THROW(ModuleType::parse(ZZ, "3:(1)|3:(2)"), ConfigError);
    EXPECT_THROW(ModuleType::parse(ZZ, "4:(1)"), ParameterError);
}

TEST(ModuleTypes, DocumentedCounts) {
    EXPECT_EQ(module_size(ModuleType()), 1u);
    EXPECT_EQ(module_size(ModuleType::parse(ZZ, "3:(2,1)")), 27u);
    EXPECT_EQ(module_size(ModuleType::parse(ZI, "2+i:(1)|2-i:(1)")), 25u);

    EXPECT_EQ(count_aut_local(P({1}), 5), 4u);
    EXPECT_EQ(count_aut_local(P({1, 1}), 2), 6u);
    EXPECT_EQ(count_aut_local(P({2, 1}), 2), 8u);

    EXPECT_EQ(count_hom_local(P({2}), P({1}), 3), 3u);
    EXPECT_EQ(count_hom_local(P({1, 1}), P({1}), 2), 4u);
    EXPECT_EQ(count_hom_local(Partition(), P({3, 2}), 7), 1u);

    EXPECT_EQ(count_sur_local(P({1, 1}), P({1}), 2), 3u);
    EXPECT_EQ(count_sur_local(P({1}), P({1, 1}), 2), 0u);
    EXPECT_EQ(count_sur_local(P({1}), P({1, 1}), 7), 0u);
    EXPECT_EQ(count_sur_local(P({2, 1}), P({1, 1}), 3), 48u);

    EXPECT_EQ(count_aut(ModuleType::parse(ZI, "2+i:(1)|2-i:(1)")), 16u);
    EXPECT_EQ(count_hom(ModuleType(), ModuleType::parse(ZZ, "3:(2,1)")), 1u);
    EXPECT_EQ(count_sur(ModuleType::parse(ZZ, "3:(1)"), ModuleType::parse(ZZ, "2:(1)")), 0u);
    EXPECT_EQ(count_sur(ModuleType::parse(ZZ, "3:(1)"), ModuleType()), 1u);

    EXPECT_THROW(count_hom_local(P({8, 8, 8}), P({8, 8, 8}), 2), RangeError);
    EXPECT_EQ(count_hom_local_exact(P({8, 8, 8}), P({8, 8, 8}), 2), BigInt(1) << 72);
}

TEST(ModuleTypes, OracleExamples) {
    EXPECT_EQ(oracle::brute_force_count(P({1}), P({1}), 2, CountMode::hom), 2);
    EXPECT_EQ(oracle::brute_force_count(P({1, 1}), {}, 2, CountMode::aut), 6);
    EXPECT_EQ(oracle::brute_force_count(P({2}), P({2}), 2, CountMode::sur), 2);
    EXPECT_EQ(oracle::brute_force_count(P({2, 1}), P({1, 1}), 3, CountMode::sur), 48);
    EXPECT_EQ(oracle::brute_force_count(P({2, 1}), {}, 2, CountMode::aut), 8);
    EXPECT_THROW(oracle::brute_force_count(P({1, 1, 1, 1, 1, 1, 1, 1}), P({1, 1, 1, 1, 1, 1, 1, 1}), 2, CountMode::sur, 1000),
                 OracleBudgetError);
}

// Formula equals brute force on a sub-range that keeps this test fast; the
// full range runs in the acceptance binary.
TEST(ModuleTypes, FormulasMatchOracleSmall) {
    for (Word q : {2, 3, 4, 5}) {
        auto parts = oracle_range(q);
        for (const auto& l : parts) {
            for (const auto& m : parts) {
                if (l.weight() + m.weight() > 6) continue;
                SCOPED_TRACE("q=" + std::to_string(q) + " " + l.to_string() + " -> " + m.to_string());
                ASSERT_EQ(count_hom_local_exact(l, m, q), oracle::brute_force_count(l, m, q, CountMode::hom));
                ASSERT_EQ(count_sur_local_exact(l, m, q), oracle::brute_force_count(l, m, q, CountMode::sur));
            }
            if (l.weight() <= 4) ASSERT_EQ(count_aut_local_exact(l, q), oracle::brute_force_count(l, {}, q, CountMode::aut));
        }
    }
}

// The residue-span oracle against the submodule-lattice oracle.
TEST(ModuleTypes, OraclesAgree) {
    for (Word q : {2, 3, 4, 5}) {
        auto parts = oracle_range(q);
        for (const auto& l : parts) {
            for (const auto& m : parts) {
                if (l.weight() + m.weight() > 6) continue;
                SCOPED_TRACE("q=" + std::to_string(q) + " " + l.to_string() + " -> " + m.to_string());
                for (auto mode : {CountMode::hom, CountMode::sur}) {
                    ASSERT_EQ(oracle::brute_force_count(l, m, q, mode), oracle::submodule_dp_count(l, m, q, mode));
                }
            }
            if (l.weight() <= 4) {
                ASSERT_EQ(oracle::brute_force_count(l, {}, q, CountMode::aut), oracle::submodule_dp_count(l, {}, q, CountMode::aut));
            }
        }
    }
}

TEST(ModuleTypes, CountIdentities) {
    for (Word q : {2, 3, 4, 5, 7, 9}) {
        const auto parts = enumerate_partitions(4, 4);
        for (const auto& l : parts) {
            EXPECT_EQ(count_sur_local_exact(l, l, q), count_aut_local_exact(l, q));
            BigInt qlen = 1;
            for (int i = 0; i < l.length(); ++i) qlen *= q;
            EXPECT_EQ(count_hom_local_exact(l, P({1}), q), qlen);
            for (const auto& m : parts) {
                const auto hom = count_hom_local_exact(l, m, q);
                EXPECT_EQ(hom, count_hom_local_exact(m, l, q));
                const auto sur = count_sur_local_exact(l, m, q);
                EXPECT_GE(sur, 0);
                EXPECT_LE(sur, hom);
                if (m.length() > l.length()) EXPECT_EQ(sur, 0);
            }
        }
    }
}

TEST(ModuleTypes, Enumeration) {
    EXPECT_EQ(enumerate_partitions(0, 0).size(), 1u);
    EXPECT_EQ(enumerate_partitions(1, 1).size(), 2u);
    const auto six = enumerate_partitions(2, 2);
    ASSERT_EQ(six.size(), 6u);
    const std::vector<Partition> expect = {Partition(), P({1}), P({2}), P({1, 1}), P({2, 1}), P({2, 2})};
    EXPECT_EQ(six, expect);
    // Partitions fitting in a 6x6 box: binom(12, 6).
    EXPECT_EQ(enumerate_partitions(6, 6).size(), 924u);

    const auto p2 = factor_rational_prime(ZZ, 2)[0];
    const auto p3 = factor_rational_prime(ZZ, 3)[0];
    EXPECT_EQ(enumerate_types({p2}, 1, 1).size(), 2u);
    const auto two = enumerate_types({p2, p3}, 1, 1);
    ASSERT_EQ(two.size(), 4u);
    EXPECT_TRUE(two[0].is_trivial());
}
