#pragma once

// Finitely supported entry distributions, their balance audit, and
// reproducible matrix sampling.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cokernel/dedekind.hpp"
#include "cokernel/matrix.hpp"

namespace cokernel {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "0.25", "1/3", "1" or "3e-2"; decimals are rounded to a multiple of 10^-12.
Rational parse_weight(std::string_view text);
/// Same rounding for a binary double.
Rational weight_from_double(double value);
std::string format_rational(const Rational& r);

class EntryDistribution {
public:
    /// Requires distinct support elements of `domain`, positive weights, and
    /// |sum - 1| <= 10^-12; weights are then normalized to sum exactly to 1.
    EntryDistribution(DomainId domain, std::vector<Element> support, std::vector<Rational> weights);

    const DomainId& domain() const { return domain_; }
    const std::vector<Element>& support() const { return support_; }
    const std::vector<Rational>& weights() const { return weights_; }
    std::size_t size() const { return support_.size(); }

    /// Index of the support element selected by a uniform 64-bit word.
    std::uint32_t draw(std::uint64_t uniform) const;

private:
    DomainId domain_;
    std::vector<Element> support_;
    std::vector<Rational> weights_;
    // thresholds_[k] = floor(2^64 * (w_0 + ... + w_k)), last entry omitted.
    std::vector<std::uint64_t> thresholds_;
};

struct DistributionParams {
    std::optional<Rational> q;          ///< bernoulli01: P(entry = 1)
    std::vector<Rational> weights;      ///< gaussian-basis, poly-powers, uniform-support (optional)
    std::vector<Element> support;       ///< uniform-support
    std::optional<int> m;               ///< poly-powers: largest power

    friend bool operator==(const DistributionParams&, const DistributionParams&) = default;
};

/// "bernoulli01", "uniform-support", "gaussian-basis" (on {0, 1, i}) or
/// "poly-powers" (on {1, x, ..., x^m}). Throws ParameterError for other names.
EntryDistribution builtin_distribution(std::string_view name, const DomainId& domain, const DistributionParams& params = {});

struct BalanceEntry {
    ElementaryQuotientIdeal ideal;
    /// Heaviest affine hyperplane {v : <normal, v> = offset} of T/I.
    std::vector<Word> normal;
    Word offset = 0;
    Rational mass;
    Rational epsilon;  ///< 1 - mass
};

struct BalanceReport {
    Element modulus;
    std::vector<BalanceEntry> entries;
    Rational overall;  ///< minimum epsilon over the entries
};

/// Scans every affine hyperplane of T/I for each ideal of elementary_quotient_ideals(domain, modulus).
BalanceReport balance_report(const EntryDistribution& dist, const Element& modulus);

/// The modulus audited for a prime set: the product of the rational primes
/// below the primes (Z, Z[i]) or of their monic generators (F_p[x]).
Element audit_modulus(const DomainId& domain, const std::vector<PrimeIdealDesc>& primes);

/// 64-bit word for entry `index` of trial `trial`; depends on nothing else.
std::uint64_t entry_word(std::uint64_t seed, int n, int u, std::uint64_t trial, std::uint64_t index);

/// n x (n+u) support indices for one trial.
Matrix<std::uint32_t> sample_indices(const EntryDistribution& dist, int n, int u, std::uint64_t seed, std::uint64_t trial = 0);
Matrix<Element> sample_matrix(const EntryDistribution& dist, int n, int u, std::uint64_t seed, std::uint64_t trial = 0);

}  // namespace cokernel
