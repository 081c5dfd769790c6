#pragma once

// Isomorphism types of finite modules over the supported domains and the
// counting functions (|N|, |Aut|, #Hom, #Sur) the limiting formulas use.
//
// A finitely generated torsion module over a local principal ring with
// residue field of size q is determined by a partition lambda: the module
// is the direct sum of R/pi^{lambda_i}. A module over the global domain is
// one such partition per prime.
//
// Every count has an exact big-integer form (`*_exact`) and a 64-bit form
// that throws RangeError when the value does not fit.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cokernel/dedekind.hpp"

namespace cokernel {

using BigInt = boost::multiprecision::cpp_int;

class Partition {
public:
    Partition() = default;
    /// Throws ParameterError unless `parts` is weakly decreasing with parts >= 1.
    explicit Partition(std::vector<int> parts);
    /// Sorts `parts` into weakly decreasing order and drops zeros.
    static Partition from_unsorted(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    /// Number of parts, the minimal number of generators.
    int length() const { return static_cast<int>(parts_.size()); }
    /// Sum of the parts (log_q of the module size).
    int weight() const;
    int largest() const { return parts_.empty() ? 0 : parts_.front(); }
    /// Conjugate partition: entry j-1 is #{i : lambda_i >= j}.
    std::vector<int> conjugate() const;

    /// "(2,1)"; the empty partition prints as "()".
    std::string to_string() const;
    static Partition parse(std::string_view text);

    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
};

class ModuleType {
public:
    using Component = std::pair<PrimeIdealDesc, Partition>;

    ModuleType() = default;

    /// Sets the partition at `prime`; an empty partition removes the prime.
    void set(const PrimeIdealDesc& prime, const Partition& partition);
    /// The partition at `prime` (empty when absent).
    Partition at(const PrimeIdealDesc& prime) const;
    /// Components sorted by prime.
    const std::vector<Component>& components() const { return components_; }
    bool is_trivial() const { return components_.empty(); }

    /// Canonical string "3:(2,1)|5:(1)"; the trivial type is "∅".
    std::string to_string() const;
    static ModuleType parse(const DomainId& domain, std::string_view text);

    friend bool operator==(const ModuleType& a, const ModuleType& b) { return a.components_ == b.components_; }

private:
    std::vector<Component> components_;
};

inline constexpr std::string_view kTrivialTypeString = "∅";

BigInt module_size_exact(const ModuleType& n);
std::uint64_t module_size(const ModuleType& n);

/// |Aut(R/pi^lambda_1 + ... )| over a local principal ring with residue size q,
/// by the Hillar-Rhea product formula.
BigInt count_aut_local_exact(const Partition& lambda, Word q);
std::uint64_t count_aut_local(const Partition& lambda, Word q);

/// q^{sum_{i,j} min(lambda_i, mu_j)}.
BigInt count_hom_local_exact(const Partition& lambda, const Partition& mu, Word q);
std::uint64_t count_hom_local(const Partition& lambda, const Partition& mu, Word q);

/// Surjections from type lambda onto type mu; see module_types.cpp for the method.
BigInt count_sur_local_exact(const Partition& lambda, const Partition& mu, Word q);
std::uint64_t count_sur_local(const Partition& lambda, const Partition& mu, Word q);

BigInt count_aut_exact(const ModuleType& n);
BigInt count_hom_exact(const ModuleType& a, const ModuleType& b);
BigInt count_sur_exact(const ModuleType& a, const ModuleType& b);
std::uint64_t count_aut(const ModuleType& n);
std::uint64_t count_hom(const ModuleType& a, const ModuleType& b);
std::uint64_t count_sur(const ModuleType& a, const ModuleType& b);

/// Partitions with largest part <= cap_exponent and at most cap_parts parts,
/// ordered by weight, then lexicographically decreasing.
std::vector<Partition> enumerate_partitions(int cap_exponent, int cap_parts);

/// The product over `primes` of enumerate_partitions, first prime outermost.
std::vector<ModuleType> enumerate_types(const std::vector<PrimeIdealDesc>& primes, int cap_exponent, int cap_parts);

}  // namespace cokernel
