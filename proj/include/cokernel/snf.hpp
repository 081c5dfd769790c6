#pragma once

// Smith normal form over truncated local rings and the cokernel type it
// determines, with precision escalation.

#include <cstdint>
#include <span>
#include <vector>

#include "cokernel/dedekind.hpp"
#include "cokernel/error.hpp"
#include "cokernel/local_ring.hpp"
#include "cokernel/matrix.hpp"
#include "cokernel/module_types.hpp"

namespace cokernel {

/// n x (n+u) matrix over a LocalRing, stored as row-major word blocks.
class LocalMatrix {
public:
    /// Zero matrix; requires 1 <= rows <= cols.
    LocalMatrix(LocalRingPtr ring, int rows, int cols);

    const LocalRingPtr& ring_ptr() const { return ring_; }
    const LocalRing& ring() const { return *ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::span<Word> at(int r, int c);
    std::span<const Word> at(int r, int c) const;
    /// All words of row r (cols * width).
    std::span<Word> row(int r);

    void set(int r, int c, const LocalElement& x);
    LocalElement get(int r, int c) const;

private:
    LocalRingPtr ring_;
    int rows_;
    int cols_;
    std::size_t width_;
    std::vector<Word> data_;
};

struct SnfResult {
    /// Valuations of the Smith diagonal, ascending, each in [0, precision].
    std::vector<int> valuations;
    /// True iff some valuation equals the precision.
    bool saturated = false;
    int precision = 0;

    friend bool operator==(const SnfResult&, const SnfResult&) = default;
};

/// Pivots on a minimal-valuation entry (lowest row, then lowest column).
/// Consumes its argument as the working copy.
SnfResult local_snf(LocalMatrix m);

struct PrecisionPolicy {
    int k_init = 8;
    int k_max = 64;
    int growth = 2;

    /// Throws ParameterError unless 1 <= k_init <= k_max and growth >= 2.
    void validate() const;
    /// The precisions tried for a ring with residue size p^f: k_init, k_init*growth, ...,
    /// clamped to k_max and to the word-size bound.
    std::vector<int> ladder(Word p, int f) const;

    friend bool operator==(const PrecisionPolicy&, const PrecisionPolicy&) = default;
};

class IndeterminateCokernel : public Error {
public:
    IndeterminateCokernel(const PrimeIdealDesc& prime, SnfResult last);
    const PrimeIdealDesc& prime() const { return prime_; }
    const SnfResult& last() const { return last_; }

private:
    PrimeIdealDesc prime_;
    SnfResult last_;
};

/// The prime's partition of cok(M): nonzero Smith valuations, largest first.
/// Throws IndeterminateCokernel if every precision of the ladder saturates.
Partition cokernel_local_type(const Matrix<Element>& m, const PrimeIdealDesc& prime,
                              const PrecisionPolicy& policy = {});

/// Requires distinct primes of the matrix's domain.
ModuleType cokernel_type(const Matrix<Element>& m, const std::vector<PrimeIdealDesc>& primes,
                         const PrecisionPolicy& policy = {});

/// Reductions of a fixed element list at every precision of a policy ladder,
/// for matrices given as indices into that list. Immutable after construction.
class SupportReduction {
public:
    SupportReduction(const PrimeIdealDesc& prime, std::span<const Element> support, const PrecisionPolicy& policy);

    const PrimeIdealDesc& prime() const { return prime_; }
    Partition cokernel_local_type(const Matrix<std::uint32_t>& indices) const;

private:
    struct Level {
        LocalRingPtr ring;
        std::vector<Word> images;  // support.size() * width
    };
    PrimeIdealDesc prime_;
    std::size_t support_size_;
    std::vector<Level> levels_;
};

}  // namespace cokernel
