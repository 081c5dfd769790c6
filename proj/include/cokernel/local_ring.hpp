#pragma once

// Truncated complete local rings R = T_p / p^K.
//
// Three concrete families are supported:
//   * unramified:            Galois rings GR(p^K, f) = (Z/p^K)[x]/(F), F monic,
//                            irreducible mod p (f = 1 gives Z/p^K);
//   * equal_characteristic:  F_q[[t]]/(t^K) with F_q = F_p[y]/(g);
//   * ramified_gaussian:     Z[i]/(1+i)^K.
//
// Elements are fixed-width arrays of 64-bit words in canonical form, so
// equality is word equality. The raw span interface is what the Smith form
// kernel uses; LocalElement is the value type for everything else.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cokernel/detail/arith.hpp"

namespace cokernel {

using Word = std::uint64_t;

enum class RingStyle { unramified, equal_characteristic, ramified_gaussian };

std::string to_string(RingStyle style);

class LocalRing;
using LocalRingPtr = std::shared_ptr<const LocalRing>;

/// Largest precision K with q^K <= 2^63 for residue size q = p^f.
int max_precision(Word p, int f);

class LocalRing {
public:
    /// Builds the ring with the default defining modulus: the
    /// lexicographically smallest irreducible monic polynomial of degree f
    /// over F_p (its integer lift in the unramified case).
    static LocalRingPtr make(Word p, int f, int precision, RingStyle style);

    /// Same, with an explicit monic residue modulus of degree f (coefficients in [0, p)).
    static LocalRingPtr make(Word p, int precision, RingStyle style, detail::FpPoly modulus);

    Word p() const { return p_; }
    int degree() const { return f_; }
    int precision() const { return precision_; }
    RingStyle style() const { return style_; }
    Word residue_size() const { return q_; }
    /// Modulus of each stored coefficient: p^K (unramified), p (equal characteristic),
    /// 2^ceil(K/2) (ramified).
    Word coefficient_modulus() const { return coeff_mod_; }
    /// Monic defining polynomial, lowest degree first. Empty for the ramified style.
    const std::vector<Word>& modulus() const { return modulus_; }
    /// Words per element.
    std::size_t width() const { return width_; }
    /// True for F_2[[t]]/t^K, stored as one bitmask word.
    bool packed_binary() const { return packed_binary_; }
    /// True for Z/p^K: one word, coefficient_modulus() = p^K.
    bool is_residue_ring_of_integers() const { return style_ == RingStyle::unramified && f_ == 1; }

    bool operator==(const LocalRing& other) const;

    using Span = std::span<Word>;
    using CSpan = std::span<const Word>;

    void set_zero(Span out) const;
    void set_one(Span out) const;
    void set_integer(std::int64_t value, Span out) const;
    /// The uniformizer: p, t, or 1+i.
    void set_uniformizer(Span out) const;

    void add(CSpan x, CSpan y, Span out) const;
    void sub(CSpan x, CSpan y, Span out) const;
    void neg(CSpan x, Span out) const;
    /// `out` may alias `x` or `y`.
    void mul(CSpan x, CSpan y, Span out) const;

    bool is_zero(CSpan x) const;
    /// Largest v <= K with x in (pi^v); K for zero.
    int valuation(CSpan x) const;
    /// Throws NonUnitError when valuation(x) > 0.
    void unit_inverse(CSpan x, Span out) const;
    /// Exact division of the canonical representative by pi^v.
    /// Requires valuation(x) >= v; the result is one lift of x / pi^v.
    void divide_by_uniformizer_power(CSpan x, int v, Span out) const;

    /// Validates and canonicalizes raw words (throws ParameterError on bad length).
    void canonicalize(Span x) const;
    bool is_canonical(CSpan x) const;

    std::string describe() const;
    std::string format(CSpan x) const;

private:
    LocalRing() = default;
    void init();

    void mul_unramified(CSpan x, CSpan y, Span out) const;
    void mul_equal_char(CSpan x, CSpan y, Span out) const;
    void mul_ramified(CSpan x, CSpan y, Span out) const;
    void residue_inverse(CSpan x, Span out) const;
    void ramified_reduce(__int128 a, __int128 b, Span out) const;

    // F_q arithmetic on f-word digits (equal characteristic).
    void fq_mul(const Word* x, const Word* y, Word* out) const;

    Word p_ = 0;
    int f_ = 1;
    int precision_ = 1;
    RingStyle style_ = RingStyle::unramified;
    Word q_ = 0;
    Word coeff_mod_ = 0;
    std::vector<Word> modulus_;
    std::size_t width_ = 1;
    bool packed_binary_ = false;
    int ramified_half_ = 0;  // ceil(K/2)
};

/// Convenience mirror of LocalRing::make.
LocalRingPtr make_local_ring(Word p, int f, int precision, RingStyle style);

/// An element of a LocalRing, held by value together with a reference to its ring.
class LocalElement {
public:
    explicit LocalElement(LocalRingPtr ring);
    LocalElement(LocalRingPtr ring, std::vector<Word> words);

    static LocalElement zero(LocalRingPtr ring) { return LocalElement(std::move(ring)); }
    static LocalElement one(LocalRingPtr ring);
    static LocalElement from_integer(LocalRingPtr ring, std::int64_t value);
    static LocalElement uniformizer(LocalRingPtr ring);

    const LocalRing& ring() const { return *ring_; }
    const LocalRingPtr& ring_ptr() const { return ring_; }
    std::span<const Word> words() const { return words_; }
    std::span<Word> mutable_words() { return words_; }

    bool is_zero() const { return ring_->is_zero(words_); }
    std::string to_string() const { return ring_->format(words_); }

    friend bool operator==(const LocalElement& a, const LocalElement& b);

private:
    LocalRingPtr ring_;
    std::vector<Word> words_;
};

LocalElement lr_add(const LocalElement& x, const LocalElement& y);
LocalElement lr_sub(const LocalElement& x, const LocalElement& y);
LocalElement lr_mul(const LocalElement& x, const LocalElement& y);
LocalElement lr_neg(const LocalElement& x);
int valuation(const LocalElement& x);
LocalElement unit_inverse(const LocalElement& x);

inline LocalElement operator+(const LocalElement& x, const LocalElement& y) { return lr_add(x, y); }
inline LocalElement operator-(const LocalElement& x, const LocalElement& y) { return lr_sub(x, y); }
inline LocalElement operator*(const LocalElement& x, const LocalElement& y) { return lr_mul(x, y); }
inline LocalElement operator-(const LocalElement& x) { return lr_neg(x); }

}  // namespace cokernel
