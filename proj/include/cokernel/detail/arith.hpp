#pragma once

// Word-level modular helpers and dense polynomials over F_p.
// Polynomials are coefficient vectors, lowest degree first, with no
// trailing zeros (the zero polynomial is the empty vector).

#include <cstdint>
#include <optional>
#include <vector>

namespace cokernel::detail {

using Word = std::uint64_t;

inline Word mul_mod(Word a, Word b, Word m) {
    return static_cast<Word>(static_cast<unsigned __int128>(a) * b % m);
}

inline Word add_mod(Word a, Word b, Word m) {
    Word s = a + b;
    return (s >= m || s < a) ? s - m : s;
}

inline Word sub_mod(Word a, Word b, Word m) { return a >= b ? a - b : a + (m - b); }

Word pow_mod(Word base, Word exp, Word m);

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<Word> inverse_mod(Word a, Word m);

/// p^e, or nullopt if it exceeds `limit`.
std::optional<Word> checked_pow(Word p, unsigned e, Word limit = ~Word{0});

bool is_prime(Word n);

/// Reduces a signed value into [0, m).
Word reduce_signed(std::int64_t x, Word m);

using FpPoly = std::vector<Word>;

void trim(FpPoly& f);
int degree(const FpPoly& f);  // -1 for zero
FpPoly poly_add(const FpPoly& a, const FpPoly& b, Word p);
FpPoly poly_sub(const FpPoly& a, const FpPoly& b, Word p);
FpPoly poly_mul(const FpPoly& a, const FpPoly& b, Word p);
/// Quotient and remainder; b must be nonzero.
void poly_divmod(const FpPoly& a, const FpPoly& b, Word p, FpPoly& quot, FpPoly& rem);
FpPoly poly_mod(const FpPoly& a, const FpPoly& b, Word p);
/// Monic gcd.
FpPoly poly_gcd(FpPoly a, FpPoly b, Word p);
FpPoly poly_make_monic(const FpPoly& a, Word p);
bool poly_is_irreducible(const FpPoly& f, Word p);

/// Monic polynomials of degree d in lexicographic order of (c_{d-1}, ..., c_0).
/// `index` ranges over [0, p^d).
FpPoly monic_from_index(Word index, int d, Word p);

/// Smallest irreducible monic polynomial of degree d under that ordering.
FpPoly smallest_irreducible(int d, Word p);

}  // namespace cokernel::detail
