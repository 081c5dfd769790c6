#pragma once

// Row-update kernels for Smith form elimination.
//
// Every kernel has a portable scalar reference in `kernels::scalar` and,
// on x86-64, an AVX2 variant in `kernels::avx2`. The unqualified entry
// points dispatch at runtime to the best variant the CPU supports; tests
// pin the ISA with `set_isa` and check the variants against each other.

#include <cstdint>
#include <span>
#include <string_view>

namespace cokernel::kernels {

using Word = std::uint64_t;

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best ISA supported by this CPU and build.
Isa detected_isa();
/// ISA the dispatching entry points currently use.
Isa active_isa();
/// Overrides the dispatch choice; throws ParameterError if `isa` is unavailable.
void set_isa(Isa isa);
bool isa_available(Isa isa);

/// dst[k] = (dst[k] - c * src[k]) mod m, for residues in [0, m), m >= 2.
void submul_mod(std::span<Word> dst, std::span<const Word> src, Word c, Word m);

/// dst[k] ^= (c * src[k]) in F_2[t]/t^precision, elements packed as bit masks.
void submul_gf2_series(std::span<Word> dst, std::span<const Word> src, Word c, int precision);

namespace scalar {
void submul_mod(std::span<Word> dst, std::span<const Word> src, Word c, Word m);
void submul_gf2_series(std::span<Word> dst, std::span<const Word> src, Word c, int precision);
}  // namespace scalar

#if defined(COKERNEL_HAVE_AVX2)
namespace avx2 {
/// Vectorized for power-of-two m and for m <= 2^26; other moduli use the scalar path.
void submul_mod(std::span<Word> dst, std::span<const Word> src, Word c, Word m);
void submul_gf2_series(std::span<Word> dst, std::span<const Word> src, Word c, int precision);
}  // namespace avx2
#endif

}  // namespace cokernel::kernels
