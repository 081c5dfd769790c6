// Compiled with -mavx2 -mfma; only called after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "cokernel/kernels.hpp"

namespace cokernel::kernels::avx2 {

namespace {

constexpr Word kSmallModulusLimit = Word{1} << 26;

// Low 64 bits of a * b per lane, b broadcast (b_lo, b_hi hold its 32-bit halves).
inline __m256i mullo_epi64(__m256i a, __m256i b_lo, __m256i b_hi) {
    const __m256i a_hi = _mm256_srli_epi64(a, 32);
    const __m256i lo = _mm256_mul_epu32(a, b_lo);
    const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b_lo), _mm256_mul_epu32(a, b_hi));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

// Exact conversions for integers in [0, 2^52).
inline __m256d u64_to_pd(__m256i x) {
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(x, magic)), _mm256_castsi256_pd(magic));
}

inline __m256i pd_to_u64(__m256d x) {
    const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
    return _mm256_xor_si256(_mm256_castpd_si256(_mm256_add_pd(x, magic)), _mm256_castpd_si256(magic));
}

void submul_pow2(std::span<Word> dst, std::span<const Word> src, Word c, Word m) {
    const std::size_t n = dst.size();
    const Word mask = m - 1;
    const __m256i vmask = _mm256_set1_epi64x(static_cast<long long>(mask));
    const __m256i c_lo = _mm256_set1_epi64x(static_cast<long long>(c & 0xffffffffu));
    const __m256i c_hi = _mm256_set1_epi64x(static_cast<long long>(c >> 32));
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + k));
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + k));
        const __m256i r = _mm256_and_si256(_mm256_sub_epi64(d, mullo_epi64(s, c_lo, c_hi)), vmask);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + k), r);
    }
    for (; k < n; ++k) dst[k] = (dst[k] - c * src[k]) & mask;
}

void submul_small(std::span<Word> dst, std::span<const Word> src, Word c, Word m) {
    const std::size_t n = dst.size();
    const double md = static_cast<double>(m);
    const __m256d vm = _mm256_set1_pd(md);
    const __m256d vinv = _mm256_set1_pd(1.0 / md);
    const __m256d vc = _mm256_set1_pd(static_cast<double>(c));
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d s = u64_to_pd(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + k)));
        const __m256d d = u64_to_pd(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + k)));
        // prod < 2^52 is exact; r = prod - floor(prod/m) m is exact up to one correction each way.
        const __m256d prod = _mm256_mul_pd(s, vc);
        const __m256d quot = _mm256_floor_pd(_mm256_mul_pd(prod, vinv));
        __m256d r = _mm256_fnmadd_pd(quot, vm, prod);
        r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), vm));
        r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, vm, _CMP_GE_OQ), vm));
        __m256d out = _mm256_sub_pd(d, r);
        out = _mm256_add_pd(out, _mm256_and_pd(_mm256_cmp_pd(out, zero, _CMP_LT_OQ), vm));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + k), pd_to_u64(out));
    }
    if (k < n) scalar::submul_mod(dst.subspan(k), src.subspan(k), c, m);
}

}  // namespace

void submul_mod(std::span<Word> dst, std::span<const Word> src, Word c, Word m) {
    if (c == 0) return;
    if ((m & (m - 1)) == 0) {
        submul_pow2(dst, src, c, m);
    } else if (m <= kSmallModulusLimit) {
        submul_small(dst, src, c, m);
    } else {
        scalar::submul_mod(dst, src, c, m);
    }
}

void submul_gf2_series(std::span<Word> dst, std::span<const Word> src, Word c, int precision) {
    const Word mask = precision >= 64 ? ~Word{0} : (Word{1} << precision) - 1;
    const __m256i vmask = _mm256_set1_epi64x(static_cast<long long>(mask));
    const std::size_t n = dst.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + k));
        __m256i acc = _mm256_setzero_si256();
        for (Word bits = c; bits != 0; bits &= bits - 1) {
            const __m128i shift = _mm_cvtsi32_si128(std::countr_zero(bits));
            acc = _mm256_xor_si256(acc, _mm256_sll_epi64(s, shift));
        }
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + k));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + k),
                            _mm256_xor_si256(d, _mm256_and_si256(acc, vmask)));
    }
    if (k < n) scalar::submul_gf2_series(dst.subspan(k), src.subspan(k), c, precision);
}

}  // namespace cokernel::kernels::avx2
