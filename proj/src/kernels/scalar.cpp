#include <bit>

#include "cokernel/detail/arith.hpp"
#include "cokernel/kernels.hpp"

namespace cokernel::kernels::scalar {

void submul_mod(std::span<Word> dst, std::span<const Word> src, Word c, Word m) {
    const std::size_t n = dst.size();
    if (c == 0) return;
    if ((m & (m - 1)) == 0) {
        const Word mask = m - 1;
        for (std::size_t k = 0; k < n; ++k) dst[k] = (dst[k] - c * src[k]) & mask;
        return;
    }
    for (std::size_t k = 0; k < n; ++k) {
        dst[k] = detail::sub_mod(dst[k], detail::mul_mod(c, src[k], m), m);
    }
}

void submul_gf2_series(std::span<Word> dst, std::span<const Word> src, Word c, int precision) {
    const Word mask = precision >= 64 ? ~Word{0} : (Word{1} << precision) - 1;
    const std::size_t n = dst.size();
    for (std::size_t k = 0; k < n; ++k) {
        Word acc = 0;
        for (Word bits = c; bits != 0; bits &= bits - 1) acc ^= src[k] << std::countr_zero(bits);
        dst[k] ^= acc & mask;
    }
}

}  // namespace cokernel::kernels::scalar
