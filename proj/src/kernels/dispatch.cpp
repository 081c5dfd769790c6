#include <atomic>

#include "cokernel/error.hpp"
#include "cokernel/kernels.hpp"

namespace cokernel::kernels {

namespace {

struct Table {
    Isa isa;
    void (*submul_mod)(std::span<Word>, std::span<const Word>, Word, Word);
    void (*submul_gf2_series)(std::span<Word>, std::span<const Word>, Word, int);
};

constexpr Table kScalar{Isa::scalar, &scalar::submul_mod, &scalar::submul_gf2_series};
#if defined(COKERNEL_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2, &avx2::submul_mod, &avx2::submul_gf2_series};
#endif

bool cpu_has_avx2() {
#if defined(COKERNEL_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* table_for(Isa isa) {
#if defined(COKERNEL_HAVE_AVX2)
    if (isa == Isa::avx2) return &kAvx2;
#endif
    (void)isa;
    return &kScalar;
}

std::atomic<const Table*>& active_table() {
    static std::atomic<const Table*> table{table_for(detected_isa())};
    return table;
}

}  // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

bool isa_available(Isa isa) { return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2()); }

Isa detected_isa() {
    static const Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    return best;
}

Isa active_isa() { return active_table().load(std::memory_order_relaxed)->isa; }

void set_isa(Isa isa) {
    if (!isa_available(isa)) throw ParameterError("requested ISA is not available on this CPU/build");
    active_table().store(table_for(isa), std::memory_order_relaxed);
}

void submul_mod(std::span<Word> dst, std::span<const Word> src, Word c, Word m) {
    active_table().load(std::memory_order_relaxed)->submul_mod(dst, src, c, m);
}

void submul_gf2_series(std::span<Word> dst, std::span<const Word> src, Word c, int precision) {
    active_table().load(std::memory_order_relaxed)->submul_gf2_series(dst, src, c, precision);
}

}  // namespace cokernel::kernels
