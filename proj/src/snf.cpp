#include "cokernel/snf.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include <fmt/format.h>

#include "cokernel/kernels.hpp"

namespace cokernel {

LocalMatrix::LocalMatrix(LocalRingPtr ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), width_(ring_ ? ring_->width() : 0) {
    if (!ring_) throw UsageError("local matrix needs a ring");
    if (rows < 1 || cols < rows) throw ParameterError(fmt::format("invalid local matrix shape {}x{}", rows, cols));
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * width_, 0);
}

std::span<Word> LocalMatrix::at(int r, int c) {
    return {data_.data() + (static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)) * width_,
            width_};
}

std::span<const Word> LocalMatrix::at(int r, int c) const {
    return {data_.data() + (static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)) * width_,
            width_};
}

std::span<Word> LocalMatrix::row(int r) {
    return {data_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) * width_,
            static_cast<std::size_t>(cols_) * width_};
}

void LocalMatrix::set(int r, int c, const LocalElement& x) {
    if (!(x.ring() == *ring_)) throw UsageError("element belongs to a different ring");
    std::copy(x.words().begin(), x.words().end(), at(r, c).begin());
}

LocalElement LocalMatrix::get(int r, int c) const {
    const auto w = at(r, c);
    return LocalElement(ring_, std::vector<Word>(w.begin(), w.end()));
}

namespace {

// Element operations for the elimination loop. Each provides
//   valuation(x), prepare(pivot, v), factor(entry, out), update(dst, src, count).

// Z/p^K: one word per element.
struct IntegerOps {
    explicit IntegerOps(const LocalRing& ring)
        : m(ring.coefficient_modulus()), p(ring.p()), K(ring.precision()), pow2(std::has_single_bit(ring.p())) {}

    Word m, p;
    int K;
    bool pow2;
    Word pv = 1;
    Word inv = 1;

    int valuation(const Word* x) const {
        Word a = *x;
        if (a == 0) return K;
        if (pow2) return std::countr_zero(a);
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }
    void prepare(const Word* pivot, int v) {
        pv = 1;
        for (int i = 0; i < v; ++i) pv *= p;
        inv = *detail::inverse_mod(*pivot / pv, m);
    }
    void factor(const Word* entry, Word* out) const { *out = detail::mul_mod(*entry / pv, inv, m); }
    void update(Word* dst, const Word* src, std::size_t count, const Word* f) const {
        kernels::submul_mod({dst, count}, {src, count}, *f, m);
    }
};

// F_2[[t]]/t^K packed as bit masks.
struct BinarySeriesOps {
    explicit BinarySeriesOps(const LocalRing& r) : ring(r), K(r.precision()) {}

    const LocalRing& ring;
    int K;
    int shift = 0;
    Word inv = 1;

    int valuation(const Word* x) const { return *x == 0 ? K : std::countr_zero(*x); }
    void prepare(const Word* pivot, int v) {
        shift = v;
        const Word unit = *pivot >> v;
        ring.unit_inverse(std::span<const Word>(&unit, 1), std::span<Word>(&inv, 1));
    }
    void factor(const Word* entry, Word* out) const {
        const Word e = *entry >> shift;
        ring.mul(std::span<const Word>(&e, 1), std::span<const Word>(&inv, 1), std::span<Word>(out, 1));
    }
    void update(Word* dst, const Word* src, std::size_t count, const Word* f) const {
        kernels::submul_gf2_series({dst, count}, {src, count}, *f, K);
    }
};

// Any ring, through the span interface.
struct GenericOps {
    explicit GenericOps(const LocalRing& r) : ring(r), w(r.width()), inv(w), tmp(w), prod(w) {}

    const LocalRing& ring;
    std::size_t w;
    int shift = 0;
    std::vector<Word> inv, tmp, prod;

    int valuation(const Word* x) const { return ring.valuation({x, w}); }
    void prepare(const Word* pivot, int v) {
        shift = v;
        ring.divide_by_uniformizer_power({pivot, w}, v, tmp);
        ring.unit_inverse(tmp, inv);
    }
    void factor(const Word* entry, Word* out) {
        ring.divide_by_uniformizer_power({entry, w}, shift, tmp);
        ring.mul(tmp, inv, {out, w});
    }
    void update(Word* dst, const Word* src, std::size_t count, const Word* f) {
        for (std::size_t k = 0; k < count; ++k) {
            ring.mul({f, w}, {src + k * w, w}, prod);
            ring.sub({dst + k * w, w}, prod, {dst + k * w, w});
        }
    }
};

template <class Ops>
SnfResult eliminate(Ops& ops, int rows, int cols, std::size_t w, int K, Word* data) {
    const auto stride = static_cast<std::size_t>(cols) * w;
    auto cell = [&](int r, int c) { return data + static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(c) * w; };

    SnfResult result;
    result.precision = K;
    std::vector<Word> f(w);
    for (int step = 0; step < rows; ++step) {
        int best = K + 1, br = -1, bc = -1;
        for (int r = step; r < rows && best > 0; ++r) {
            for (int c = step; c < cols; ++c) {
                const int v = ops.valuation(cell(r, c));
                if (v < best) {
                    best = v;
                    br = r;
                    bc = c;
                    if (v == 0) break;
                }
            }
        }
        if (best >= K) {
            result.valuations.resize(static_cast<std::size_t>(rows), K);
            break;
        }
        if (br != step) std::swap_ranges(cell(step, step), cell(step, 0) + stride, cell(br, step));
        if (bc != step) {
            for (int r = step; r < rows; ++r) std::swap_ranges(cell(r, step), cell(r, step) + w, cell(r, bc));
        }
        result.valuations.push_back(best);
        ops.prepare(cell(step, step), best);
        const auto tail = static_cast<std::size_t>(cols - step - 1);
        for (int r = step + 1; r < rows; ++r) {
            if (ops.valuation(cell(r, step)) >= K) continue;
            ops.factor(cell(r, step), f.data());
            if (tail > 0) ops.update(cell(r, step + 1), cell(step, step + 1), tail, f.data());
        }
    }
    std::sort(result.valuations.begin(), result.valuations.end());
    result.saturated = !result.valuations.empty() && result.valuations.back() == K;
    return result;
}

Partition to_partition(const SnfResult& r) {
    std::vector<int> parts;
    for (int v : r.valuations) {
        if (v > 0) parts.push_back(v);
    }
    return Partition::from_unsorted(std::move(parts));
}

template <class Run>
Partition escalate(const PrimeIdealDesc& prime, const PrecisionPolicy& policy, Run&& run) {
    SnfResult last;
    for (int K : policy.ladder(prime.p, prime.f)) {
        last = run(K);
        if (!last.saturated) return to_partition(last);
    }
    throw IndeterminateCokernel(prime, std::move(last));
}

}  // namespace

SnfResult local_snf(LocalMatrix m) {
    const LocalRing& ring = m.ring();
    const int rows = m.rows(), cols = m.cols();
    Word* data = m.row(0).data();
    if (ring.is_residue_ring_of_integers()) {
        IntegerOps ops(ring);
        return eliminate(ops, rows, cols, 1, ring.precision(), data);
    }
    if (ring.packed_binary()) {
        BinarySeriesOps ops(ring);
        return eliminate(ops, rows, cols, 1, ring.precision(), data);
    }
    GenericOps ops(ring);
    return eliminate(ops, rows, cols, ring.width(), ring.precision(), data);
}

void PrecisionPolicy::validate() const {
    if (k_init < 1 || k_max < k_init || growth < 2) {
        throw ParameterError(fmt::format("invalid precision policy (k_init={}, k_max={}, growth={})", k_init, k_max, growth));
    }
}

std::vector<int> PrecisionPolicy::ladder(Word p, int f) const {
    validate();
    const int cap = std::min(k_max, max_precision(p, f));
    if (cap < 1) throw PrecisionRangeError("residue field too large for word-size precision");
    std::vector<int> out{std::min(k_init, cap)};
    while (out.back() < cap) {
        const long long next = static_cast<long long>(out.back()) * growth;
        out.push_back(static_cast<int>(std::min<long long>(next, cap)));
    }
    return out;
}

IndeterminateCokernel::IndeterminateCokernel(const PrimeIdealDesc& prime, SnfResult last)
    : Error(fmt::format("cokernel at {} still saturated at precision {}", prime.label(), last.precision)),
      prime_(prime),
      last_(std::move(last)) {}

Partition cokernel_local_type(const Matrix<Element>& m, const PrimeIdealDesc& prime, const PrecisionPolicy& policy) {
    for (const auto& x : m.data()) check_element(prime.domain, x);
    return escalate(prime, policy, [&](int K) {
        const PrimeReduction red(prime, K);
        LocalMatrix lm(red.ring(), m.rows(), m.cols());
        for (int r = 0; r < m.rows(); ++r) {
            for (int c = 0; c < m.cols(); ++c) red.reduce(m(r, c), lm.at(r, c));
        }
        return local_snf(std::move(lm));
    });
}

ModuleType cokernel_type(const Matrix<Element>& m, const std::vector<PrimeIdealDesc>& primes, const PrecisionPolicy& policy) {
    ModuleType t;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (primes[i] == primes[j]) throw ParameterError(fmt::format("prime {} listed twice", primes[i].label()));
        }
        t.set(primes[i], cokernel_local_type(m, primes[i], policy));
    }
    return t;
}

SupportReduction::SupportReduction(const PrimeIdealDesc& prime, std::span<const Element> support, const PrecisionPolicy& policy)
    : prime_(prime), support_size_(support.size()) {
    for (const auto& x : support) check_element(prime.domain, x);
    for (int K : policy.ladder(prime.p, prime.f)) {
        const PrimeReduction red(prime, K);
        Level level{red.ring(), std::vector<Word>(support.size() * red.ring()->width())};
        const std::size_t w = red.ring()->width();
        for (std::size_t i = 0; i < support.size(); ++i) {
            red.reduce(support[i], std::span<Word>(level.images).subspan(i * w, w));
        }
        levels_.push_back(std::move(level));
    }
}

Partition SupportReduction::cokernel_local_type(const Matrix<std::uint32_t>& indices) const {
    for (auto idx : indices.data()) {
        if (idx >= support_size_) throw UsageError("support index out of range");
    }
    SnfResult last;
    for (const auto& level : levels_) {
        const std::size_t w = level.ring->width();
        LocalMatrix lm(level.ring, indices.rows(), indices.cols());
        for (int r = 0; r < indices.rows(); ++r) {
            for (int c = 0; c < indices.cols(); ++c) {
                const Word* src = level.images.data() + indices(r, c) * w;
                std::copy(src, src + w, lm.at(r, c).begin());
            }
        }
        last = local_snf(std::move(lm));
        if (!last.saturated) return to_partition(last);
    }
    throw IndeterminateCokernel(prime_, std::move(last));
}

}  // namespace cokernel
