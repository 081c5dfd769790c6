#include "cokernel/local_ring.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include <fmt/format.h>

#include "cokernel/error.hpp"

namespace cokernel {

using detail::add_mod;
using detail::mul_mod;
using detail::sub_mod;

namespace {

constexpr Word kWordLimit = Word{1} << 63;
constexpr std::size_t kMaxWidth = 64;

int ctz_or(Word x, int fallback) { return x == 0 ? fallback : std::countr_zero(x); }

int p_adic_valuation(Word x, Word p, int cap) {
    if (x == 0) return cap;
    if (p == 2) return std::min(cap, std::countr_zero(x));
    int v = 0;
    while (x % p == 0 && v < cap) {
        x /= p;
        ++v;
    }
    return v;
}

}  // namespace

std::string to_string(RingStyle style) {
    switch (style) {
        case RingStyle::unramified: return "unramified";
        case RingStyle::equal_characteristic: return "equal-characteristic";
        case RingStyle::ramified_gaussian: return "ramified";
    }
    return "?";
}

int max_precision(Word p, int f) {
    if (p < 2 || f < 1) return 0;
    int k = 0;
    while (detail::checked_pow(p, static_cast<unsigned>(f) * static_cast<unsigned>(k + 1), kWordLimit)) ++k;
    return k;
}

LocalRingPtr LocalRing::make(Word p, int f, int precision, RingStyle style) {
    if (f < 1) throw ParameterError("residue degree must be >= 1");
    if (!detail::is_prime(p)) throw ParameterError(fmt::format("{} is not prime", p));
    if (f > 62) throw PrecisionRangeError("residue degree exceeds the word-size bound");
    return make(p, precision, style, detail::smallest_irreducible(f, p));
}

LocalRingPtr LocalRing::make(Word p, int precision, RingStyle style, detail::FpPoly modulus) {
    std::shared_ptr<LocalRing> ring(new LocalRing());
    ring->p_ = p;
    ring->f_ = detail::degree(modulus);
    ring->precision_ = precision;
    ring->style_ = style;
    ring->modulus_ = std::move(modulus);
    ring->init();
    return ring;
}

LocalRingPtr make_local_ring(Word p, int f, int precision, RingStyle style) {
    return LocalRing::make(p, f, precision, style);
}

void LocalRing::init() {
    if (!detail::is_prime(p_)) throw ParameterError(fmt::format("{} is not prime", p_));
    if (f_ < 1) throw ParameterError("residue modulus must have degree >= 1");
    if (precision_ < 1) throw ParameterError("precision must be >= 1");
    if (modulus_.back() != 1) throw ParameterError("residue modulus must be monic");
    for (Word c : modulus_) {
        if (c >= p_) throw ParameterError("residue modulus coefficients must lie in [0, p)");
    }
    if (!detail::poly_is_irreducible(modulus_, p_)) {
        throw ParameterError("residue modulus is not irreducible mod p");
    }
    if (style_ == RingStyle::ramified_gaussian && (p_ != 2 || f_ != 1)) {
        throw ParameterError("ramified style is only defined for Z[i] at (1+i): p = 2, f = 1");
    }
    if (precision_ > max_precision(p_, f_)) {
        throw PrecisionRangeError(fmt::format("q^K = {}^({}*{}) exceeds the word-size bound", p_, f_, precision_));
    }
    q_ = *detail::checked_pow(p_, static_cast<unsigned>(f_));
    switch (style_) {
        case RingStyle::unramified:
            coeff_mod_ = *detail::checked_pow(p_, static_cast<unsigned>(precision_));
            width_ = static_cast<std::size_t>(f_);
            break;
        case RingStyle::equal_characteristic:
            coeff_mod_ = p_;
            packed_binary_ = (p_ == 2 && f_ == 1);
            width_ = packed_binary_ ? 1 : static_cast<std::size_t>(f_ * precision_);
            break;
        case RingStyle::ramified_gaussian:
            ramified_half_ = (precision_ + 1) / 2;
            coeff_mod_ = Word{1} << ramified_half_;
            width_ = 2;
            break;
    }
}

bool LocalRing::operator==(const LocalRing& other) const {
    return p_ == other.p_ && f_ == other.f_ && precision_ == other.precision_ && style_ == other.style_ &&
           modulus_ == other.modulus_;
}

void LocalRing::set_zero(Span out) const { std::fill(out.begin(), out.end(), Word{0}); }

void LocalRing::set_one(Span out) const { set_integer(1, out); }

void LocalRing::set_integer(std::int64_t value, Span out) const {
    set_zero(out);
    switch (style_) {
        case RingStyle::unramified: out[0] = detail::reduce_signed(value, coeff_mod_); break;
        case RingStyle::equal_characteristic: out[0] = detail::reduce_signed(value, p_); break;
        case RingStyle::ramified_gaussian: ramified_reduce(value, 0, out); break;
    }
}

void LocalRing::set_uniformizer(Span out) const {
    set_zero(out);
    switch (style_) {
        case RingStyle::unramified: out[0] = p_ % coeff_mod_; break;
        case RingStyle::equal_characteristic:
            if (precision_ > 1) {
                if (packed_binary_) {
                    out[0] = 2;
                } else {
                    out[static_cast<std::size_t>(f_)] = 1;
                }
            }
            break;
        case RingStyle::ramified_gaussian: ramified_reduce(1, 1, out); break;
    }
}

void LocalRing::add(CSpan x, CSpan y, Span out) const {
    switch (style_) {
        case RingStyle::ramified_gaussian:
            ramified_reduce(static_cast<__int128>(x[0]) + y[0], static_cast<__int128>(x[1]) + y[1], out);
            return;
        case RingStyle::equal_characteristic:
            if (packed_binary_) {
                out[0] = x[0] ^ y[0];
                return;
            }
            [[fallthrough]];
        case RingStyle::unramified:
            for (std::size_t i = 0; i < width_; ++i) out[i] = add_mod(x[i], y[i], coeff_mod_);
            return;
    }
}

void LocalRing::sub(CSpan x, CSpan y, Span out) const {
    switch (style_) {
        case RingStyle::ramified_gaussian:
            ramified_reduce(static_cast<__int128>(x[0]) - y[0], static_cast<__int128>(x[1]) - y[1], out);
            return;
        case RingStyle::equal_characteristic:
            if (packed_binary_) {
                out[0] = x[0] ^ y[0];
                return;
            }
            [[fallthrough]];
        case RingStyle::unramified:
            for (std::size_t i = 0; i < width_; ++i) out[i] = sub_mod(x[i], y[i], coeff_mod_);
            return;
    }
}

void LocalRing::neg(CSpan x, Span out) const {
    std::array<Word, kMaxWidth> zero{};
    sub(CSpan(zero.data(), width_), x, out);
}

void LocalRing::mul(CSpan x, CSpan y, Span out) const {
    switch (style_) {
        case RingStyle::unramified: mul_unramified(x, y, out); return;
        case RingStyle::equal_characteristic: mul_equal_char(x, y, out); return;
        case RingStyle::ramified_gaussian: mul_ramified(x, y, out); return;
    }
}

void LocalRing::mul_unramified(CSpan x, CSpan y, Span out) const {
    const Word m = coeff_mod_;
    if (f_ == 1) {
        out[0] = mul_mod(x[0], y[0], m);
        return;
    }
    std::array<Word, 2 * kMaxWidth> prod{};
    const auto f = static_cast<std::size_t>(f_);
    for (std::size_t i = 0; i < f; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < f; ++j) prod[i + j] = add_mod(prod[i + j], mul_mod(x[i], y[j], m), m);
    }
    // Reduce by the monic modulus from the top down.
    for (std::size_t d = 2 * f - 2; d >= f; --d) {
        const Word c = prod[d];
        if (c != 0) {
            for (std::size_t i = 0; i < f; ++i) {
                prod[d - f + i] = sub_mod(prod[d - f + i], mul_mod(c, modulus_[i], m), m);
            }
        }
        prod[d] = 0;
    }
    std::copy_n(prod.begin(), f, out.begin());
}

void LocalRing::fq_mul(const Word* x, const Word* y, Word* out) const {
    const auto f = static_cast<std::size_t>(f_);
    if (f == 1) {
        out[0] = mul_mod(x[0], y[0], p_);
        return;
    }
    std::array<Word, 2 * kMaxWidth> prod{};
    for (std::size_t i = 0; i < f; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < f; ++j) prod[i + j] = add_mod(prod[i + j], mul_mod(x[i], y[j], p_), p_);
    }
    for (std::size_t d = 2 * f - 2; d >= f; --d) {
        const Word c = prod[d];
        if (c != 0) {
            for (std::size_t i = 0; i < f; ++i) {
                prod[d - f + i] = sub_mod(prod[d - f + i], mul_mod(c, modulus_[i], p_), p_);
            }
        }
    }
    std::copy_n(prod.begin(), f, out);
}

void LocalRing::mul_equal_char(CSpan x, CSpan y, Span out) const {
    if (packed_binary_) {
        Word acc = 0;
        Word bits = x[0];
        const Word b = y[0];
        while (bits != 0) {
            const int j = std::countr_zero(bits);
            acc ^= b << j;
            bits &= bits - 1;
        }
        out[0] = precision_ >= 64 ? acc : acc & ((Word{1} << precision_) - 1);
        return;
    }
    const auto f = static_cast<std::size_t>(f_);
    const auto k = static_cast<std::size_t>(precision_);
    std::array<Word, kMaxWidth> acc{};
    std::array<Word, kMaxWidth> term{};
    for (std::size_t i = 0; i < k; ++i) {
        const Word* xi = x.data() + i * f;
        if (std::all_of(xi, xi + f, [](Word w) { return w == 0; })) continue;
        for (std::size_t j = 0; i + j < k; ++j) {
            fq_mul(xi, y.data() + j * f, term.data());
            Word* dst = acc.data() + (i + j) * f;
            for (std::size_t c = 0; c < f; ++c) dst[c] = add_mod(dst[c], term[c], p_);
        }
    }
    std::copy_n(acc.begin(), width_, out.begin());
}

void LocalRing::mul_ramified(CSpan x, CSpan y, Span out) const {
    const __int128 a = x[0], b = x[1], c = y[0], d = y[1];
    ramified_reduce(a * c - b * d, a * d + b * c, out);
}

void LocalRing::ramified_reduce(__int128 a, __int128 b, Span out) const {
    const int c = ramified_half_;
    auto floor_mod = [](__int128 v, __int128 m) {
        __int128 r = v % m;
        return r < 0 ? r + m : r;
    };
    const __int128 full = __int128{1} << c;
    if (precision_ % 2 == 0) {
        // (1+i)^(2c) = unit * 2^c
        out[0] = static_cast<Word>(floor_mod(a, full));
        out[1] = static_cast<Word>(floor_mod(b, full));
        return;
    }
    // (1+i)^(2c-1) has Hermite basis {h(1+i), 2h} with h = 2^(c-1).
    const __int128 h = __int128{1} << (c - 1);
    __int128 t = b / h;
    if (b % h != 0 && b < 0) --t;
    b -= t * h;
    a -= t * h;
    out[0] = static_cast<Word>(floor_mod(a, full));
    out[1] = static_cast<Word>(b);
}

bool LocalRing::is_zero(CSpan x) const {
    return std::all_of(x.begin(), x.end(), [](Word w) { return w == 0; });
}

int LocalRing::valuation(CSpan x) const {
    const int k = precision_;
    switch (style_) {
        case RingStyle::unramified: {
            int v = k;
            for (std::size_t i = 0; i < width_; ++i) v = std::min(v, p_adic_valuation(x[i], p_, k));
            return v;
        }
        case RingStyle::equal_characteristic: {
            if (packed_binary_) return std::min(k, ctz_or(x[0], k));
            const auto f = static_cast<std::size_t>(f_);
            for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
                for (std::size_t c = 0; c < f; ++c) {
                    if (x[j * f + c] != 0) return static_cast<int>(j);
                }
            }
            return k;
        }
        case RingStyle::ramified_gaussian: {
            if (x[0] == 0 && x[1] == 0) return k;
            const unsigned __int128 norm =
                static_cast<unsigned __int128>(x[0]) * x[0] + static_cast<unsigned __int128>(x[1]) * x[1];
            const Word lo = static_cast<Word>(norm);
            const int v = lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<Word>(norm >> 64));
            return std::min(k, v);
        }
    }
    return k;
}

void LocalRing::residue_inverse(CSpan x, Span out) const {
    set_zero(out);
    switch (style_) {
        case RingStyle::ramified_gaussian: out[0] = 1; return;
        case RingStyle::unramified:
        case RingStyle::equal_characteristic: {
            const auto f = static_cast<std::size_t>(f_);
            std::array<Word, kMaxWidth> base{};
            for (std::size_t i = 0; i < f; ++i) base[i] = x[i] % p_;
            if (f == 1) {
                const auto inv = detail::inverse_mod(base[0], p_);
                if (!inv) throw NonUnitError("element is not a unit");
                out[0] = *inv;
                return;
            }
            // x^(q-2) in F_q.
            std::array<Word, kMaxWidth> result{};
            result[0] = 1;
            Word e = q_ - 2;
            std::array<Word, kMaxWidth> tmp{};
            while (e > 0) {
                if (e & 1) {
                    fq_mul(result.data(), base.data(), tmp.data());
                    std::copy_n(tmp.begin(), f, result.begin());
                }
                fq_mul(base.data(), base.data(), tmp.data());
                std::copy_n(tmp.begin(), f, base.begin());
                e >>= 1;
            }
            std::copy_n(result.begin(), f, out.begin());
            return;
        }
    }
}

void LocalRing::unit_inverse(CSpan x, Span out) const {
    if (valuation(x) != 0) throw NonUnitError("element is not a unit");
    if (is_residue_ring_of_integers()) {
        out[0] = *detail::inverse_mod(x[0], coeff_mod_);
        return;
    }
    // Newton iteration y <- y (2 - x y); the error 1 - x y squares each step.
    std::array<Word, kMaxWidth> y{};
    std::array<Word, kMaxWidth> xy{};
    std::array<Word, kMaxWidth> two{};
    const Span ys(y.data(), width_);
    const Span xys(xy.data(), width_);
    const Span twos(two.data(), width_);
    residue_inverse(x, ys);
    set_integer(2, twos);
    for (int correct = 1; correct < precision_; correct *= 2) {
        mul(x, ys, xys);
        sub(twos, xys, xys);
        mul(ys, xys, ys);
    }
    std::copy_n(y.begin(), width_, out.begin());
}

void LocalRing::divide_by_uniformizer_power(CSpan x, int v, Span out) const {
    if (v == 0) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    if (valuation(x) < v) throw UsageError("division by a higher power of the uniformizer than divides x");
    switch (style_) {
        case RingStyle::unramified: {
            const Word d = *detail::checked_pow(p_, static_cast<unsigned>(v));
            for (std::size_t i = 0; i < width_; ++i) out[i] = x[i] / d;
            return;
        }
        case RingStyle::equal_characteristic: {
            if (packed_binary_) {
                out[0] = v >= 64 ? 0 : x[0] >> v;
                return;
            }
            const auto shift = static_cast<std::size_t>(v) * static_cast<std::size_t>(f_);
            std::array<Word, kMaxWidth> tmp{};
            for (std::size_t i = shift; i < width_; ++i) tmp[i - shift] = x[i];
            std::copy_n(tmp.begin(), width_, out.begin());
            return;
        }
        case RingStyle::ramified_gaussian: {
            __int128 a = x[0], b = x[1];
            for (int s = 0; s < v; ++s) {
                // (a + bi) / (1 + i) = ((a + b) + (b - a) i) / 2
                const __int128 re = a + b, im = b - a;
                a = re / 2;
                b = im / 2;
            }
            ramified_reduce(a, b, out);
            return;
        }
    }
}

bool LocalRing::is_canonical(CSpan x) const {
    if (x.size() != width_) return false;
    switch (style_) {
        case RingStyle::unramified:
            return std::all_of(x.begin(), x.end(), [&](Word w) { return w < coeff_mod_; });
        case RingStyle::equal_characteristic:
            if (packed_binary_) return precision_ >= 64 || (x[0] >> precision_) == 0;
            return std::all_of(x.begin(), x.end(), [&](Word w) { return w < p_; });
        case RingStyle::ramified_gaussian: {
            const Word bound_b = precision_ % 2 == 0 ? coeff_mod_ : coeff_mod_ / 2;
            return x[0] < coeff_mod_ && x[1] < bound_b;
        }
    }
    return false;
}

void LocalRing::canonicalize(Span x) const {
    if (x.size() != width_) throw ParameterError("element has the wrong number of words");
    switch (style_) {
        case RingStyle::unramified:
            for (auto& w : x) w %= coeff_mod_;
            return;
        case RingStyle::equal_characteristic:
            if (packed_binary_) {
                if (precision_ < 64) x[0] &= (Word{1} << precision_) - 1;
                return;
            }
            for (auto& w : x) w %= p_;
            return;
        case RingStyle::ramified_gaussian: ramified_reduce(x[0], x[1], x); return;
    }
}

std::string LocalRing::describe() const {
    switch (style_) {
        case RingStyle::unramified:
            if (f_ == 1) return fmt::format("Z/{}^{}", p_, precision_);
            return fmt::format("GR({}^{},{})", p_, precision_, f_);
        case RingStyle::equal_characteristic:
            return f_ == 1 ? fmt::format("F_{}[[t]]/t^{}", p_, precision_)
                           : fmt::format("F_{}^{}[[t]]/t^{}", p_, f_, precision_);
        case RingStyle::ramified_gaussian: return fmt::format("Z[i]/(1+i)^{}", precision_);
    }
    return "?";
}

std::string LocalRing::format(CSpan x) const {
    switch (style_) {
        case RingStyle::unramified:
            if (f_ == 1) return fmt::format("{}", x[0]);
            return fmt::format("[{}]", fmt::join(x, ","));
        case RingStyle::equal_characteristic:
            if (packed_binary_) {
                std::vector<int> bits;
                for (int j = 0; j < precision_; ++j) {
                    if ((x[0] >> j) & 1) bits.push_back(j);
                }
                return fmt::format("t^{{{}}}", fmt::join(bits, ","));
            }
            return fmt::format("[{}]", fmt::join(x, ","));
        case RingStyle::ramified_gaussian: return fmt::format("{}+{}i", x[0], x[1]);
    }
    return "?";
}

LocalElement::LocalElement(LocalRingPtr ring) : ring_(std::move(ring)) {
    if (!ring_) throw UsageError("null ring");
    words_.assign(ring_->width(), 0);
}

LocalElement::LocalElement(LocalRingPtr ring, std::vector<Word> words) : ring_(std::move(ring)), words_(std::move(words)) {
    if (!ring_) throw UsageError("null ring");
    ring_->canonicalize(words_);
}

LocalElement LocalElement::one(LocalRingPtr ring) { return from_integer(std::move(ring), 1); }

LocalElement LocalElement::from_integer(LocalRingPtr ring, std::int64_t value) {
    LocalElement e(std::move(ring));
    e.ring_->set_integer(value, e.words_);
    return e;
}

LocalElement LocalElement::uniformizer(LocalRingPtr ring) {
    LocalElement e(std::move(ring));
    e.ring_->set_uniformizer(e.words_);
    return e;
}

bool operator==(const LocalElement& a, const LocalElement& b) {
    return (a.ring_ == b.ring_ || *a.ring_ == *b.ring_) && a.words_ == b.words_;
}

namespace {

const LocalRingPtr& common_ring(const LocalElement& x, const LocalElement& y) {
    if (x.ring_ptr() != y.ring_ptr() && !(x.ring() == y.ring())) {
        throw UsageError(fmt::format("ring mismatch: {} vs {}", x.ring().describe(), y.ring().describe()));
    }
    return x.ring_ptr();
}

}  // namespace

LocalElement lr_add(const LocalElement& x, const LocalElement& y) {
    LocalElement r(common_ring(x, y));
    r.ring().add(x.words(), y.words(), r.mutable_words());
    return r;
}

LocalElement lr_sub(const LocalElement& x, const LocalElement& y) {
    LocalElement r(common_ring(x, y));
    r.ring().sub(x.words(), y.words(), r.mutable_words());
    return r;
}

LocalElement lr_mul(const LocalElement& x, const LocalElement& y) {
    LocalElement r(common_ring(x, y));
    r.ring().mul(x.words(), y.words(), r.mutable_words());
    return r;
}

LocalElement lr_neg(const LocalElement& x) {
    LocalElement r(x.ring_ptr());
    r.ring().neg(x.words(), r.mutable_words());
    return r;
}

int valuation(const LocalElement& x) { return x.ring().valuation(x.words()); }

LocalElement unit_inverse(const LocalElement& x) {
    LocalElement r(x.ring_ptr());
    r.ring().unit_inverse(x.words(), r.mutable_words());
    return r;
}

}  // namespace cokernel
