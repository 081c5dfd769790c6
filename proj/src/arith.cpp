#include "cokernel/detail/arith.hpp"

#include <algorithm>

#include "cokernel/error.hpp"

namespace cokernel::detail {

Word pow_mod(Word base, Word exp, Word m) {
    Word result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::optional<Word> inverse_mod(Word a, Word m) {
    __int128 old_r = a % m, r = m;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        if (m == 1) return Word{0};
        return std::nullopt;
    }
    __int128 mm = m;
    __int128 inv = old_s % mm;
    if (inv < 0) inv += mm;
    return static_cast<Word>(inv);
}

std::optional<Word> checked_pow(Word p, unsigned e, Word limit) {
    Word result = 1;
    for (unsigned i = 0; i < e; ++i) {
        Word next;
        if (__builtin_mul_overflow(result, p, &next) || next > limit) return std::nullopt;
        result = next;
    }
    return result;
}

bool is_prime(Word n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    // Deterministic Miller-Rabin for 64-bit inputs.
    Word d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (Word a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (a % n == 0) continue;
        Word x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Word reduce_signed(std::int64_t x, Word m) {
    __int128 r = static_cast<__int128>(x) % static_cast<__int128>(m);
    if (r < 0) r += m;
    return static_cast<Word>(r);
}

void trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

FpPoly poly_add(const FpPoly& a, const FpPoly& b, Word p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        Word x = i < a.size() ? a[i] : 0;
        Word y = i < b.size() ? b[i] : 0;
        r[i] = add_mod(x, y, p);
    }
    trim(r);
    return r;
}

FpPoly poly_sub(const FpPoly& a, const FpPoly& b, Word p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        Word x = i < a.size() ? a[i] : 0;
        Word y = i < b.size() ? b[i] : 0;
        r[i] = sub_mod(x, y, p);
    }
    trim(r);
    return r;
}

FpPoly poly_mul(const FpPoly& a, const FpPoly& b, Word p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = add_mod(r[i + j], mul_mod(a[i], b[j], p), p);
        }
    }
    trim(r);
    return r;
}

void poly_divmod(const FpPoly& a, const FpPoly& b, Word p, FpPoly& quot, FpPoly& rem) {
    if (b.empty()) throw ParameterError("polynomial division by zero");
    rem = a;
    trim(rem);
    const int db = degree(b);
    const Word lead_inv = *inverse_mod(b.back(), p);
    if (degree(rem) < db) {
        quot.clear();
        return;
    }
    quot.assign(static_cast<std::size_t>(degree(rem) - db + 1), 0);
    while (degree(rem) >= db) {
        const int shift = degree(rem) - db;
        const Word c = mul_mod(rem.back(), lead_inv, p);
        quot[static_cast<std::size_t>(shift)] = c;
        for (int i = 0; i <= db; ++i) {
            auto& slot = rem[static_cast<std::size_t>(i + shift)];
            slot = sub_mod(slot, mul_mod(c, b[static_cast<std::size_t>(i)], p), p);
        }
        trim(rem);
    }
    trim(quot);
}

FpPoly poly_mod(const FpPoly& a, const FpPoly& b, Word p) {
    FpPoly q, r;
    poly_divmod(a, b, p, q, r);
    return r;
}

FpPoly poly_make_monic(const FpPoly& a, Word p) {
    if (a.empty()) return a;
    const Word inv = *inverse_mod(a.back(), p);
    FpPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_mod(a[i], inv, p);
    return r;
}

FpPoly poly_gcd(FpPoly a, FpPoly b, Word p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_make_monic(a, p);
}

FpPoly monic_from_index(Word index, int d, Word p) {
    FpPoly f(static_cast<std::size_t>(d) + 1, 0);
    f[static_cast<std::size_t>(d)] = 1;
    // The most significant base-p digit of `index` is c_{d-1}.
    for (int i = 0; i < d; ++i) {
        f[static_cast<std::size_t>(i)] = index % p;
        index /= p;
    }
    return f;
}

bool poly_is_irreducible(const FpPoly& f, Word p) {
    const int d = degree(f);
    if (d < 1) return false;
    if (d == 1) return true;
    // Irreducible iff gcd(f, x^{p^i} - x) = 1 for all i <= d/2.
    const FpPoly g = poly_make_monic(f, p);
    FpPoly xpow = {0, 1};  // x^{p^i} mod g, starting at i = 0
    auto power_mod = [&](FpPoly base, Word e) {
        FpPoly result = {1};
        base = poly_mod(base, g, p);
        while (e > 0) {
            if (e & 1) result = poly_mod(poly_mul(result, base, p), g, p);
            base = poly_mod(poly_mul(base, base, p), g, p);
            e >>= 1;
        }
        return result;
    };
    for (int i = 1; i <= d / 2; ++i) {
        xpow = power_mod(xpow, p);
        FpPoly diff = poly_sub(xpow, FpPoly{0, 1}, p);
        if (diff.empty()) return false;
        if (degree(poly_gcd(g, diff, p)) > 0) return false;
    }
    return true;
}

FpPoly smallest_irreducible(int d, Word p) {
    const auto count = checked_pow(p, static_cast<unsigned>(d));
    if (!count) throw RangeError("residue field too large");
    for (Word idx = 0; idx < *count; ++idx) {
        FpPoly f = monic_from_index(idx, d, p);
        if (poly_is_irreducible(f, p)) return f;
    }
    throw ParameterError("no irreducible polynomial found");
}

}  // namespace cokernel::detail
