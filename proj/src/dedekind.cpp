#include "cokernel/dedekind.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "cokernel/error.hpp"

namespace cokernel {

using detail::FpPoly;

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw RangeError("integer overflow");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw RangeError("integer overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw RangeError("integer overflow");
    return r;
}

const char* kind_name(DomainKind kind) {
    switch (kind) {
        case DomainKind::integers: return "integers";
        case DomainKind::gaussian_integers: return "gaussian-integers";
        case DomainKind::polynomials: return "polynomials";
    }
    return "?";
}

const Integer& as_int(const Element& x) { return std::get<Integer>(x); }
const Gaussian& as_gauss(const Element& x) { return std::get<Gaussian>(x); }
const Polynomial& as_poly(const Element& x) { return std::get<Polynomial>(x); }

std::int64_t parse_int(std::string_view s) {
    if (s.empty()) throw ConfigError("empty integer literal");
    std::size_t pos = 0;
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        pos = 1;
    }
    std::int64_t value = 0;
    const auto* first = s.data() + pos;
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ConfigError(fmt::format("malformed integer literal '{}'", s));
    }
    return negative ? -value : value;
}

/// The associate of a + bi with a > 0 and -a < b <= a.
Gaussian normalize_associate(Gaussian g) {
    for (int turn = 0; turn < 4; ++turn) {
        if (g.re > 0 && -g.re < g.im && g.im <= g.re) return g;
        g = Gaussian{-g.im, g.re};  // multiply by i
    }
    return g;
}

/// Splits p = a^2 + b^2 with a > b > 0 (p = 1 mod 4).
std::pair<std::int64_t, std::int64_t> two_squares(Word p) {
    for (Word b = 1; 2 * b * b < p; ++b) {
        const Word rest = p - b * b;
        auto a = static_cast<Word>(std::llround(std::sqrt(static_cast<double>(rest))));
        while (a * a > rest) --a;
        while ((a + 1) * (a + 1) <= rest) ++a;
        if (a * a == rest) return {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
    }
    throw ParameterError(fmt::format("{} is not a sum of two squares", p));
}

void require_prime(Word p) {
    if (!detail::is_prime(p)) throw ParameterError(fmt::format("{} is not prime", p));
}

PrimeIdealDesc make_desc(const DomainId& domain, PrimeKind kind, Word p, int f, int e, Element gen) {
    PrimeIdealDesc d;
    d.domain = domain;
    d.kind = kind;
    d.p = p;
    d.f = f;
    d.e = e;
    d.generator = std::move(gen);
    d.q = *detail::checked_pow(p, static_cast<unsigned>(f));
    return d;
}

/// Exact division of Gaussian integers; nullopt when d does not divide x.
std::optional<Gaussian> gauss_divide(Gaussian x, Gaussian d) {
    const __int128 norm = static_cast<__int128>(d.re) * d.re + static_cast<__int128>(d.im) * d.im;
    // x * conj(d)
    const __int128 re = static_cast<__int128>(x.re) * d.re + static_cast<__int128>(x.im) * d.im;
    const __int128 im = static_cast<__int128>(x.im) * d.re - static_cast<__int128>(x.re) * d.im;
    if (re % norm != 0 || im % norm != 0) return std::nullopt;
    return Gaussian{static_cast<std::int64_t>(re / norm), static_cast<std::int64_t>(im / norm)};
}


Polynomial from_fp(FpPoly f) {
    detail::trim(f);
    return Polynomial{std::move(f)};
}

}  // namespace

DomainId DomainId::polynomials(Word p) {
    require_prime(p);
    return {DomainKind::polynomials, p};
}

int DomainId::degree() const {
    switch (kind) {
        case DomainKind::integers: return 1;
        case DomainKind::gaussian_integers: return 2;
        case DomainKind::polynomials: return 0;
    }
    return 0;
}

std::string DomainId::name() const {
    if (kind == DomainKind::polynomials) return fmt::format("polynomials-over-F_{}", characteristic);
    return kind_name(kind);
}

DomainId parse_domain(std::string_view kind, Word p) {
    if (kind == "integers" || kind == "Z") return DomainId::integers();
    if (kind == "gaussian-integers" || kind == "gaussian" || kind == "Z[i]") return DomainId::gaussian_integers();
    if (kind.starts_with("polynomials")) {
        if (p == 0) {
            const auto pos = kind.find("F_");
            if (pos == std::string_view::npos) throw ConfigError("polynomial domain needs a characteristic");
            p = static_cast<Word>(parse_int(kind.substr(pos + 2)));
        }
        return DomainId::polynomials(p);
    }
    throw ConfigError(fmt::format("unknown domain '{}'", kind));
}

void check_element(const DomainId& domain, const Element& x) {
    switch (domain.kind) {
        case DomainKind::integers:
            if (!std::holds_alternative<Integer>(x)) throw UsageError("expected an integer element");
            return;
        case DomainKind::gaussian_integers:
            if (!std::holds_alternative<Gaussian>(x)) throw UsageError("expected a Gaussian integer element");
            return;
        case DomainKind::polynomials: {
            if (!std::holds_alternative<Polynomial>(x)) throw UsageError("expected a polynomial element");
            const auto& c = as_poly(x).coeffs;
            if (!c.empty() && c.back() == 0) throw UsageError("polynomial has trailing zero coefficients");
            for (Word w : c) {
                if (w >= domain.characteristic) throw UsageError("polynomial coefficient not reduced mod p");
            }
            return;
        }
    }
}

Element make_polynomial(const DomainId& domain, std::vector<std::int64_t> coeffs) {
    if (domain.kind != DomainKind::polynomials) throw UsageError("not a polynomial domain");
    FpPoly f;
    f.reserve(coeffs.size());
    for (auto c : coeffs) f.push_back(detail::reduce_signed(c, domain.characteristic));
    return from_fp(std::move(f));
}

Element elem_zero(const DomainId& domain) {
    switch (domain.kind) {
        case DomainKind::integers: return Integer{0};
        case DomainKind::gaussian_integers: return Gaussian{0, 0};
        case DomainKind::polynomials: return Polynomial{};
    }
    return Integer{0};
}

Element elem_one(const DomainId& domain) {
    switch (domain.kind) {
        case DomainKind::integers: return Integer{1};
        case DomainKind::gaussian_integers: return Gaussian{1, 0};
        case DomainKind::polynomials: return Polynomial{{1}};
    }
    return Integer{1};
}

Element elem_add(const DomainId& domain, const Element& x, const Element& y) {
    switch (domain.kind) {
        case DomainKind::integers: return Integer{checked_add(as_int(x).value, as_int(y).value)};
        case DomainKind::gaussian_integers:
            return Gaussian{checked_add(as_gauss(x).re, as_gauss(y).re), checked_add(as_gauss(x).im, as_gauss(y).im)};
        case DomainKind::polynomials:
            return from_fp(detail::poly_add(as_poly(x).coeffs, as_poly(y).coeffs, domain.characteristic));
    }
    return x;
}

Element elem_sub(const DomainId& domain, const Element& x, const Element& y) {
    switch (domain.kind) {
        case DomainKind::integers: return Integer{checked_sub(as_int(x).value, as_int(y).value)};
        case DomainKind::gaussian_integers:
            return Gaussian{checked_sub(as_gauss(x).re, as_gauss(y).re), checked_sub(as_gauss(x).im, as_gauss(y).im)};
        case DomainKind::polynomials:
            return from_fp(detail::poly_sub(as_poly(x).coeffs, as_poly(y).coeffs, domain.characteristic));
    }
    return x;
}

Element elem_mul(const DomainId& domain, const Element& x, const Element& y) {
    switch (domain.kind) {
        case DomainKind::integers: return Integer{checked_mul(as_int(x).value, as_int(y).value)};
        case DomainKind::gaussian_integers: {
            const auto& a = as_gauss(x);
            const auto& b = as_gauss(y);
            return Gaussian{checked_sub(checked_mul(a.re, b.re), checked_mul(a.im, b.im)),
                            checked_add(checked_mul(a.re, b.im), checked_mul(a.im, b.re))};
        }
        case DomainKind::polynomials:
            return from_fp(detail::poly_mul(as_poly(x).coeffs, as_poly(y).coeffs, domain.characteristic));
    }
    return x;
}

Element elem_neg(const DomainId& domain, const Element& x) { return elem_sub(domain, elem_zero(domain), x); }

bool elem_is_zero(const Element& x) {
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Integer>) return v.value == 0;
            else if constexpr (std::is_same_v<T, Gaussian>) return v.re == 0 && v.im == 0;
            else return v.coeffs.empty();
        },
        x);
}

bool elem_is_unit(const DomainId& domain, const Element& x) {
    switch (domain.kind) {
        case DomainKind::integers: return as_int(x).value == 1 || as_int(x).value == -1;
        case DomainKind::gaussian_integers: {
            const auto& g = as_gauss(x);
            return std::abs(g.re) + std::abs(g.im) == 1;
        }
        case DomainKind::polynomials: return as_poly(x).coeffs.size() == 1;
    }
    return false;
}

Element parse_element(const DomainId& domain, std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw ConfigError("empty element literal");
    switch (domain.kind) {
        case DomainKind::integers: return Integer{parse_int(s)};
        case DomainKind::gaussian_integers: {
            if (s.back() != 'i') return Gaussian{parse_int(s), 0};
            // Split "re(+|-)im i" at the last sign that is not leading.
            std::size_t split = std::string::npos;
            for (std::size_t k = s.size() - 1; k > 0; --k) {
                if (s[k] == '+' || s[k] == '-') {
                    split = k;
                    break;
                }
            }
            const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
            std::string im_part = split == std::string::npos ? s.substr(0, s.size() - 1)
                                                             : s.substr(split, s.size() - 1 - split);
            std::int64_t im = 0;
            if (im_part.empty() || im_part == "+") im = 1;
            else if (im_part == "-") im = -1;
            else im = parse_int(im_part);
            const std::int64_t re = re_part.empty() ? 0 : parse_int(re_part);
            return Gaussian{re, im};
        }
        case DomainKind::polynomials: {
            std::vector<std::int64_t> coeffs;
            std::size_t start = 0;
            while (start <= s.size()) {
                const auto end = s.find(',', start);
                const auto piece = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
                coeffs.push_back(parse_int(piece));
                if (end == std::string::npos) break;
                start = end + 1;
            }
            return make_polynomial(domain, std::move(coeffs));
        }
    }
    throw ConfigError("unsupported domain");
}

std::string format_element(const DomainId& domain, const Element& x) {
    check_element(domain, x);
    switch (domain.kind) {
        case DomainKind::integers: return fmt::format("{}", as_int(x).value);
        case DomainKind::gaussian_integers: {
            const auto& g = as_gauss(x);
            if (g.im == 0) return fmt::format("{}", g.re);
            std::string im;
            if (g.im == 1) im = "i";
            else if (g.im == -1) im = "-i";
            else im = fmt::format("{}i", g.im);
            if (g.re == 0) return im;
            return fmt::format("{}{}{}", g.re, g.im > 0 ? "+" : "", im);
        }
        case DomainKind::polynomials: {
            const auto& c = as_poly(x).coeffs;
            if (c.empty()) return "0";
            return fmt::format("{}", fmt::join(c, ","));
        }
    }
    return "?";
}

std::string PrimeIdealDesc::label() const { return format_element(domain, generator); }

bool operator<(const PrimeIdealDesc& a, const PrimeIdealDesc& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.f != b.f) return a.f < b.f;
    return a.label() < b.label();
}

std::vector<std::pair<Word, int>> factor_integer(Word n) {
    std::vector<std::pair<Word, int>> out;
    for (Word d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

Word hensel_lift_root(Word root_mod_p, Word p, int precision) {
    const auto mod = detail::checked_pow(p, static_cast<unsigned>(precision), Word{1} << 63);
    if (!mod) throw PrecisionRangeError(fmt::format("{}^{} exceeds the word-size bound", p, precision));
    const Word m = *mod;
    Word r = root_mod_p % m;
    // Newton: r <- r - (r^2 + 1) / (2 r), doubling correct digits per step.
    for (int correct = 1; correct < precision; correct *= 2) {
        const Word f = detail::add_mod(detail::mul_mod(r, r, m), 1 % m, m);
        const auto inv = detail::inverse_mod(detail::mul_mod(2, r, m), m);
        if (!inv) throw ParameterError("Hensel lift requires an odd prime and a nonzero root");
        r = detail::sub_mod(r, detail::mul_mod(f, *inv, m), m);
    }
    return r;
}

std::vector<PrimeIdealDesc> factor_rational_prime(const DomainId& domain, Word p) {
    require_prime(p);
    switch (domain.kind) {
        case DomainKind::integers:
            return {make_desc(domain, PrimeKind::rational, p, 1, 1, Integer{static_cast<std::int64_t>(p)})};
        case DomainKind::gaussian_integers: {
            if (p > (Word{1} << 31)) throw ParameterError("Gaussian primes above p > 2^31 are not supported");
            const auto sp = static_cast<std::int64_t>(p);
            if (p == 2) return {make_desc(domain, PrimeKind::gaussian_ramified, 2, 1, 2, Gaussian{1, 1})};
            if (p % 4 == 3) return {make_desc(domain, PrimeKind::gaussian_inert, p, 2, 1, Gaussian{sp, 0})};
            const auto [a, b] = two_squares(p);
            auto plus = make_desc(domain, PrimeKind::gaussian_split, p, 1, 1, Gaussian{a, b});
            auto minus = make_desc(domain, PrimeKind::gaussian_split, p, 1, 1, Gaussian{a, -b});
            // a + b r = 0  =>  r = -a / b (mod p)
            const Word binv = *detail::inverse_mod(static_cast<Word>(b) % p, p);
            plus.split_root = detail::mul_mod(p - static_cast<Word>(a) % p, binv, p);
            minus.split_root = p - plus.split_root;
            return {plus, minus};
        }
        case DomainKind::polynomials:
            throw ParameterError("polynomial primes are given by an irreducible polynomial, not a rational prime");
    }
    return {};
}

std::vector<PrimeIdealDesc> factor_rational_prime(const DomainId& domain, const Polynomial& g) {
    if (domain.kind != DomainKind::polynomials) throw UsageError("not a polynomial domain");
    const Word p = domain.characteristic;
    const FpPoly monic = detail::poly_make_monic(g.coeffs, p);
    if (!detail::poly_is_irreducible(monic, p)) throw ParameterError("polynomial is not irreducible");
    return {make_desc(domain, PrimeKind::polynomial, p, detail::degree(monic), 1, from_fp(monic))};
}

PrimeIdealDesc prime_from_generator(const DomainId& domain, const Element& generator) {
    check_element(domain, generator);
    switch (domain.kind) {
        case DomainKind::integers: {
            const auto v = as_int(generator).value;
            const Word p = static_cast<Word>(v < 0 ? -v : v);
            return factor_rational_prime(domain, p).front();
        }
        case DomainKind::gaussian_integers: {
            const Gaussian g = normalize_associate(as_gauss(generator));
            const __int128 norm = static_cast<__int128>(g.re) * g.re + static_cast<__int128>(g.im) * g.im;
            if (norm > static_cast<__int128>(Word{1} << 62)) throw ParameterError("generator norm too large");
            const auto n = static_cast<Word>(norm);
            if (detail::is_prime(n)) {
                for (auto& d : factor_rational_prime(domain, n)) {
                    if (as_gauss(d.generator) == g) return d;
                }
            }
            if (g.im == 0 && detail::is_prime(static_cast<Word>(g.re)) && g.re % 4 == 3) {
                return factor_rational_prime(domain, static_cast<Word>(g.re)).front();
            }
            throw ParameterError(fmt::format("{} does not generate a prime ideal", format_element(domain, generator)));
        }
        case DomainKind::polynomials: return factor_rational_prime(domain, as_poly(generator)).front();
    }
    throw ParameterError("unsupported domain");
}

PrimeReduction::PrimeReduction(const PrimeIdealDesc& prime, int precision) : prime_(prime) {
    switch (prime.kind) {
        case PrimeKind::rational:
        case PrimeKind::gaussian_split:
            ring_ = LocalRing::make(prime.p, 1, precision, RingStyle::unramified);
            if (prime.kind == PrimeKind::gaussian_split) root_ = hensel_lift_root(prime.split_root, prime.p, precision);
            break;
        case PrimeKind::gaussian_inert:
            // i maps to the class of x in (Z/p^K)[x]/(x^2+1).
            ring_ = LocalRing::make(prime.p, precision, RingStyle::unramified, FpPoly{1, 0, 1});
            break;
        case PrimeKind::gaussian_ramified:
            ring_ = LocalRing::make(2, 1, precision, RingStyle::ramified_gaussian);
            break;
        case PrimeKind::polynomial: {
            const FpPoly g = as_poly(prime.generator).coeffs;
            ring_ = LocalRing::make(prime.p, precision, RingStyle::equal_characteristic, g);
            // Solve g(X) = t with X = root of g mod t, by Newton iteration in F_q[[t]]/t^K.
            const LocalRingPtr& R = ring_;
            const Word p = prime.p;
            LocalElement x(R);
            if (prime.f == 1) {
                R->set_integer(static_cast<std::int64_t>((p - g[0]) % p), x.mutable_words());
            } else {
                x.mutable_words()[1] = 1;  // the class of y in F_p[y]/(g)
            }
            FpPoly dg;
            for (std::size_t i = 1; i < g.size(); ++i) dg.push_back(detail::mul_mod(i % p, g[i], p));
            auto eval = [&](const FpPoly& poly, const LocalElement& at) {
                LocalElement acc(R);
                for (std::size_t i = poly.size(); i-- > 0;) {
                    acc = acc * at + LocalElement::from_integer(R, static_cast<std::int64_t>(poly[i]));
                }
                return acc;
            };
            const LocalElement t = LocalElement::uniformizer(R);
            for (int correct = 1; correct < 2 * precision; correct *= 2) {
                const LocalElement residual = eval(g, x) - t;
                if (residual.is_zero()) break;
                x = x - residual * unit_inverse(eval(dg, x));
            }
            if (!(eval(g, x) == t)) throw Error("failed to lift the root of the prime polynomial");
            x_image_.assign(x.words().begin(), x.words().end());
            break;
        }
    }
}

void PrimeReduction::reduce(const Element& x, std::span<Word> out) const {
    const LocalRing& R = *ring_;
    switch (prime_.kind) {
        case PrimeKind::rational: R.set_integer(as_int(x).value, out); return;
        case PrimeKind::gaussian_split: {
            const Word m = R.coefficient_modulus();
            const auto& g = as_gauss(x);
            out[0] = detail::add_mod(detail::reduce_signed(g.re, m),
                                     detail::mul_mod(detail::reduce_signed(g.im, m), root_, m), m);
            return;
        }
        case PrimeKind::gaussian_inert: {
            const Word m = R.coefficient_modulus();
            out[0] = detail::reduce_signed(as_gauss(x).re, m);
            out[1] = detail::reduce_signed(as_gauss(x).im, m);
            return;
        }
        case PrimeKind::gaussian_ramified: {
            std::vector<Word> re(2), im(2), unit_i{0, 1};
            R.set_integer(as_gauss(x).re, re);
            R.set_integer(as_gauss(x).im, im);
            R.canonicalize(unit_i);
            R.mul(im, unit_i, im);
            R.add(re, im, out);
            return;
        }
        case PrimeKind::polynomial: {
            const auto& c = as_poly(x).coeffs;
            std::vector<Word> acc(R.width(), 0), coef(R.width(), 0);
            for (std::size_t i = c.size(); i-- > 0;) {
                R.mul(acc, x_image_, acc);
                R.set_integer(static_cast<std::int64_t>(c[i]), coef);
                R.add(acc, coef, acc);
            }
            std::copy(acc.begin(), acc.end(), out.begin());
            return;
        }
    }
}

LocalElement PrimeReduction::reduce(const Element& x) const {
    check_element(prime_.domain, x);
    LocalElement e(ring_);
    reduce(x, e.mutable_words());
    return e;
}

LocalElement reduce_mod_prime_power(const Element& x, const PrimeIdealDesc& prime, int precision) {
    return PrimeReduction(prime, precision).reduce(x);
}

std::vector<ElementaryQuotientIdeal> elementary_quotient_ideals(const DomainId& domain, const Element& a) {
    check_element(domain, a);
    if (elem_is_zero(a) || elem_is_unit(domain, a)) throw ParameterError("modulus must be nonzero and not a unit");
    std::vector<ElementaryQuotientIdeal> out;
    switch (domain.kind) {
        case DomainKind::integers: {
            const auto v = as_int(a).value;
            for (auto [p, e] : factor_integer(static_cast<Word>(v < 0 ? -v : v))) {
                (void)e;
                out.push_back({domain, p, 1, fmt::format("{}Z", p), ProjectionKind::integer_mod_p, 0, {}});
            }
            return out;
        }
        case DomainKind::gaussian_integers: {
            const Gaussian g = as_gauss(a);
            const __int128 norm = static_cast<__int128>(g.re) * g.re + static_cast<__int128>(g.im) * g.im;
            if (norm > static_cast<__int128>(Word{1} << 62)) throw RangeError("modulus norm too large");
            for (auto [p, e] : factor_integer(static_cast<Word>(norm))) {
                (void)e;
                if (p == 2) {
                    out.push_back({domain, 2, 1, "(1+i)", ProjectionKind::gaussian_ramified, 0, {}});
                    const auto q1 = gauss_divide(g, Gaussian{1, 1});
                    if (q1 && gauss_divide(*q1, Gaussian{1, 1})) {
                        out.push_back({domain, 2, 2, "2Z[i]", ProjectionKind::gaussian_coordinates, 0, {}});
                    }
                } else if (p % 4 == 3) {
                    out.push_back({domain, p, 2, fmt::format("{}Z[i]", p), ProjectionKind::gaussian_coordinates, 0, {}});
                } else {
                    const auto primes = factor_rational_prime(domain, p);
                    const bool plus = gauss_divide(g, as_gauss(primes[0].generator)).has_value();
                    const bool minus = gauss_divide(g, as_gauss(primes[1].generator)).has_value();
                    if (plus && minus) {
                        out.push_back({domain, p, 2, fmt::format("{}Z[i]", p), ProjectionKind::gaussian_coordinates, 0, {}});
                    }
                    for (int k = 0; k < 2; ++k) {
                        if (k == 0 ? !plus : !minus) continue;
                        const auto& pr = primes[static_cast<std::size_t>(k)];
                        out.push_back({domain, p, 1, fmt::format("({})", pr.label()), ProjectionKind::gaussian_split,
                                       pr.split_root, {}});
                    }
                }
            }
            return out;
        }
        case DomainKind::polynomials: {
            const Word p = domain.characteristic;
            FpPoly rest = detail::poly_make_monic(as_poly(a).coeffs, p);
            // Trial division by monic polynomials of increasing degree; the
            // divisors found this way are irreducible.
            std::vector<std::pair<FpPoly, int>> factors;
            for (int d = 1; 2 * d <= detail::degree(rest); ++d) {
                const auto count = detail::checked_pow(p, static_cast<unsigned>(d), Word{1} << 24);
                if (!count) throw RangeError("modulus degree too large to factor");
                for (Word idx = 0; idx < *count && 2 * d <= detail::degree(rest); ++idx) {
                    const FpPoly cand = detail::monic_from_index(idx, d, p);
                    int e = 0;
                    for (;;) {
                        FpPoly quot, rem;
                        detail::poly_divmod(rest, cand, p, quot, rem);
                        if (!rem.empty()) break;
                        rest = quot;
                        ++e;
                    }
                    if (e > 0) factors.emplace_back(cand, e);
                }
            }
            if (detail::degree(rest) > 0) {
                auto it = std::find_if(factors.begin(), factors.end(), [&](const auto& fe) { return fe.first == rest; });
                if (it != factors.end()) ++it->second;
                else factors.emplace_back(rest, 1);
            }
            // Every monic divisor d != 1 of a gives an elementary quotient F_p[x]/(d).
            std::vector<FpPoly> divisors{FpPoly{1}};
            for (const auto& [fac, e] : factors) {
                std::vector<FpPoly> next;
                for (const auto& d : divisors) {
                    FpPoly power{1};
                    for (int k = 0; k <= e; ++k) {
                        next.push_back(detail::poly_mul(d, power, p));
                        power = detail::poly_mul(power, fac, p);
                    }
                }
                divisors = std::move(next);
            }
            std::sort(divisors.begin(), divisors.end(), [](const FpPoly& x, const FpPoly& y) {
                if (x.size() != y.size()) return x.size() < y.size();
                return std::lexicographical_compare(x.rbegin(), x.rend(), y.rbegin(), y.rend());
            });
            for (const auto& d : divisors) {
                if (detail::degree(d) < 1) continue;
                out.push_back({domain, p, detail::degree(d),
                               fmt::format("({})", format_element(domain, Polynomial{d})),
                               ProjectionKind::polynomial_mod, 0, d});
            }
            return out;
        }
    }
    return out;
}

std::vector<Word> residue_vector(const Element& x, const ElementaryQuotientIdeal& ideal) {
    check_element(ideal.domain, x);
    const Word p = ideal.p;
    switch (ideal.projection) {
        case ProjectionKind::integer_mod_p: return {detail::reduce_signed(as_int(x).value, p)};
        case ProjectionKind::gaussian_coordinates:
            return {detail::reduce_signed(as_gauss(x).re, p), detail::reduce_signed(as_gauss(x).im, p)};
        case ProjectionKind::gaussian_split:
            return {detail::add_mod(detail::reduce_signed(as_gauss(x).re, p),
                                    detail::mul_mod(detail::reduce_signed(as_gauss(x).im, p), ideal.root, p), p)};
        case ProjectionKind::gaussian_ramified:
            return {detail::reduce_signed(as_gauss(x).re % 2 + as_gauss(x).im % 2, 2)};
        case ProjectionKind::polynomial_mod: {
            FpPoly r = detail::poly_mod(as_poly(x).coeffs, ideal.modulus, p);
            r.resize(static_cast<std::size_t>(ideal.dim), 0);
            return r;
        }
    }
    return {};
}

}  // namespace cokernel
