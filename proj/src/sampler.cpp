#include "cokernel/sampler.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "cokernel/error.hpp"

namespace cokernel {

namespace {

using boost::multiprecision::cpp_int;

const cpp_int kWeightScale = cpp_int(1'000'000'000'000LL);  // 10^12

cpp_int pow10(int e) {
    cpp_int r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

Rational round_to_scale(const Rational& r) {
    // Nearest multiple of 10^-12, halves rounded up.
    const cpp_int num = numerator(r) * kWeightScale * 2 + denominator(r);
    const cpp_int den = denominator(r) * 2;
    cpp_int q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return Rational(q, kWeightScale);
}

cpp_int parse_int(std::string_view s, std::string_view whole) {
    if (s.empty()) throw ConfigError(fmt::format("malformed weight '{}'", whole));
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ConfigError(fmt::format("malformed weight '{}'", whole));
    for (std::size_t k = i; k < s.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw ConfigError(fmt::format("malformed weight '{}'", whole));
    }
    // cpp_int reads a leading 0 as an octal prefix.
    std::size_t first = i;
    while (first + 1 < s.size() && s[first] == '0') ++first;
    const cpp_int magnitude(std::string(s.substr(first)));
    return s[0] == '-' ? cpp_int(-magnitude) : magnitude;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_key(std::uint64_t seed, int n, int u, std::uint64_t trial) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ static_cast<std::uint64_t>(u));
    return splitmix64(h ^ trial);
}

}  // namespace

Rational parse_weight(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const cpp_int num = parse_int(std::string_view(s).substr(0, slash), text);
        const cpp_int den = parse_int(std::string_view(s).substr(slash + 1), text);
        if (den == 0) throw ConfigError(fmt::format("zero denominator in weight '{}'", text));
        return Rational(num, den);
    }
    int exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
        exponent = static_cast<int>(parse_int(std::string_view(s).substr(e + 1), text).convert_to<long long>());
        s.resize(e);
    }
    std::string digits = s;
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exponent -= static_cast<int>(s.size() - dot - 1);
        if (digits.empty() || digits == "-" || digits == "+") throw ConfigError(fmt::format("malformed weight '{}'", text));
    }
    if (exponent > 30 || exponent < -60) throw ConfigError(fmt::format("weight '{}' out of range", text));
    const cpp_int mant = parse_int(digits, text);
    const Rational exact = exponent >= 0 ? Rational(mant * pow10(exponent)) : Rational(mant, pow10(-exponent));
    return round_to_scale(exact);
}

Rational weight_from_double(double value) { return parse_weight(fmt::format("{:.17g}", value)); }

std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

EntryDistribution::EntryDistribution(DomainId domain, std::vector<Element> support, std::vector<Rational> weights)
    : domain_(std::move(domain)), support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.empty()) throw ParameterError("distribution support is empty");
    if (support_.size() != weights_.size()) throw ParameterError("support and weights differ in length");
    if (support_.size() > (std::size_t{1} << 31)) throw ParameterError("support too large");
    Rational total = 0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        check_element(domain_, support_[i]);
        if (weights_[i] <= 0) throw ParameterError("distribution weights must be positive");
        total += weights_[i];
        for (std::size_t j = 0; j < i; ++j) {
            if (support_[i] == support_[j]) {
                throw ParameterError(fmt::format("support element {} repeated", format_element(domain_, support_[i])));
            }
        }
    }
    if (abs(total - 1) > Rational(1, kWeightScale)) {
        throw ParameterError(fmt::format("distribution weights sum to {}, not 1", format_rational(total)));
    }
    for (auto& w : weights_) w /= total;

    const cpp_int two64 = cpp_int(1) << 64;
    Rational acc = 0;
    for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
        acc += weights_[i];
        const cpp_int t = numerator(acc) * two64 / denominator(acc);
        thresholds_.push_back(t >= two64 ? ~std::uint64_t{0} : t.convert_to<std::uint64_t>());
    }
}

std::uint32_t EntryDistribution::draw(std::uint64_t uniform) const {
    const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), uniform);
    return static_cast<std::uint32_t>(it - thresholds_.begin());
}

EntryDistribution builtin_distribution(std::string_view name, const DomainId& domain, const DistributionParams& params) {
    auto weights_or_uniform = [&](std::size_t n) {
        if (params.weights.empty()) return std::vector<Rational>(n, Rational(1, static_cast<long long>(n)));
        if (params.weights.size() != n) {
            throw ParameterError(fmt::format("{} expects {} weights, got {}", name, n, params.weights.size()));
        }
        return params.weights;
    };
    if (name == "bernoulli01") {
        const Rational q = params.q.value_or(Rational(1, 2));
        if (q < 0 || q > 1) throw ParameterError("bernoulli01 requires 0 <= q <= 1");
        std::vector<Element> support;
        std::vector<Rational> weights;
        if (q < 1) {
            support.push_back(elem_zero(domain));
            weights.push_back(1 - q);
        }
        if (q > 0) {
            support.push_back(elem_one(domain));
            weights.push_back(q);
        }
        return EntryDistribution(domain, std::move(support), std::move(weights));
    }
    if (name == "uniform-support") {
        if (params.support.empty()) throw ParameterError("uniform-support needs a support list");
        return EntryDistribution(domain, params.support, weights_or_uniform(params.support.size()));
    }
    if (name == "gaussian-basis") {
        if (domain.kind != DomainKind::gaussian_integers) throw ParameterError("gaussian-basis needs the Gaussian integers");
        return EntryDistribution(domain, {Gaussian{0, 0}, Gaussian{1, 0}, Gaussian{0, 1}}, weights_or_uniform(3));
    }
    if (name == "poly-powers") {
        if (domain.kind != DomainKind::polynomials) throw ParameterError("poly-powers needs a polynomial domain");
        const int m = params.m.value_or(3);
        if (m < 0 || m > 4096) throw ParameterError("poly-powers requires 0 <= m <= 4096");
        std::vector<Element> support;
        for (int k = 0; k <= m; ++k) {
            std::vector<std::int64_t> c(static_cast<std::size_t>(k) + 1, 0);
            c.back() = 1;
            support.push_back(make_polynomial(domain, c));
        }
        return EntryDistribution(domain, std::move(support), weights_or_uniform(static_cast<std::size_t>(m) + 1));
    }
    throw ParameterError(fmt::format("unknown built-in distribution '{}'", name));
}

BalanceReport balance_report(const EntryDistribution& dist, const Element& modulus) {
    BalanceReport report;
    report.modulus = modulus;
    report.overall = 1;
    for (auto& ideal : elementary_quotient_ideals(dist.domain(), modulus)) {
        const Word p = ideal.p;
        const auto k = static_cast<std::size_t>(ideal.dim);
        std::vector<std::vector<Word>> vecs;
        for (const auto& x : dist.support()) vecs.push_back(residue_vector(x, ideal));

        // Normals with first nonzero coordinate 1, in lexicographic order.
        long double directions = 0;
        for (std::size_t i = 0; i < k; ++i) directions = directions * static_cast<long double>(p) + 1;
        if (directions > 1e6L) throw ParameterError(fmt::format("ideal {} has too many hyperplanes to scan", ideal.label));

        BalanceEntry best{ideal, {}, 0, -1, 0};
        std::vector<Rational> mass(p);
        for (std::size_t lead = 0; lead < k; ++lead) {
            std::vector<Word> c(k, 0);
            c[lead] = 1;
            while (true) {
                std::fill(mass.begin(), mass.end(), Rational(0));
                for (std::size_t s = 0; s < vecs.size(); ++s) {
                    Word t = 0;
                    for (std::size_t i = lead; i < k; ++i) t = (t + detail::mul_mod(c[i], vecs[s][i], p)) % p;
                    mass[t] += dist.weights()[s];
                }
                for (Word t = 0; t < p; ++t) {
                    if (mass[t] > best.mass) {
                        best.mass = mass[t];
                        best.normal = c;
                        best.offset = t;
                    }
                }
                std::size_t i = k;
                while (i > lead + 1 && ++c[i - 1] == p) c[--i] = 0;
                if (i == lead + 1) break;
            }
        }
        best.epsilon = 1 - best.mass;
        report.overall = std::min(report.overall, best.epsilon);
        report.entries.push_back(std::move(best));
    }
    return report;
}

Element audit_modulus(const DomainId& domain, const std::vector<PrimeIdealDesc>& primes) {
    if (primes.empty()) throw ParameterError("no primes to audit");
    Element a = elem_one(domain);
    std::vector<Word> rational;
    for (const auto& P : primes) {
        if (!(P.domain == domain)) throw ParameterError("prime from a different domain");
        if (domain.kind == DomainKind::polynomials) {
            a = elem_mul(domain, a, P.generator);
        } else if (std::find(rational.begin(), rational.end(), P.p) == rational.end()) {
            rational.push_back(P.p);
            const auto p = static_cast<std::int64_t>(P.p);
            a = elem_mul(domain, a, domain.kind == DomainKind::integers ? Element(Integer{p}) : Element(Gaussian{p, 0}));
        }
    }
    return a;
}

std::uint64_t entry_word(std::uint64_t seed, int n, int u, std::uint64_t trial, std::uint64_t index) {
    return splitmix64(trial_key(seed, n, u, trial) ^ splitmix64(index));
}

Matrix<std::uint32_t> sample_indices(const EntryDistribution& dist, int n, int u, std::uint64_t seed, std::uint64_t trial) {
    if (n < 1 || u < 0) throw ParameterError("sampling requires n >= 1 and u >= 0");
    const int cols = n + u;
    Matrix<std::uint32_t> m(n, cols);
    const std::uint64_t h = trial_key(seed, n, u, trial);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto index = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(cols) + static_cast<std::uint64_t>(c);
            m(r, c) = dist.draw(splitmix64(h ^ splitmix64(index)));
        }
    }
    return m;
}

Matrix<Element> sample_matrix(const EntryDistribution& dist, int n, int u, std::uint64_t seed, std::uint64_t trial) {
    const auto idx = sample_indices(dist, n, u, seed, trial);
    Matrix<Element> m(n, n + u);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n + u; ++c) m(r, c) = dist.support()[idx(r, c)];
    }
    return m;
}

}  // namespace cokernel
