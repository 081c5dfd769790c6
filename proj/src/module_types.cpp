#include "cokernel/module_types.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <charconv>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "cokernel/error.hpp"

namespace cokernel {

namespace {

std::uint64_t narrow(const BigInt& v, const char* what) {
    if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max())) {
        throw RangeError(fmt::format("{} does not fit in 64 bits", what));
    }
    return v.convert_to<std::uint64_t>();
}

BigInt power(Word q, long long e) {
    return boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(e));
}

std::string trim_spaces(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t') out.push_back(c);
    }
    return out;
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 1) throw ParameterError("partition parts must be >= 1");
        if (i > 0 && parts_[i] > parts_[i - 1]) throw ParameterError("partition parts must be weakly decreasing");
    }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
    std::erase(parts, 0);
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
}

int Partition::weight() const {
    int s = 0;
    for (int p : parts_) s += p;
    return s;
}

std::vector<int> Partition::conjugate() const {
    std::vector<int> conj(static_cast<std::size_t>(largest()), 0);
    for (int p : parts_) {
        for (int j = 0; j < p; ++j) ++conj[static_cast<std::size_t>(j)];
    }
    return conj;
}

std::string Partition::to_string() const { return fmt::format("({})", fmt::join(parts_, ",")); }

Partition Partition::parse(std::string_view text) {
    std::string s = trim_spaces(text);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    std::vector<int> parts;
    if (s.empty()) return Partition();
    std::size_t start = 0;
    while (true) {
        const auto end = s.find(',', start);
        const std::string piece = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        int v = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (ec != std::errc() || ptr != piece.data() + piece.size() || piece.empty()) {
            throw ConfigError(fmt::format("malformed partition '{}'", text));
        }
        parts.push_back(v);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    try {
        return Partition(std::move(parts));
    } catch (const ParameterError& e) {
        throw ConfigError(fmt::format("malformed partition '{}': {}", text, e.what()));
    }
}

void ModuleType::set(const PrimeIdealDesc& prime, const Partition& partition) {
    if (!components_.empty() && !(components_.front().first.domain == prime.domain)) {
        throw UsageError("module type mixes primes of different domains");
    }
    auto it = std::lower_bound(components_.begin(), components_.end(), prime,
                               [](const Component& c, const PrimeIdealDesc& p) { return c.first < p; });
    const bool present = it != components_.end() && it->first == prime;
    if (partition.empty()) {
        if (present) components_.erase(it);
        return;
    }
    if (present) {
        it->second = partition;
    } else {
        components_.insert(it, {prime, partition});
    }
}

Partition ModuleType::at(const PrimeIdealDesc& prime) const {
    for (const auto& [p, part] : components_) {
        if (p == prime) return part;
    }
    return Partition();
}

std::string ModuleType::to_string() const {
    if (components_.empty()) return std::string(kTrivialTypeString);
    std::string out;
    for (const auto& [p, part] : components_) {
        if (!out.empty()) out += '|';
        out += p.label();
        out += ':';
        out += part.to_string();
    }
    return out;
}

ModuleType ModuleType::parse(const DomainId& domain, std::string_view text) {
    const std::string s = trim_spaces(text);
    ModuleType t;
    if (s.empty() || s == kTrivialTypeString || s == "0" || s == "trivial") return t;
    std::size_t start = 0;
    while (true) {
        const auto end = s.find('|', start);
        const std::string piece = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        const auto colon = piece.rfind(':');
        if (colon == std::string::npos) throw ConfigError(fmt::format("malformed module type '{}'", text));
        const auto prime = prime_from_generator(domain, parse_element(domain, piece.substr(0, colon)));
        if (!t.at(prime).empty()) throw ConfigError(fmt::format("prime repeated in module type '{}'", text));
        t.set(prime, Partition::parse(piece.substr(colon + 1)));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return t;
}

BigInt module_size_exact(const ModuleType& n) {
    BigInt size = 1;
    for (const auto& [p, part] : n.components()) size *= power(p.q, part.weight());
    return size;
}

std::uint64_t module_size(const ModuleType& n) { return narrow(module_size_exact(n), "module size"); }

BigInt count_aut_local_exact(const Partition& lambda, Word q) {
    if (q < 2) throw ParameterError("residue size must be >= 2");
    // Hillar-Rhea with exponents e_1 <= ... <= e_n (1-indexed):
    //   d_k = max{l : e_l = e_k},  c_k = min{l : e_l = e_k},
    //   |Aut| = prod_k (q^{d_k} - q^{k-1}) * prod_j q^{e_j (n - d_j)} * prod_i q^{(e_i - 1)(n - c_i + 1)}.
    std::vector<int> e(lambda.parts().rbegin(), lambda.parts().rend());
    const long long n = static_cast<long long>(e.size());
    BigInt result = 1;
    long long exponent = 0;
    for (long long k = 1; k <= n; ++k) {
        const int ek = e[static_cast<std::size_t>(k - 1)];
        long long d = k, c = k;
        while (d < n && e[static_cast<std::size_t>(d)] == ek) ++d;
        while (c > 1 && e[static_cast<std::size_t>(c - 2)] == ek) --c;
        result *= power(q, d) - power(q, k - 1);
        exponent += static_cast<long long>(ek) * (n - d);
        exponent += static_cast<long long>(ek - 1) * (n - c + 1);
    }
    return result * power(q, exponent);
}

std::uint64_t count_aut_local(const Partition& lambda, Word q) {
    return narrow(count_aut_local_exact(lambda, q), "automorphism count");
}

BigInt count_hom_local_exact(const Partition& lambda, const Partition& mu, Word q) {
    long long exponent = 0;
    for (int a : lambda.parts()) {
        for (int b : mu.parts()) exponent += std::min(a, b);
    }
    return power(q, exponent);
}

std::uint64_t count_hom_local(const Partition& lambda, const Partition& mu, Word q) {
    return narrow(count_hom_local_exact(lambda, mu, q), "hom count");
}

// A map A -> N is onto iff its reduction onto N/pi N = F_q^m is onto
// (Nakayama). Moebius inversion over the subspace lattice of F_q^m gives
//   #Sur(A, N) = sum_V (-1)^{m - dim V} q^{binom(m - dim V, 2)} #Hom(A, N_V),
// with N_V the preimage of V in N. Writing A = sum R/pi^{lambda_i},
// #Hom(A, N_V) = prod_i |N_V[pi^{lambda_i}]|, and for mu decreasing
//   log_q |N_V[pi^e]| = dim(V cap U_e) + sum_{mu_j <= e} (mu_j - 1) + e #{mu_j > e},
// where U_e is spanned by the coordinates with mu_j <= e, a suffix of the
// coordinates. For V in reduced row echelon form with pivot set S,
// dim(V cap U_e) counts pivots inside that suffix, so each Schubert cell
// (subspaces sharing a pivot set) contributes uniformly and holds
// q^{#free entries} subspaces.
BigInt count_sur_local_exact(const Partition& lambda, const Partition& mu, Word q) {
    if (q < 2) throw ParameterError("residue size must be >= 2");
    const int m = mu.length();
    if (lambda.length() < m) return 0;
    const auto& mp = mu.parts();
    BigInt total = 0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        const int dim = std::popcount(mask);
        long long free_entries = 0;
        int pivots_seen = 0;
        for (int col = 0; col < m; ++col) {
            if (mask & (1u << col)) {
                ++pivots_seen;
            } else {
                free_entries += pivots_seen;  // each earlier pivot row has a free entry here
            }
        }
        long long hom_exponent = 0;
        for (int e : lambda.parts()) {
            int t = 0;  // #{j : mu_j > e}
            while (t < m && mp[static_cast<std::size_t>(t)] > e) ++t;
            long long a = 0;
            for (int j = t; j < m; ++j) {
                a += mp[static_cast<std::size_t>(j)] - 1;
                if (mask & (1u << j)) ++a;
            }
            a += static_cast<long long>(e) * t;
            hom_exponent += a;
        }
        const int codim = m - dim;
        BigInt term = power(q, free_entries + static_cast<long long>(codim) * (codim - 1) / 2 + hom_exponent);
        if (codim % 2 == 1) total -= term;
        else total += term;
    }
    return total;
}

std::uint64_t count_sur_local(const Partition& lambda, const Partition& mu, Word q) {
    return narrow(count_sur_local_exact(lambda, mu, q), "surjection count");
}

namespace {

template <class Local>
BigInt product_over_primes(const ModuleType& a, const ModuleType& b, Local local) {
    std::vector<PrimeIdealDesc> primes;
    for (const auto& [p, part] : a.components()) primes.push_back(p);
    for (const auto& [p, part] : b.components()) {
        if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    }
    if (!primes.empty()) {
        for (const auto& p : primes) {
            if (!(p.domain == primes.front().domain)) throw UsageError("module types over different domains");
        }
    }
    BigInt result = 1;
    for (const auto& p : primes) result *= local(a.at(p), b.at(p), p.q);
    return result;
}

}  // namespace

BigInt count_aut_exact(const ModuleType& n) {
    BigInt result = 1;
    for (const auto& [p, part] : n.components()) result *= count_aut_local_exact(part, p.q);
    return result;
}

BigInt count_hom_exact(const ModuleType& a, const ModuleType& b) {
    return product_over_primes(a, b, count_hom_local_exact);
}

BigInt count_sur_exact(const ModuleType& a, const ModuleType& b) {
    return product_over_primes(a, b, count_sur_local_exact);
}

std::uint64_t count_aut(const ModuleType& n) { return narrow(count_aut_exact(n), "automorphism count"); }
std::uint64_t count_hom(const ModuleType& a, const ModuleType& b) { return narrow(count_hom_exact(a, b), "hom count"); }
std::uint64_t count_sur(const ModuleType& a, const ModuleType& b) { return narrow(count_sur_exact(a, b), "surjection count"); }

std::vector<Partition> enumerate_partitions(int cap_exponent, int cap_parts) {
    if (cap_exponent < 0 || cap_parts < 0) throw ParameterError("caps must be >= 0");
    std::vector<Partition> out;
    std::vector<int> current;
    std::function<void(int)> rec = [&](int max_part) {
        out.emplace_back(current);
        if (static_cast<int>(current.size()) == cap_parts) return;
        for (int part = max_part; part >= 1; --part) {
            current.push_back(part);
            rec(part);
            current.pop_back();
        }
    };
    rec(cap_exponent);
    std::stable_sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
        if (a.weight() != b.weight()) return a.weight() < b.weight();
        return a.parts() > b.parts();
    });
    return out;
}

std::vector<ModuleType> enumerate_types(const std::vector<PrimeIdealDesc>& primes, int cap_exponent, int cap_parts) {
    const auto partitions = enumerate_partitions(cap_exponent, cap_parts);
    std::vector<ModuleType> out{ModuleType{}};
    for (const auto& prime : primes) {
        std::vector<ModuleType> next;
        next.reserve(out.size() * partitions.size());
        for (const auto& base : out) {
            for (const auto& part : partitions) {
                ModuleType t = base;
                t.set(prime, part);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace cokernel
