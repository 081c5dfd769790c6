#include "cokernel/theory.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cokernel/error.hpp"

namespace cokernel {

namespace {

void check_args(int u, double tol) {
    if (u < 0) throw ParameterError("u must be non-negative");
    if (!(tol > 0)) throw ParameterError("tolerance must be positive");
}

Decimal to_decimal(const BigInt& v) { return Decimal(v.str()); }

std::vector<Word> residue_sizes(const std::vector<PrimeIdealDesc>& primes) {
    std::vector<Word> qs;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (primes[i] == primes[j]) throw ParameterError(fmt::format("prime {} listed twice", primes[i].label()));
        }
        qs.push_back(primes[i].q);
    }
    return qs;
}

// prod_i prod_j (1 - q_i^{-u-j}) with every per-prime tail below `tail_tol`.
Prediction constant_factor(const std::vector<Word>& qs, int u, double tail_tol) {
    Prediction out{1, 0};
    for (Word q : qs) {
        const auto e = euler_product(q, u, tail_tol);
        out.value *= e.value;
        out.truncation_bound += e.truncation_bound;
    }
    return out;
}

}  // namespace

Prediction euler_product(Word q, int u, double tail_tol) {
    if (q < 2) throw ParameterError("residue size must be >= 2");
    check_args(u, tail_tol);
    const Decimal qd(q);
    const Decimal inv = 1 / qd;
    Decimal x = pow(inv, u + 1);  // q^{-u-j} at j = 1
    Decimal value = 1;
    // Tail after J terms: q^{-u-J} / (q - 1).
    while (true) {
        value *= 1 - x;
        const Decimal tail = x / (qd - 1);
        if (tail < Decimal(tail_tol)) return {value, tail};
        x *= inv;
    }
}

Prediction predicted_probability(const ModuleType& n, const std::vector<PrimeIdealDesc>& primes, int u, double tol) {
    check_args(u, tol);
    const auto qs = residue_sizes(primes);
    for (const auto& [prime, part] : n.components()) {
        if (std::find(primes.begin(), primes.end(), prime) == primes.end()) {
            throw ParameterError(fmt::format("prime {} of the module is not in the prime set", prime.label()));
        }
    }
    if (primes.empty()) return {1, 0};
    auto c = constant_factor(qs, u, tol / (2.0 * static_cast<double>(primes.size())));
    const Decimal prefactor = 1 / (to_decimal(count_aut_exact(n)) * pow(to_decimal(module_size_exact(n)), u));
    return {c.value * prefactor, c.truncation_bound * prefactor};
}

Rational predicted_moment(const ModuleType& n, int u) {
    if (u < 0) throw ParameterError("u must be non-negative");
    return Rational(1, boost::multiprecision::pow(module_size_exact(n), static_cast<unsigned>(u)));
}

// With c_1 >= ... >= c_E the conjugate of lambda and m_i = c_i - c_{i+1},
//   1 / |Aut(lambda)| = q^{-sum c_j^2} / prod_i phi_{m_i}(1/q),  phi_m(x) = prod_{k<=m} (1 - x^k),
// and |lambda| = sum c_j, so the box sum is a product-form DP over the columns.
Decimal local_weight_sum(Word q, int u, int cap_exponent, int cap_parts) {
    if (q < 2) throw ParameterError("residue size must be >= 2");
    if (u < 0 || cap_exponent < 0 || cap_parts < 0) throw ParameterError("caps and u must be non-negative");
    const int L = cap_parts, E = cap_exponent;
    if (E == 0 || L == 0) return 1;
    const Decimal inv = 1 / Decimal(q);
    std::vector<Decimal> inv_phi(static_cast<std::size_t>(L) + 1);
    Decimal phi = 1, xk = 1;
    inv_phi[0] = 1;
    for (int m = 1; m <= L; ++m) {
        xk *= inv;
        phi *= 1 - xk;
        inv_phi[static_cast<std::size_t>(m)] = 1 / phi;
    }
    std::vector<Decimal> column(static_cast<std::size_t>(L) + 1);
    for (int c = 0; c <= L; ++c) column[static_cast<std::size_t>(c)] = pow(inv, c * c + u * c);

    // f[c] = weighted sum over columns j..E with c_j = c; start past the last column with c = 0.
    std::vector<Decimal> f(static_cast<std::size_t>(L) + 1, Decimal(0));
    f[0] = 1;
    for (int j = E; j >= 1; --j) {
        std::vector<Decimal> g(static_cast<std::size_t>(L) + 1, Decimal(0));
        for (int c = 0; c <= L; ++c) {
            Decimal acc = 0;
            for (int prev = 0; prev <= c; ++prev) acc += f[static_cast<std::size_t>(prev)] * inv_phi[static_cast<std::size_t>(c - prev)];
            g[static_cast<std::size_t>(c)] = acc * column[static_cast<std::size_t>(c)];
        }
        f = std::move(g);
    }
    Decimal total = 0;
    for (const auto& v : f) total += v;
    return total;
}

Prediction partial_sum(const std::vector<PrimeIdealDesc>& primes, int u, int cap_exponent, int cap_parts, double tol) {
    check_args(u, tol);
    if (cap_exponent < 0 || cap_parts < 0) throw ParameterError("caps must be non-negative");
    const auto qs = residue_sizes(primes);
    if (qs.empty()) return {1, 0};
    Decimal sums = 1;
    for (Word q : qs) sums *= local_weight_sum(q, u, cap_exponent, cap_parts);
    // The full sum over all partitions is 1 / prod_j (1 - q^{-u-j}); bounding by
    // it rather than by `sums` keeps the truncation independent of the caps.
    double scale = 1;
    for (Word q : qs) {
        const auto coarse = euler_product(q, u, 1e-3);
        scale /= (coarse.value - coarse.truncation_bound).convert_to<double>();
    }
    const auto c = constant_factor(qs, u, tol / (2.0 * static_cast<double>(qs.size()) * scale));
    return {c.value * sums, c.truncation_bound * sums};
}

}  // namespace cokernel
