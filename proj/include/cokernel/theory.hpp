#pragma once

// Limiting cokernel distribution: probabilities, surjection moments and
// partial sums, evaluated in 50-digit decimal arithmetic with explicit
// bounds on the error from truncating the infinite products.

#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "cokernel/module_types.hpp"
#include "cokernel/sampler.hpp"

namespace cokernel {

using Decimal = boost::multiprecision::cpp_dec_float_50;

inline constexpr double kDefaultTolerance = 1e-9;

struct Prediction {
    Decimal value;
    /// Upper bound on |value - exact|.
    Decimal truncation_bound;

    double as_double() const { return value.convert_to<double>(); }
};

/// prod_{j=1}^{J} (1 - q^{-u-j}) with J the least index whose tail sum
/// sum_{j>J} q^{-u-j} is below `tail_tol`; the bound reported is that tail.
Prediction euler_product(Word q, int u, double tail_tol);

/// 1 / (|Aut N| |N|^u) * prod_i prod_j (1 - q_i^{-u-j}), tails below tol / (2k) per prime.
/// Throws ParameterError if N has a prime outside `primes`, u < 0 or tol <= 0.
Prediction predicted_probability(const ModuleType& n, const std::vector<PrimeIdealDesc>& primes, int u,
                                 double tol = kDefaultTolerance);

/// |N|^{-u}, the limiting value of E #Sur(cok M, N).
Rational predicted_moment(const ModuleType& n, int u);

/// Sum of predicted_probability over enumerate_types(primes, cap_exponent, cap_parts).
Prediction partial_sum(const std::vector<PrimeIdealDesc>& primes, int u, int cap_exponent, int cap_parts,
                       double tol = kDefaultTolerance);

/// sum over partitions lambda in the cap box of q^{-u|lambda|} / |Aut(lambda)|, exactly
/// summed in decimal arithmetic (no truncation).
Decimal local_weight_sum(Word q, int u, int cap_exponent, int cap_parts);

}  // namespace cokernel
