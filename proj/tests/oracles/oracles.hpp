#pragma once

// Independent reference implementations used only by the tests.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cokernel/matrix.hpp"
#include "cokernel/module_types.hpp"

namespace cokernel::oracle {

enum class CountMode { hom, sur, aut };

/// Maps between explicit modules of types lambda and mu over Z/p^K or GR(p^K, f)
/// (q = p^f), counted from the generator images: a generator of order pi^e goes
/// to any element killed by pi^e. Hom multiplies the candidate counts; Sur and
/// Aut run a forward DP over the span of the images in B / pi B, whose residue
/// classes are built by coset enumeration. For aut, mu is ignored. `budget`
/// bounds the (state, residue) transitions; OracleBudgetError past it.
BigInt brute_force_count(const Partition& lambda, const Partition& mu, Word q, CountMode mode,
                         std::uint64_t budget = 200'000'000);

/// Slower cross-check: a DP over full submodules S + Rg of B, with `budget`
/// bounding (state, candidate) scans.
BigInt submodule_dp_count(const Partition& lambda, const Partition& mu, Word q, CountMode mode,
                          std::uint64_t budget = 10'000'000);

/// Diagonal of the Smith normal form over Z (min(rows, cols) entries, each
/// dividing the next, zeros last). Requires dimensions <= 8 and |entries| <= 10^6.
std::vector<BigInt> integer_snf_oracle(const Matrix<std::int64_t>& m);

/// v_p(d) for d != 0.
int p_adic_valuation(const BigInt& d, Word p);

}  // namespace cokernel::oracle
