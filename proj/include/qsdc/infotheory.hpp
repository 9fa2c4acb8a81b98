#pragma once

// Shannon entropy and mutual information over the 2x2x2 joint distribution
// p_jmk. Everything is computed generically from the table (base-2 logs, the
// H[0]=0 limit convention), so closed-form expressions can be tested against
// these functions rather than trusted.

#include "qsdc/attacks.hpp"

namespace qsdc {

/// Axis selector for the joint table: Alice's bit j, Bob's decode m, Eve's
/// decode k.
enum class Party : std::uint8_t { Alice, Bob, Eve };

/// Which pair of parties to correlate.
enum class PairSelector : std::uint8_t { AB, AE, BE };

/// Single entropy term -x log2 x with H[0] = 0. Throws std::domain_error
/// outside [0,1] (beyond a 1e-12 rounding slack).
double shannon_term(double x);

/// Entropy of one party's marginal distribution, in bits.
double marginal_entropy(const JointDistribution& joint, Party party);

/// Entropy of the pairwise marginal over two distinct parties, in bits.
double pair_entropy(const JointDistribution& joint, Party a, Party b);

/// H(target | condition) = H(target, condition) - H(condition), in bits.
double conditional_entropy(const JointDistribution& joint, Party target,
                           Party condition);

/// I = H(first) + H(second) - H(first, second) for the selected pair, in
/// bits.
double mutual_information(const JointDistribution& joint, PairSelector pair);

}  // namespace qsdc
