#pragma once

// Three-party payoff evaluation. Each party weighs the three mutual
// informations plus a detection-related term; Eve additionally pays for the
// gates her attack needs. The default weights make all information and
// detection components count equally (0.25) and drop the gate costs, which
// collapses the three payoffs onto two exact identities: alice == bob and
// alice + eve == 0.25.

#include "qsdc/attacks.hpp"
#include "qsdc/infotheory.hpp"

namespace qsdc {

/// Component weights. w_a..w_d belong to Alice/Bob (mutual informations and
/// the detection term) and must sum to 1; w_e..w_k belong to Eve (mutual
/// informations, staying undetected, and the three gate-count penalties) and
/// must sum to 1.
struct PayoffWeights {
  double w_a = 0.25;  // + I(A,B) for Alice/Bob
  double w_b = 0.25;  // - I(A,E) for Alice (swapped with w_c for Bob)
  double w_c = 0.25;  // - I(B,E) for Alice (swapped with w_b for Bob)
  double w_d = 0.25;  // + (P_d + QBER)/2, the abort/exposure term
  double w_e = 0.25;  // - I(A,B) for Eve
  double w_f = 0.25;  // + I(A,E) for Eve
  double w_g = 0.25;  // + I(B,E) for Eve
  double w_h = 0.25;  // + 1 - (P_d + QBER)/2, staying undetected
  double w_i = 0.0;   // - n1 one-qubit gate penalty
  double w_j = 0.0;   // - n2 two-qubit gate penalty
  double w_k = 0.0;   // - n3 three-qubit gate penalty
};

/// The equal-weights configuration used throughout the default analysis.
PayoffWeights default_weights();

/// Throws std::invalid_argument unless weights are non-negative with
/// w_a+..+w_d == 1 and w_e+..+w_k == 1 within 1e-12.
void validate_weights(const PayoffWeights& w);

struct PayoffVector {
  double alice = 0.0;
  double bob = 0.0;
  double eve = 0.0;
};

/// General weighted payoffs at (attack, p, q):
///   P_A = w_a I(A,B) - w_b I(A,E) - w_c I(B,E) + w_d (P_d + QBER)/2
///   P_B = w_a I(A,B) - w_c I(A,E) - w_b I(B,E) + w_d (P_d + QBER)/2
///   P_E = -w_e I(A,B) + w_f I(A,E) + w_g I(B,E)
///         + w_h (1 - (P_d + QBER)/2) - w_i n1 - w_j n2 - w_k n3
/// Mutual informations come from the attack's joint distribution at (p,q),
/// P_d from detection_probability, QBER from the closed form, and n1..n3
/// from gate_counts. Throws on invalid weights or p,q outside [0,1].
PayoffVector payoff_general(AttackKind attack, double p, double q,
                            const PayoffWeights& weights);

/// payoff_general with default_weights(); satisfies alice == bob and
/// alice + eve == 0.25 identically.
PayoffVector payoff_default(AttackKind attack, double p, double q);

}  // namespace qsdc
