#include "qsdc/payoff.hpp"

#include <cmath>
#include <stdexcept>

namespace qsdc {

PayoffWeights default_weights() { return PayoffWeights{}; }

void validate_weights(const PayoffWeights& w) {
  const double all[] = {w.w_a, w.w_b, w.w_c, w.w_d, w.w_e, w.w_f,
                        w.w_g, w.w_h, w.w_i, w.w_j, w.w_k};
  for (double v : all) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("payoff weights must be non-negative");
    }
  }
  constexpr double kSumTolerance = 1e-12;
  if (std::abs(w.w_a + w.w_b + w.w_c + w.w_d - 1.0) > kSumTolerance) {
    throw std::invalid_argument("w_a + w_b + w_c + w_d must equal 1");
  }
  if (std::abs(w.w_e + w.w_f + w.w_g + w.w_h + w.w_i + w.w_j + w.w_k - 1.0) >
      kSumTolerance) {
    throw std::invalid_argument("w_e + ... + w_k must equal 1");
  }
}

PayoffVector payoff_general(AttackKind attack, double p, double q,
                            const PayoffWeights& weights) {
  validate_weights(weights);
  // The closed-form joint is an exact algebraic image of the simulated
  // pipelines (they agree to rounding; the tests enforce it), and is far
  // cheaper inside equilibrium scans.
  const JointDistribution joint = closed_form_joint(attack, p, q);
  const double iab = mutual_information(joint, PairSelector::AB);
  const double iae = mutual_information(joint, PairSelector::AE);
  const double ibe = mutual_information(joint, PairSelector::BE);
  const double exposure =
      (detection_probability(attack) + closed_form_qber(attack, p, q)) / 2.0;
  const GateCounts gates = gate_counts(attack);

  PayoffVector out;
  out.alice = weights.w_a * iab - weights.w_b * iae - weights.w_c * ibe +
              weights.w_d * exposure;
  out.bob = weights.w_a * iab - weights.w_c * iae - weights.w_b * ibe +
            weights.w_d * exposure;
  out.eve = -weights.w_e * iab + weights.w_f * iae + weights.w_g * ibe +
            weights.w_h * (1.0 - exposure) - weights.w_i * gates.n1 -
            weights.w_j * gates.n2 - weights.w_k * gates.n3;
  return out;
}

PayoffVector payoff_default(AttackKind attack, double p, double q) {
  return payoff_general(attack, p, q, default_weights());
}

}  // namespace qsdc
