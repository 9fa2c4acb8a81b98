#include "qsdc/attacks.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qsdc {

namespace {

constexpr std::array<PreparedState, 4> kPreparations = {
    PreparedState::Zero, PreparedState::One, PreparedState::Plus,
    PreparedState::Minus};

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

void check_branch(AttackKind attack, int branch) {
  const bool ok = branch == 0 || (branch == 1 && attack == AttackKind::E2);
  if (!ok) {
    throw std::invalid_argument(
        "branch must be 0, or 1 for the symmetrized attack");
  }
}

/// Preparation weights (p/2, p/2, (1-p)/2, (1-p)/2).
std::array<double, 4> preparation_weights(double p) {
  return {p / 2.0, p / 2.0, (1.0 - p) / 2.0, (1.0 - p) / 2.0};
}

/// Eve's return-leg circuit for one mixture branch.
TriModeState return_circuit(AttackKind attack, const TriModeState& s,
                            int branch) {
  switch (attack) {
    case AttackKind::E1:
      return q_backward(s);
    case AttackKind::E2:
      return branch == 0 ? q_backward(s) : s_ty(q_backward(s));
    case AttackKind::E3:
      return q_prime_backward(s);
    case AttackKind::E4:
      break;
  }
  throw std::invalid_argument("no coherent return circuit for this attack");
}

/// Eve's insertion circuit on the way from Bob to Alice.
TriModeState insertion_circuit(AttackKind attack, const TriModeState& s) {
  return attack == AttackKind::E3 ? q_prime_forward(s) : q_forward(s);
}

/// Bob's decoded bit: 0 iff the prep-basis outcome equals the preparation.
int bob_decode(PreparedState prep, int outcome_bit) {
  return outcome_bit == prep_bit(prep) ? 0 : 1;
}

InterceptResendOutcome averaged_intercept_resend(PreparedState prep, int j) {
  InterceptResendOutcome avg;
  for (Basis basis : {Basis::Z, Basis::X}) {
    const InterceptResendOutcome one = intercept_resend_outcome(prep, j, basis);
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) avg.prob[m][k] += 0.5 * one.prob[m][k];
    }
  }
  return avg;
}

/// (m, k) distribution of one (prep, j, branch) cell for the coherent
/// attacks: Eve measures her ancilla modes, Bob measures the travel photon
/// in his preparation basis.
std::array<std::array<double, 2>, 2> coherent_cell_distribution(
    AttackKind attack, PreparedState prep, int j, int branch) {
  std::array<std::array<double, 2>, 2> cell{};
  const TriModeState final_state = final_message_state(attack, prep, j, branch);
  for (const AncillaOutcome& ancilla : measure_occupancy_pair(final_state)) {
    const int k = eve_decode_rule(attack, ancilla.x, ancilla.y);
    for (const MeasurementOutcome& bob : measure_polarization(
             ancilla.collapsed, Mode::Travel, prep_basis(prep))) {
      if (!bob.detected) {
        throw std::logic_error(
            "travel photon missing in a message-mode final state");
      }
      cell[bob_decode(prep, bob.bit)][k] +=
          ancilla.probability * bob.probability;
    }
  }
  return cell;
}

}  // namespace

Basis prep_basis(PreparedState prep) {
  return (prep == PreparedState::Zero || prep == PreparedState::One) ? Basis::Z
                                                                     : Basis::X;
}

int prep_bit(PreparedState prep) {
  return (prep == PreparedState::Zero || prep == PreparedState::Plus) ? 0 : 1;
}

TriModeState protocol_initial_state(PreparedState prep) {
  TriModeState s =
      basis_state(prep_bit(prep) == 0 ? ModeContent::Pol0 : ModeContent::Pol1,
                  ModeContent::Vac, ModeContent::Pol0);
  if (prep_basis(prep) == Basis::X) s = apply_hadamard(s, Mode::Travel);
  return s;
}

TriModeState q_forward(const TriModeState& s) {
  return apply_swap_tx(apply_cpbs(apply_hadamard(s, Mode::AncillaY)));
}

TriModeState q_backward(const TriModeState& s) {
  return apply_hadamard(apply_cpbs(apply_swap_tx(s)), Mode::AncillaY);
}

TriModeState s_ty(const TriModeState& s) {
  TriModeState out = apply_pauli(s, Pauli::X, Mode::Travel);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaY);
  out = apply_pauli(out, Pauli::Z, Mode::Travel);
  return apply_pauli(out, Pauli::X, Mode::Travel);
}

TriModeState q_prime_forward(const TriModeState& s) {
  TriModeState out = apply_hadamard(s, Mode::AncillaX);
  out = apply_hadamard(out, Mode::AncillaY);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaX);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaY);
  out = apply_pbs_xy(out);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaX);
  return apply_cnot(out, Mode::Travel, Mode::AncillaY);
}

TriModeState q_prime_backward(const TriModeState& s) {
  TriModeState out = apply_cnot(s, Mode::Travel, Mode::AncillaY);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaX);
  out = apply_pbs_xy(out);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaY);
  out = apply_cnot(out, Mode::Travel, Mode::AncillaX);
  out = apply_hadamard(out, Mode::AncillaX);
  return apply_hadamard(out, Mode::AncillaY);
}

TriModeState encode_bit(const TriModeState& s, int j) {
  if (j != 0 && j != 1) {
    throw std::invalid_argument("encoded bit must be 0 or 1");
  }
  return j == 0 ? s : apply_pauli(s, Pauli::iY, Mode::Travel);
}

InterceptResendOutcome intercept_resend_outcome(PreparedState prep, int j,
                                                Basis eve_basis) {
  InterceptResendOutcome out;
  const TriModeState initial = protocol_initial_state(prep);
  for (const MeasurementOutcome& leg1 :
       measure_polarization(initial, Mode::Travel, eve_basis)) {
    const TriModeState encoded = encode_bit(leg1.collapsed, j);
    for (const MeasurementOutcome& leg2 :
         measure_polarization(encoded, Mode::Travel, eve_basis)) {
      const int k = intercept_resend_decode(leg1.bit, leg2.bit);
      for (const MeasurementOutcome& bob : measure_polarization(
               leg2.collapsed, Mode::Travel, prep_basis(prep))) {
        if (!leg1.detected || !leg2.detected || !bob.detected) {
          throw std::logic_error(
              "travel photon missing in an intercept-resend leg");
        }
        out.prob[bob_decode(prep, bob.bit)][k] +=
            leg1.probability * leg2.probability * bob.probability;
      }
    }
  }
  return out;
}

int intercept_resend_decode(int first_outcome, int second_outcome) {
  return first_outcome != second_outcome ? 1 : 0;
}

TriModeState final_message_state(AttackKind attack, PreparedState prep, int j,
                                 int branch) {
  if (attack == AttackKind::E4) {
    throw std::invalid_argument(
        "intercept-resend has no coherent final state; use run_message_mode");
  }
  check_branch(attack, branch);
  const TriModeState inserted =
      insertion_circuit(attack, protocol_initial_state(prep));
  return return_circuit(attack, encode_bit(inserted, j), branch);
}

std::variant<TriModeState, InterceptResendOutcome> run_message_mode(
    AttackKind attack, PreparedState prep, int j, int branch) {
  if (attack == AttackKind::E4) {
    check_branch(attack, branch);
    return averaged_intercept_resend(prep, j);
  }
  return final_message_state(attack, prep, j, branch);
}

double JointDistribution::sum() const {
  double total = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) total += p[j][m][k];
    }
  }
  return total;
}

int eve_decode_rule(AttackKind attack, ModeContent x, ModeContent y) {
  switch (attack) {
    case AttackKind::E1:
    case AttackKind::E2:
      return (x == ModeContent::Vac && y == ModeContent::Pol0) ? 0 : 1;
    case AttackKind::E3:
      if (x == ModeContent::Vac && y == ModeContent::Pol0) return 0;
      if (x == ModeContent::Pol0 && y == ModeContent::Vac) return 1;
      throw std::logic_error(
          "unreachable ancilla pattern in the routing attack");
    case AttackKind::E4:
      break;
  }
  throw std::invalid_argument(
      "intercept-resend decodes by comparing leg outcomes");
}

JointDistribution joint_distribution(AttackKind attack, double p, double q) {
  check_unit_interval(p, "p");
  check_unit_interval(q, "q");
  const std::array<double, 4> prep_weights = preparation_weights(p);
  const std::array<double, 2> bit_weights = {q, 1.0 - q};

  JointDistribution joint;
  for (int pi = 0; pi < 4; ++pi) {
    const PreparedState prep = kPreparations[pi];
    for (int j = 0; j < 2; ++j) {
      const double w = prep_weights[pi] * bit_weights[j];
      if (attack == AttackKind::E4) {
        const InterceptResendOutcome cell = averaged_intercept_resend(prep, j);
        for (int m = 0; m < 2; ++m) {
          for (int k = 0; k < 2; ++k) joint.at(j, m, k) += w * cell.prob[m][k];
        }
        continue;
      }
      const int branch_count = attack == AttackKind::E2 ? 2 : 1;
      for (int branch = 0; branch < branch_count; ++branch) {
        const auto cell = coherent_cell_distribution(attack, prep, j, branch);
        const double wb = w / branch_count;
        for (int m = 0; m < 2; ++m) {
          for (int k = 0; k < 2; ++k) joint.at(j, m, k) += wb * cell[m][k];
        }
      }
    }
  }
  return joint;
}

JointDistribution closed_form_joint(AttackKind attack, double p, double q) {
  check_unit_interval(p, "p");
  check_unit_interval(q, "q");
  JointDistribution joint;
  switch (attack) {
    case AttackKind::E1:
      joint.at(0, 0, 0) = q;
      joint.at(1, 0, 0) = (1.0 - q) / 4.0;
      joint.at(1, 0, 1) = (1.0 - q) * (0.25 + 0.5 * p);
      joint.at(1, 1, 1) = 0.5 * (1.0 - p) * (1.0 - q);
      break;
    case AttackKind::E2:
      joint.at(0, 0, 0) = q * (5.0 + p) / 8.0;
      joint.at(0, 0, 1) = q * (1.0 + p) / 8.0;
      joint.at(0, 1, 0) = q * (1.0 - p) / 8.0;
      joint.at(0, 1, 1) = q * (1.0 - p) / 8.0;
      joint.at(1, 0, 0) = (1.0 - q) / 4.0;
      joint.at(1, 0, 1) = (1.0 - q) * (1.0 + 2.0 * p) / 4.0;
      joint.at(1, 1, 1) = 0.5 * (1.0 - p) * (1.0 - q);
      break;
    case AttackKind::E3:
      joint.at(0, 0, 0) = q;
      joint.at(1, 1, 1) = 1.0 - q;
      break;
    case AttackKind::E4:
      joint.at(0, 0, 0) = 0.75 * q;
      joint.at(0, 1, 0) = 0.25 * q;
      joint.at(1, 0, 1) = 0.25 * (1.0 - q);
      joint.at(1, 1, 1) = 0.75 * (1.0 - q);
      break;
  }
  return joint;
}

double qber(AttackKind attack, double p, double q) {
  const JointDistribution joint = joint_distribution(attack, p, q);
  return joint.at(0, 1, 0) + joint.at(0, 1, 1) + joint.at(1, 0, 0) +
         joint.at(1, 0, 1);
}

double closed_form_qber(AttackKind attack, double p, double q) {
  check_unit_interval(p, "p");
  check_unit_interval(q, "q");
  switch (attack) {
    case AttackKind::E1:
      return (1.0 - q) * (1.0 + p) / 2.0;
    case AttackKind::E2:
      return (2.0 + 2.0 * p - q - 3.0 * p * q) / 4.0;
    case AttackKind::E3:
      return 0.0;
    case AttackKind::E4:
      return 0.25;
  }
  throw std::invalid_argument("unknown attack");
}

ControlRoundProbabilities control_round_probabilities(AttackKind attack,
                                                      PreparedState prep,
                                                      int branch) {
  if (attack == AttackKind::E4) {
    // Defining model: Eve's interference trips each of the two checks
    // independently with probability 1/2; the photon itself always arrives.
    ControlRoundProbabilities probs;
    probs.no_detect = 0.0;
    probs.caught_by_alice = 0.5;
    probs.caught_by_bob = 0.25;
    probs.pass = 0.25;
    return probs;
  }
  check_branch(attack, branch);

  ControlRoundProbabilities probs;
  const Basis basis = prep_basis(prep);
  const int expected = prep_bit(prep);
  const TriModeState arrived =
      insertion_circuit(attack, protocol_initial_state(prep));
  for (const MeasurementOutcome& alice :
       measure_polarization(arrived, Mode::Travel, basis)) {
    if (!alice.detected) {
      probs.no_detect += alice.probability;
      continue;
    }
    const bool alice_ok = alice.bit == expected;
    // Alice resends her observed photon; the ancilla modes decohere in the
    // occupancy/polarization basis before the return circuit acts.
    for (const AncillaOutcome& ancilla :
         measure_occupancy_pair(alice.collapsed)) {
      const TriModeState returned =
          return_circuit(attack, ancilla.collapsed, branch);
      for (const MeasurementOutcome& bob :
           measure_polarization(returned, Mode::Travel, basis)) {
        if (!bob.detected) {
          throw std::logic_error(
              "travel photon missing in a control-mode return");
        }
        const double w =
            alice.probability * ancilla.probability * bob.probability;
        if (!alice_ok) {
          probs.caught_by_alice += w;
        } else if (bob.bit != expected) {
          probs.caught_by_bob += w;
        } else {
          probs.pass += w;
        }
      }
    }
  }
  return probs;
}

double control_mode_nondetection(AttackKind attack) {
  static const std::array<double, 4> cache = [] {
    std::array<double, 4> values{};
    for (AttackKind attack : {AttackKind::E1, AttackKind::E2, AttackKind::E3,
                              AttackKind::E4}) {
      double sum = 0.0;
      for (PreparedState prep : kPreparations) {
        const int branch_count = attack == AttackKind::E2 ? 2 : 1;
        double pass = 0.0;
        double detected = 0.0;
        for (int branch = 0; branch < branch_count; ++branch) {
          const ControlRoundProbabilities probs =
              control_round_probabilities(attack, prep, branch);
          pass += probs.pass / branch_count;
          detected += (1.0 - probs.no_detect) / branch_count;
        }
        sum += 0.25 * pass / detected;
      }
      values[static_cast<int>(attack)] = sum;
    }
    return values;
  }();
  return cache[static_cast<int>(attack)];
}

double detection_probability(AttackKind attack) {
  return (1.0 - control_mode_nondetection(attack)) / 2.0;
}

GateCounts gate_counts(AttackKind attack) {
  switch (attack) {
    case AttackKind::E1:
      return {1, 1, 1};
    case AttackKind::E2:
      return {4, 2, 1};
    case AttackKind::E3:
      return {2, 5, 0};
    case AttackKind::E4:
      return {2, 0, 0};
  }
  throw std::invalid_argument("unknown attack");
}

}  // namespace qsdc
