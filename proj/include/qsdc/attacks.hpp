#pragma once

// The four eavesdropping attacks on the DL04 two-way protocol, built from the
// photonic gate algebra. Message mode yields the exact joint distribution
// p_jmk over (Alice's encoded bit j, Bob's decoded bit m, Eve's decoded bit
// k) as a function of Bob's Z-basis probability p and Alice's encode-0
// probability q; control mode yields each attack's detection probability.
//
//   E1 - ancilla-routing attack: a beam-splitter/swap circuit Q entangles the
//        travel photon with two ancilla modes on the way in and is undone on
//        the way out.
//   E2 - symmetrized variant of E1: with probability 1/2 an extra unitary S
//        follows the return circuit, symmetrizing the induced error pattern.
//   E3 - beam-splitter routing attack: a different circuit Q' that decodes
//        Alice's bit perfectly while causing no error (zero QBER).
//   E4 - intercept-resend: Eve measures the photon on both legs in a random
//        shared basis and resends her outcome.

#include <stdexcept>
#include <variant>

#include "qsdc/photonic_state.hpp"

namespace qsdc {

enum class AttackKind : std::uint8_t { E1, E2, E3, E4 };

/// Bob's four preparation states: |0>,|1> (Z basis) and |+>,|-> (X basis).
enum class PreparedState : std::uint8_t { Zero, One, Plus, Minus };

/// The basis a preparation state lives in.
Basis prep_basis(PreparedState prep);

/// The bit value of the preparation inside its own basis (|0>,|+> -> 0).
int prep_bit(PreparedState prep);

/// |prep>_t |vac>_x |0>_y — the composite state entering the channel. Z-basis
/// preparations are basis kets; X-basis ones are Hadamard superpositions.
TriModeState protocol_initial_state(PreparedState prep);

/// Eve's insertion circuit Q = SWAP_tx . CPBS . H_y and its inverse.
TriModeState q_forward(const TriModeState& s);
TriModeState q_backward(const TriModeState& s);

/// The symmetrizing unitary S = X_t . Z_t . CNOT_ty . X_t (rightmost first).
TriModeState s_ty(const TriModeState& s);

/// The routing circuit Q' = CNOT_ty . CNOT_tx . PBS_xy . CNOT_ty . CNOT_tx .
/// (H_x ⊗ H_y) and its inverse (same gates, reversed order).
TriModeState q_prime_forward(const TriModeState& s);
TriModeState q_prime_backward(const TriModeState& s);

/// Alice's encoding: identity for j=0, iY (=ZX) on the travel mode for j=1.
TriModeState encode_bit(const TriModeState& s, int j);

/// Probability table over Bob's decode m and Eve's decode k for one
/// (preparation, encoded bit) cell of the intercept-resend attack, averaged
/// over Eve's basis coin.
struct InterceptResendOutcome {
  double prob[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [m][k]
};

/// Same table for one fixed choice of Eve's measurement basis.
InterceptResendOutcome intercept_resend_outcome(PreparedState prep, int j,
                                                Basis eve_basis);

/// Eve's decode in the intercept-resend attack: 1 iff her two leg
/// measurements disagree.
int intercept_resend_decode(int first_outcome, int second_outcome);

/// Final composite state after Eve's two-leg attack in message mode, before
/// Bob's measurement. `branch` selects E2's mixture component: 0 = plain
/// return circuit, 1 = S-augmented return circuit (E2 only; other attacks
/// reject branch != 0). Not defined for E4 (see run_message_mode).
TriModeState final_message_state(AttackKind attack, PreparedState prep, int j,
                                 int branch = 0);

/// Unified message-mode entry point: the final pre-measurement state for the
/// coherent attacks (E2 averages are handled by the caller via `branch`), or
/// the (m,k) outcome distribution for intercept-resend.
std::variant<TriModeState, InterceptResendOutcome> run_message_mode(
    AttackKind attack, PreparedState prep, int j, int branch = 0);

/// Joint probability table over (j, m, k) in {0,1}^3.
struct JointDistribution {
  double p[2][2][2] = {};

  double& at(int j, int m, int k) { return p[j][m][k]; }
  double at(int j, int m, int k) const { return p[j][m][k]; }
  double sum() const;
};

/// Eve's decode rule applied to her ancilla measurement. E1/E2: k=0 iff
/// (x,y)=(vac,pol0). E3: k=0 iff (vac,pol0), k=1 iff (pol0,vac); any other
/// pattern is impossible and throws std::logic_error (simulation bug).
int eve_decode_rule(AttackKind attack, ModeContent x, ModeContent y);

/// p_jmk aggregated from the simulated pipelines: preparations weighted
/// p/2, p/2, (1-p)/2, (1-p)/2; encoded bit weighted q, 1-q; Bob decodes m=0
/// iff his prep-basis measurement returns the prepared state. Throws
/// std::domain_error for p or q outside [0,1].
JointDistribution joint_distribution(AttackKind attack, double p, double q);

/// The same table from the closed-form expressions (algebraic reference).
JointDistribution closed_form_joint(AttackKind attack, double p, double q);

/// Message-mode error rate: sum of joint entries with j != m, computed from
/// the simulated joint. Closed forms: (1-q)(1+p)/2, (2+2p-q-3pq)/4, 0, 1/4.
double qber(AttackKind attack, double p, double q);

/// The closed-form error rate (algebraic reference).
double closed_form_qber(AttackKind attack, double p, double q);

/// Probability that Eve escapes one double control check: averaged over the
/// four preparation states (weight 1/4 each), the probability that Alice's
/// prep-basis measurement (conditioned on seeing a photon) and Bob's return
/// measurement both match the prepared state. Simulated for E1-E3 (all 5/8);
/// E4 uses its defining two independent 1/2 checks (1/4).
double control_mode_nondetection(AttackKind attack);

/// Per-control-round detection probability (1 - P_nd) / 2.
double detection_probability(AttackKind attack);

/// Outcome classes of one control round for a fixed preparation and attack
/// branch (branch as in final_message_state; E4 ignores it). The four
/// probabilities sum to 1. `no_detect` are rounds discarded because Alice's
/// detector saw no photon; `caught_by_alice` / `caught_by_bob` are rounds
/// where the first failing check is Alice's (resp. Bob's); `pass` are rounds
/// where Eve escapes both checks.
struct ControlRoundProbabilities {
  double no_detect = 0.0;
  double caught_by_alice = 0.0;
  double caught_by_bob = 0.0;
  double pass = 0.0;
};

ControlRoundProbabilities control_round_probabilities(AttackKind attack,
                                                      PreparedState prep,
                                                      int branch = 0);

/// Gate cost of mounting the attack: counts of one-, two- and three-qubit
/// gates in Eve's circuitry.
struct GateCounts {
  int n1 = 0;  // one-qubit gates
  int n2 = 0;  // two-qubit gates
  int n3 = 0;  // three-qubit gates
};

GateCounts gate_counts(AttackKind attack);

}  // namespace qsdc
