#include <doctest.h>

#include <array>
#include <cmath>
#include <variant>

#include "qsdc/attacks.hpp"
#include "worked_states.hpp"

namespace {

using namespace qsdc;

constexpr double kTol = 1e-12;

constexpr std::array<AttackKind, 4> kAttacks = {AttackKind::E1, AttackKind::E2,
                                                AttackKind::E3, AttackKind::E4};
constexpr std::array<PreparedState, 4> kPreps = {
    PreparedState::Zero, PreparedState::One, PreparedState::Plus,
    PreparedState::Minus};
constexpr std::array<double, 5> kGrid = {0.0, 0.25, 0.5, 0.75, 1.0};

// Independent algebraic reference for the joint distribution, written out
// directly from the per-attack error/leak pattern.
JointDistribution reference_joint(AttackKind attack, double p, double q) {
  JointDistribution d;
  switch (attack) {
    case AttackKind::E1:
      d.at(0, 0, 0) = q;
      d.at(1, 0, 0) = (1.0 - q) / 4.0;
      d.at(1, 0, 1) = (1.0 - q) * (0.25 + p / 2.0);
      d.at(1, 1, 1) = (1.0 - p) * (1.0 - q) / 2.0;
      break;
    case AttackKind::E2:
      d.at(0, 0, 0) = q * (5.0 + p) / 8.0;
      d.at(0, 0, 1) = q * (1.0 + p) / 8.0;
      d.at(0, 1, 0) = q * (1.0 - p) / 8.0;
      d.at(0, 1, 1) = q * (1.0 - p) / 8.0;
      d.at(1, 0, 0) = (1.0 - q) / 4.0;
      d.at(1, 0, 1) = (1.0 - q) * (1.0 + 2.0 * p) / 4.0;
      d.at(1, 1, 1) = (1.0 - p) * (1.0 - q) / 2.0;
      break;
    case AttackKind::E3:
      d.at(0, 0, 0) = q;
      d.at(1, 1, 1) = 1.0 - q;
      break;
    case AttackKind::E4:
      d.at(0, 0, 0) = 3.0 * q / 4.0;
      d.at(0, 1, 0) = q / 4.0;
      d.at(1, 0, 1) = (1.0 - q) / 4.0;
      d.at(1, 1, 1) = 3.0 * (1.0 - q) / 4.0;
      break;
  }
  return d;
}

double reference_qber(AttackKind attack, double p, double q) {
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
  return -1.0;
}

void check_joint_close(const JointDistribution& a, const JointDistribution& b,
                       double tol) {
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        CAPTURE(j);
        CAPTURE(m);
        CAPTURE(k);
        CHECK(std::abs(a.at(j, m, k) - b.at(j, m, k)) < tol);
      }
    }
  }
}

}  // namespace

TEST_CASE("every worked state matches the simulated pipeline exactly") {
  for (const auto& w : qsdc_testing::all_worked_states()) {
    CAPTURE(w.label);
    CHECK(approx_equal(w.actual, w.expected, kTol));
    CHECK(approx_equal_up_to_phase(w.actual, w.expected, 1e-9));
  }
}

TEST_CASE("insertion circuits invert exactly on every basis ket") {
  for (int i = 0; i < kDim; ++i) {
    const auto c = ket_contents(i);
    const auto ket = basis_state(c[0], c[1], c[2]);
    CAPTURE(i);
    CHECK(approx_equal(q_backward(q_forward(ket)), ket, kTol));
    CHECK(approx_equal(q_forward(q_backward(ket)), ket, kTol));
    CHECK(approx_equal(q_prime_backward(q_prime_forward(ket)), ket, kTol));
    CHECK(approx_equal(q_prime_forward(q_prime_backward(ket)), ket, kTol));
    CHECK(approx_equal(s_ty(s_ty(ket)), ket, kTol));
  }
}

TEST_CASE("preparation metadata is consistent") {
  CHECK(prep_basis(PreparedState::Zero) == Basis::Z);
  CHECK(prep_basis(PreparedState::One) == Basis::Z);
  CHECK(prep_basis(PreparedState::Plus) == Basis::X);
  CHECK(prep_basis(PreparedState::Minus) == Basis::X);
  CHECK(prep_bit(PreparedState::Zero) == 0);
  CHECK(prep_bit(PreparedState::One) == 1);
  CHECK(prep_bit(PreparedState::Plus) == 0);
  CHECK(prep_bit(PreparedState::Minus) == 1);
  for (const auto prep : kPreps) {
    const auto s = protocol_initial_state(prep);
    CHECK(std::abs(norm(s) - 1.0) < kTol);
    // Ancilla modes start as |vac>_x |0>_y.
    const auto outcomes = measure_occupancy_pair(s);
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].x == ModeContent::Vac);
    CHECK(outcomes[0].y == ModeContent::Pol0);
  }
}

TEST_CASE("encoding applies the bit-flip-with-phase only for j=1") {
  const auto s = protocol_initial_state(PreparedState::Zero);
  CHECK(approx_equal(encode_bit(s, 0), s, kTol));
  auto expect = basis_state(ModeContent::Pol1, ModeContent::Vac,
                            ModeContent::Pol0);
  expect[ket_index(ModeContent::Pol1, ModeContent::Vac, ModeContent::Pol0)] =
      Amplitude(-1.0);
  CHECK(approx_equal(encode_bit(s, 1), expect, kTol));
  CHECK_THROWS_AS(encode_bit(s, 2), std::invalid_argument);
  CHECK_THROWS_AS(encode_bit(s, -1), std::invalid_argument);
}

TEST_CASE("simulated joint equals the closed form on a parameter grid") {
  for (const auto attack : kAttacks) {
    for (const double p : kGrid) {
      for (const double q : kGrid) {
        CAPTURE(static_cast<int>(attack));
        CAPTURE(p);
        CAPTURE(q);
        const auto simulated = joint_distribution(attack, p, q);
        const auto closed = closed_form_joint(attack, p, q);
        check_joint_close(simulated, closed, kTol);
        check_joint_close(closed, reference_joint(attack, p, q), kTol);
        CHECK(std::abs(simulated.sum() - 1.0) < kTol);
      }
    }
  }
}

TEST_CASE("simulated error rate equals the closed form on the grid") {
  for (const auto attack : kAttacks) {
    for (const double p : kGrid) {
      for (const double q : kGrid) {
        CAPTURE(static_cast<int>(attack));
        CAPTURE(p);
        CAPTURE(q);
        CHECK(std::abs(qber(attack, p, q) - closed_form_qber(attack, p, q)) <
              kTol);
        CHECK(std::abs(closed_form_qber(attack, p, q) -
                       reference_qber(attack, p, q)) < kTol);
      }
    }
  }
}

TEST_CASE("parameters outside the unit interval are rejected") {
  CHECK_THROWS_AS(joint_distribution(AttackKind::E1, -0.1, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(joint_distribution(AttackKind::E1, 0.5, 1.1),
                  std::domain_error);
  CHECK_THROWS_AS(qber(AttackKind::E2, 2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(closed_form_joint(AttackKind::E3, 0.5, -1e-9),
                  std::domain_error);
  CHECK_THROWS_AS(closed_form_qber(AttackKind::E4, std::nan(""), 0.5),
                  std::domain_error);
}

TEST_CASE("mixture branches are restricted to the symmetrized attack") {
  CHECK_THROWS_AS(
      final_message_state(AttackKind::E1, PreparedState::Zero, 0, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      final_message_state(AttackKind::E3, PreparedState::Zero, 0, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      final_message_state(AttackKind::E4, PreparedState::Zero, 0, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      final_message_state(AttackKind::E2, PreparedState::Zero, 0, 2),
      std::invalid_argument);
  CHECK_NOTHROW(final_message_state(AttackKind::E2, PreparedState::Zero, 0, 1));
}

TEST_CASE("unified message-mode entry point dispatches by attack") {
  const auto coherent =
      run_message_mode(AttackKind::E1, PreparedState::Plus, 1);
  CHECK(std::holds_alternative<TriModeState>(coherent));
  const auto sampled = run_message_mode(AttackKind::E4, PreparedState::Plus, 1);
  REQUIRE(std::holds_alternative<InterceptResendOutcome>(sampled));
  const auto& table = std::get<InterceptResendOutcome>(sampled);
  double total = 0.0;
  for (int m = 0; m < 2; ++m) {
    for (int k = 0; k < 2; ++k) total += table.prob[m][k];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(kTol));
}

TEST_CASE("ancilla decode rule matches each attack's detector layout") {
  using MC = ModeContent;
  CHECK(eve_decode_rule(AttackKind::E1, MC::Vac, MC::Pol0) == 0);
  CHECK(eve_decode_rule(AttackKind::E1, MC::Vac, MC::Pol1) == 1);
  CHECK(eve_decode_rule(AttackKind::E1, MC::Pol1, MC::Vac) == 1);
  CHECK(eve_decode_rule(AttackKind::E2, MC::Vac, MC::Pol0) == 0);
  CHECK(eve_decode_rule(AttackKind::E2, MC::Pol0, MC::Vac) == 1);
  CHECK(eve_decode_rule(AttackKind::E3, MC::Vac, MC::Pol0) == 0);
  CHECK(eve_decode_rule(AttackKind::E3, MC::Pol0, MC::Vac) == 1);
  CHECK_THROWS_AS(eve_decode_rule(AttackKind::E3, MC::Pol1, MC::Vac),
                  std::logic_error);
  CHECK_THROWS_AS(eve_decode_rule(AttackKind::E3, MC::Vac, MC::Vac),
                  std::logic_error);
  CHECK_THROWS_AS(eve_decode_rule(AttackKind::E4, MC::Vac, MC::Pol0),
                  std::invalid_argument);
}

TEST_CASE("intercept-resend legs reproduce the two-bit comparison decode") {
  CHECK(intercept_resend_decode(0, 0) == 0);
  CHECK(intercept_resend_decode(1, 1) == 0);
  CHECK(intercept_resend_decode(0, 1) == 1);
  CHECK(intercept_resend_decode(1, 0) == 1);

  // Matching-basis interception is transparent: j=0 never disturbs.
  const auto same = intercept_resend_outcome(PreparedState::Zero, 0, Basis::Z);
  CHECK(same.prob[0][0] == doctest::Approx(1.0).epsilon(kTol));

  // Cross-basis interception randomizes Bob's bit but not Eve's comparison.
  const auto cross = intercept_resend_outcome(PreparedState::Zero, 0, Basis::X);
  CHECK(cross.prob[0][0] == doctest::Approx(0.5).epsilon(kTol));
  CHECK(cross.prob[1][0] == doctest::Approx(0.5).epsilon(kTol));
  CHECK(cross.prob[0][1] == doctest::Approx(0.0).epsilon(kTol));

  // j=1 flips Eve's second outcome in both bases: she always decodes 1.
  for (const auto basis : {Basis::Z, Basis::X}) {
    const auto flipped =
        intercept_resend_outcome(PreparedState::Zero, 1, basis);
    CHECK(flipped.prob[0][0] + flipped.prob[1][0] ==
          doctest::Approx(0.0).epsilon(kTol));
  }
}

TEST_CASE("control rounds partition into the four outcome classes") {
  for (const auto attack : kAttacks) {
    const int branches = attack == AttackKind::E2 ? 2 : 1;
    for (const auto prep : kPreps) {
      for (int b = 0; b < branches; ++b) {
        CAPTURE(static_cast<int>(attack));
        CAPTURE(static_cast<int>(prep));
        CAPTURE(b);
        const auto r = control_round_probabilities(attack, prep, b);
        CHECK(r.no_detect >= 0.0);
        CHECK(r.caught_by_alice >= 0.0);
        CHECK(r.caught_by_bob >= 0.0);
        CHECK(r.pass >= 0.0);
        CHECK(std::abs(r.no_detect + r.caught_by_alice + r.caught_by_bob +
                       r.pass - 1.0) < kTol);
      }
    }
  }
}

TEST_CASE("control-round classes match hand-computed rows") {
  SUBCASE("ancilla-routing attack, computational preparation") {
    const auto r =
        control_round_probabilities(AttackKind::E1, PreparedState::Zero);
    CHECK(r.no_detect == doctest::Approx(0.5).epsilon(kTol));
    CHECK(r.caught_by_alice == doctest::Approx(0.0).epsilon(kTol));
    CHECK(r.caught_by_bob == doctest::Approx(0.0).epsilon(kTol));
    CHECK(r.pass == doctest::Approx(0.5).epsilon(kTol));
  }
  SUBCASE("ancilla-routing attack, diagonal preparation") {
    const auto r =
        control_round_probabilities(AttackKind::E1, PreparedState::Plus);
    CHECK(r.no_detect == doctest::Approx(0.5).epsilon(kTol));
    CHECK(r.caught_by_alice == doctest::Approx(0.25).epsilon(kTol));
    CHECK(r.caught_by_bob == doctest::Approx(0.125).epsilon(kTol));
    CHECK(r.pass == doctest::Approx(0.125).epsilon(kTol));
  }
  SUBCASE("beam-splitter routing attack never loses the photon") {
    const auto zero =
        control_round_probabilities(AttackKind::E3, PreparedState::Zero);
    CHECK(zero.no_detect == doctest::Approx(0.0).epsilon(kTol));
    CHECK(zero.pass == doctest::Approx(1.0).epsilon(kTol));
    const auto plus =
        control_round_probabilities(AttackKind::E3, PreparedState::Plus);
    CHECK(plus.no_detect == doctest::Approx(0.0).epsilon(kTol));
    CHECK(plus.caught_by_alice == doctest::Approx(0.5).epsilon(kTol));
    CHECK(plus.caught_by_bob == doctest::Approx(0.25).epsilon(kTol));
    CHECK(plus.pass == doctest::Approx(0.25).epsilon(kTol));
  }
  SUBCASE("intercept-resend rounds are two independent coin checks") {
    for (const auto prep : kPreps) {
      const auto r = control_round_probabilities(AttackKind::E4, prep);
      CHECK(r.no_detect == doctest::Approx(0.0).epsilon(kTol));
      CHECK(r.caught_by_alice == doctest::Approx(0.5).epsilon(kTol));
      CHECK(r.caught_by_bob == doctest::Approx(0.25).epsilon(kTol));
      CHECK(r.pass == doctest::Approx(0.25).epsilon(kTol));
    }
  }
}

TEST_CASE("non-detection and detection probabilities take their exact values") {
  CHECK(std::abs(control_mode_nondetection(AttackKind::E1) - 0.625) < kTol);
  CHECK(std::abs(control_mode_nondetection(AttackKind::E2) - 0.625) < kTol);
  CHECK(std::abs(control_mode_nondetection(AttackKind::E3) - 0.625) < kTol);
  CHECK(std::abs(control_mode_nondetection(AttackKind::E4) - 0.25) < kTol);
  CHECK(std::abs(detection_probability(AttackKind::E1) - 0.1875) < kTol);
  CHECK(std::abs(detection_probability(AttackKind::E2) - 0.1875) < kTol);
  CHECK(std::abs(detection_probability(AttackKind::E3) - 0.1875) < kTol);
  CHECK(std::abs(detection_probability(AttackKind::E4) - 0.375) < kTol);
}

TEST_CASE("gate budgets per attack") {
  const auto e1 = gate_counts(AttackKind::E1);
  CHECK(e1.n1 == 1);
  CHECK(e1.n2 == 1);
  CHECK(e1.n3 == 1);
  const auto e2 = gate_counts(AttackKind::E2);
  CHECK(e2.n1 == 4);
  CHECK(e2.n2 == 2);
  CHECK(e2.n3 == 1);
  const auto e3 = gate_counts(AttackKind::E3);
  CHECK(e3.n1 == 2);
  CHECK(e3.n2 == 5);
  CHECK(e3.n3 == 0);
  const auto e4 = gate_counts(AttackKind::E4);
  CHECK(e4.n1 == 2);
  CHECK(e4.n2 == 0);
  CHECK(e4.n3 == 0);
}
