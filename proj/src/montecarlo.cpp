#include "qsdc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsdc {

namespace {

std::uint64_t rotl64(std::uint64_t value, int shift) {
  return (value << shift) | (value >> (64 - shift));
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

constexpr std::array<PreparedState, 4> kPreparations = {
    PreparedState::Zero, PreparedState::One, PreparedState::Plus,
    PreparedState::Minus};

/// Cumulative (m, k) outcome table of one sampled cell; zero-probability
/// outcomes are culled so impossible cells can never be drawn.
struct OutcomeTable {
  struct Entry {
    double cumulative;
    int m;
    int k;
  };
  std::vector<Entry> entries;

  void add(int m, int k, double probability) {
    if (probability < 1e-15) return;
    const double base = entries.empty() ? 0.0 : entries.back().cumulative;
    entries.push_back({base + probability, m, k});
  }

  void finish() {
    // The probabilities sum to 1 up to rounding; pin the last edge so a
    // uniform draw of 1-epsilon cannot fall off the table.
    entries.back().cumulative = 1.0;
  }

  const Entry& pick(double u) const {
    for (const Entry& entry : entries) {
      if (u < entry.cumulative) return entry;
    }
    return entries.back();
  }
};

int bob_decode(PreparedState prep, int outcome_bit) {
  return outcome_bit == prep_bit(prep) ? 0 : 1;
}

/// (m, k) tables per (preparation, bit, branch), exact from the final
/// states; (p, q) only weight which cell is drawn, not the cell contents.
const OutcomeTable& message_table(AttackKind attack, PreparedState prep, int j,
                                  int branch) {
  static const auto tables = [] {
    std::array<std::array<std::array<std::array<OutcomeTable, 2>, 2>, 4>, 4>
        all{};
    for (int ai = 0; ai < 4; ++ai) {
      const AttackKind attack = static_cast<AttackKind>(ai);
      for (int pi = 0; pi < 4; ++pi) {
        const PreparedState prep = kPreparations[pi];
        for (int j = 0; j < 2; ++j) {
          const int branch_count =
              (attack == AttackKind::E2 || attack == AttackKind::E4) ? 2 : 1;
          for (int branch = 0; branch < branch_count; ++branch) {
            OutcomeTable& table = all[ai][pi][j][branch];
            double cell[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
            if (attack == AttackKind::E4) {
              // Branch selects Eve's shared measurement basis.
              const InterceptResendOutcome outcome = intercept_resend_outcome(
                  prep, j, branch == 0 ? Basis::Z : Basis::X);
              for (int m = 0; m < 2; ++m) {
                for (int k = 0; k < 2; ++k) cell[m][k] = outcome.prob[m][k];
              }
            } else {
              const TriModeState final_state =
                  final_message_state(attack, prep, j, branch);
              for (const AncillaOutcome& ancilla :
                   measure_occupancy_pair(final_state)) {
                const int k = eve_decode_rule(attack, ancilla.x, ancilla.y);
                for (const MeasurementOutcome& bob : measure_polarization(
                         ancilla.collapsed, Mode::Travel, prep_basis(prep))) {
                  cell[bob_decode(prep, bob.bit)][k] +=
                      ancilla.probability * bob.probability;
                }
              }
            }
            for (int m = 0; m < 2; ++m) {
              for (int k = 0; k < 2; ++k) table.add(m, k, cell[m][k]);
            }
            table.finish();
          }
        }
      }
    }
    return all;
  }();
  return tables[static_cast<int>(attack)][static_cast<int>(prep)][j][branch];
}

/// Cumulative control-round class table per (attack, preparation, branch):
/// 0 = no photon at Alice, 1 = caught by Alice, 2 = caught by Bob, 3 = pass.
struct ControlTable {
  double cumulative[4];
};

const ControlTable& control_table(AttackKind attack, PreparedState prep,
                                  int branch) {
  static const auto tables = [] {
    std::array<std::array<std::array<ControlTable, 2>, 4>, 4> all{};
    for (int ai = 0; ai < 4; ++ai) {
      const AttackKind attack = static_cast<AttackKind>(ai);
      for (int pi = 0; pi < 4; ++pi) {
        const int branch_count = attack == AttackKind::E2 ? 2 : 1;
        for (int branch = 0; branch < branch_count; ++branch) {
          const ControlRoundProbabilities probs =
              control_round_probabilities(attack, kPreparations[pi], branch);
          ControlTable& table = all[ai][pi][branch];
          table.cumulative[0] = probs.no_detect;
          table.cumulative[1] = table.cumulative[0] + probs.caught_by_alice;
          table.cumulative[2] = table.cumulative[1] + probs.caught_by_bob;
          table.cumulative[3] = 1.0;
        }
      }
    }
    return all;
  }();
  return tables[static_cast<int>(attack)][static_cast<int>(prep)][branch];
}

PreparedState draw_preparation(double u, double p) {
  if (u < p / 2.0) return PreparedState::Zero;
  if (u < p) return PreparedState::One;
  if (u < p + (1.0 - p) / 2.0) return PreparedState::Plus;
  return PreparedState::Minus;
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state += kGolden;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  SplitMix64 expander{seed};
  for (auto& word : state_) word = expander.next();
}

std::uint64_t Xoshiro256pp::next() {
  const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl64(state_[3], 45);
  return result;
}

double Xoshiro256pp::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block_index) {
  SplitMix64 mixer{seed ^ ((block_index + 1) * kGolden)};
  return mixer.next();
}

RunRecord sample_run(AttackKind attack, double p, double q,
                     Xoshiro256pp& rng) {
  check_unit_interval(p, "p");
  check_unit_interval(q, "q");
  const double u_prep = rng.uniform();
  const double u_bit = rng.uniform();
  const double u_coin = rng.uniform();
  const double u_outcome = rng.uniform();

  RunRecord record;
  record.prep = draw_preparation(u_prep, p);
  record.j = u_bit < q ? 0 : 1;
  const bool coin_used =
      attack == AttackKind::E2 || attack == AttackKind::E4;
  const int branch = (coin_used && u_coin >= 0.5) ? 1 : 0;
  const auto& entry =
      message_table(attack, record.prep, record.j, branch).pick(u_outcome);
  record.m = entry.m;
  record.k = entry.k;
  return record;
}

JointDistribution EmpiricalJoint::empirical() const {
  JointDistribution joint;
  if (n == 0) return joint;
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        joint.at(j, m, k) =
            static_cast<double>(counts[j][m][k]) / static_cast<double>(n);
      }
    }
  }
  return joint;
}

EmpiricalJoint estimate_joint(AttackKind attack, double p, double q,
                              std::uint64_t n, std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  check_unit_interval(p, "p");
  check_unit_interval(q, "q");

  EmpiricalJoint result;
  result.n = n;
  result.seed = seed;
  std::uint64_t consumed = 0;
  for (std::uint64_t block = 0; consumed < n; ++block) {
    Xoshiro256pp rng(block_seed(seed, block));
    const std::uint64_t take = std::min(kSamplesPerBlock, n - consumed);
    for (std::uint64_t i = 0; i < take; ++i) {
      const RunRecord record = sample_run(attack, p, q, rng);
      result.counts[record.j][record.m][record.k] += 1;
    }
    consumed += take;
  }
  return result;
}

DetectionEstimate estimate_detection_detail(AttackKind attack, std::uint64_t n,
                                            std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  DetectionEstimate result;
  result.total = n;
  std::uint64_t consumed = 0;
  for (std::uint64_t block = 0; consumed < n; ++block) {
    Xoshiro256pp rng(block_seed(seed, block));
    const std::uint64_t take = std::min(kSamplesPerBlock, n - consumed);
    for (std::uint64_t i = 0; i < take; ++i) {
      const double u_prep = rng.uniform();
      const double u_coin = rng.uniform();
      const double u_class = rng.uniform();
      const int prep_index = std::min(3, static_cast<int>(u_prep * 4.0));
      const int branch =
          (attack == AttackKind::E2 && u_coin >= 0.5) ? 1 : 0;
      const ControlTable& table =
          control_table(attack, kPreparations[prep_index], branch);
      int outcome_class = 3;
      for (int c = 0; c < 4; ++c) {
        if (u_class < table.cumulative[c]) {
          outcome_class = c;
          break;
        }
      }
      if (outcome_class != 0) result.detected += 1;
      if (outcome_class == 3) result.passed += 1;
    }
    consumed += take;
  }

  if (result.detected > 0) {
    result.p_nd_hat = static_cast<double>(result.passed) /
                      static_cast<double>(result.detected);
    result.p_d_hat = (1.0 - result.p_nd_hat) / 2.0;
    result.sigma_p_d =
        0.5 * std::sqrt(result.p_nd_hat * (1.0 - result.p_nd_hat) /
                        static_cast<double>(result.detected));
  }
  return result;
}

double estimate_detection(AttackKind attack, std::uint64_t n,
                          std::uint64_t seed) {
  return estimate_detection_detail(attack, n, seed).p_d_hat;
}

}  // namespace qsdc
