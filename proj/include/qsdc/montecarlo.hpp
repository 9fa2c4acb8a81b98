#pragma once

// Monte Carlo sampling of protocol runs with a self-contained, portable
// random stream. std::mt19937 plus the standard distributions would not
// give bit-identical streams across standard libraries, so the generator
// (xoshiro256++) and the uniform-double mapping are pinned here.
//
// Sampling is block based: the stream is re-seeded from (seed, block_index)
// every kSamplesPerBlock draws, so merged counts are independent of how the
// total is sharded and a given (seed, n) always yields the same counts.

#include <array>
#include <cstdint>

#include "qsdc/attacks.hpp"

namespace qsdc {

/// Name recorded in machine-readable output next to any sampled figure.
inline constexpr const char* kRngAlgorithm = "xoshiro256++ (splitmix64-seeded)";

inline constexpr std::uint64_t kSamplesPerBlock = 65536;

/// splitmix64 step; used to expand seeds, never as the sampling stream.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next();
};

/// xoshiro256++ with the four state words drawn from SplitMix64{seed}.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1): (next() >> 11) * 2^-53.
  double uniform();

 private:
  std::array<std::uint64_t, 4> state_;
};

/// Seed of block `block_index` of a run seeded with `seed`.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block_index);

/// One sampled message-mode run.
struct RunRecord {
  PreparedState prep = PreparedState::Zero;
  int j = 0;  // Alice's bit
  int m = 0;  // Bob's decode
  int k = 0;  // Eve's decode
};

/// Samples one message-mode run, always consuming exactly four uniforms:
/// preparation, Alice's bit, an attack-internal coin (the symmetrizing-gate
/// coin for E2, Eve's basis coin for E4; drawn but unused otherwise), and
/// the (m, k) outcome from the exact final-state distribution.
RunRecord sample_run(AttackKind attack, double p, double q, Xoshiro256pp& rng);

/// Counts of message-mode outcomes.
struct EmpiricalJoint {
  std::uint64_t counts[2][2][2] = {};
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  /// counts / n as a distribution (n == 0 yields all zeros).
  JointDistribution empirical() const;
};

/// Samples n message-mode runs in deterministic blocks. Throws
/// std::invalid_argument for n == 0 and std::domain_error for p or q
/// outside [0, 1].
EmpiricalJoint estimate_joint(AttackKind attack, double p, double q,
                              std::uint64_t n, std::uint64_t seed);

/// Control-mode sampling summary. p_nd_hat conditions on rounds where the
/// forward photon was detected; sigma_p_d is the binomial standard error of
/// p_nd_hat propagated through p_d = (1 - p_nd) / 2.
struct DetectionEstimate {
  std::uint64_t total = 0;
  std::uint64_t detected = 0;
  std::uint64_t passed = 0;
  double p_nd_hat = 0.0;
  double p_d_hat = 0.0;
  double sigma_p_d = 0.0;
};

/// Samples n control-mode rounds (three uniforms each: preparation, the
/// attack-internal coin, and the outcome class). Throws
/// std::invalid_argument for n == 0.
DetectionEstimate estimate_detection_detail(AttackKind attack, std::uint64_t n,
                                            std::uint64_t seed);

/// p_d_hat of estimate_detection_detail.
double estimate_detection(AttackKind attack, std::uint64_t n,
                          std::uint64_t seed);

}  // namespace qsdc
