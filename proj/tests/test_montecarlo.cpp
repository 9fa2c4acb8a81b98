#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>

#include "qsdc/montecarlo.hpp"

namespace {

using namespace qsdc;

constexpr std::array<AttackKind, 4> kAttacks = {AttackKind::E1, AttackKind::E2,
                                                AttackKind::E3, AttackKind::E4};

bool same_counts(const EmpiricalJoint& a, const EmpiricalJoint& b) {
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        if (a.counts[j][m][k] != b.counts[j][m][k]) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("seed expansion is the reference splitmix64 sequence") {
  // First outputs for state 0, from the published reference implementation.
  SplitMix64 sm{0};
  CHECK(sm.next() == UINT64_C(0xE220A8397B1DCDAF));
  CHECK(sm.next() == UINT64_C(0x6E789E6AA1B965F4));
  CHECK(sm.next() == UINT64_C(0x06C45D188009454F));
}

TEST_CASE("sampling stream is deterministic and uniformly ranged") {
  Xoshiro256pp a(12345);
  Xoshiro256pp b(12345);
  Xoshiro256pp c(54321);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next();
    all_equal = all_equal && (va == b.next());
    any_differs = any_differs || (va != c.next());
  }
  CHECK(all_equal);
  CHECK(any_differs);
  Xoshiro256pp d(987);
  for (int i = 0; i < 1000; ++i) {
    const double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("block seeds decorrelate blocks but stay reproducible") {
  CHECK(block_seed(42, 0) == block_seed(42, 0));
  CHECK(block_seed(42, 0) != block_seed(42, 1));
  CHECK(block_seed(42, 0) != block_seed(43, 0));
}

TEST_CASE("joint sampling is reproducible bit for bit") {
  for (const auto attack : kAttacks) {
    const auto a = estimate_joint(attack, 0.6, 0.3, 50000, 2718);
    const auto b = estimate_joint(attack, 0.6, 0.3, 50000, 2718);
    CHECK(same_counts(a, b));
    CHECK(a.n == 50000);
    CHECK(a.seed == 2718);
    std::uint64_t total = 0;
    for (int j = 0; j < 2; ++j) {
      for (int m = 0; m < 2; ++m) {
        for (int k = 0; k < 2; ++k) total += a.counts[j][m][k];
      }
    }
    CHECK(total == a.n);
    const auto c = estimate_joint(attack, 0.6, 0.3, 50000, 2719);
    CHECK_FALSE(same_counts(a, c));
  }
}

TEST_CASE("counts are independent of sharding across blocks") {
  // 100000 samples span blocks 0 and 1 (block size 65536). Replaying the
  // blocks by hand with per-block generators must reproduce the merged
  // counts exactly.
  const std::uint64_t n = 100000;
  const std::uint64_t seed = 99;
  const auto merged = estimate_joint(AttackKind::E2, 0.45, 0.55, n, seed);
  EmpiricalJoint manual;
  manual.n = n;
  manual.seed = seed;
  std::uint64_t consumed = 0;
  for (std::uint64_t block = 0; consumed < n; ++block) {
    Xoshiro256pp rng(block_seed(seed, block));
    const std::uint64_t take = std::min(kSamplesPerBlock, n - consumed);
    for (std::uint64_t i = 0; i < take; ++i) {
      const auto run = sample_run(AttackKind::E2, 0.45, 0.55, rng);
      ++manual.counts[run.j][run.m][run.k];
    }
    consumed += take;
  }
  CHECK(same_counts(merged, manual));
}

TEST_CASE("each run consumes exactly four uniforms") {
  for (const auto attack : kAttacks) {
    CAPTURE(static_cast<int>(attack));
    Xoshiro256pp sampler(555);
    Xoshiro256pp mirror(555);
    for (int i = 0; i < 50; ++i) {
      (void)sample_run(attack, 0.37, 0.41, sampler);
      for (int skip = 0; skip < 4; ++skip) (void)mirror.uniform();
    }
    // Both generators sit at the same stream position.
    CHECK(sampler.next() == mirror.next());
  }
}

TEST_CASE("degenerate parameters force deterministic outcomes") {
  Xoshiro256pp rng(31);
  for (int i = 0; i < 200; ++i) {
    // Zero-error routing attack with q = 1: everything reads 0.
    const auto run = sample_run(AttackKind::E3, 0.5, 1.0, rng);
    CHECK(run.j == 0);
    CHECK(run.m == 0);
    CHECK(run.k == 0);
  }
  for (int i = 0; i < 200; ++i) {
    // Ancilla-routing attack never errs on j=0 and never leaks it.
    const auto run = sample_run(AttackKind::E1, 0.3, 0.7, rng);
    if (run.j == 0) {
      CHECK(run.m == 0);
      CHECK(run.k == 0);
    }
  }
}

TEST_CASE("empirical joint approaches the closed form at one million runs") {
  // 4-sigma bands per cell; binomial sigma <= 1/(2 sqrt n).
  const std::uint64_t n = 1000000;
  for (const auto attack : kAttacks) {
    for (const double p : {0.25, 0.5, 0.75}) {
      for (const double q : {0.25, 0.5, 0.75}) {
        const auto est = estimate_joint(attack, p, q, n,
                                        0xC0FFEE ^ static_cast<std::uint64_t>(
                                                       attack));
        const auto expect = closed_form_joint(attack, p, q);
        const auto emp = est.empirical();
        for (int j = 0; j < 2; ++j) {
          for (int m = 0; m < 2; ++m) {
            for (int k = 0; k < 2; ++k) {
              const double mean = expect.at(j, m, k);
              const double sigma =
                  std::sqrt(std::max(mean * (1.0 - mean), 1e-12) /
                            static_cast<double>(n));
              CAPTURE(static_cast<int>(attack));
              CAPTURE(p);
              CAPTURE(q);
              CAPTURE(j);
              CAPTURE(m);
              CAPTURE(k);
              CHECK(std::abs(emp.at(j, m, k) - mean) <= 4.0 * sigma);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("sampled detection probability brackets the exact constants") {
  const std::uint64_t n = 1000000;
  for (const auto attack : kAttacks) {
    CAPTURE(static_cast<int>(attack));
    const auto est = estimate_detection_detail(attack, n, 1234567);
    CHECK(est.total == n);
    CHECK(est.detected <= est.total);
    CHECK(est.passed <= est.detected);
    const double exact = detection_probability(attack);
    CHECK(std::abs(est.p_d_hat - exact) <= 4.0 * est.sigma_p_d);
    CHECK(est.sigma_p_d > 0.0);
    CHECK(est.sigma_p_d < 1e-3);
    CHECK(std::abs(est.p_d_hat - (1.0 - est.p_nd_hat) / 2.0) < 1e-15);
    CHECK(estimate_detection(attack, n, 1234567) ==
          doctest::Approx(est.p_d_hat).epsilon(1e-15));
  }
}

TEST_CASE("invalid sampling arguments are rejected") {
  CHECK_THROWS_AS(estimate_joint(AttackKind::E1, 0.5, 0.5, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_joint(AttackKind::E1, -0.5, 0.5, 10, 1),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_joint(AttackKind::E1, 0.5, 1.5, 10, 1),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_detection_detail(AttackKind::E1, 0, 1),
                  std::invalid_argument);
  Xoshiro256pp rng(1);
  CHECK_THROWS_AS(sample_run(AttackKind::E1, 2.0, 0.5, rng),
                  std::domain_error);
}
