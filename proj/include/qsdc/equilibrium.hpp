#pragma once

// Mixed-strategy game machinery over two-attack scenarios. Bob mixes his
// preparation basis (Z with probability p), Alice mixes her encoded bit
// (0 with probability q), Eve mixes between the scenario's two attacks
// (first with probability r). Expected payoffs are r-mixtures of the
// per-attack payoffs; equilibria are located by a support-pattern scan
// (each coordinate interior or pinned at 0/1) with grid bracketing and
// damped Newton refinement of the indifference residuals.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsdc/payoff.hpp"

namespace qsdc {

/// The four canonical two-attack scenarios.
enum class Scenario : std::uint8_t { E1E2, E1E3, E2E3, E1E4 };

inline constexpr std::array<Scenario, 4> kAllScenarios = {
    Scenario::E1E2, Scenario::E1E3, Scenario::E2E3, Scenario::E1E4};

/// (first, second) attacks of the scenario; Eve plays `first` with
/// probability r.
std::pair<AttackKind, AttackKind> scenario_attacks(Scenario s);

/// Canonical lowercase name, e.g. "e1-e2".
std::string scenario_name(Scenario s);

/// Parses "e1-e2", "e1-e3", "e2-e3", "e1-e4"; empty for anything else.
std::optional<Scenario> parse_scenario(std::string_view name);

/// (p, q, r): Bob's Z-basis probability, Alice's encode-0 probability, Eve's
/// probability of the scenario's first attack.
struct StrategyProfile {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// The product distribution over the eight pure-strategy triples, ordered
/// with Eve's coin fastest, then Alice's, then Bob's:
/// (pqr, pq(1-r), p(1-q)r, p(1-q)(1-r), (1-p)qr, ...).
std::array<double, 8> profile_distribution(const StrategyProfile& profile);

/// Componentwise r-mixture of the two attacks' payoffs at (p, q).
PayoffVector expected_payoffs(Scenario s, const StrategyProfile& profile,
                              const PayoffWeights& weights = PayoffWeights{});

/// Indifference residuals. f_alice compares Alice's expected payoff between
/// her pure encodings at the given (p, r); f_bob compares Bob's between his
/// pure bases at the given (q, r); f_eve compares Eve's two attacks at the
/// given (p, q). All three vanish at an interior mixed equilibrium.
struct Residuals {
  double f_alice = 0.0;
  double f_bob = 0.0;
  double f_eve = 0.0;
};

Residuals indifference_residuals(Scenario s, const StrategyProfile& profile,
                                 const PayoffWeights& weights = PayoffWeights{});

/// Closed interval of best responses: {1,1}, {0,0}, or the full [0,1] when
/// the player is indifferent within the tie tolerance.
struct CorrespondenceValue {
  double lo = 0.0;
  double hi = 0.0;

  bool is_indifferent() const { return lo != hi; }
};

inline constexpr double kTieTolerance = 1e-10;

/// Best response of `player` given the two opponent coordinates: Alice sees
/// (p, r), Bob sees (q, r), Eve sees (p, q).
CorrespondenceValue best_response(Scenario s, Party player, double first,
                                  double second,
                                  const PayoffWeights& weights = PayoffWeights{},
                                  double tie_tol = kTieTolerance);

/// Expected error rate at the profile: r*QBER_first(p,q) +
/// (1-r)*QBER_second(p,q).
double expected_qber(Scenario s, const StrategyProfile& profile);

enum class BoundarySide : std::uint8_t { Interior, AtZero, AtOne };

struct EquilibriumPoint {
  StrategyProfile profile;
  PayoffVector payoffs;            // expected at the profile
  Residuals residuals;
  double epsilon = 0.0;            // expected QBER
  double payoff_difference = 0.0;  // eve - alice
  std::array<BoundarySide, 3> boundary{};  // for p, q, r
};

/// Payoff/residual/epsilon evaluation at a given profile (no root finding);
/// used to replay externally supplied candidate points.
EquilibriumPoint verify_point(Scenario s, const StrategyProfile& profile,
                              const PayoffWeights& weights = PayoffWeights{});

/// Equilibrium search output: isolated points plus notes about boundary
/// patterns whose residuals vanish identically (equilibrium continua, which
/// have no useful isolated representatives beyond their corners).
struct SolverRun {
  std::vector<EquilibriumPoint> points;
  std::vector<std::string> degenerate_patterns;
};

/// Scans all 27 support patterns (each coordinate at 0, at 1, or interior).
/// Free coordinates are bracketed on a grid_n-per-axis cell-centered lattice
/// and refined by damped Newton iteration (central-difference Jacobian, step
/// 1e-5, at most 100 iterations) until the residual max-norm drops below
/// tol; pinned coordinates must be best responses (residual sign check).
/// Points closer than 1e-3 in profile max-norm are deduplicated; the result
/// is sorted by epsilon. Throws std::invalid_argument for grid_n < 8 or
/// tol <= 0.
SolverRun solve_scenario(Scenario s, int grid_n = 64, double tol = 1e-8,
                         const PayoffWeights& weights = PayoffWeights{});

/// The points of solve_scenario (an empty list is a valid result).
std::vector<EquilibriumPoint> find_equilibria(
    Scenario s, int grid_n = 64, double tol = 1e-8,
    const PayoffWeights& weights = PayoffWeights{});

/// Summary of a scenario's equilibrium set.
struct ScenarioReport {
  Scenario scenario = Scenario::E1E2;
  std::vector<EquilibriumPoint> points;
  std::size_t min_epsilon_index = 0;
  std::size_t max_payoff_difference_index = 0;
  double min_epsilon = 0.0;
  double max_payoff_difference = 0.0;
  // True iff some point's payoffs weakly dominate every other point's for
  // all three parties at once.
  bool pareto_point_exists = false;
  std::vector<std::string> notes;  // e.g. degenerate-pattern records
};

/// Builds the summary from a non-empty point list (throws
/// std::invalid_argument on empty).
ScenarioReport scenario_report(Scenario s,
                               const std::vector<EquilibriumPoint>& points);

/// Security bounds assembled from the four canonical scenario reports:
/// QBER in [0, min epsilon of the E2-E3 report] — the lower bound is 0
/// because the beam-splitter routing attack causes no error at all — and
/// detection probability in [min, max] of the per-attack constants.
struct SecurityBounds {
  double qber_lower = 0.0;
  double qber_upper = 0.0;
  double detection_lower = 0.0;
  double detection_upper = 0.0;
};

/// Throws std::invalid_argument unless all four canonical scenarios are
/// present exactly once.
SecurityBounds qber_bounds(const std::vector<ScenarioReport>& reports);

}  // namespace qsdc
