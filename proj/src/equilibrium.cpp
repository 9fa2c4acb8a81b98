#include "qsdc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qsdc {

namespace {

// Coordinate axes are ordered (p, q, r). Axis `a` is owned by the player who
// mixes along it: p by Bob (residual f_bob), q by Alice (f_alice), r by Eve
// (f_eve). kOwner maps axis -> residual component index (0 = f_alice,
// 1 = f_bob, 2 = f_eve).
constexpr int kOwner[3] = {1, 0, 2};

// Which axes each residual component actually depends on: f_alice on (p, r),
// f_bob on (q, r), f_eve on (p, q).
constexpr bool kDepends[3][3] = {
    {true, false, true},
    {false, true, true},
    {true, true, false},
};

constexpr const char* kComponentName[3] = {"alice", "bob", "eve"};
constexpr const char* kAxisName[3] = {"p", "q", "r"};

// Solver tuning. Lattice nodes sit at i/grid_n with the outermost nodes
// pulled just inside the box (faces themselves are represented by pinned
// patterns); Newton iterates stay one finite-difference step away from the
// faces so the centered Jacobian never leaves [0, 1].
constexpr double kEdgeInset = 1e-4;
constexpr double kNewtonStep = 1e-5;
constexpr int kMaxNewtonIterations = 100;
constexpr double kInteriorMargin = 2e-5;
constexpr double kDedupTolerance = 1e-3;

void check_profile(const StrategyProfile& profile) {
  const double coords[3] = {profile.p, profile.q, profile.r};
  for (int a = 0; a < 3; ++a) {
    if (!(coords[a] >= 0.0 && coords[a] <= 1.0)) {
      throw std::domain_error(std::string(kAxisName[a]) +
                              " must lie in [0, 1]");
    }
  }
}

double residual_component(Scenario s, int comp, double p, double q, double r,
                          const PayoffWeights& weights) {
  const auto [first, second] = scenario_attacks(s);
  switch (comp) {
    case 0: {  // Alice: pure q=1 vs pure q=0 at fixed (p, r)
      const double d_first = payoff_general(first, p, 1.0, weights).alice -
                             payoff_general(first, p, 0.0, weights).alice;
      const double d_second = payoff_general(second, p, 1.0, weights).alice -
                              payoff_general(second, p, 0.0, weights).alice;
      return r * d_first + (1.0 - r) * d_second;
    }
    case 1: {  // Bob: pure p=1 vs pure p=0 at fixed (q, r)
      const double d_first = payoff_general(first, 1.0, q, weights).bob -
                             payoff_general(first, 0.0, q, weights).bob;
      const double d_second = payoff_general(second, 1.0, q, weights).bob -
                              payoff_general(second, 0.0, q, weights).bob;
      return r * d_first + (1.0 - r) * d_second;
    }
    case 2:  // Eve: first attack vs second attack at fixed (p, q)
      return payoff_general(first, p, q, weights).eve -
             payoff_general(second, p, q, weights).eve;
    default:
      throw std::logic_error("residual component out of range");
  }
}

std::array<BoundarySide, 3> sides_from_pattern(const std::array<int, 3>& side) {
  std::array<BoundarySide, 3> out{};
  for (int a = 0; a < 3; ++a) {
    out[a] = side[a] == 0   ? BoundarySide::AtZero
             : side[a] == 1 ? BoundarySide::AtOne
                            : BoundarySide::Interior;
  }
  return out;
}

EquilibriumPoint make_point(Scenario s, const StrategyProfile& profile,
                            const std::array<BoundarySide, 3>& boundary,
                            const PayoffWeights& weights) {
  EquilibriumPoint point;
  point.profile = profile;
  point.payoffs = expected_payoffs(s, profile, weights);
  point.residuals = indifference_residuals(s, profile, weights);
  point.epsilon = expected_qber(s, profile);
  point.payoff_difference = point.payoffs.eve - point.payoffs.alice;
  point.boundary = boundary;
  return point;
}

/// Sign condition for a coordinate pinned at 0 or 1: the owner must weakly
/// prefer the pinned pure strategy.
bool pinned_side_holds(double residual, int side) {
  return side == 1 ? residual >= -kTieTolerance : residual <= kTieTolerance;
}

/// Values of one residual component over the sub-lattice of the free axes it
/// depends on (an empty axis list means a single scalar).
struct ComponentTable {
  int comp = 0;
  std::vector<int> free_positions;  // positions within the free-axis list
  std::vector<double> values;
};

/// Solves the k x k Newton system J * dx = -f by Gaussian elimination with
/// partial pivoting; returns false on a (numerically) singular Jacobian.
bool solve_linear(std::vector<std::vector<double>>& jac, std::vector<double>& f,
                  std::vector<double>& dx) {
  const int n = static_cast<int>(f.size());
  dx.assign(n, 0.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(jac[row][col]) > std::abs(jac[pivot][col])) pivot = row;
    }
    if (std::abs(jac[pivot][col]) < 1e-14) return false;
    std::swap(jac[pivot], jac[col]);
    std::swap(f[pivot], f[col]);
    for (int row = col + 1; row < n; ++row) {
      const double factor = jac[row][col] / jac[col][col];
      for (int c = col; c < n; ++c) jac[row][c] -= factor * jac[col][c];
      f[row] -= factor * f[col];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double acc = -f[row];
    for (int c = row + 1; c < n; ++c) acc -= jac[row][c] * dx[c];
    dx[row] = acc / jac[row][row];
  }
  return true;
}

struct PatternSolver {
  Scenario scenario;
  const PayoffWeights& weights;
  double tol;
  std::array<int, 3> side{};  // 0 = at0, 1 = at1, 2 = free, per axis
  std::vector<int> free_axes;

  double coord_base(int axis) const {
    return side[axis] == 1 ? 1.0 : 0.0;  // free axes overwritten on use
  }

  double eval(int comp, const double coords[3]) const {
    return residual_component(scenario, comp, coords[0], coords[1], coords[2],
                              weights);
  }

  /// Residual vector of the free coordinates' owners at the given point.
  std::vector<double> residual_vector(const std::vector<double>& x) const {
    double coords[3];
    fill_coords(x, coords);
    std::vector<double> f(free_axes.size());
    for (std::size_t i = 0; i < free_axes.size(); ++i) {
      f[i] = eval(kOwner[free_axes[i]], coords);
    }
    return f;
  }

  void fill_coords(const std::vector<double>& x, double coords[3]) const {
    for (int a = 0; a < 3; ++a) coords[a] = coord_base(a);
    for (std::size_t i = 0; i < free_axes.size(); ++i) {
      coords[free_axes[i]] = x[i];
    }
  }

  static double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double value : v) m = std::max(m, std::abs(value));
    return m;
  }

  /// Damped Newton iteration from `x0`; true if the residual max-norm
  /// dropped below tol.
  bool refine(std::vector<double>& x0) const {
    const int k = static_cast<int>(free_axes.size());
    std::vector<double> x = x0;
    std::vector<double> f = residual_vector(x);
    double fnorm = max_abs(f);
    for (int iter = 0; iter < kMaxNewtonIterations && fnorm >= tol; ++iter) {
      std::vector<std::vector<double>> jac(k, std::vector<double>(k, 0.0));
      for (int c = 0; c < k; ++c) {
        std::vector<double> xp = x;
        std::vector<double> xm = x;
        xp[c] += kNewtonStep;
        xm[c] -= kNewtonStep;
        const std::vector<double> fp = residual_vector(xp);
        const std::vector<double> fm = residual_vector(xm);
        for (int row = 0; row < k; ++row) {
          jac[row][c] = (fp[row] - fm[row]) / (2.0 * kNewtonStep);
        }
      }
      std::vector<double> dx;
      std::vector<double> f_copy = f;
      if (!solve_linear(jac, f_copy, dx)) return false;

      bool improved = false;
      for (double lambda = 1.0; lambda >= 1.0 / 256.0; lambda /= 2.0) {
        std::vector<double> trial = x;
        for (int c = 0; c < k; ++c) {
          trial[c] = std::clamp(trial[c] + lambda * dx[c], kNewtonStep,
                                1.0 - kNewtonStep);
        }
        const std::vector<double> ft = residual_vector(trial);
        const double fnorm_t = max_abs(ft);
        if (fnorm_t < fnorm) {
          x = trial;
          f = ft;
          fnorm = fnorm_t;
          improved = true;
          break;
        }
      }
      if (!improved) return false;
    }
    if (fnorm < tol) {
      x0 = x;
      return true;
    }
    return false;
  }
};

std::string pattern_label(const std::array<int, 3>& side) {
  std::ostringstream out;
  for (int a = 0; a < 3; ++a) {
    if (a) out << ",";
    out << kAxisName[a] << "=";
    if (side[a] == 2) {
      out << "free";
    } else {
      out << side[a];
    }
  }
  return out.str();
}

}  // namespace

std::pair<AttackKind, AttackKind> scenario_attacks(Scenario s) {
  switch (s) {
    case Scenario::E1E2:
      return {AttackKind::E1, AttackKind::E2};
    case Scenario::E1E3:
      return {AttackKind::E1, AttackKind::E3};
    case Scenario::E2E3:
      return {AttackKind::E2, AttackKind::E3};
    case Scenario::E1E4:
      return {AttackKind::E1, AttackKind::E4};
  }
  throw std::invalid_argument("unknown scenario");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::E1E2:
      return "e1-e2";
    case Scenario::E1E3:
      return "e1-e3";
    case Scenario::E2E3:
      return "e2-e3";
    case Scenario::E1E4:
      return "e1-e4";
  }
  throw std::invalid_argument("unknown scenario");
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : kAllScenarios) {
    if (name == scenario_name(s)) return s;
  }
  return std::nullopt;
}

std::array<double, 8> profile_distribution(const StrategyProfile& profile) {
  check_profile(profile);
  const double bob[2] = {profile.p, 1.0 - profile.p};
  const double alice[2] = {profile.q, 1.0 - profile.q};
  const double eve[2] = {profile.r, 1.0 - profile.r};
  std::array<double, 8> out{};
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      for (int e = 0; e < 2; ++e) {
        out[4 * b + 2 * a + e] = bob[b] * alice[a] * eve[e];
      }
    }
  }
  return out;
}

PayoffVector expected_payoffs(Scenario s, const StrategyProfile& profile,
                              const PayoffWeights& weights) {
  check_profile(profile);
  const auto [first, second] = scenario_attacks(s);
  const PayoffVector a = payoff_general(first, profile.p, profile.q, weights);
  const PayoffVector b = payoff_general(second, profile.p, profile.q, weights);
  const double r = profile.r;
  return {r * a.alice + (1.0 - r) * b.alice, r * a.bob + (1.0 - r) * b.bob,
          r * a.eve + (1.0 - r) * b.eve};
}

Residuals indifference_residuals(Scenario s, const StrategyProfile& profile,
                                 const PayoffWeights& weights) {
  check_profile(profile);
  Residuals out;
  out.f_alice =
      residual_component(s, 0, profile.p, profile.q, profile.r, weights);
  out.f_bob =
      residual_component(s, 1, profile.p, profile.q, profile.r, weights);
  out.f_eve =
      residual_component(s, 2, profile.p, profile.q, profile.r, weights);
  return out;
}

CorrespondenceValue best_response(Scenario s, Party player, double first,
                                  double second, const PayoffWeights& weights,
                                  double tie_tol) {
  double p = 0.5;
  double q = 0.5;
  double r = 0.5;
  int comp = 0;
  switch (player) {
    case Party::Alice:  // sees (p, r)
      comp = 0;
      p = first;
      r = second;
      break;
    case Party::Bob:  // sees (q, r)
      comp = 1;
      q = first;
      r = second;
      break;
    case Party::Eve:  // sees (p, q)
      comp = 2;
      p = first;
      q = second;
      break;
  }
  check_profile({p, q, r});
  const double f = residual_component(s, comp, p, q, r, weights);
  if (f > tie_tol) return {1.0, 1.0};
  if (f < -tie_tol) return {0.0, 0.0};
  return {0.0, 1.0};
}

double expected_qber(Scenario s, const StrategyProfile& profile) {
  check_profile(profile);
  const auto [first, second] = scenario_attacks(s);
  return profile.r * closed_form_qber(first, profile.p, profile.q) +
         (1.0 - profile.r) * closed_form_qber(second, profile.p, profile.q);
}

EquilibriumPoint verify_point(Scenario s, const StrategyProfile& profile,
                              const PayoffWeights& weights) {
  check_profile(profile);
  constexpr double kBoundaryProximity = 1e-9;
  std::array<BoundarySide, 3> boundary{};
  const double coords[3] = {profile.p, profile.q, profile.r};
  for (int a = 0; a < 3; ++a) {
    boundary[a] = coords[a] <= kBoundaryProximity         ? BoundarySide::AtZero
                  : coords[a] >= 1.0 - kBoundaryProximity ? BoundarySide::AtOne
                                                          : BoundarySide::Interior;
  }
  return make_point(s, profile, boundary, weights);
}

SolverRun solve_scenario(Scenario s, int grid_n, double tol,
                         const PayoffWeights& weights) {
  if (grid_n < 8) {
    throw std::invalid_argument("grid_n must be at least 8");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tol must be positive");
  }
  validate_weights(weights);

  std::vector<double> nodes(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) {
    nodes[i] = static_cast<double>(i) / grid_n;
  }
  nodes.front() = kEdgeInset;
  nodes.back() = 1.0 - kEdgeInset;

  SolverRun run;
  std::vector<EquilibriumPoint> found;

  for (int pattern = 0; pattern < 27; ++pattern) {
    PatternSolver solver{s, weights, tol};
    int code = pattern;
    for (int a = 0; a < 3; ++a) {
      solver.side[a] = code % 3;
      code /= 3;
      if (solver.side[a] == 2) solver.free_axes.push_back(a);
    }
    const int k = static_cast<int>(solver.free_axes.size());

    if (k == 0) {
      // Pure-strategy corner: every owner must weakly prefer the pinned side.
      double coords[3];
      solver.fill_coords({}, coords);
      bool ok = true;
      for (int a = 0; a < 3 && ok; ++a) {
        ok = pinned_side_holds(solver.eval(kOwner[a], coords), solver.side[a]);
      }
      if (ok) {
        found.push_back(make_point(s, {coords[0], coords[1], coords[2]},
                                   sides_from_pattern(solver.side), weights));
      }
      continue;
    }

    // Tabulate each free coordinate's owner residual over the sub-lattice of
    // the free axes it depends on; pinned axes contribute fixed values.
    std::vector<ComponentTable> tables;
    bool degenerate = false;
    bool infeasible = false;
    std::string degenerate_components;
    for (int i = 0; i < k; ++i) {
      ComponentTable table;
      table.comp = kOwner[solver.free_axes[i]];
      for (int pos = 0; pos < k; ++pos) {
        if (kDepends[table.comp][solver.free_axes[pos]]) {
          table.free_positions.push_back(pos);
        }
      }
      std::size_t count = 1;
      for (std::size_t d = 0; d < table.free_positions.size(); ++d) {
        count *= nodes.size();
      }
      table.values.resize(count);
      double max_abs_value = 0.0;
      std::vector<double> x(k, 0.0);
      for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rest = flat;
        for (int pos : table.free_positions) {
          x[pos] = nodes[rest % nodes.size()];
          rest /= nodes.size();
        }
        double coords[3];
        solver.fill_coords(x, coords);
        const double value = solver.eval(table.comp, coords);
        table.values[flat] = value;
        max_abs_value = std::max(max_abs_value, std::abs(value));
      }
      if (max_abs_value < tol) {
        degenerate = true;
        if (!degenerate_components.empty()) degenerate_components += ", ";
        degenerate_components += kComponentName[table.comp];
      } else if (table.free_positions.empty()) {
        // Constant nonzero residual: the pattern has no solutions at all.
        infeasible = true;
      }
      tables.push_back(std::move(table));
    }
    if (degenerate) {
      run.degenerate_patterns.push_back(
          pattern_label(solver.side) + ": " + degenerate_components +
          " residual vanishes identically (equilibrium continuum; corners "
          "reported separately)");
      continue;
    }
    if (infeasible) continue;

    // Bracket scan: a cell is a candidate when every needed residual spans
    // zero over its corners.
    const int cells = grid_n;  // nodes.size() - 1 per axis
    std::vector<int> cell(k, 0);
    std::vector<double> x0(k, 0.0);
    while (true) {
      bool candidate = true;
      for (const ComponentTable& table : tables) {
        double lo = 0.0;
        double hi = 0.0;
        bool first_corner = true;
        const int corners = 1 << table.free_positions.size();
        for (int mask = 0; mask < corners; ++mask) {
          std::size_t flat = 0;
          std::size_t stride = 1;
          for (std::size_t d = 0; d < table.free_positions.size(); ++d) {
            const int pos = table.free_positions[d];
            const int node = cell[pos] + ((mask >> d) & 1);
            flat += stride * node;
            stride *= nodes.size();
          }
          const double value = table.values[flat];
          lo = first_corner ? value : std::min(lo, value);
          hi = first_corner ? value : std::max(hi, value);
          first_corner = false;
        }
        if (lo > 0.0 || hi < 0.0) {
          candidate = false;
          break;
        }
      }

      if (candidate) {
        for (int i = 0; i < k; ++i) {
          x0[i] = 0.5 * (nodes[cell[i]] + nodes[cell[i] + 1]);
        }
        std::vector<double> root = x0;
        if (solver.refine(root)) {
          bool interior = true;
          for (double v : root) {
            interior = interior && v > kInteriorMargin &&
                       v < 1.0 - kInteriorMargin;
          }
          if (interior) {
            double coords[3];
            solver.fill_coords(root, coords);
            bool pins_ok = true;
            for (int a = 0; a < 3 && pins_ok; ++a) {
              if (solver.side[a] == 2) continue;
              pins_ok = pinned_side_holds(solver.eval(kOwner[a], coords),
                                          solver.side[a]);
            }
            if (pins_ok) {
              found.push_back(make_point(s, {coords[0], coords[1], coords[2]},
                                         sides_from_pattern(solver.side),
                                         weights));
            }
          }
        }
      }

      int axis = 0;
      while (axis < k && ++cell[axis] == cells) {
        cell[axis] = 0;
        ++axis;
      }
      if (axis == k) break;
    }
  }

  // Order by expected error rate, then lexicographically; collapse near
  // duplicates (within kDedupTolerance in profile max-norm).
  std::sort(found.begin(), found.end(),
            [](const EquilibriumPoint& a, const EquilibriumPoint& b) {
              if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
              if (a.profile.p != b.profile.p) return a.profile.p < b.profile.p;
              if (a.profile.q != b.profile.q) return a.profile.q < b.profile.q;
              return a.profile.r < b.profile.r;
            });
  for (const EquilibriumPoint& point : found) {
    bool duplicate = false;
    for (const EquilibriumPoint& kept : run.points) {
      const double dist = std::max(
          {std::abs(point.profile.p - kept.profile.p),
           std::abs(point.profile.q - kept.profile.q),
           std::abs(point.profile.r - kept.profile.r)});
      if (dist < kDedupTolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) run.points.push_back(point);
  }
  return run;
}

std::vector<EquilibriumPoint> find_equilibria(Scenario s, int grid_n,
                                              double tol,
                                              const PayoffWeights& weights) {
  return solve_scenario(s, grid_n, tol, weights).points;
}

ScenarioReport scenario_report(Scenario s,
                               const std::vector<EquilibriumPoint>& points) {
  if (points.empty()) {
    throw std::invalid_argument("scenario report needs at least one point");
  }
  ScenarioReport report;
  report.scenario = s;
  report.points = points;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].epsilon < points[report.min_epsilon_index].epsilon) {
      report.min_epsilon_index = i;
    }
    if (points[i].payoff_difference >
        points[report.max_payoff_difference_index].payoff_difference) {
      report.max_payoff_difference_index = i;
    }
  }
  report.min_epsilon = points[report.min_epsilon_index].epsilon;
  report.max_payoff_difference =
      points[report.max_payoff_difference_index].payoff_difference;

  constexpr double kDominanceSlack = 1e-12;
  for (const EquilibriumPoint& candidate : points) {
    bool dominates_all = true;
    for (const EquilibriumPoint& other : points) {
      const bool weakly_ge =
          candidate.payoffs.alice >= other.payoffs.alice - kDominanceSlack &&
          candidate.payoffs.bob >= other.payoffs.bob - kDominanceSlack &&
          candidate.payoffs.eve >= other.payoffs.eve - kDominanceSlack;
      if (!weakly_ge) {
        dominates_all = false;
        break;
      }
    }
    if (dominates_all) {
      report.pareto_point_exists = true;
      break;
    }
  }
  return report;
}

SecurityBounds qber_bounds(const std::vector<ScenarioReport>& reports) {
  const ScenarioReport* e2e3 = nullptr;
  int seen[4] = {0, 0, 0, 0};
  for (const ScenarioReport& report : reports) {
    seen[static_cast<int>(report.scenario)] += 1;
    if (report.scenario == Scenario::E2E3) e2e3 = &report;
  }
  for (int count : seen) {
    if (count != 1) {
      throw std::invalid_argument(
          "bounds need each canonical scenario exactly once");
    }
  }

  SecurityBounds bounds;
  // The routing attack decodes perfectly while causing zero error, so no
  // positive error threshold can certify security from QBER alone: the
  // achievable lower bound is exactly 0.
  bounds.qber_lower = 0.0;
  bounds.qber_upper = e2e3->min_epsilon;
  bounds.detection_lower = detection_probability(AttackKind::E1);
  bounds.detection_upper = bounds.detection_lower;
  for (AttackKind attack : {AttackKind::E2, AttackKind::E3, AttackKind::E4}) {
    bounds.detection_lower =
        std::min(bounds.detection_lower, detection_probability(attack));
    bounds.detection_upper =
        std::max(bounds.detection_upper, detection_probability(attack));
  }
  return bounds;
}

}  // namespace qsdc
