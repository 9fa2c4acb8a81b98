#include "qsdc/photonic_state.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qsdc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Probabilities below this are treated as exactly zero when enumerating
// measurement outcomes. Every reachable amplitude in the attack pipelines is
// a signed multiple of 1/(2*sqrt(2)) or larger, so nonzero probabilities are
// at least 1/8 up to rounding.
constexpr double kProbabilityFloor = 1e-15;

std::array<int, 3> digits(int index) {
  return {index / 9, (index % 9) / 3, index % 3};
}

int from_digits(const std::array<int, 3>& d) {
  return 9 * d[0] + 3 * d[1] + d[2];
}

TriModeState normalized_projection(const TriModeState& s, double probability,
                                   const TriModeState& projected) {
  TriModeState out;
  const double scale = 1.0 / std::sqrt(probability);
  for (int i = 0; i < kDim; ++i) out[i] = projected[i] * scale;
  return out;
}

}  // namespace

std::array<ModeContent, 3> ket_contents(int index) {
  if (index < 0 || index >= kDim) {
    throw std::out_of_range("ket index outside [0, 27)");
  }
  const auto d = digits(index);
  return {static_cast<ModeContent>(d[0]), static_cast<ModeContent>(d[1]),
          static_cast<ModeContent>(d[2])};
}

TriModeState basis_state(ModeContent t, ModeContent x, ModeContent y) {
  TriModeState s;
  s[ket_index(t, x, y)] = 1.0;
  return s;
}

double norm(const TriModeState& s) {
  double sum = 0.0;
  for (int i = 0; i < kDim; ++i) sum += std::norm(s[i]);
  return std::sqrt(sum);
}

Amplitude inner_product(const TriModeState& a, const TriModeState& b) {
  Amplitude acc = 0.0;
  for (int i = 0; i < kDim; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

bool approx_equal(const TriModeState& a, const TriModeState& b, double tol) {
  for (int i = 0; i < kDim; ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

bool approx_equal_up_to_phase(const TriModeState& a, const TriModeState& b,
                              double tol) {
  // Align b's global phase to a on a's largest component, then compare
  // amplitude-wise.
  int pivot = 0;
  double best = 0.0;
  for (int i = 0; i < kDim; ++i) {
    const double mag = std::abs(a[i]);
    if (mag > best) {
      best = mag;
      pivot = i;
    }
  }
  if (best <= tol) return approx_equal(a, b, tol);
  if (std::abs(b[pivot]) <= tol) return false;
  const Amplitude phase = (a[pivot] / std::abs(a[pivot])) /
                          (b[pivot] / std::abs(b[pivot]));
  TriModeState rotated;
  for (int i = 0; i < kDim; ++i) rotated[i] = b[i] * phase;
  return approx_equal(a, rotated, tol);
}

TriModeState apply_hadamard(const TriModeState& s, Mode mode) {
  const int m = static_cast<int>(mode);
  TriModeState out;
  for (int i = 0; i < kDim; ++i) {
    const Amplitude a = s[i];
    if (a == Amplitude{}) continue;
    auto d = digits(i);
    switch (d[m]) {
      case 0:  // vacuum: identity
        out[i] += a;
        break;
      case 1: {  // |0> -> (|0> + |1>)/sqrt(2)
        out[i] += a * kInvSqrt2;
        d[m] = 2;
        out[from_digits(d)] += a * kInvSqrt2;
        break;
      }
      case 2: {  // |1> -> (|0> - |1>)/sqrt(2)
        out[i] -= a * kInvSqrt2;
        d[m] = 1;
        out[from_digits(d)] += a * kInvSqrt2;
        break;
      }
    }
  }
  return out;
}

TriModeState apply_pauli(const TriModeState& s, Pauli op, Mode mode) {
  if (op == Pauli::I) return s;
  const int m = static_cast<int>(mode);
  TriModeState out;
  for (int i = 0; i < kDim; ++i) {
    const Amplitude a = s[i];
    if (a == Amplitude{}) continue;
    auto d = digits(i);
    if (d[m] == 0) {  // vacuum: identity for every Pauli
      out[i] += a;
      continue;
    }
    switch (op) {
      case Pauli::X:
        d[m] = 3 - d[m];
        out[from_digits(d)] += a;
        break;
      case Pauli::Z:
        out[i] += (d[m] == 2) ? -a : a;
        break;
      case Pauli::iY:
        // iY = Z*X: |0> -> -|1>, |1> -> |0>.
        if (d[m] == 1) {
          d[m] = 2;
          out[from_digits(d)] -= a;
        } else {
          d[m] = 1;
          out[from_digits(d)] += a;
        }
        break;
      case Pauli::I:
        break;  // unreachable
    }
  }
  return out;
}

TriModeState apply_swap_tx(const TriModeState& s) {
  TriModeState out;
  for (int i = 0; i < kDim; ++i) {
    auto d = digits(i);
    std::swap(d[0], d[1]);
    out[from_digits(d)] = s[i];
  }
  return out;
}

namespace {

// Shared routing rule of the two beam-splitter gates: photons of the moving
// polarization change ancilla mode, the others stay. A ket swaps the full
// (x, y) contents exactly when it holds at least one moving-polarization
// photon; this single rule covers one-photon kets, same-polarization pairs
// (where the swap is a no-op) and opposite-polarization pairs (routed as a
// whole so the gate stays an involution).
TriModeState route_ancillas(const TriModeState& s, int moving,
                            bool controlled_by_travel) {
  TriModeState out;
  for (int i = 0; i < kDim; ++i) {
    auto d = digits(i);
    int move_pol = moving;
    if (controlled_by_travel) {
      if (d[0] == 0) {  // empty travel mode: no routing at all
        out[i] += s[i];
        continue;
      }
      move_pol = d[0];  // travel |0> routes pol-0, travel |1> routes pol-1
    }
    if (d[1] == move_pol || d[2] == move_pol) std::swap(d[1], d[2]);
    out[from_digits(d)] += s[i];
  }
  return out;
}

}  // namespace

TriModeState apply_cpbs(const TriModeState& s) {
  return route_ancillas(s, 0, /*controlled_by_travel=*/true);
}

TriModeState apply_pbs_xy(const TriModeState& s) {
  return route_ancillas(s, 1, /*controlled_by_travel=*/false);
}

TriModeState apply_cnot(const TriModeState& s, Mode control, Mode target) {
  if (control == target) {
    throw std::invalid_argument("cnot control and target must differ");
  }
  const int c = static_cast<int>(control);
  const int t = static_cast<int>(target);
  TriModeState out;
  for (int i = 0; i < kDim; ++i) {
    auto d = digits(i);
    if (d[c] == 2 && d[t] != 0) d[t] = 3 - d[t];
    out[from_digits(d)] = s[i];
  }
  return out;
}

std::vector<MeasurementOutcome> measure_polarization(const TriModeState& s,
                                                     Mode mode, Basis basis) {
  // X-basis projection = conjugate a Z-basis projection with Hadamards
  // (H maps |0>,|1> to |+>,|->; vacuum kets are untouched either way).
  const TriModeState frame =
      (basis == Basis::X) ? apply_hadamard(s, mode) : s;
  const int m = static_cast<int>(mode);

  std::vector<MeasurementOutcome> outcomes;
  for (int content = 0; content < 3; ++content) {
    double probability = 0.0;
    TriModeState projected;
    for (int i = 0; i < kDim; ++i) {
      if (digits(i)[m] != content) continue;
      projected[i] = frame[i];
      probability += std::norm(frame[i]);
    }
    if (probability < kProbabilityFloor) continue;
    MeasurementOutcome outcome;
    outcome.detected = content != 0;
    outcome.bit = content == 0 ? -1 : content - 1;
    outcome.probability = probability;
    TriModeState collapsed =
        normalized_projection(frame, probability, projected);
    outcome.collapsed =
        (basis == Basis::X) ? apply_hadamard(collapsed, mode) : collapsed;
    outcomes.push_back(outcome);
  }
  return outcomes;
}

std::vector<AncillaOutcome> measure_occupancy_pair(const TriModeState& s) {
  std::vector<AncillaOutcome> outcomes;
  for (int xc = 0; xc < 3; ++xc) {
    for (int yc = 0; yc < 3; ++yc) {
      double probability = 0.0;
      TriModeState projected;
      for (int i = 0; i < kDim; ++i) {
        const auto d = digits(i);
        if (d[1] != xc || d[2] != yc) continue;
        projected[i] = s[i];
        probability += std::norm(s[i]);
      }
      if (probability < kProbabilityFloor) continue;
      AncillaOutcome outcome;
      outcome.x = static_cast<ModeContent>(xc);
      outcome.y = static_cast<ModeContent>(yc);
      outcome.probability = probability;
      outcome.collapsed = normalized_projection(s, probability, projected);
      outcomes.push_back(outcome);
    }
  }
  return outcomes;
}

}  // namespace qsdc
