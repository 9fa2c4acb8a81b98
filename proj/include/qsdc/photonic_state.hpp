#pragma once

// Exact state-vector algebra for three optical modes (one travel mode `t` and
// two ancilla modes `x`, `y`). Each mode is either empty (vacuum) or holds a
// single photon of polarization 0/1, giving a dense 27-dimensional complex
// state space. All gates act as the identity on empty modes, preserve the
// 2-norm, and are involutions; states are immutable values.

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace qsdc {

using Amplitude = std::complex<double>;

/// Contents of a single optical mode: empty, or one photon polarized 0/1.
enum class ModeContent : std::uint8_t { Vac = 0, Pol0 = 1, Pol1 = 2 };

/// Mode selector: travel photon or one of the two ancilla modes.
enum class Mode : std::uint8_t { Travel = 0, AncillaX = 1, AncillaY = 2 };

/// Measurement basis for polarization: computational (Z) or diagonal (X).
enum class Basis : std::uint8_t { Z, X };

/// Single-mode polarization operations. `iY` is the composition Z*X, so
/// iY|0> = -|1> and iY|1> = |0>.
enum class Pauli : std::uint8_t { I, X, Z, iY };

inline constexpr int kDim = 27;  // 3 contents ^ 3 modes
inline constexpr double kNormTolerance = 1e-12;

/// Index of the basis ket |t,x,y> in the dense amplitude array.
constexpr int ket_index(ModeContent t, ModeContent x, ModeContent y) {
  return 9 * static_cast<int>(t) + 3 * static_cast<int>(x) +
         static_cast<int>(y);
}

/// Inverse of ket_index: the (t, x, y) contents of basis ket `index`.
std::array<ModeContent, 3> ket_contents(int index);

/// Dense amplitude vector over the 27 basis kets |t,x,y>.
struct TriModeState {
  std::array<Amplitude, kDim> amp{};

  Amplitude& operator[](int i) { return amp[i]; }
  const Amplitude& operator[](int i) const { return amp[i]; }
};

/// Unit state concentrated on one basis ket.
TriModeState basis_state(ModeContent t, ModeContent x, ModeContent y);

/// 2-norm of the amplitude vector.
double norm(const TriModeState& s);

/// <a|b> with the physics convention (conjugate-linear in `a`).
Amplitude inner_product(const TriModeState& a, const TriModeState& b);

/// Max-norm amplitude-wise equality.
bool approx_equal(const TriModeState& a, const TriModeState& b,
                  double tol = kNormTolerance);

/// Equality up to a global phase: |<a|b>| == |a||b| within tol.
bool approx_equal_up_to_phase(const TriModeState& a, const TriModeState& b,
                              double tol = kNormTolerance);

/// Hadamard on the selected mode's polarization; empty modes unchanged.
TriModeState apply_hadamard(const TriModeState& s, Mode mode);

/// Pauli I/X/Z or iY=ZX on the selected mode's polarization.
TriModeState apply_pauli(const TriModeState& s, Pauli op, Mode mode);

/// Exchanges the full contents (vacuum included) of modes t and x.
TriModeState apply_swap_tx(const TriModeState& s);

/// Controlled polarizing beam splitter: routing between the ancilla modes
/// controlled by the travel photon's polarization. When t carries |0>,
/// polarization-0 photons swap between x and y while polarization-1 photons
/// stay; when t carries |1> the roles reverse; an empty t leaves the ket
/// unchanged. Kets where x and y hold opposite polarizations route both
/// photons, i.e. swap the two modes' contents (keeps the gate an involution).
TriModeState apply_cpbs(const TriModeState& s);

/// Unconditional polarizing beam splitter between x and y: polarization-0
/// photons swap modes, polarization-1 photons stay, t untouched. Opposite-
/// polarization kets swap contents as in apply_cpbs.
TriModeState apply_pbs_xy(const TriModeState& s);

/// Flips the target mode's polarization when the control mode carries a
/// photon polarized 1; identity when the control is empty or polarized 0, or
/// the target is empty. Throws std::invalid_argument when control == target.
TriModeState apply_cnot(const TriModeState& s, Mode control, Mode target);

/// One outcome of a projective measurement: either no photon in the measured
/// mode(s), or a definite result, with its probability and the renormalized
/// post-measurement state. Zero-probability outcomes are omitted.
struct MeasurementOutcome {
  bool detected = false;  // photon present in the measured mode
  int bit = -1;           // 0/1 in the chosen basis; -1 when not detected
  double probability = 0.0;
  TriModeState collapsed;
};

/// Projective polarization measurement of one mode in basis Z or X. Returns
/// up to three outcomes (no-photon, bit 0, bit 1) with probabilities summing
/// to 1; collapsed states are renormalized.
std::vector<MeasurementOutcome> measure_polarization(const TriModeState& s,
                                                     Mode mode, Basis basis);

/// One outcome of the joint ancilla measurement: the observed contents of
/// modes x and y (occupancy and polarization), probability, and collapsed
/// state.
struct AncillaOutcome {
  ModeContent x = ModeContent::Vac;
  ModeContent y = ModeContent::Vac;
  double probability = 0.0;
  TriModeState collapsed;
};

/// Projective measurement distinguishing {vacuum, pol 0, pol 1} on each of
/// the two ancilla modes jointly (9 possible outcomes; zero-probability
/// outcomes omitted). Probabilities sum to 1.
std::vector<AncillaOutcome> measure_occupancy_pair(const TriModeState& s);

}  // namespace qsdc
