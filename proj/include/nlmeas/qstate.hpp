// Copyright 2026 The nlmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLMEAS_QSTATE_HPP
#define NLMEAS_QSTATE_HPP

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace nlmeas {

using cplx = std::complex<double>;

// Tolerance ladder used throughout: type invariants, derived equalities,
// and the cutoff below which a measurement branch counts as impossible.
constexpr double kNormTol = 1e-12;
constexpr double kDerivedTol = 1e-10;
constexpr double kBranchCutoff = 1e-14;

// Register layout, fixed for the whole library:
//
//   qubit order   [SystemA, SystemB, PointerA, PointerB]
//   basis index   8*sA + 4*sB + 2*pA + pB
//   qubit value 0 = |up_z>  (system)  /  left arm |L>  (pointer)
//   qubit value 1 = |dn_z>  (system)  /  right arm |R> (pointer)
enum class Qubit : int { SystemA = 0, SystemB = 1, PointerA = 2, PointerB = 3 };

// Bit position of a qubit inside the 4-bit basis index.
constexpr int bit_of(Qubit q) { return 3 - static_cast<int>(q); }
constexpr bool is_system(Qubit q) {
  return q == Qubit::SystemA || q == Qubit::SystemB;
}

// Two-qubit polarization state of the measured pair, index 2*sA + sB.
struct SystemState {
  std::array<cplx, 4> amps{};
};

// Two-qubit path state of the measuring device, index 2*pA + pB.
struct PointerState {
  std::array<cplx, 4> amps{};
};

// Full 4-qubit register, 16 dense amplitudes per the layout above.
struct PureState {
  std::array<cplx, 16> amps{};
};

double norm_squared(const SystemState& s);
double norm_squared(const PointerState& s);
double norm_squared(const PureState& s);

// Throws std::invalid_argument unless the norm is 1 within kNormTol.
void require_normalized(const SystemState& s, const char* what);
void require_normalized(const PointerState& s, const char* what);
void require_normalized(const PureState& s, const char* what);

SystemState normalized(const SystemState& s);

// Unit Bloch vector selecting the local spin observable a . sigma.
struct SpinAxis {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  static SpinAxis unit_x() { return {1.0, 0.0, 0.0}; }
  static SpinAxis unit_y() { return {0.0, 1.0, 0.0}; }
  static SpinAxis unit_z() { return {0.0, 0.0, 1.0}; }

  // Validates the unit-length invariant within kNormTol.
  static SpinAxis from_components(double x, double y, double z);
  // Rescales an arbitrary non-zero vector to unit length.
  static SpinAxis normalized(double x, double y, double z);
};

// 2x2 complex matrix acting on one qubit, row-major.
struct LocalUnitary {
  std::array<cplx, 4> m{};

  cplx at(int row, int col) const { return m[2 * row + col]; }
  LocalUnitary dagger() const;
  bool is_unitary(double tol = kNormTol) const;

  static LocalUnitary identity();
  // a . sigma with sigma_z |up_z> = |up_z>, sigma_x = |dn><up| + |up><dn|,
  // sigma_y = i|dn><up| - i|up><dn|.
  static LocalUnitary pauli(const SpinAxis& a);
  // Columns are the +1 and -1 eigenvectors of a . sigma (half-angle
  // construction), so U maps |0> -> |up_a> and |1> -> |dn_a>.
  static LocalUnitary axis_basis(const SpinAxis& a);
};

// Rank-1 or rank-2 projector on one or two target qubits, given as
// orthonormal spanning vectors over the target subspace. For two targets
// the spanning-vector index is 2*j(targets[0]) + j(targets[1]).
struct Projector {
  std::vector<Qubit> targets;
  std::vector<std::vector<cplx>> span;

  static Projector onto_qubit(Qubit q, const std::array<cplx, 2>& v);
  static Projector onto_product(Qubit qa, const std::array<cplx, 2>& va,
                                Qubit qb, const std::array<cplx, 2>& vb);
  static Projector onto_span(Qubit qa, Qubit qb, const std::array<cplx, 4>& v0,
                             const std::array<cplx, 4>& v1);

  // Throws std::invalid_argument unless targets are distinct and the
  // spanning vectors are orthonormal within kNormTol.
  void validate() const;
};

// Tensor assembly system (x) pointer. Both inputs must be unit norm.
PureState embed(const SystemState& system, const PointerState& pointer);

// Applies a single-qubit unitary to one register qubit.
PureState apply_local(const PureState& state, Qubit q, const LocalUnitary& u);

struct MaskBit {
  Qubit qubit;
  int value;  // 0 or 1
};

// Multiplies amplitudes whose basis index matches every (qubit, value) pair
// by e^{i phase}. The mask must be non-empty and may name at most one system
// and at most one pointer qubit.
PureState apply_phase_on_mask(const PureState& state,
                              const std::vector<MaskBit>& mask, double phase);

struct Projection {
  double prob = 0.0;
  std::optional<PureState> post;  // absent when prob < kBranchCutoff
};

struct SystemProjection {
  double prob = 0.0;
  std::optional<SystemState> post;
};

// Projective measurement branch: prob = |Pi psi|^2, post the renormalized
// projection when the branch is possible.
Projection measure_projective(const PureState& state, const Projector& proj);
// Same, on a bare system pair; projector targets must be system qubits.
SystemProjection measure_projective(const SystemState& state,
                                    const Projector& proj);

double fidelity(const PureState& a, const PureState& b);
double fidelity(const SystemState& a, const SystemState& b);
double fidelity(const PointerState& a, const PointerState& b);

// Purity of the reduced system state, tr(rho^2). Equals 1 within tolerance
// iff the register factorizes as system (x) pointer.
double factorization_check(const PureState& state);

// Extract the factors of a system (x) pointer product state. Precondition:
// factorization_check(state) = 1 within kDerivedTol.
SystemState extract_system(const PureState& state);
PointerState extract_pointer(const PureState& state);

}  // namespace nlmeas

#endif  // NLMEAS_QSTATE_HPP
