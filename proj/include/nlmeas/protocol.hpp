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

#ifndef NLMEAS_PROTOCOL_HPP
#define NLMEAS_PROTOCOL_HPP

#include <array>
#include <optional>
#include <string>

#include "nlmeas/qstate.hpp"

// The measurement protocol: an entangled two-arm pointer is prepared, each
// site couples its system qubit to its pointer qubit with a conditional pi
// phase, and local readout of the pointer arms in a common (phi-dependent)
// +/- basis reveals the product-observable eigenvalue through the parity of
// the two local records.

namespace nlmeas {

// Which product (or single local) observable is coupled. At least one axis
// must be present; a single axis yields a strictly local measurement.
struct CouplingSpec {
  std::optional<SpinAxis> axis_a;
  std::optional<SpinAxis> axis_b;

  static CouplingSpec both(const SpinAxis& a, const SpinAxis& b) {
    return {a, b};
  }
  static CouplingSpec site_a(const SpinAxis& a) { return {a, std::nullopt}; }
  static CouplingSpec site_b(const SpinAxis& b) { return {std::nullopt, b}; }

  bool has_both() const { return axis_a.has_value() && axis_b.has_value(); }
  void validate() const;
};

// Pointer preparation: (|LR> + |RL>) / sqrt(2).
PointerState prepare_pointer();
// The anticorrelated partner (|LR> - |RL>) / sqrt(2), reached when the
// coupled observable has eigenvalue -1.
PointerState pointer_psi_minus();

// Local readout basis |+/-> = (|L> +/- e^{i phi} |R>) / sqrt(2).
std::array<cplx, 2> pointer_plus(double phi);
std::array<cplx, 2> pointer_minus(double phi);

// The coupling unitary as a composition recipe. Per present site it rotates
// the system qubit into the axis eigenbasis, applies a conditional pi phase
// on (system = -1 eigenstate) AND (arm R at site A / arm L at site B), and
// rotates back. This realizes exp(-i (pi/4) (1 - sigma_axis)(1 -+ ptr_z))
// exactly, without numeric matrix exponentials.
struct CouplingOp {
  CouplingSpec spec;

  PureState apply(const PureState& state) const;
  // Dense 16x16 matrix of the recipe, column-major over basis states.
  // Intended for equivalence tests against direct exponentials.
  std::array<std::array<cplx, 16>, 16> matrix() const;
};

CouplingOp coupling_unitary(const CouplingSpec& spec);

// Convenience: embed the system with the prepared pointer and couple.
PureState couple_to_pointer(const SystemState& system,
                            const CouplingSpec& spec);

enum class Sign { Plus, Minus };

// +1 iff the two local records agree; for the prepared pointer,
// correlations flag eigenvalue +1 and anticorrelations -1.
int decode(Sign local_a, Sign local_b);

struct ReadoutPort {
  Sign local_a;
  Sign local_b;
  double prob = 0.0;
  std::optional<PureState> post;  // pointer collapsed onto the port
};

// Port label in readout order: "++", "+-", "-+", "--".
std::string port_label(Sign a, Sign b);

// Projects each pointer qubit onto the |+/-> basis with the common phase phi.
// Probabilities sum to 1 within kDerivedTol.
std::array<ReadoutPort, 4> readout(const PureState& state, double phi);

struct Branch {
  double prob = 0.0;
  std::optional<SystemState> post_system;  // absent for an impossible branch
};

struct MeasurementResult {
  Branch plus;   // decoded eigenvalue +1
  Branch minus;  // decoded eigenvalue -1

  const Branch& branch(int eigenvalue) const {
    return eigenvalue > 0 ? plus : minus;
  }
};

// Full scheme: embed -> couple -> readout -> decode, with the two ports of
// equal parity merged coherently (rank-2 pointer projection) before the
// system factor is extracted.
MeasurementResult measure_nonlocal(const SystemState& system,
                                   const CouplingSpec& spec, double phi);

enum class Site { A, B };

// Same pipeline with a single-site coupling; the decoded sign equals the
// eigenvalue of the local observable at that site.
MeasurementResult measure_local(const SystemState& system, Site site,
                                const SpinAxis& axis, double phi);

// Independent check: textbook projective measurement of the product
// observable via its +/-1 eigenspace projectors (1 +/- A (x) B) / 2.
MeasurementResult projective_oracle(const SystemState& system,
                                    const CouplingSpec& spec);

// The product of local z observables equals a modular sum of them,
// (eigA + eigB) mod 4 - 1, which is what makes it measurable by local
// couplings at all. Verified on all four joint z eigenstates, with the
// product eigenvalue taken from the protocol itself.
struct ModularSumEntry {
  std::string state;
  int eig_a = 0;
  int eig_b = 0;
  int mod_sum = 0;   // (eig_a + eig_b) mod 4, mapped to {0, 2}, minus 1
  int product = 0;   // decoded eigenvalue from measure_nonlocal
  bool consistent = false;
};

struct ModularSumReport {
  std::array<ModularSumEntry, 4> entries;
  bool all_consistent = false;
};

ModularSumReport modular_sum_check();

}  // namespace nlmeas

#endif  // NLMEAS_PROTOCOL_HPP
