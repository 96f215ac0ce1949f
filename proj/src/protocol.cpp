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

#include "nlmeas/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace nlmeas {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

// Tensor of the readout vectors over (PointerA, PointerB).
std::array<cplx, 4> pointer_product(const std::array<cplx, 2>& va,
                                    const std::array<cplx, 2>& vb) {
  return {va[0] * vb[0], va[0] * vb[1], va[1] * vb[0], va[1] * vb[1]};
}

// Applies one site's coupling: conditional pi phase on the -1 eigenstate of
// the site axis, gated on arm R at site A and arm L at site B.
PureState apply_site_coupling(PureState state, Site site,
                              const SpinAxis& axis) {
  const Qubit sys = site == Site::A ? Qubit::SystemA : Qubit::SystemB;
  const Qubit ptr = site == Site::A ? Qubit::PointerA : Qubit::PointerB;
  const int arm = site == Site::A ? 1 : 0;  // R at A, L at B

  const LocalUnitary rot = LocalUnitary::axis_basis(axis);
  state = apply_local(state, sys, rot.dagger());
  state = apply_phase_on_mask(state, {{sys, 1}, {ptr, arm}}, std::numbers::pi);
  return apply_local(state, sys, rot);
}

SystemState product_state(const std::array<cplx, 2>& va,
                          const std::array<cplx, 2>& vb) {
  SystemState s;
  s.amps = {va[0] * vb[0], va[0] * vb[1], va[1] * vb[0], va[1] * vb[1]};
  return s;
}

// Coherent merge of the equal-parity readout ports: project the pointer onto
// the rank-2 +/- subspace matching each decoded eigenvalue, then split off
// the (now factorized) system state.
MeasurementResult decode_branches(const PureState& joint, double phi) {
  const std::array<cplx, 2> plus = pointer_plus(phi);
  const std::array<cplx, 2> minus = pointer_minus(phi);

  MeasurementResult result;
  for (int eig : {+1, -1}) {
    const Projector proj =
        eig > 0 ? Projector::onto_span(Qubit::PointerA, Qubit::PointerB,
                                       pointer_product(plus, plus),
                                       pointer_product(minus, minus))
                : Projector::onto_span(Qubit::PointerA, Qubit::PointerB,
                                       pointer_product(plus, minus),
                                       pointer_product(minus, plus));
    const Projection branch = measure_projective(joint, proj);
    Branch& out = eig > 0 ? result.plus : result.minus;
    out.prob = branch.prob;
    if (branch.post) out.post_system = extract_system(*branch.post);
  }
  return result;
}

}  // namespace

void CouplingSpec::validate() const {
  if (!axis_a && !axis_b) {
    throw std::invalid_argument("coupling spec must name at least one axis");
  }
}

PointerState prepare_pointer() {
  PointerState p;
  p.amps = {cplx{0.0}, cplx{kInvSqrt2}, cplx{kInvSqrt2}, cplx{0.0}};
  return p;
}

PointerState pointer_psi_minus() {
  PointerState p;
  p.amps = {cplx{0.0}, cplx{kInvSqrt2}, cplx{-kInvSqrt2}, cplx{0.0}};
  return p;
}

std::array<cplx, 2> pointer_plus(double phi) {
  return {cplx{kInvSqrt2}, std::polar(kInvSqrt2, phi)};
}

std::array<cplx, 2> pointer_minus(double phi) {
  return {cplx{kInvSqrt2}, -std::polar(kInvSqrt2, phi)};
}

PureState CouplingOp::apply(const PureState& state) const {
  PureState out = state;
  if (spec.axis_a) out = apply_site_coupling(out, Site::A, *spec.axis_a);
  if (spec.axis_b) out = apply_site_coupling(out, Site::B, *spec.axis_b);
  return out;
}

std::array<std::array<cplx, 16>, 16> CouplingOp::matrix() const {
  std::array<std::array<cplx, 16>, 16> cols{};
  for (std::size_t j = 0; j < 16; ++j) {
    PureState basis;
    basis.amps[j] = 1.0;
    cols[j] = apply(basis).amps;
  }
  return cols;
}

CouplingOp coupling_unitary(const CouplingSpec& spec) {
  spec.validate();
  return CouplingOp{spec};
}

PureState couple_to_pointer(const SystemState& system,
                            const CouplingSpec& spec) {
  return coupling_unitary(spec).apply(embed(system, prepare_pointer()));
}

int decode(Sign local_a, Sign local_b) { return local_a == local_b ? 1 : -1; }

std::string port_label(Sign a, Sign b) {
  std::string s;
  s += a == Sign::Plus ? '+' : '-';
  s += b == Sign::Plus ? '+' : '-';
  return s;
}

std::array<ReadoutPort, 4> readout(const PureState& state, double phi) {
  require_normalized(state, "readout");
  const std::array<cplx, 2> plus = pointer_plus(phi);
  const std::array<cplx, 2> minus = pointer_minus(phi);

  const std::array<std::pair<Sign, std::array<cplx, 2>>, 2> basis = {
      std::pair{Sign::Plus, plus}, std::pair{Sign::Minus, minus}};

  std::array<ReadoutPort, 4> ports;
  std::size_t k = 0;
  for (const auto& [sa, va] : basis) {
    for (const auto& [sb, vb] : basis) {
      const Projector proj =
          Projector::onto_product(Qubit::PointerA, va, Qubit::PointerB, vb);
      Projection branch = measure_projective(state, proj);
      ports[k].local_a = sa;
      ports[k].local_b = sb;
      ports[k].prob = branch.prob;
      ports[k].post = std::move(branch.post);
      ++k;
    }
  }
  return ports;
}

MeasurementResult measure_nonlocal(const SystemState& system,
                                   const CouplingSpec& spec, double phi) {
  if (!spec.has_both()) {
    throw std::invalid_argument("measure_nonlocal requires both axes");
  }
  require_normalized(system, "measure_nonlocal");
  const PureState joint = couple_to_pointer(system, spec);

  const std::array<cplx, 2> plus = pointer_plus(phi);
  const std::array<cplx, 2> minus = pointer_minus(phi);

  MeasurementResult result;
  for (int eig : {+1, -1}) {
    // Coherent merge of the two equal-parity ports: project the pointer onto
    // the rank-2 subspace and only then split off the system factor.
    const Projector proj =
        eig > 0 ? Projector::onto_span(Qubit::PointerA, Qubit::PointerB,
                                       pointer_product(plus, plus),
                                       pointer_product(minus, minus))
                : Projector::onto_span(Qubit::PointerA, Qubit::PointerB,
                                       pointer_product(plus, minus),
                                       pointer_product(minus, plus));
    const Projection branch = measure_projective(joint, proj);
    Branch& out = eig > 0 ? result.plus : result.minus;
    out.prob = branch.prob;
    if (branch.post) out.post_system = extract_system(*branch.post);
  }
  return result;
}

MeasurementResult measure_local(const SystemState& system, Site site,
                                const SpinAxis& axis, double phi) {
  require_normalized(system, "measure_local");
  const CouplingSpec spec = site == Site::A ? CouplingSpec::site_a(axis)
                                            : CouplingSpec::site_b(axis);
  const PureState joint = couple_to_pointer(system, spec);

  const std::array<cplx, 2> plus = pointer_plus(phi);
  const std::array<cplx, 2> minus = pointer_minus(phi);

  MeasurementResult result;
  for (int eig : {+1, -1}) {
    const Projector proj =
        eig > 0 ? Projector::onto_span(Qubit::PointerA, Qubit::PointerB,
                                       pointer_product(plus, plus),
                                       pointer_product(minus, minus))
                : Projector::onto_span(Qubit::PointerA, Qubit::PointerB,
                                       pointer_product(plus, minus),
                                       pointer_product(minus, plus));
    const Projection branch = measure_projective(joint, proj);
    Branch& out = eig > 0 ? result.plus : result.minus;
    out.prob = branch.prob;
    if (branch.post) out.post_system = extract_system(*branch.post);
  }
  return result;
}

MeasurementResult projective_oracle(const SystemState& system,
                                    const CouplingSpec& spec) {
  if (!spec.has_both()) {
    throw std::invalid_argument("projective_oracle requires both axes");
  }
  require_normalized(system, "projective_oracle");

  const LocalUnitary sa = LocalUnitary::pauli(*spec.axis_a);
  const LocalUnitary sb = LocalUnitary::pauli(*spec.axis_b);

  // Dense 4x4 product observable over (SystemA, SystemB).
  std::array<std::array<cplx, 4>, 4> op{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      op[r][c] = sa.at(r >> 1, c >> 1) * sb.at(r & 1, c & 1);
    }
  }

  MeasurementResult result;
  for (int eig : {+1, -1}) {
    std::array<cplx, 4> projected{};
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += op[r][c] * system.amps[c];
      projected[r] = 0.5 * (system.amps[r] + static_cast<double>(eig) * acc);
    }
    double prob = 0.0;
    for (const cplx& a : projected) prob += std::norm(a);

    Branch& out = eig > 0 ? result.plus : result.minus;
    out.prob = prob;
    if (prob >= kBranchCutoff) {
      SystemState post;
      const double n = std::sqrt(prob);
      for (int r = 0; r < 4; ++r) post.amps[r] = projected[r] / n;
      out.post_system = post;
    }
  }
  return result;
}

ModularSumReport modular_sum_check() {
  const std::array<cplx, 2> up = {cplx{1.0}, cplx{0.0}};
  const std::array<cplx, 2> dn = {cplx{0.0}, cplx{1.0}};
  const CouplingSpec zz =
      CouplingSpec::both(SpinAxis::unit_z(), SpinAxis::unit_z());

  ModularSumReport report;
  report.all_consistent = true;
  const std::array<std::tuple<std::string, int, int>, 4> cases = {
      std::tuple{"|up up>", +1, +1}, std::tuple{"|up dn>", +1, -1},
      std::tuple{"|dn up>", -1, +1}, std::tuple{"|dn dn>", -1, -1}};

  for (std::size_t i = 0; i < 4; ++i) {
    const auto& [name, ea, eb] = cases[i];
    const SystemState state =
        product_state(ea > 0 ? up : dn, eb > 0 ? up : dn);

    // mod 4 with the representative set {0, 2}: -2, 0, +2 -> 2, 0, 2.
    const int mod = (((ea + eb) % 4) + 4) % 4;

    const MeasurementResult mr = measure_nonlocal(state, zz, 0.0);
    const int product = mr.plus.prob > mr.minus.prob ? 1 : -1;

    ModularSumEntry& e = report.entries[i];
    e.state = name;
    e.eig_a = ea;
    e.eig_b = eb;
    e.mod_sum = mod - 1;
    e.product = product;
    e.consistent = (e.mod_sum == e.product) &&
                   std::abs(mr.branch(product).prob - 1.0) < kDerivedTol;
    report.all_consistent = report.all_consistent && e.consistent;
  }
  return report;
}

}  // namespace nlmeas
