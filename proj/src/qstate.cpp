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

#include "nlmeas/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlmeas {

namespace {

template <std::size_t N>
double norm_squared_impl(const std::array<cplx, N>& amps) {
  double acc = 0.0;
  for (const cplx& a : amps) acc += std::norm(a);
  return acc;
}

template <std::size_t N>
void require_normalized_impl(const std::array<cplx, N>& amps,
                             const char* what) {
  for (const cplx& a : amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument(std::string(what) +
                                  ": amplitude is not finite");
    }
  }
  const double n2 = norm_squared_impl(amps);
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw std::invalid_argument(std::string(what) +
                                ": state is not normalized (|norm^2 - 1| = " +
                                std::to_string(std::abs(n2 - 1.0)) + ")");
  }
}

// Generic projection kernel over an n-qubit register. `target_bits` are bit
// positions inside the basis index, most significant first, matching the
// spanning-vector index convention.
template <std::size_t N>
double project_in_place(std::array<cplx, N>& amps,
                        const std::vector<int>& target_bits,
                        const std::vector<std::vector<cplx>>& span) {
  const int k = static_cast<int>(target_bits.size());
  const std::size_t sub_dim = std::size_t{1} << k;

  // Enumerate assignments of the non-target bits by iterating all indices
  // whose target bits are zero.
  std::size_t target_mask = 0;
  for (int b : target_bits) target_mask |= std::size_t{1} << b;

  double prob = 0.0;
  for (std::size_t rest = 0; rest < N; ++rest) {
    if (rest & target_mask) continue;

    std::array<std::size_t, 4> idx{};
    for (std::size_t j = 0; j < sub_dim; ++j) {
      std::size_t full = rest;
      for (int t = 0; t < k; ++t) {
        if ((j >> (k - 1 - t)) & 1) full |= std::size_t{1} << target_bits[t];
      }
      idx[j] = full;
    }

    std::array<cplx, 4> sub{};
    for (std::size_t j = 0; j < sub_dim; ++j) sub[j] = amps[idx[j]];

    std::array<cplx, 4> out{};
    for (const auto& v : span) {
      cplx overlap = 0.0;
      for (std::size_t j = 0; j < sub_dim; ++j)
        overlap += std::conj(v[j]) * sub[j];
      for (std::size_t j = 0; j < sub_dim; ++j) out[j] += overlap * v[j];
    }

    for (std::size_t j = 0; j < sub_dim; ++j) {
      amps[idx[j]] = out[j];
      prob += std::norm(out[j]);
    }
  }
  return prob;
}

template <std::size_t N>
double fidelity_impl(const std::array<cplx, N>& a,
                     const std::array<cplx, N>& b) {
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < N; ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

}  // namespace

double norm_squared(const SystemState& s) { return norm_squared_impl(s.amps); }
double norm_squared(const PointerState& s) { return norm_squared_impl(s.amps); }
double norm_squared(const PureState& s) { return norm_squared_impl(s.amps); }

void require_normalized(const SystemState& s, const char* what) {
  require_normalized_impl(s.amps, what);
}
void require_normalized(const PointerState& s, const char* what) {
  require_normalized_impl(s.amps, what);
}
void require_normalized(const PureState& s, const char* what) {
  require_normalized_impl(s.amps, what);
}

SystemState normalized(const SystemState& s) {
  const double n = std::sqrt(norm_squared(s));
  if (n < kBranchCutoff) {
    throw std::invalid_argument("cannot normalize a zero system state");
  }
  SystemState out;
  for (std::size_t i = 0; i < 4; ++i) out.amps[i] = s.amps[i] / n;
  return out;
}

SpinAxis SpinAxis::from_components(double x, double y, double z) {
  const double n2 = x * x + y * y + z * z;
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw std::invalid_argument("spin axis is not a unit vector");
  }
  return {x, y, z};
}

SpinAxis SpinAxis::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-9) {
    throw std::invalid_argument("spin axis has near-zero length");
  }
  return {x / n, y / n, z / n};
}

LocalUnitary LocalUnitary::dagger() const {
  LocalUnitary d;
  d.m = {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
  return d;
}

bool LocalUnitary::is_unitary(double tol) const {
  const LocalUnitary d = dagger();
  // d * this, compared to the identity entrywise.
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < 2; ++k) acc += d.at(r, k) * at(k, c);
      const cplx expect = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      if (std::abs(acc - expect) > tol) return false;
    }
  }
  return true;
}

LocalUnitary LocalUnitary::identity() {
  return {{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}}};
}

LocalUnitary LocalUnitary::pauli(const SpinAxis& a) {
  return {{cplx{a.z, 0.0}, cplx{a.x, -a.y}, cplx{a.x, a.y}, cplx{-a.z, 0.0}}};
}

LocalUnitary LocalUnitary::axis_basis(const SpinAxis& a) {
  const double theta = std::acos(std::clamp(a.z, -1.0, 1.0));
  const double phi = (a.x == 0.0 && a.y == 0.0) ? 0.0 : std::atan2(a.y, a.x);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const cplx eip = std::polar(1.0, phi);
  // columns: |up_a> = (c, s e^{i phi}),  |dn_a> = (-s e^{-i phi}, c)
  return {{cplx{c, 0.0}, -s * std::conj(eip), s * eip, cplx{c, 0.0}}};
}

Projector Projector::onto_qubit(Qubit q, const std::array<cplx, 2>& v) {
  Projector p;
  p.targets = {q};
  p.span = {{v[0], v[1]}};
  p.validate();
  return p;
}

Projector Projector::onto_product(Qubit qa, const std::array<cplx, 2>& va,
                                  Qubit qb, const std::array<cplx, 2>& vb) {
  Projector p;
  p.targets = {qa, qb};
  p.span = {{va[0] * vb[0], va[0] * vb[1], va[1] * vb[0], va[1] * vb[1]}};
  p.validate();
  return p;
}

Projector Projector::onto_span(Qubit qa, Qubit qb,
                               const std::array<cplx, 4>& v0,
                               const std::array<cplx, 4>& v1) {
  Projector p;
  p.targets = {qa, qb};
  p.span = {{v0[0], v0[1], v0[2], v0[3]}, {v1[0], v1[1], v1[2], v1[3]}};
  p.validate();
  return p;
}

void Projector::validate() const {
  if (targets.empty() || targets.size() > 2) {
    throw std::invalid_argument("projector must target one or two qubits");
  }
  if (targets.size() == 2 && targets[0] == targets[1]) {
    throw std::invalid_argument("projector targets must be distinct");
  }
  const std::size_t dim = std::size_t{1} << targets.size();
  if (span.empty() || span.size() > dim) {
    throw std::invalid_argument("projector rank must be 1 or 2");
  }
  for (const auto& v : span) {
    if (v.size() != dim) {
      throw std::invalid_argument("spanning vector has wrong dimension");
    }
  }
  for (std::size_t i = 0; i < span.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx g = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        g += std::conj(span[i][k]) * span[j][k];
      const cplx expect = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      if (std::abs(g - expect) > kNormTol) {
        throw std::invalid_argument("spanning vectors are not orthonormal");
      }
    }
  }
}

PureState embed(const SystemState& system, const PointerState& pointer) {
  require_normalized(system, "embed(system)");
  require_normalized(pointer, "embed(pointer)");
  PureState out;
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t p = 0; p < 4; ++p) {
      out.amps[4 * s + p] = system.amps[s] * pointer.amps[p];
    }
  }
  return out;
}

PureState apply_local(const PureState& state, Qubit q, const LocalUnitary& u) {
  const int bit = bit_of(q);
  const std::size_t mask = std::size_t{1} << bit;
  PureState out = state;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    if (idx & mask) continue;
    const cplx a0 = state.amps[idx];
    const cplx a1 = state.amps[idx | mask];
    out.amps[idx] = u.at(0, 0) * a0 + u.at(0, 1) * a1;
    out.amps[idx | mask] = u.at(1, 0) * a0 + u.at(1, 1) * a1;
  }
  return out;
}

PureState apply_phase_on_mask(const PureState& state,
                              const std::vector<MaskBit>& mask, double phase) {
  if (mask.empty()) {
    throw std::invalid_argument(
        "phase mask is empty (a phase on every basis state is an ambiguous "
        "global phase)");
  }
  int system_terms = 0;
  int pointer_terms = 0;
  for (const MaskBit& b : mask) {
    if (b.value != 0 && b.value != 1) {
      throw std::invalid_argument("mask value must be 0 or 1");
    }
    (is_system(b.qubit) ? system_terms : pointer_terms) += 1;
  }
  if (system_terms > 1 || pointer_terms > 1) {
    throw std::invalid_argument(
        "phase mask may name at most one system and one pointer qubit");
  }

  std::size_t select = 0;
  std::size_t want = 0;
  for (const MaskBit& b : mask) {
    select |= std::size_t{1} << bit_of(b.qubit);
    if (b.value) want |= std::size_t{1} << bit_of(b.qubit);
  }

  const cplx factor = std::polar(1.0, phase);
  PureState out = state;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    if ((idx & select) == want) out.amps[idx] *= factor;
  }
  return out;
}

Projection measure_projective(const PureState& state, const Projector& proj) {
  proj.validate();
  std::vector<int> bits;
  bits.reserve(proj.targets.size());
  for (Qubit q : proj.targets) bits.push_back(bit_of(q));

  PureState work = state;
  const double prob = project_in_place(work.amps, bits, proj.span);

  Projection result;
  result.prob = prob;
  if (prob >= kBranchCutoff) {
    const double n = std::sqrt(prob);
    for (cplx& a : work.amps) a /= n;
    result.post = work;
  }
  return result;
}

SystemProjection measure_projective(const SystemState& state,
                                    const Projector& proj) {
  proj.validate();
  std::vector<int> bits;
  bits.reserve(proj.targets.size());
  for (Qubit q : proj.targets) {
    if (!is_system(q)) {
      throw std::invalid_argument(
          "system-state projector may target only system qubits");
    }
    // SystemA occupies bit 1 and SystemB bit 0 of the 2-qubit index.
    bits.push_back(q == Qubit::SystemA ? 1 : 0);
  }

  SystemState work = state;
  const double prob = project_in_place(work.amps, bits, proj.span);

  SystemProjection result;
  result.prob = prob;
  if (prob >= kBranchCutoff) {
    const double n = std::sqrt(prob);
    for (cplx& a : work.amps) a /= n;
    result.post = work;
  }
  return result;
}

double fidelity(const PureState& a, const PureState& b) {
  return fidelity_impl(a.amps, b.amps);
}
double fidelity(const SystemState& a, const SystemState& b) {
  return fidelity_impl(a.amps, b.amps);
}
double fidelity(const PointerState& a, const PointerState& b) {
  return fidelity_impl(a.amps, b.amps);
}

double factorization_check(const PureState& state) {
  // Reduced system density matrix rho[s][s'] = sum_p M[s][p] conj(M[s'][p])
  // with M[s][p] = amps[4s + p]; purity = sum |rho|^2.
  std::array<std::array<cplx, 4>, 4> rho{};
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t t = 0; t < 4; ++t) {
      cplx acc = 0.0;
      for (std::size_t p = 0; p < 4; ++p) {
        acc += state.amps[4 * s + p] * std::conj(state.amps[4 * t + p]);
      }
      rho[s][t] = acc;
    }
  }
  double purity = 0.0;
  for (const auto& row : rho) {
    for (const cplx& e : row) purity += std::norm(e);
  }
  return purity;
}

SystemState extract_system(const PureState& state) {
  // For a product state the 4x4 amplitude matrix M[s][p] has rank 1, so any
  // non-negligible pointer column is proportional to the system factor.
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t p = 0; p < 4; ++p) {
    double n = 0.0;
    for (std::size_t s = 0; s < 4; ++s) n += std::norm(state.amps[4 * s + p]);
    if (n > best_norm) {
      best_norm = n;
      best = p;
    }
  }
  SystemState out;
  const double n = std::sqrt(best_norm);
  for (std::size_t s = 0; s < 4; ++s) out.amps[s] = state.amps[4 * s + best] / n;
  return out;
}

PointerState extract_pointer(const PureState& state) {
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t s = 0; s < 4; ++s) {
    double n = 0.0;
    for (std::size_t p = 0; p < 4; ++p) n += std::norm(state.amps[4 * s + p]);
    if (n > best_norm) {
      best_norm = n;
      best = s;
    }
  }
  PointerState out;
  const double n = std::sqrt(best_norm);
  for (std::size_t p = 0; p < 4; ++p) out.amps[p] = state.amps[4 * best + p] / n;
  return out;
}

}  // namespace nlmeas
