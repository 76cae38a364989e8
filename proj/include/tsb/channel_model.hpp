// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The tsb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "tsb/types.hpp"

namespace tsb {

// Angular position and spread of one user as seen from a broadside ULA.
struct UeGeometry {
  double phi_center = 0.0;       // mean angle of arrival [rad], in [0, pi]
  double delta_phi = 0.0;        // angular spread [rad]; support is phi_center +- delta_phi/2
  double pathloss_amp_sq = 1.0;  // a_k^2
};

// Throws Error if the geometry is outside its valid domain.
void validate(const UeGeometry& geom);

// Hermitian PSD spatial correlation matrix with a cached square root.
//
// The square root is computed on first use and shared between copies; the
// object is safe to read from several threads.
class CorrelationMatrix {
 public:
  // Symmetrizes `theta`. Throws if it is not square or not Hermitian to 1e-10.
  explicit CorrelationMatrix(CMat theta);
  CorrelationMatrix(CMat theta, CMat sqrt_theta);

  const CMat& theta() const;
  const CMat& sqrt_theta() const;
  Eigen::Index size() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

struct QuadratureOptions {
  int initial_nodes = 64;
  int max_nodes = 4096;
  double rel_tol = 1e-8;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// One-ring (diffuse ring of scatterers) correlation of a uniform linear array:
//
//   [Theta]_{j,i} = a^2 / dphi * int exp(i 2 pi s (j - i) cos(phi)) dphi
//
// over [phi_center - dphi/2, phi_center + dphi/2], s = spacing / wavelength.
// The rule doubles from `initial_nodes` until successive estimates agree to
// `rel_tol` relative to a^2. Negative eigenvalues from quadrature noise are
// clipped to zero.
CorrelationMatrix build_correlation_matrix(const UeGeometry& geom,
                                           double spacing_over_wavelength, int n_antennas,
                                           const QuadratureOptions& opts = {});

// M with M M^H = theta, from an eigendecomposition with eigenvalues clipped at 0.
CMat matrix_sqrt_psd(const CMat& theta);

using Rng = std::mt19937_64;

// Independent stream for (seed, trial, ue). Streams do not depend on how many
// other streams exist or in which order they are consumed.
Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t ue);

// h = sqrt_theta * z, z ~ CN(0, I).
CVec draw_channel(const CMat& sqrt_theta, Rng& rng);

// K users at equal separation over [arc_start, arc_end], half-step offset
// from each end, unit pathloss.
std::vector<UeGeometry> place_users(int k_users, double arc_start, double arc_end,
                                    double delta_phi);

// Realized channels of one coherence block.
struct ChannelSet {
  CMat h;          // N x K, column k is h_k
  RVec powers;     // p_k >= 0
  double noise_var = 1.0;

  Eigen::Index n_antennas() const { return h.rows(); }
  Eigen::Index n_users() const { return h.cols(); }
};

void validate(const ChannelSet& channels);

// Draws h_k for every user from substream(seed, trial, k).
ChannelSet draw_channel_set(std::span<const CorrelationMatrix> thetas, const RVec& powers,
                            double noise_var, std::uint64_t seed, std::uint64_t trial);

}  // namespace tsb
