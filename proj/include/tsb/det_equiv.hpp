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


// Deterministic equivalents of the sector projections of the MMSE receivers.
//
// Powers here are the normalized powers pbar_j that enter the resolvent
//
//   T = ( (1/N) sum_j pbar_j Theta_j / (1 + pbar_j mbar_j) + I )^{-1},
//   mbar_j = (1/N) tr(Theta_j T).
//
// For channels h_j = Theta_j^{1/2} z_j with unit-variance z_j, the matching
// exact-domain power is p_j = pbar_j / N.

#pragma once

#include <span>
#include <vector>

#include "tsb/channel_model.hpp"
#include "tsb/sectorization.hpp"
#include "tsb/types.hpp"

namespace tsb {

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  // m <- (1 - damping) F(m) + damping m; 0 is plain Picard iteration.
  double damping = 0.0;
};

struct FixedPointResult {
  RVec m_bar;
  CMat t_matrix;
  int iterations = 0;
  double residual = 0.0;  // max_j |m_j^(last) - m_j^(last-1)|
};

struct DetEqResult {
  RVec m_bar;
  CMat t_matrix;
  RMat l_matrix;   // K x K
  RMat b_vectors;  // K x S, column i is b_i
  RMat omega_bar;  // K x S
  double l_spectral_radius = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Fixed point of mbar_j = (1/N) tr(Theta_j T). Starts from mbar = 1.
// Throws ConvergenceError after max_iter iterations.
FixedPointResult fixed_point_m(std::span<const CorrelationMatrix> thetas, const RVec& powers,
                               int n, const FixedPointOptions& opts = {});

// L_ij = tr(Theta_i T Theta_j T) / N^2 * pbar_j^2 / (1 + pbar_j mbar_j)^2.
RMat build_l_matrix(std::span<const CorrelationMatrix> thetas, const CMat& t_matrix,
                    const RVec& m_bar, const RVec& powers, int n);

// b_k = (1/N) tr(Theta_k T S S^H T) for one sector basis S (N x D).
RVec build_b_vector(std::span<const CorrelationMatrix> thetas, const CMat& t_matrix,
                    const CMat& sector_basis, int n);

// Spectral radius of a real square matrix.
double spectral_radius(const RMat& m);

// omega_bar(:, i) = (I - L)^{-1} b_i, one LU factorization for all sectors.
// Throws if rho(L) >= 1 or the condition estimate of I - L exceeds 1e12.
RMat solve_omega_bar(const RMat& l_matrix, const RMat& b_vectors);

// Full pipeline over all sectors.
DetEqResult deterministic_equivalent(std::span<const CorrelationMatrix> thetas,
                                     const RVec& powers, const SectorSet& sectors,
                                     const FixedPointOptions& opts = {});

// Fixed point of the sector-perturbed resolvent
//
//   T(z, x) = ( (1/N) sum_j pbar_j Theta_j / (1 + pbar_j m_j) - x S S^H - z I )^{-1},
//   m_k = (1/N) tr(Theta_k T(z, x)),
//
// for x <= 0 and z < 0. Its derivative in x at (x, z) = (0, -1) equals
// omega_bar(:, i); the function is the finite-difference reference for it.
RVec perturbed_stieltjes_oracle(std::span<const CorrelationMatrix> thetas, const RVec& powers,
                                const CMat& sector_basis, double x, double z,
                                const FixedPointOptions& opts = {});

}  // namespace tsb
