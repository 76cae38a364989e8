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


// Independent reference computations used only by the tests.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "tsb/channel_model.hpp"
#include "tsb/types.hpp"

namespace tsb::testing {

// One-ring correlation by composite trapezoid rule with `nodes` points.
inline CMat one_ring_trapezoid(double phi_center, double delta_phi, double a2, int n,
                               double spacing, int nodes) {
  const double lo = phi_center - 0.5 * delta_phi;
  const double h = delta_phi / (nodes - 1);
  CMat theta(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int m = 0; m < nodes; ++m) {
        const double w = (m == 0 || m == nodes - 1) ? 0.5 : 1.0;
        const double arg = 2.0 * std::numbers::pi * spacing * (j - i) * std::cos(lo + m * h);
        acc += w * std::polar(1.0, arg);
      }
      theta(j, i) = a2 * acc * h / delta_phi;
    }
  }
  return theta;
}

// Positive root of m (1 + beta p / (1 + p m)) = 1, i.e.
// p m^2 + (1 + beta p - p) m - 1 = 0.
inline double homogeneous_m(double beta, double p) {
  if (p == 0.0) return 1.0;
  const double b = 1.0 + beta * p - p;
  return (-b + std::sqrt(b * b + 4.0 * p)) / (2.0 * p);
}

inline CMat random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cplx(g(rng), g(rng));
  }
  return m;
}

inline CMat random_psd(Eigen::Index n, std::mt19937_64& rng) {
  const CMat a = random_complex(n, n, rng);
  return a * a.adjoint();
}

// Random channel set with unit noise.
inline ChannelSet random_channels(int n, int k, double power, std::mt19937_64& rng) {
  return ChannelSet{random_complex(n, k, rng), RVec::Constant(k, power), 1.0};
}

// Straight inverse-based MMSE vector.
inline CVec mmse_by_inverse(const ChannelSet& ch, int k) {
  const Eigen::Index n = ch.n_antennas();
  CMat r = CMat::Identity(n, n) * ch.noise_var;
  for (Eigen::Index j = 0; j < ch.n_users(); ++j) {
    if (j != k) r += ch.powers(j) * ch.h.col(j) * ch.h.col(j).adjoint();
  }
  return r.inverse() * ch.h.col(k);
}

inline double rel_frobenius(const CMat& a, const CMat& b) { return (a - b).norm() / b.norm(); }

}  // namespace tsb::testing
