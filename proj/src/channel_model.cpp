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


#include "tsb/channel_model.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <string>

namespace tsb {
namespace {

constexpr double kHermitianTol = 1e-10;

double hermitian_defect(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMat symmetrized(const CMat& a) { return 0.5 * (a + a.adjoint()); }

void require_hermitian(const CMat& a, const char* who) {
  if (a.rows() != a.cols()) throw Error(std::string(who) + ": matrix is not square");
  const double scale = std::max(1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
  if (hermitian_defect(a) > kHermitianTol * scale) {
    throw Error(std::string(who) + ": matrix is not Hermitian");
  }
}

}  // namespace

struct CorrelationMatrix::State {
  CMat theta;
  mutable std::once_flag sqrt_once;
  mutable CMat sqrt_theta;
};

void validate(const UeGeometry& geom) {
  if (!(geom.delta_phi > 0.0 && geom.delta_phi <= std::numbers::pi)) {
    throw Error("UeGeometry: delta_phi must lie in (0, pi]");
  }
  if (!(geom.phi_center >= 0.0 && geom.phi_center <= std::numbers::pi)) {
    throw Error("UeGeometry: phi_center must lie in [0, pi]");
  }
  if (!(geom.pathloss_amp_sq > 0.0) || !std::isfinite(geom.pathloss_amp_sq)) {
    throw Error("UeGeometry: pathloss_amp_sq must be positive and finite");
  }
}

CorrelationMatrix::CorrelationMatrix(CMat theta) : state_(std::make_shared<State>()) {
  require_hermitian(theta, "CorrelationMatrix");
  if (!theta.allFinite()) throw Error("CorrelationMatrix: non-finite entries");
  state_->theta = symmetrized(theta);
}

CorrelationMatrix::CorrelationMatrix(CMat theta, CMat sqrt_theta)
    : CorrelationMatrix(std::move(theta)) {
  if (sqrt_theta.rows() != size() || sqrt_theta.cols() != size()) {
    throw Error("CorrelationMatrix: square root has the wrong shape");
  }
  std::call_once(state_->sqrt_once, [&] { state_->sqrt_theta = std::move(sqrt_theta); });
}

const CMat& CorrelationMatrix::theta() const { return state_->theta; }

Eigen::Index CorrelationMatrix::size() const { return state_->theta.rows(); }

const CMat& CorrelationMatrix::sqrt_theta() const {
  std::call_once(state_->sqrt_once,
                 [this] { state_->sqrt_theta = matrix_sqrt_psd(state_->theta); });
  return state_->sqrt_theta;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

CorrelationMatrix build_correlation_matrix(const UeGeometry& geom,
                                           double spacing_over_wavelength, int n_antennas,
                                           const QuadratureOptions& opts) {
  validate(geom);
  if (n_antennas < 1) throw Error("build_correlation_matrix: n_antennas must be >= 1");
  if (!(spacing_over_wavelength > 0.0)) {
    throw Error("build_correlation_matrix: spacing must be positive");
  }

  // Theta is Toeplitz: integrate each lag d = j - i >= 0 once.
  const double lo = geom.phi_center - 0.5 * geom.delta_phi;
  const double half_width = 0.5 * geom.delta_phi;
  const double a2 = geom.pathloss_amp_sq;
  const double k0 = 2.0 * std::numbers::pi * spacing_over_wavelength;

  auto integrate = [&](int nodes_count) {
    std::vector<double> x, w;
    gauss_legendre(nodes_count, x, w);
    std::vector<double> cos_phi(nodes_count);
    for (int m = 0; m < nodes_count; ++m) cos_phi[m] = std::cos(lo + half_width * (x[m] + 1.0));
    std::vector<cplx> lag(n_antennas);
    for (int d = 0; d < n_antennas; ++d) {
      double re = 0.0, im = 0.0;
      for (int m = 0; m < nodes_count; ++m) {
        const double arg = k0 * d * cos_phi[m];
        re += w[m] * std::cos(arg);
        im += w[m] * std::sin(arg);
      }
      // (half_width / delta_phi) = 1/2 maps the [-1, 1] rule onto the mean.
      lag[d] = 0.5 * a2 * cplx(re, im);
    }
    return lag;
  };

  int nodes_count = opts.initial_nodes;
  std::vector<cplx> prev = integrate(nodes_count);
  std::vector<cplx> lag;
  double err = 0.0;
  for (;;) {
    if (nodes_count * 2 > opts.max_nodes) {
      throw Error("build_correlation_matrix: quadrature did not converge (relative error " +
                  std::to_string(err) + ")");
    }
    nodes_count *= 2;
    lag = integrate(nodes_count);
    err = 0.0;
    for (int d = 0; d < n_antennas; ++d) err = std::max(err, std::abs(lag[d] - prev[d]) / a2);
    if (err < opts.rel_tol) break;
    prev = std::move(lag);
  }

  CMat theta(n_antennas, n_antennas);
  for (int j = 0; j < n_antennas; ++j) {
    for (int i = 0; i < n_antennas; ++i) {
      theta(j, i) = j >= i ? lag[j - i] : std::conj(lag[i - j]);
    }
  }
  theta.diagonal().setConstant(cplx(a2, 0.0));

  Eigen::SelfAdjointEigenSolver<CMat> eig(theta);
  if (eig.info() != Eigen::Success) {
    throw Error("build_correlation_matrix: eigendecomposition failed");
  }
  RVec lambda = eig.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  const double lambda_min = lambda.minCoeff();
  if (lambda_min < -1e-8 * lambda_max) {
    std::cerr << "warning: build_correlation_matrix clipped eigenvalue " << lambda_min
              << " (max " << lambda_max << ")\n";
  }
  const CMat& v = eig.eigenvectors();
  if (lambda_min < 0.0) {
    lambda = lambda.cwiseMax(0.0);
    theta = symmetrized(v * lambda.asDiagonal() * v.adjoint());
  }
  CMat sqrt_theta = v * lambda.cwiseSqrt().asDiagonal() * v.adjoint();
  return CorrelationMatrix(std::move(theta), std::move(sqrt_theta));
}

CMat matrix_sqrt_psd(const CMat& theta) {
  require_hermitian(theta, "matrix_sqrt_psd");
  if (theta.size() == 0) return theta;
  Eigen::SelfAdjointEigenSolver<CMat> eig(symmetrized(theta));
  if (eig.info() != Eigen::Success) throw Error("matrix_sqrt_psd: eigendecomposition failed");
  const RVec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t ue) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(trial), hi(trial), lo(ue), hi(ue)};
  return Rng(seq);
}

CVec draw_channel(const CMat& sqrt_theta, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CVec z(sqrt_theta.cols());
  for (Eigen::Index n = 0; n < z.size(); ++n) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z(n) = cplx(re, im);
  }
  return sqrt_theta * z;
}

std::vector<UeGeometry> place_users(int k_users, double arc_start, double arc_end,
                                    double delta_phi) {
  if (k_users < 1) throw Error("place_users: need at least one user");
  if (!(arc_end > arc_start)) throw Error("place_users: arc_end must exceed arc_start");
  const double step = (arc_end - arc_start) / k_users;
  std::vector<UeGeometry> out(k_users);
  for (int k = 0; k < k_users; ++k) {
    out[k] = UeGeometry{arc_start + (k + 0.5) * step, delta_phi, 1.0};
  }
  return out;
}

void validate(const ChannelSet& channels) {
  if (channels.powers.size() != channels.h.cols()) {
    throw Error("ChannelSet: powers length differs from the number of users");
  }
  if ((channels.powers.array() < 0.0).any()) throw Error("ChannelSet: negative power");
  if (!(channels.noise_var > 0.0)) throw Error("ChannelSet: noise variance must be positive");
}

ChannelSet draw_channel_set(std::span<const CorrelationMatrix> thetas, const RVec& powers,
                            double noise_var, std::uint64_t seed, std::uint64_t trial) {
  if (thetas.empty()) throw Error("draw_channel_set: no users");
  const Eigen::Index n = thetas.front().size();
  ChannelSet out{CMat(n, static_cast<Eigen::Index>(thetas.size())), powers, noise_var};
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    Rng rng = substream(seed, trial, k);
    out.h.col(static_cast<Eigen::Index>(k)) = draw_channel(thetas[k].sqrt_theta(), rng);
  }
  validate(out);
  return out;
}

}  // namespace tsb
