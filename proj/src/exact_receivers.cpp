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


#include "tsb/exact_receivers.hpp"

#include <cmath>
#include <span>
#include <string>

#include "tsb/kernels.hpp"

namespace tsb {
namespace {

std::span<const cplx> as_span(const CVec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::span<const cplx> column(const CMat& m, Eigen::Index c) {
  return {m.data() + c * m.rows(), static_cast<std::size_t>(m.rows())};
}

void check_user(const ChannelSet& channels, int k) {
  if (k < 0 || k >= channels.n_users()) {
    throw Error("user index " + std::to_string(k) + " out of range");
  }
}

void require_unit_noise(const ChannelSet& channels) {
  if (channels.noise_var != 1.0) {
    throw Error("exact_projection_omega: requires noise_var == 1 (SNR folded into powers)");
  }
}

// H diag(p) H^H + sigma^2 I
CMat full_covariance(const ChannelSet& channels) {
  CMat r = channels.h * channels.powers.cast<cplx>().asDiagonal() * channels.h.adjoint();
  r.diagonal().array() += channels.noise_var;
  return 0.5 * (r + r.adjoint());
}

CVec solve_mmse(const CMat& covariance, const Eigen::Ref<const CVec>& h) {
  Eigen::LLT<CMat> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw Error("mmse_receiver: interference covariance is not positive definite");
  }
  return llt.solve(h);
}

}  // namespace

CMat interference_covariance(const ChannelSet& channels, int k) {
  validate(channels);
  check_user(channels, k);
  CMat r = full_covariance(channels);
  r.noalias() -= channels.powers(k) * channels.h.col(k) * channels.h.col(k).adjoint();
  return r;
}

CVec mmse_receiver(const ChannelSet& channels, int k) {
  return solve_mmse(interference_covariance(channels, k), channels.h.col(k));
}

CVec matched_filter(const ChannelSet& channels, int k) {
  check_user(channels, k);
  return channels.h.col(k);
}

double sinr(const CVec& w, const ChannelSet& channels, int k) {
  validate(channels);
  check_user(channels, k);
  if (w.size() != channels.n_antennas()) throw Error("sinr: receiver length mismatch");
  const double w_norm_sq = kernels::norm_sq(as_span(w));
  if (w_norm_sq == 0.0) throw Error("sinr: zero receiver");
  double signal = 0.0;
  double interference = channels.noise_var * w_norm_sq;
  for (Eigen::Index j = 0; j < channels.n_users(); ++j) {
    const double g = std::norm(kernels::cdot(as_span(w), column(channels.h, j)));
    if (j == k) {
      signal = channels.powers(j) * g;
    } else {
      interference += channels.powers(j) * g;
    }
  }
  return signal / interference;
}

double rate(double sinr) {
  if (!(sinr >= 0.0)) throw Error("rate: SINR must be nonnegative");
  return std::log2(1.0 + sinr);
}

double exact_projection_omega(const ChannelSet& channels, const SectorSet& sectors, int k,
                              int i) {
  require_unit_noise(channels);
  if (sectors.n != channels.n_antennas()) throw Error("exact_projection_omega: N mismatch");
  const CMat basis = sector_basis(sectors, i);
  const CVec proj = basis.adjoint() * mmse_receiver(channels, k);
  return kernels::norm_sq(as_span(proj)) / static_cast<double>(sectors.n);
}

RMat exact_omega(const ChannelSet& channels, const SectorSet& sectors) {
  require_unit_noise(channels);
  if (sectors.n != channels.n_antennas()) throw Error("exact_omega: N mismatch");
  const Eigen::Index k_users = channels.n_users();
  RMat omega(k_users, sectors.s);
  const double inv_n = 1.0 / static_cast<double>(sectors.n);
  validate(channels);
  const CMat full = full_covariance(channels);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    CMat r = full;
    r.noalias() -= channels.powers(k) * channels.h.col(k) * channels.h.col(k).adjoint();
    const CVec beams = sectors.dft.adjoint() * solve_mmse(r, channels.h.col(k));
    for (int i = 0; i < sectors.s; ++i) {
      const auto seg = as_span(beams).subspan(sectors.ranges[i].begin, sectors.d);
      omega(k, i) = kernels::norm_sq(seg) * inv_n;
    }
  }
  return omega;
}

ReceiverReport evaluate_mmse(const ChannelSet& channels) {
  validate(channels);
  const CMat full = full_covariance(channels);
  ReceiverReport out;
  for (int k = 0; k < channels.n_users(); ++k) {
    CMat r = full;
    r.noalias() -= channels.powers(k) * channels.h.col(k) * channels.h.col(k).adjoint();
    out.receivers.push_back(solve_mmse(r, channels.h.col(k)));
    out.sinr.push_back(sinr(out.receivers.back(), channels, k));
    out.rate.push_back(rate(out.sinr.back()));
  }
  return out;
}

ReceiverReport evaluate_matched_filter(const ChannelSet& channels) {
  ReceiverReport out;
  for (int k = 0; k < channels.n_users(); ++k) {
    out.receivers.push_back(matched_filter(channels, k));
    out.sinr.push_back(sinr(out.receivers.back(), channels, k));
    out.rate.push_back(rate(out.sinr.back()));
  }
  return out;
}

}  // namespace tsb
