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


// Full-dimension reference receivers and the exact sector projection metric.

#pragma once

#include <vector>

#include "tsb/channel_model.hpp"
#include "tsb/sectorization.hpp"
#include "tsb/types.hpp"

namespace tsb {

struct ReceiverReport {
  std::vector<CVec> receivers;
  std::vector<double> sinr;  // linear
  std::vector<double> rate;  // bits/s/Hz
};

// sum_{j != k} p_j h_j h_j^H + noise_var * I
CMat interference_covariance(const ChannelSet& channels, int k);

// w = (sum_{j != k} p_j h_j h_j^H + sigma^2 I)^{-1} h_k, by Cholesky solve.
CVec mmse_receiver(const ChannelSet& channels, int k);

// h_k; SINR does not depend on the receiver scale.
CVec matched_filter(const ChannelSet& channels, int k);

// p_k |w^H h_k|^2 / (sum_{j != k} p_j |w^H h_j|^2 + sigma^2 ||w||^2).
// Throws on a zero receiver.
double sinr(const CVec& w, const ChannelSet& channels, int k);

double rate(double sinr);

// (1/N) h_k^H Sigma_k S_i S_i^H Sigma_k h_k, Sigma_k = (sum_{j!=k} p_j h_j h_j^H + I)^{-1}.
// Requires noise_var == 1.
double exact_projection_omega(const ChannelSet& channels, const SectorSet& sectors, int k,
                              int i);

// All K x S projections at once; one MMSE solve per user.
RMat exact_omega(const ChannelSet& channels, const SectorSet& sectors);

ReceiverReport evaluate_mmse(const ChannelSet& channels);
ReceiverReport evaluate_matched_filter(const ChannelSet& channels);

}  // namespace tsb
