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


// Two-stage receiver: statistical sector selection (outer beamformer) followed
// by an MMSE inner receiver in the selected beam subspace.

#pragma once

#include <span>
#include <vector>

#include "tsb/channel_model.hpp"
#include "tsb/exact_receivers.hpp"
#include "tsb/sectorization.hpp"
#include "tsb/types.hpp"

namespace tsb {

struct BeamSelection {
  std::vector<std::vector<int>> selected;  // ascending sector indices per user
  std::vector<int> dims;                   // D_k = |selected[k]| * D
  double delta = 0.0;

  double mean_dims() const;
};

// {j : row[j] >= delta * max(row)}. Throws if delta is outside [0, 1] or the
// row has no positive entry. With delta == 0, zero entries are dropped.
std::vector<int> select_sectors(std::span<const double> omega_bar_row, double delta);

BeamSelection select_all(const RMat& omega_bar, double delta, int beams_per_sector);

// Concatenated sector bases in ascending sector order (N x D_k).
CMat build_obf(std::span<const int> selection, const SectorSet& sectors);

// v_k = (sum_{j != k} p_j B^H h_j h_j^H B + sigma^2 I)^{-1} B^H h_k.
CVec inner_receiver(const CMat& obf, const ChannelSet& channels, int k);

struct TsbEvaluation {
  ReceiverReport report;  // receivers are the effective w_k = B_k v_k
  BeamSelection selection;
};

// SINR of w_k = B_k v_k is measured against all users in the full space.
TsbEvaluation tsb_evaluate(const ChannelSet& channels, const SectorSet& sectors,
                           const BeamSelection& selection);
TsbEvaluation tsb_evaluate(const ChannelSet& channels, const SectorSet& sectors,
                           const RMat& omega_bar, double delta);

}  // namespace tsb
