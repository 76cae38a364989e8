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


// DFT beam domain split into contiguous sectors.

#pragma once

#include <vector>

#include "tsb/types.hpp"

namespace tsb {

// N x N unitary DFT matrix, entry (n, j) = exp(-i 2 pi n j / N) / sqrt(N).
CMat dft_matrix(int n_antennas);

struct BeamRange {
  int begin = 0;  // first beam, 0-based
  int end = 0;    // one past the last beam
};

// S sectors of D = N / S consecutive DFT beams. Sector indices are 0-based:
// sector i holds beams [i*D, i*D + D).
struct SectorSet {
  CMat dft;
  std::vector<BeamRange> ranges;
  int n = 0;
  int s = 0;
  int d = 0;
};

// Throws if s does not divide n.
SectorSet build_sectors(int n, int s);

// The D columns of sector i (0-based). Throws on an out-of-range index.
CMat sector_basis(const SectorSet& set, int i);

}  // namespace tsb
