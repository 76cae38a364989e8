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


#include "tsb/sectorization.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tsb {

CMat dft_matrix(int n_antennas) {
  if (n_antennas < 1) throw Error("dft_matrix: n_antennas must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
  CMat u(n_antennas, n_antennas);
  for (int j = 0; j < n_antennas; ++j) {
    for (int n = 0; n < n_antennas; ++n) {
      // Reduce n*j mod N first so the phase stays exact for large N.
      const long long r = (static_cast<long long>(n) * j) % n_antennas;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(r) / n_antennas;
      u(n, j) = std::polar(scale, phase);
    }
  }
  return u;
}

SectorSet build_sectors(int n, int s) {
  if (n < 1 || s < 1) throw Error("build_sectors: n and s must be positive");
  if (n % s != 0) {
    throw Error("build_sectors: " + std::to_string(s) + " sectors do not divide " +
                std::to_string(n) + " beams");
  }
  SectorSet set;
  set.dft = dft_matrix(n);
  set.n = n;
  set.s = s;
  set.d = n / s;
  set.ranges.reserve(s);
  for (int i = 0; i < s; ++i) set.ranges.push_back({i * set.d, i * set.d + set.d});
  return set;
}

CMat sector_basis(const SectorSet& set, int i) {
  if (i < 0 || i >= set.s) {
    throw Error("sector_basis: sector " + std::to_string(i) + " out of range [0, " +
                std::to_string(set.s) + ")");
  }
  return set.dft.middleCols(set.ranges[i].begin, set.d);
}

}  // namespace tsb
