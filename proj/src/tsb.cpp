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


#include "tsb/tsb.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tsb {

double BeamSelection::mean_dims() const {
  if (dims.empty()) return 0.0;
  return std::accumulate(dims.begin(), dims.end(), 0.0) / static_cast<double>(dims.size());
}

std::vector<int> select_sectors(std::span<const double> omega_bar_row, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error("select_sectors: delta must lie in [0, 1]");
  if (omega_bar_row.empty()) throw Error("select_sectors: empty row");
  const double peak = *std::max_element(omega_bar_row.begin(), omega_bar_row.end());
  if (!(peak > 0.0)) throw Error("select_sectors: row has no positive entry");
  const double threshold = delta * peak;
  std::vector<int> out;
  for (std::size_t j = 0; j < omega_bar_row.size(); ++j) {
    const double v = omega_bar_row[j];
    if (v >= threshold && v > 0.0) out.push_back(static_cast<int>(j));
  }
  return out;
}

BeamSelection select_all(const RMat& omega_bar, double delta, int beams_per_sector) {
  BeamSelection sel;
  sel.delta = delta;
  std::vector<double> row(static_cast<std::size_t>(omega_bar.cols()));
  for (Eigen::Index k = 0; k < omega_bar.rows(); ++k) {
    for (Eigen::Index i = 0; i < omega_bar.cols(); ++i) row[i] = omega_bar(k, i);
    sel.selected.push_back(select_sectors(row, delta));
    sel.dims.push_back(static_cast<int>(sel.selected.back().size()) * beams_per_sector);
  }
  return sel;
}

CMat build_obf(std::span<const int> selection, const SectorSet& sectors) {
  if (selection.empty()) throw Error("build_obf: empty selection");
  if (!std::is_sorted(selection.begin(), selection.end()) ||
      std::adjacent_find(selection.begin(), selection.end()) != selection.end()) {
    throw Error("build_obf: selection must be strictly ascending");
  }
  CMat b(sectors.n, static_cast<Eigen::Index>(selection.size()) * sectors.d);
  Eigen::Index col = 0;
  for (int i : selection) {
    b.middleCols(col, sectors.d) = sector_basis(sectors, i);
    col += sectors.d;
  }
  return b;
}

CVec inner_receiver(const CMat& obf, const ChannelSet& channels, int k) {
  validate(channels);
  if (k < 0 || k >= channels.n_users()) throw Error("inner_receiver: user index out of range");
  if (obf.rows() != channels.n_antennas()) throw Error("inner_receiver: OBF height != N");
  const CMat g = obf.adjoint() * channels.h;  // D_k x K reduced channel
  RVec p = channels.powers;
  p(k) = 0.0;
  CMat r = g * p.cast<cplx>().asDiagonal() * g.adjoint();
  r.diagonal().array() += channels.noise_var;
  Eigen::LLT<CMat> llt(r);
  if (llt.info() != Eigen::Success) throw Error("inner_receiver: covariance not positive definite");
  return llt.solve(g.col(k));
}

TsbEvaluation tsb_evaluate(const ChannelSet& channels, const SectorSet& sectors,
                           const BeamSelection& selection) {
  if (static_cast<Eigen::Index>(selection.selected.size()) != channels.n_users()) {
    throw Error("tsb_evaluate: selection covers " + std::to_string(selection.selected.size()) +
                " users, channels have " + std::to_string(channels.n_users()));
  }
  TsbEvaluation out;
  out.selection = selection;
  for (int k = 0; k < channels.n_users(); ++k) {
    const CMat b = build_obf(selection.selected[k], sectors);
    CVec w = b * inner_receiver(b, channels, k);
    out.report.sinr.push_back(sinr(w, channels, k));
    out.report.rate.push_back(rate(out.report.sinr.back()));
    out.report.receivers.push_back(std::move(w));
  }
  return out;
}

TsbEvaluation tsb_evaluate(const ChannelSet& channels, const SectorSet& sectors,
                           const RMat& omega_bar, double delta) {
  if (omega_bar.rows() != channels.n_users() || omega_bar.cols() != sectors.s) {
    throw Error("tsb_evaluate: omega_bar must be K x S");
  }
  return tsb_evaluate(channels, sectors, select_all(omega_bar, delta, sectors.d));
}

}  // namespace tsb
