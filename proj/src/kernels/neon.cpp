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


#include <arm_neon.h>

#include "tsb/kernels.hpp"

namespace tsb::kernels::neon {
namespace {

// One complex value per register: (re, im).
inline float64x2_t load1(const cplx* p) {
  return vld1q_f64(reinterpret_cast<const double*>(p));
}

}  // namespace

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  float64x2_t re0 = vdupq_n_f64(0.0), re1 = vdupq_n_f64(0.0);
  float64x2_t im0 = vdupq_n_f64(0.0), im1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a0 = load1(a + i), a1 = load1(a + i + 1);
    const float64x2_t b0 = load1(b + i), b1 = load1(b + i + 1);
    re0 = vfmaq_f64(re0, a0, b0);
    re1 = vfmaq_f64(re1, a1, b1);
    im0 = vfmaq_f64(im0, a0, vextq_f64(b0, b0, 1));
    im1 = vfmaq_f64(im1, a1, vextq_f64(b1, b1, 1));
  }
  const float64x2_t re_acc = vaddq_f64(re0, re1);
  const float64x2_t im_acc = vaddq_f64(im0, im1);
  double re = vgetq_lane_f64(re_acc, 0) + vgetq_lane_f64(re_acc, 1);
  double im = vgetq_lane_f64(im_acc, 0) - vgetq_lane_f64(im_acc, 1);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double cdot_real(const cplx* a, const cplx* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, load1(a + i), load1(b + i));
    acc1 = vfmaq_f64(acc1, load1(a + i + 1), load1(b + i + 1));
  }
  double re = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return re;
}

double norm_sq(const cplx* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a0 = load1(a + i), a1 = load1(a + i + 1);
    acc0 = vfmaq_f64(acc0, a0, a0);
    acc1 = vfmaq_f64(acc1, a1, a1);
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  }
  return s;
}

}  // namespace tsb::kernels::neon
