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


// Vectorized inner-product kernels.
//
// Every kernel has a portable scalar reference implementation and, where the
// build and the running CPU allow it, an AVX2+FMA (x86-64) or NEON (AArch64)
// variant. The active variant is chosen once at first use from the CPU
// features; setting TSB_SIMD=scalar in the environment forces the reference
// path. All variants accumulate in double precision and agree with the
// reference to rounding (see tests/test_kernels.cpp).

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "tsb/types.hpp"

namespace tsb::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// ISA selected for this process.
Isa active_isa();

// True if `isa` can run on this machine with this build.
bool isa_available(Isa isa);

// Overrides the dispatch choice (tests and benchmarks only). Throws if the ISA
// is not available.
void force_isa(Isa isa);

// sum_n conj(a[n]) * b[n]
cplx cdot(std::span<const cplx> a, std::span<const cplx> b);

// Re(sum_n conj(a[n]) * b[n]); half the work of cdot.
double cdot_real(std::span<const cplx> a, std::span<const cplx> b);

// sum_n |a[n]|^2
double norm_sq(std::span<const cplx> a);

// Re tr(A^H B) for equally sized matrices. For Hermitian A this is Re tr(A B).
double frobenius_real(const CMat& a, const CMat& b);

// Per-ISA entry points, exposed for equivalence testing.
namespace scalar {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
double cdot_real(const cplx* a, const cplx* b, std::size_t n);
double norm_sq(const cplx* a, std::size_t n);
}  // namespace scalar

#if defined(TSB_HAVE_AVX2)
namespace avx2 {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
double cdot_real(const cplx* a, const cplx* b, std::size_t n);
double norm_sq(const cplx* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(TSB_HAVE_NEON)
namespace neon {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
double cdot_real(const cplx* a, const cplx* b, std::size_t n);
double norm_sq(const cplx* a, std::size_t n);
}  // namespace neon
#endif

}  // namespace tsb::kernels
