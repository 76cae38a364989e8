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


#include <atomic>
#include <cstdlib>
#include <cstring>

#include "tsb/kernels.hpp"

namespace tsb::kernels {
namespace {

struct Table {
  cplx (*cdot)(const cplx*, const cplx*, std::size_t);
  double (*cdot_real)(const cplx*, const cplx*, std::size_t);
  double (*norm_sq)(const cplx*, std::size_t);
};

constexpr Table kScalar{&scalar::cdot, &scalar::cdot_real, &scalar::norm_sq};
#if defined(TSB_HAVE_AVX2)
constexpr Table kAvx2{&avx2::cdot, &avx2::cdot_real, &avx2::norm_sq};
#endif
#if defined(TSB_HAVE_NEON)
constexpr Table kNeon{&neon::cdot, &neon::cdot_real, &neon::norm_sq};
#endif

const Table& table_for(Isa isa) {
  switch (isa) {
#if defined(TSB_HAVE_AVX2)
    case Isa::kAvx2:
      return kAvx2;
#endif
#if defined(TSB_HAVE_NEON)
    case Isa::kNeon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

Isa detect() {
  if (const char* env = std::getenv("TSB_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::kScalar;
  }
  if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_available(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

std::atomic<const Table*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::kScalar};

const Table& table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    const Isa isa = detect();
    g_isa.store(isa, std::memory_order_relaxed);
    t = &table_for(isa);
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw Error("kernels: operand length mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
    default:
      return "scalar";
  }
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(TSB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(TSB_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  table();
  return g_isa.load(std::memory_order_relaxed);
}

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error("kernels: ISA '" + std::string(isa_name(isa)) + "' not available");
  }
  g_isa.store(isa, std::memory_order_relaxed);
  g_table.store(&table_for(isa), std::memory_order_release);
}

cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
  check_sizes(a.size(), b.size());
  return table().cdot(a.data(), b.data(), a.size());
}

double cdot_real(std::span<const cplx> a, std::span<const cplx> b) {
  check_sizes(a.size(), b.size());
  return table().cdot_real(a.data(), b.data(), a.size());
}

double norm_sq(std::span<const cplx> a) {
  return table().norm_sq(a.data(), a.size());
}

double frobenius_real(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error("kernels: frobenius_real shape mismatch");
  }
  return table().cdot_real(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

}  // namespace tsb::kernels
