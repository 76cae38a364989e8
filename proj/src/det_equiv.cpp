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


#include "tsb/det_equiv.hpp"

#include <cmath>
#include <string>

#include "tsb/kernels.hpp"

namespace tsb {
namespace {

void check_inputs(std::span<const CorrelationMatrix> thetas, const RVec& powers, int n,
                  const char* who) {
  if (static_cast<std::size_t>(powers.size()) != thetas.size()) {
    throw Error(std::string(who) + ": powers length differs from the number of users");
  }
  if ((powers.array() < 0.0).any()) throw Error(std::string(who) + ": negative power");
  for (const auto& theta : thetas) {
    if (theta.size() != n) throw Error(std::string(who) + ": correlation matrix size != N");
  }
}

CMat hermitian_inverse(const CMat& a) {
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) throw Error("resolvent matrix is not positive definite");
  CMat inv = llt.solve(CMat::Identity(a.rows(), a.cols()));
  return 0.5 * (inv + inv.adjoint());
}

// T = ( (1/N) sum_j p_j Theta_j / (1 + p_j m_j) + shift )^{-1}
CMat resolvent(std::span<const CorrelationMatrix> thetas, const RVec& powers, const RVec& m,
               const CMat& shift, int n) {
  CMat a = shift;
  const double inv_n = 1.0 / n;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    const double p = powers(j);
    if (p == 0.0) continue;
    a += (inv_n * p / (1.0 + p * m(j))) * thetas[j].theta();
  }
  return hermitian_inverse(a);
}

// Picard iteration of m_k = (1/N) tr(Theta_k T(m)) for a fixed Hermitian shift.
FixedPointResult solve_fixed_point(std::span<const CorrelationMatrix> thetas,
                                   const RVec& powers, const CMat& shift, int n,
                                   const FixedPointOptions& opts, const char* who) {
  if (!(opts.tol > 0.0)) throw Error(std::string(who) + ": tol must be positive");
  if (opts.damping < 0.0 || opts.damping >= 1.0) {
    throw Error(std::string(who) + ": damping must lie in [0, 1)");
  }
  const auto k_users = static_cast<Eigen::Index>(thetas.size());
  const double inv_n = 1.0 / n;
  FixedPointResult out;
  out.m_bar = RVec::Ones(k_users);
  if (k_users == 0) {
    out.t_matrix = hermitian_inverse(shift);
    return out;
  }
  RVec next(k_users);
  for (int it = 1; it <= opts.max_iter; ++it) {
    const CMat t = resolvent(thetas, powers, out.m_bar, shift, n);
    for (Eigen::Index j = 0; j < k_users; ++j) {
      next(j) = kernels::frobenius_real(thetas[j].theta(), t) * inv_n;
    }
    out.residual = (next - out.m_bar).cwiseAbs().maxCoeff();
    out.iterations = it;
    out.m_bar = (1.0 - opts.damping) * next + opts.damping * out.m_bar;
    if (out.residual < opts.tol) {
      out.t_matrix = resolvent(thetas, powers, out.m_bar, shift, n);
      return out;
    }
  }
  throw ConvergenceError(std::string(who) + ": no convergence after " +
                             std::to_string(opts.max_iter) + " iterations (residual " +
                             std::to_string(out.residual) + ")",
                         out.residual, out.iterations);
}

}  // namespace

FixedPointResult fixed_point_m(std::span<const CorrelationMatrix> thetas, const RVec& powers,
                               int n, const FixedPointOptions& opts) {
  if (n < 1) throw Error("fixed_point_m: n must be positive");
  check_inputs(thetas, powers, n, "fixed_point_m");
  return solve_fixed_point(thetas, powers, CMat::Identity(n, n), n, opts, "fixed_point_m");
}

RMat build_l_matrix(std::span<const CorrelationMatrix> thetas, const CMat& t_matrix,
                    const RVec& m_bar, const RVec& powers, int n) {
  check_inputs(thetas, powers, n, "build_l_matrix");
  const auto k_users = static_cast<Eigen::Index>(thetas.size());
  const double inv_n2 = 1.0 / (static_cast<double>(n) * n);
  RMat l = RMat::Zero(k_users, k_users);
  CMat a(n, n);
  for (Eigen::Index j = 0; j < k_users; ++j) {
    const double p = powers(j);
    if (p == 0.0) continue;
    const double denom = 1.0 + p * m_bar(j);
    const double weight = inv_n2 * p * p / (denom * denom);
    a.noalias() = t_matrix * thetas[j].theta() * t_matrix;
    for (Eigen::Index i = 0; i < k_users; ++i) {
      l(i, j) = weight * kernels::frobenius_real(thetas[i].theta(), a);
    }
  }
  return l;
}

RVec build_b_vector(std::span<const CorrelationMatrix> thetas, const CMat& t_matrix,
                    const CMat& sector_basis, int n) {
  if (sector_basis.rows() != n) throw Error("build_b_vector: sector basis has wrong height");
  const CMat p = t_matrix * sector_basis;
  const CMat projector = p * p.adjoint();
  RVec b(static_cast<Eigen::Index>(thetas.size()));
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    if (thetas[k].size() != n) throw Error("build_b_vector: correlation matrix size != N");
    b(static_cast<Eigen::Index>(k)) = kernels::frobenius_real(thetas[k].theta(), projector) / n;
  }
  return b;
}

double spectral_radius(const RMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<RMat> eig(m, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) throw Error("spectral_radius: eigenvalue solver failed");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

RMat solve_omega_bar(const RMat& l_matrix, const RMat& b_vectors) {
  if (l_matrix.rows() != l_matrix.cols() || b_vectors.rows() != l_matrix.rows()) {
    throw Error("solve_omega_bar: dimension mismatch");
  }
  const Eigen::Index k_users = l_matrix.rows();
  if (k_users == 0) return RMat(0, b_vectors.cols());
  const double rho = spectral_radius(l_matrix);
  if (!(rho < 1.0)) {
    throw Error("solve_omega_bar: spectral radius of L is " + std::to_string(rho) + " >= 1");
  }
  const RMat system = RMat::Identity(k_users, k_users) - l_matrix;
  Eigen::PartialPivLU<RMat> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    throw Error("solve_omega_bar: I - L is near singular (rcond " + std::to_string(rcond) + ")");
  }
  return lu.solve(b_vectors);
}

DetEqResult deterministic_equivalent(std::span<const CorrelationMatrix> thetas,
                                     const RVec& powers, const SectorSet& sectors,
                                     const FixedPointOptions& opts) {
  const int n = sectors.n;
  FixedPointResult fp = fixed_point_m(thetas, powers, n, opts);
  DetEqResult out;
  out.iterations = fp.iterations;
  out.residual = fp.residual;
  out.l_matrix = build_l_matrix(thetas, fp.t_matrix, fp.m_bar, powers, n);
  out.b_vectors.resize(static_cast<Eigen::Index>(thetas.size()), sectors.s);
  for (int i = 0; i < sectors.s; ++i) {
    out.b_vectors.col(i) = build_b_vector(thetas, fp.t_matrix, sector_basis(sectors, i), n);
  }
  out.l_spectral_radius = spectral_radius(out.l_matrix);
  out.omega_bar = solve_omega_bar(out.l_matrix, out.b_vectors);
  out.m_bar = std::move(fp.m_bar);
  out.t_matrix = std::move(fp.t_matrix);
  return out;
}

RVec perturbed_stieltjes_oracle(std::span<const CorrelationMatrix> thetas, const RVec& powers,
                                const CMat& sector_basis, double x, double z,
                                const FixedPointOptions& opts) {
  if (!(x <= 0.0)) throw Error("perturbed_stieltjes_oracle: x must be <= 0");
  if (!(z < 0.0)) throw Error("perturbed_stieltjes_oracle: z must be < 0");
  const auto n = static_cast<int>(sector_basis.rows());
  check_inputs(thetas, powers, n, "perturbed_stieltjes_oracle");
  CMat shift = CMat::Identity(n, n) * (-z);
  if (x != 0.0) shift.noalias() -= x * sector_basis * sector_basis.adjoint();
  return solve_fixed_point(thetas, powers, shift, n, opts, "perturbed_stieltjes_oracle").m_bar;
}

}  // namespace tsb
