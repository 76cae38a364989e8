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


#include <doctest.h>

#include <numbers>
#include <thread>

#include "oracles.hpp"
#include "tsb/channel_model.hpp"

using namespace tsb;
using std::numbers::pi;

namespace {

CMat sample_covariance(const CMat& sqrt_theta, int draws, std::uint64_t seed) {
  const Eigen::Index n = sqrt_theta.rows();
  CMat acc = CMat::Zero(n, n);
  for (int t = 0; t < draws; ++t) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(t), 0);
    const CVec h = draw_channel(sqrt_theta, rng);
    acc += h * h.adjoint();
  }
  return acc / static_cast<double>(draws);
}

}  // namespace

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(64, x, w);
  double sum_w = 0.0, sum_x2 = 0.0, sum_x127 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum_w += w[i];
    sum_x2 += w[i] * x[i] * x[i];
    sum_x127 += w[i] * std::pow(x[i], 126);
  }
  CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sum_x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(sum_x127 == doctest::Approx(2.0 / 127.0).epsilon(1e-12));
  gauss_legendre(1, x, w);
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(w[0] == doctest::Approx(2.0));
}

TEST_CASE("correlation matrix: diagonal equals the pathloss") {
  for (double a2 : {1.0, 0.25, 3.5}) {
    const auto c = build_correlation_matrix({1.1, pi / 7, a2}, 0.5, 12);
    for (Eigen::Index i = 0; i < 12; ++i) {
      CHECK(c.theta()(i, i).real() == doctest::Approx(a2).epsilon(1e-10));
      CHECK(c.theta()(i, i).imag() == 0.0);
    }
  }
}

TEST_CASE("correlation matrix: point-source limit is rank one") {
  const double phi = 1.2;
  const auto c = build_correlation_matrix({phi, 1e-9, 2.0}, 0.5, 8);
  CVec v(8);
  for (int n = 0; n < 8; ++n) v(n) = std::polar(1.0, pi * n * std::cos(phi));
  const CMat expected = 2.0 * v * v.adjoint();
  CHECK((c.theta() - expected).cwiseAbs().maxCoeff() <= 1e-6);
  Eigen::SelfAdjointEigenSolver<CMat> eig(c.theta());
  const RVec ev = eig.eigenvalues();
  CHECK(ev(ev.size() - 2) <= 1e-6 * ev(ev.size() - 1));
}

TEST_CASE("correlation matrix: adaptive Gauss-Legendre matches a dense trapezoid rule") {
  // phi_center = pi/2, delta_phi = pi/10, a^2 = 1, N = 4 against 10000 trapezoid nodes.
  const auto c = build_correlation_matrix({pi / 2, pi / 10, 1.0}, 0.5, 4);
  const CMat ref = testing::one_ring_trapezoid(pi / 2, pi / 10, 1.0, 4, 0.5, 10000);
  CHECK((c.theta() - ref).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("correlation matrix invariants over a sweep of geometries") {
  for (int n : {1, 5, 32}) {
    for (double phi : {pi / 6, pi / 3, pi / 2, 2.5}) {
      for (double spread : {pi / 40, pi / 10, pi / 2}) {
        CAPTURE(n);
        CAPTURE(phi);
        CAPTURE(spread);
        const auto c = build_correlation_matrix({phi, spread, 1.0}, 0.5, n);
        const CMat& t = c.theta();
        CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<CMat> eig(t);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().maxCoeff());
        CHECK(eig.eigenvalues().maxCoeff() <= n * 1.0 + 1e-9);
        CHECK(testing::rel_frobenius(c.sqrt_theta() * c.sqrt_theta().adjoint(), t) <= 1e-8);
      }
    }
  }
}

TEST_CASE("correlation matrix rejects invalid geometry") {
  CHECK_THROWS_AS(build_correlation_matrix({1.0, 0.0, 1.0}, 0.5, 4), Error);
  CHECK_THROWS_AS(build_correlation_matrix({1.0, 4.0, 1.0}, 0.5, 4), Error);
  CHECK_THROWS_AS(build_correlation_matrix({-0.1, 0.3, 1.0}, 0.5, 4), Error);
  CHECK_THROWS_AS(build_correlation_matrix({1.0, 0.3, 0.0}, 0.5, 4), Error);
  CHECK_THROWS_AS(build_correlation_matrix({1.0, 0.3, 1.0}, 0.5, 0), Error);
  CHECK_THROWS_AS(build_correlation_matrix({1.0, 0.3, 1.0}, -0.5, 4), Error);
}

TEST_CASE("quadrature that cannot converge is reported") {
  QuadratureOptions opts;
  opts.max_nodes = 64;  // no room to double
  CHECK_THROWS_AS(build_correlation_matrix({pi / 2, pi, 1.0}, 0.5, 64, opts), Error);
}

TEST_CASE("matrix_sqrt_psd") {
  CHECK(matrix_sqrt_psd(CMat::Identity(5, 5)).isApprox(CMat::Identity(5, 5), 1e-14));

  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const CMat r = matrix_sqrt_psd(d);
  CHECK(std::abs(r(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(r(1, 1) - 3.0) < 1e-14);
  CHECK(std::abs(r(0, 1)) < 1e-14);

  std::mt19937_64 rng(5);
  for (int n : {3, 10, 40}) {
    const CMat theta = testing::random_psd(n, rng);
    const CMat m = matrix_sqrt_psd(theta);
    CHECK(testing::rel_frobenius(m * m.adjoint(), theta) <= 1e-8);
  }

  // Rank deficient input.
  const CMat low = testing::random_complex(6, 2, rng);
  const CMat theta = low * low.adjoint();
  const CMat m = matrix_sqrt_psd(theta);
  CHECK(testing::rel_frobenius(m * m.adjoint(), theta) <= 1e-8);

  CMat bad = CMat::Identity(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(matrix_sqrt_psd(bad), Error);
}

TEST_CASE("CorrelationMatrix caches its square root and is shareable across threads") {
  std::mt19937_64 rng(9);
  const CorrelationMatrix c(testing::random_psd(16, rng));
  std::vector<const CMat*> seen(4);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { seen[t] = &c.sqrt_theta(); });
  }
  for (auto* p : seen) CHECK(p == seen[0]);
  const CorrelationMatrix copy = c;
  CHECK(&copy.sqrt_theta() == seen[0]);
}

TEST_CASE("draw_channel is deterministic per stream") {
  const auto c = build_correlation_matrix({1.0, pi / 10, 1.0}, 0.5, 16);
  Rng a = substream(42, 3, 7), b = substream(42, 3, 7), other = substream(42, 3, 8);
  const CVec ha = draw_channel(c.sqrt_theta(), a);
  const CVec hb = draw_channel(c.sqrt_theta(), b);
  const CVec hc = draw_channel(c.sqrt_theta(), other);
  CHECK(ha == hb);
  CHECK(ha != hc);
}

TEST_CASE("draw_channel: white covariance converges to I") {
  const CMat cov = sample_covariance(CMat::Identity(8, 8), 10000, 1);
  CHECK(testing::rel_frobenius(cov, CMat::Identity(8, 8)) <= 0.05);
}

TEST_CASE("draw_channel: one-ring covariance converges to Theta") {
  const auto c = build_correlation_matrix({pi / 3, pi / 10, 1.0}, 0.5, 8);
  const CMat cov = sample_covariance(c.sqrt_theta(), 10000, 2);
  CHECK(testing::rel_frobenius(cov, c.theta()) <= 0.10);
}

TEST_CASE("place_users") {
  const auto one = place_users(1, pi / 6, 5 * pi / 6, pi / 10);
  REQUIRE(one.size() == 1);
  CHECK(one[0].phi_center == doctest::Approx(pi / 2).epsilon(1e-15));

  const auto three = place_users(3, pi / 6, 5 * pi / 6, pi / 10);
  CHECK(three[0].phi_center == doctest::Approx(pi / 6 + pi / 9).epsilon(1e-14));
  CHECK(three[1].phi_center == doctest::Approx(pi / 6 + 3 * pi / 9).epsilon(1e-14));
  CHECK(three[2].phi_center == doctest::Approx(pi / 6 + 5 * pi / 9).epsilon(1e-14));

  const auto many = place_users(135, pi / 6, 5 * pi / 6, pi / 10);
  for (std::size_t k = 1; k < many.size(); ++k) {
    CHECK(many[k].phi_center - many[k - 1].phi_center ==
          doctest::Approx(2 * pi / 3 / 135).epsilon(1e-12));
  }
  for (const auto& ue : many) {
    CHECK(ue.delta_phi == pi / 10);
    CHECK(ue.pathloss_amp_sq == 1.0);
  }
  CHECK_THROWS_AS(place_users(0, 0.1, 1.0, 0.1), Error);
  CHECK_THROWS_AS(place_users(2, 1.0, 1.0, 0.1), Error);
}

TEST_CASE("draw_channel_set uses one stream per user") {
  const std::vector<CorrelationMatrix> thetas = {
      build_correlation_matrix({1.0, pi / 10, 1.0}, 0.5, 8),
      build_correlation_matrix({2.0, pi / 10, 1.0}, 0.5, 8)};
  const RVec p = RVec::Constant(2, 0.5);
  const ChannelSet a = draw_channel_set(thetas, p, 1.0, 5, 2);
  Rng rng = substream(5, 2, 1);
  CHECK(a.h.col(1) == draw_channel(thetas[1].sqrt_theta(), rng));
  CHECK(a.h.rows() == 8);
  CHECK(a.h.cols() == 2);
  CHECK_THROWS_AS(draw_channel_set(thetas, p, 0.0, 5, 2), Error);
  CHECK_THROWS_AS(draw_channel_set(thetas, RVec::Constant(2, -1.0), 1.0, 5, 2), Error);
}
