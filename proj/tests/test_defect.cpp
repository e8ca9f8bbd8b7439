#include <gtest/gtest.h>

#include <cmath>

#include "lapnet/defect.hpp"
#include "lapnet/heisenberg.hpp"

using namespace lapnet;

namespace {

HalfLineBandedOperator chain_op(WeightRule rule, std::size_t n_max, double lambda = 2.0) {
  return chain_laplacian_operator(GraphSystem::chain(rule, IndexSpace::half_line, lambda), n_max);
}

const Complex kI{0.0, 1.0};

}  // namespace

TEST(Shooting, LinearChainRecursion) {
  auto m = chain_op(WeightRule::linear, 256);
  auto s = shoot(m, -1.0, 40);
  EXPECT_EQ(s.values[0].real(), 1.0);
  EXPECT_NEAR(s.values[1].real(), 2.0, 1e-15);
  EXPECT_NEAR(s.values[2].real(), 3.5, 1e-15);
  EXPECT_TRUE(s.monotone_growth);
  // (1/2) energy of the N-truncation is -Σ v_k² < -N
  for (std::size_t n = 0; n < s.truncated_energies.size(); ++n) {
    double sq = 0.0;
    for (std::size_t k = 0; k <= n; ++k) sq += std::norm(s.values[k]);
    EXPECT_NEAR(s.truncated_energies[n], -sq, 1e-9 * sq);
    EXPECT_LT(s.truncated_energies[n], -double(n + 1) + 1e-12);
  }
}

TEST(Shooting, ConstantChainGrowsGeometrically) {
  auto s = shoot(chain_op(WeightRule::constant, 256), -1.0, 60);
  // v_{n+1} = 3 v_n - v_{n-1}
  for (std::size_t n = 1; n + 1 < s.values.size(); ++n) {
    EXPECT_NEAR(s.values[n + 1].real(), 3 * s.values[n].real() - s.values[n - 1].real(),
                1e-12 * std::abs(s.values[n + 1]));
  }
  EXPECT_NEAR(s.growth_rate, (3 + std::sqrt(5.0)) / 2, 1e-9);
}

TEST(DefectProbe, ShiftMinusOneOnChains) {
  for (auto rule : {WeightRule::constant, WeightRule::linear, WeightRule::square, WeightRule::geometric}) {
    auto r = defect_probe(chain_op(rule, 256), -1.0);
    EXPECT_EQ(r.status, "ok") << to_string(rule);
    ASSERT_TRUE(r.estimated_count.has_value());
    EXPECT_EQ(*r.estimated_count, 0) << to_string(rule);
    ASSERT_TRUE(r.shooting.has_value());
    EXPECT_TRUE(r.shooting->monotone_growth) << to_string(rule);
    EXPECT_EQ(r.windows.size(), 2u);
    EXPECT_EQ(r.windows[1].n_max, 2 * r.windows[0].n_max);
  }
}

TEST(DefectProbe, LinearChainReportCarriesRecursion) {
  auto r = defect_probe(chain_op(WeightRule::linear, 256), -1.0);
  ASSERT_TRUE(r.shooting.has_value());
  EXPECT_NEAR(r.shooting->values[2].real(), 3.5, 1e-15);
}

TEST(DefectProbe, ChainsAreEssentiallySelfadjoint) {
  for (auto rule : {WeightRule::constant, WeightRule::linear, WeightRule::square, WeightRule::geometric}) {
    auto d = deficiency_probe_banded(chain_op(rule, 256));
    EXPECT_EQ(d.status, "ok") << to_string(rule);
    ASSERT_TRUE(d.indices.has_value());
    EXPECT_EQ(*d.indices, std::make_pair(0, 0)) << to_string(rule);
  }
}

TEST(DefectProbe, QpqHasIndicesOneOne) {
  for (std::size_t n : {256u, 512u}) {
    auto d = deficiency_probe_banded(build_QPQ(n));
    EXPECT_EQ(d.status, "ok") << n;
    ASSERT_TRUE(d.indices.has_value());
    EXPECT_EQ(*d.indices, std::make_pair(1, 1)) << n;
    for (const auto& w : d.plus.windows) EXPECT_TRUE(w.gate_ok);
  }
}

TEST(DefectProbe, HamiltonianHasIndicesTwoTwo) {
  for (std::size_t n : {256u, 512u}) {
    auto d = deficiency_probe_banded(build_hamiltonian(n));
    EXPECT_EQ(d.status, "ok") << n;
    ASSERT_TRUE(d.indices.has_value());
    EXPECT_EQ(*d.indices, std::make_pair(2, 2)) << n;
  }
}

TEST(DefectProbe, CandidatesAreOrderedAndDecay) {
  auto w = defect_window(build_QPQ(256), kI, 256);
  EXPECT_EQ(w.kernel_dim, 3u);
  ASSERT_EQ(w.candidates.size(), 3u);
  for (std::size_t i = 1; i < w.candidates.size(); ++i) {
    EXPECT_LE(w.candidates[i - 1].tail_mass, w.candidates[i].tail_mass);
  }
  EXPECT_TRUE(w.candidates[0].square_summable);
  EXPECT_GT(w.candidates[0].decay_exponent, 0.5);
  EXPECT_FALSE(w.candidates[1].square_summable);
}

TEST(DefectProbe, InconsistentCountsAreInconclusive) {
  DefectOptions opts;
  // the QPQ solution's tail share sits between these two window sizes
  opts.tail_threshold = 0.011;
  auto r = defect_probe(build_QPQ(256), kI, opts);
  EXPECT_EQ(r.status, "inconclusive");
  EXPECT_FALSE(r.estimated_count.has_value());
  EXPECT_NE(r.windows[0].count, r.windows[1].count);
}

TEST(DefectProbe, RejectsTinyWindows) {
  EXPECT_THROW(defect_window(build_QPQ(8), kI, 8), std::invalid_argument);
}

TEST(DefectProbe, ThresholdsAreReported) {
  auto r = defect_probe(chain_op(WeightRule::constant, 64), kI);
  EXPECT_EQ(r.options.tail_fraction, 0.1);
  EXPECT_EQ(r.options.tail_threshold, 0.05);
  EXPECT_EQ(r.options.near_null, 1e-8);
  EXPECT_EQ(r.model, chain_op(WeightRule::constant, 64).name());
}
