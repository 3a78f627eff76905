// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include "core/operators.hpp"
#include "core/simulate.hpp"
#include "core/spectral.hpp"
#include "doctest.h"

using namespace asepgap;

TEST_CASE("plan validation") {
  SimulationPlan plan;
  plan.params = {0.5, 2, 3, 3};
  CHECK_NOTHROW(plan.validate());
  SimulationPlan bad = plan;
  bad.t_run = bad.t_burn;  // must exceed the burn-in
  CHECK_THROWS_AS(bad.validate(), invalid_params);
  bad = plan;
  bad.sample_dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), invalid_params);
  bad = plan;
  bad.observable_row = 99;
  CHECK_THROWS_AS(bad.validate(), invalid_params);
}

TEST_CASE("same seed gives bit-identical trajectories") {
  SimulationPlan plan;
  plan.params = {0.5, 2, 3, 3};
  plan.seed = 20260826;
  plan.t_burn = 10.0;
  plan.t_run = 500.0;
  plan.collect_histogram = true;
  const SimulationResult a = gillespie_run(plan);
  const SimulationResult b = gillespie_run(plan);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k)
    CHECK(a.samples[k] == b.samples[k]);  // bitwise
  CHECK(a.n_events == b.n_events);
  CHECK(a.total_time == b.total_time);
  REQUIRE(a.histogram.size() == b.histogram.size());
  for (std::size_t k = 0; k < a.histogram.size(); ++k)
    CHECK(a.histogram[k] == b.histogram[k]);
  SimulationPlan other = plan;
  ++other.seed;
  CHECK(gillespie_run(other).samples != a.samples);
}

TEST_CASE("two-state occupancy matches the exact law") {
  // One particle on one stick of height 2: time in the lower state has
  // stationary probability 1/(1+q^2).
  const double q = 0.5;
  SimulationPlan plan;
  plan.params = {q, 1, 2, 1};
  plan.seed = 99;
  plan.t_burn = 50.0;
  plan.t_run = 20000.0;
  plan.observable_row = 1;
  plan.collect_histogram = true;
  const SimulationResult res = gillespie_run(plan);
  const double p_exact = 1.0 / (1.0 + q * q);
  double mass = 0.0, lower = 0.0;
  for (std::size_t k = 0; k < res.histogram.size(); ++k) mass += res.histogram[k];
  REQUIRE(mass > 0.0);
  // State ranks: the SubsetSpace on 2 sites with 1 particle puts the
  // lower-site configuration {bit 0} at rank 0.
  lower = res.histogram[0] / mass;
  // Standard error of the time fraction, crudely via effective samples.
  const double se = std::sqrt(p_exact * (1 - p_exact) / (plan.t_run * (q + 1 / q)));
  CHECK(std::abs(lower - p_exact) < 5.0 * se + 0.01);
}

TEST_CASE("relaxation estimate recovers the two-state gap") {
  const double q = 0.5;
  SimulationPlan plan;
  plan.params = {q, 1, 2, 1};
  plan.seed = 4242;
  plan.t_burn = 50.0;
  plan.t_run = 40000.0;
  plan.sample_dt = 0.1;
  plan.observable_row = 1;
  const SimulationResult res = gillespie_run(plan);
  const RelaxationEstimate est =
      relaxation_estimate(res.samples, res.sample_dt);
  const double exact = q + 1.0 / q;  // 2.5
  CHECK(std::abs(est.rate - exact) / exact < 0.15);
  CHECK(est.stderr_rate > 0.0);
  CHECK(est.n_samples == static_cast<int>(res.samples.size()));
}

TEST_CASE("relaxation estimate tracks a dense gap") {
  SimulationPlan plan;
  plan.params = {0.5, 2, 4, 4};
  plan.seed = 778;
  plan.t_burn = 100.0;
  plan.t_run = 60000.0;
  plan.sample_dt = 0.1;
  plan.observable_row = 1;
  const SimulationResult res = gillespie_run(plan);
  // Late-tail window: in this sector the gap mode carries under half the
  // observable variance, so the default window mixes in faster modes.
  const RelaxationEstimate est =
      relaxation_estimate(res.samples, res.sample_dt, 0.02, 0.2);
  const double exact = dense_gap(full_generator(plan.params)).gap;
  CHECK(std::abs(est.rate - exact) / exact < 0.20);
}

TEST_CASE("white noise is rejected as non-decaying") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(5000);
  for (double& x : noise) x = gauss(rng);
  CHECK_THROWS_AS(relaxation_estimate(noise, 0.5),
                  non_decaying_correlation);
}

TEST_CASE("too few samples raise insufficient data") {
  std::vector<double> tiny(10, 1.0);
  CHECK_THROWS_AS(relaxation_estimate(tiny, 0.5), insufficient_data);
}

TEST_CASE("profile mode histogram approaches the lumped measure") {
  SimulationPlan plan;
  plan.params = {0.5, 2, 3, 3};
  plan.profile_mode = true;
  plan.seed = 31337;
  plan.t_burn = 100.0;
  plan.t_run = 10000.0;
  plan.collect_histogram = true;
  const SimulationResult res = gillespie_run(plan);
  const PartitionTable table = build_partition_table(plan.params);
  const auto profiles = enumerate_profiles(plan.params);
  const CompositionSpace space(plan.params.H, plan.params.L, plan.params.N);
  REQUIRE(res.histogram.size() == space.dim());
  double mass = 0.0;
  for (double w : res.histogram) mass += w;
  REQUIRE(mass > 0.0);
  double tv = 0.0;
  for (const ProfileConfig& omega : profiles) {
    const std::uint64_t r = space.rank(omega.heights);
    tv += std::abs(res.histogram[r] / mass -
                   hat_nu_weight(omega, plan.params, table));
  }
  CHECK(0.5 * tv < 0.02);
}
