// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Event-driven (Gillespie) simulation of the exclusion dynamics, on the
// lattice or on the lumped profile chain, plus the relaxation-rate
// estimator from the sampled autocorrelation with block-bootstrap errors.

#pragma once

#include <cstdint>
#include <vector>

#include "state_space.hpp"

namespace asepgap {

struct SimulationPlan {
  EnsembleParams params;
  bool profile_mode = false;  // simulate the lumped chain instead
  std::uint64_t seed = 1;
  double t_burn = 100.0;
  double t_run = 10000.0;
  double sample_dt = 0.5;
  // Row whose occupancy omega_h is recorded; 0 picks round(rho) clamped
  // to [1, H], i.e. the row where the interface sits.
  int observable_row = 0;
  bool collect_histogram = false;

  int resolved_row() const;
  void validate() const;
};

struct SimulationResult {
  std::vector<double> samples;  // omega_{h0} on the grid t_burn + k dt
  double sample_dt = 0.0;
  std::uint64_t seed = 0;
  long long n_events = 0;
  double total_time = 0.0;
  // Time-weighted state occupancy after burn-in, indexed by the rank of
  // the configuration (SubsetSpace) or profile (CompositionSpace).
  std::vector<double> histogram;
};

SimulationResult gillespie_run(const SimulationPlan& plan);

struct RelaxationEstimate {
  double rate = 0.0;
  double stderr_rate = 0.0;
  int n_samples = 0;
  int lag_lo = 0;  // fit window in units of sample_dt
  int lag_hi = 0;
};

// Least-squares exponential fit of the normalized autocorrelation over the
// window c_lo <= C(t) <= c_hi; errors from a moving-block bootstrap.
RelaxationEstimate relaxation_estimate(const std::vector<double>& samples,
                                       double sample_dt, double c_lo = 0.05,
                                       double c_hi = 0.5, int n_boot = 200,
                                       std::uint64_t seed = 7);

}  // namespace asepgap
