// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// The named identity and invariant suite: exact relations between the
// measures, kernels, generators and Hamiltonians, evaluated on a built-in
// small-instance grid. Check names are "group/name" so a substring filter
// can select e.g. all k-spectrum checks.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace asepgap {

struct VerifyOptions {
  std::string filter;        // substring of "group/name"; empty runs all
  bool corrupt_hook = false; // negative-test hook: breaks detailed balance
  std::function<void(const CheckResult&)> on_result;
};

struct VerifySummary {
  std::vector<CheckResult> results;
  bool all_pass = true;
  double seconds = 0.0;
};

VerifySummary run_verify(const VerifyOptions& opts = {});

// Max distance of a greedy sorted matching of `sub` into `super`; near zero
// when the multiset of `sub` is contained in `super`.
double multiset_inclusion(std::vector<double> sub, std::vector<double> super);

// Max elementwise distance after sorting; infinity on size mismatch.
double multiset_distance(std::vector<double> a, std::vector<double> b);

}  // namespace asepgap
