// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Compressed storage for the symmetrized exclusion generator on sectors
// too large for dense solves. After the similarity transform every
// off-diagonal equals -1/L (sqrt of q/L times 1/(qL)), so only column
// indices and the diagonal need to be kept.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "state_space.hpp"

namespace asepgap {

class FullSectorSymOp {
 public:
  FullSectorSymOp(const EnsembleParams& params, bool exclude_same_stick,
                  std::uint64_t cap = kDefaultEnumerationCap);

  std::int64_t dim() const { return static_cast<std::int64_t>(row_ptr_.size()) - 1; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_.size()); }

  // y = sym(-generator) x
  void apply(const double* x, double* y) const;

  // Normalized kernel direction sqrt(pi).
  std::vector<double> sqrt_pi() const;

  // Evaluates f on every configuration bitmask in rank order. Used to lift
  // profile functions into the sector for eigensolver warm starts.
  std::vector<double> map_states(const std::function<double(std::uint64_t)>& f) const;

  static std::uint64_t memory_estimate(const EnsembleParams& params);

 private:
  EnsembleParams params_;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> diag_;
  std::vector<double> log_pi_;
  double offdiag_ = 0.0;
};

}  // namespace asepgap
