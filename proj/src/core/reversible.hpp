// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// One representation for every reversible operator in the library: finite
// state set, stationary weights, nonnegative off-diagonal rates, zero row
// sums. Stochastic kernels (K, P) are stored as "kernel - identity" so the
// same machinery applies.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "util.hpp"

namespace asepgap {

struct ReversibleOperator {
  std::string label;
  std::int64_t dim = 0;
  std::vector<double> pi;    // stationary distribution
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int64_t> col;
  std::vector<double> rate;  // off-diagonal rates, rate(a->b) >= 0
  std::vector<double> diag;  // -sum_b rate(a->b)

  // Generator action: (Lf)(a) = sum_b rate(a->b) (f(b) - f(a)).
  void apply(const double* f, double* out) const;

  // D^{1/2} (-L) D^{-1/2} with D = diag(pi); symmetric, positive semidefinite.
  void apply_sym_neg(const double* f, double* out) const;

  double stationary_mean(const std::vector<double>& f) const;
  double variance(const std::vector<double>& f) const;

  // nu(f (-L) f) = 1/2 sum pi(a) rate(a->b) (f(b)-f(a))^2.
  double dirichlet(const std::vector<double>& f) const;

  double rate_at(std::int64_t a, std::int64_t b) const;

  // Max violation of pi(a) rate(a->b) = pi(b) rate(b->a) over stored pairs.
  double detailed_balance_residual() const;
  double row_sum_residual() const;  // structurally ~0; kept as a tripwire
  void check(double tol = 1e-12) const;
};

// Accumulates (a, b, rate) triplets, merges duplicates, emits CSR.
class OperatorBuilder {
 public:
  explicit OperatorBuilder(std::int64_t dim) : dim_(dim) {}

  void add(std::int64_t a, std::int64_t b, double r);
  void set_pi(std::vector<double> pi) { pi_ = std::move(pi); }
  ReversibleOperator finalize(std::string label);

 private:
  struct Entry {
    std::int64_t a, b;
    double r;
  };
  std::int64_t dim_;
  std::vector<Entry> entries_;
  std::vector<double> pi_;
};

}  // namespace asepgap
