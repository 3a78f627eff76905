// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "reversible.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace asepgap {

void ReversibleOperator::apply(const double* f, double* out) const {
  for (std::int64_t a = 0; a < dim; ++a) {
    double acc = diag[a] * f[a];
    for (std::int64_t k = row_ptr[a]; k < row_ptr[a + 1]; ++k)
      acc += rate[k] * f[col[k]];
    out[a] = acc;
  }
}

void ReversibleOperator::apply_sym_neg(const double* f, double* out) const {
  for (std::int64_t a = 0; a < dim; ++a) {
    double acc = -diag[a] * f[a];
    for (std::int64_t k = row_ptr[a]; k < row_ptr[a + 1]; ++k) {
      const std::int64_t b = col[k];
      acc -= rate[k] * std::sqrt(pi[a] / pi[b]) * f[b];
    }
    out[a] = acc;
  }
}

double ReversibleOperator::stationary_mean(const std::vector<double>& f) const {
  if (static_cast<std::int64_t>(f.size()) != dim)
    throw dimension_mismatch("function dimension differs from operator");
  double s = 0.0;
  for (std::int64_t a = 0; a < dim; ++a) s += pi[a] * f[a];
  return s;
}

double ReversibleOperator::variance(const std::vector<double>& f) const {
  const double m = stationary_mean(f);
  double s = 0.0;
  for (std::int64_t a = 0; a < dim; ++a) s += pi[a] * (f[a] - m) * (f[a] - m);
  return s;
}

double ReversibleOperator::dirichlet(const std::vector<double>& f) const {
  if (static_cast<std::int64_t>(f.size()) != dim)
    throw dimension_mismatch("function dimension differs from operator");
  double s = 0.0;
  for (std::int64_t a = 0; a < dim; ++a)
    for (std::int64_t k = row_ptr[a]; k < row_ptr[a + 1]; ++k) {
      const double d = f[col[k]] - f[a];
      s += pi[a] * rate[k] * d * d;
    }
  return 0.5 * s;
}

double ReversibleOperator::rate_at(std::int64_t a, std::int64_t b) const {
  const auto lo = col.begin() + row_ptr[a];
  const auto hi = col.begin() + row_ptr[a + 1];
  const auto it = std::lower_bound(lo, hi, b);
  if (it == hi || *it != b) return 0.0;
  return rate[it - col.begin()];
}

double ReversibleOperator::detailed_balance_residual() const {
  double worst = 0.0;
  for (std::int64_t a = 0; a < dim; ++a)
    for (std::int64_t k = row_ptr[a]; k < row_ptr[a + 1]; ++k) {
      const std::int64_t b = col[k];
      if (b < a) continue;
      worst = std::max(worst,
                       std::abs(pi[a] * rate[k] - pi[b] * rate_at(b, a)));
    }
  return worst;
}

double ReversibleOperator::row_sum_residual() const {
  double worst = 0.0;
  for (std::int64_t a = 0; a < dim; ++a) {
    double s = diag[a];
    for (std::int64_t k = row_ptr[a]; k < row_ptr[a + 1]; ++k) s += rate[k];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

void ReversibleOperator::check(double tol) const {
  for (double r : rate)
    if (r < 0.0) throw invalid_params(label + ": negative off-diagonal rate");
  if (row_sum_residual() > tol)
    throw invalid_params(label + ": row sums deviate from zero");
  if (detailed_balance_residual() > tol)
    throw invalid_params(label + ": detailed balance violated");
}

void OperatorBuilder::add(std::int64_t a, std::int64_t b, double r) {
  if (a == b) throw invalid_params("diagonal entries are derived, not set");
  if (r < 0.0) throw invalid_params("negative rate");
  if (r == 0.0) return;
  entries_.push_back({a, b, r});
}

ReversibleOperator OperatorBuilder::finalize(std::string label) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  ReversibleOperator op;
  op.label = std::move(label);
  op.dim = dim_;
  op.pi = std::move(pi_);
  if (static_cast<std::int64_t>(op.pi.size()) != dim_)
    throw dimension_mismatch("stationary vector dimension differs from operator");
  op.row_ptr.assign(dim_ + 1, 0);
  op.col.reserve(entries_.size());
  op.rate.reserve(entries_.size());
  for (std::size_t k = 0; k < entries_.size();) {
    std::size_t j = k;
    double r = 0.0;
    while (j < entries_.size() && entries_[j].a == entries_[k].a &&
           entries_[j].b == entries_[k].b) {
      r += entries_[j].r;
      ++j;
    }
    op.col.push_back(entries_[k].b);
    op.rate.push_back(r);
    op.row_ptr[entries_[k].a + 1] += 1;
    k = j;
  }
  for (std::int64_t a = 0; a < dim_; ++a) op.row_ptr[a + 1] += op.row_ptr[a];
  op.diag.assign(dim_, 0.0);
  for (std::int64_t a = 0; a < dim_; ++a)
    for (std::int64_t k = op.row_ptr[a]; k < op.row_ptr[a + 1]; ++k)
      op.diag[a] -= op.rate[k];
  return op;
}

}  // namespace asepgap
