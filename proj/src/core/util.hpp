// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace asepgap {

// Error taxonomy shared by the whole library. The C API maps each type to a
// status code.
struct invalid_params : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct degenerate_sector : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct out_of_range_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct dimension_mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct no_convergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct insufficient_data : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct non_decaying_correlation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct zero_weight_state : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

inline double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Pascal triangle of exact binomials, saturating at uint64 max. Entries that
// would overflow are clamped; callers compare against caps well below that.
class BinomialTable {
 public:
  explicit BinomialTable(int nmax) : nmax_(nmax), c_((nmax + 1) * (nmax + 1), 0) {
    for (int n = 0; n <= nmax; ++n) {
      at(n, 0) = 1;
      for (int k = 1; k <= n; ++k) {
        const std::uint64_t a = at(n - 1, k - 1);
        const std::uint64_t b = k <= n - 1 ? at(n - 1, k) : 0;
        const std::uint64_t sum = a + b;
        at(n, k) = sum < a ? std::numeric_limits<std::uint64_t>::max() : sum;
      }
    }
  }

  std::uint64_t operator()(int n, int k) const {
    if (k < 0 || n < 0 || k > n) return 0;
    return c_[static_cast<std::size_t>(n) * (nmax_ + 1) + k];
  }
  int nmax() const { return nmax_; }

 private:
  std::uint64_t& at(int n, int k) { return c_[static_cast<std::size_t>(n) * (nmax_ + 1) + k]; }
  int nmax_;
  std::vector<std::uint64_t> c_;
};

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace asepgap
