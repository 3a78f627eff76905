// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "bigsector.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace asepgap {

namespace {

// Next bitmask with the same popcount (Gosper), i.e. colex successor.
std::uint64_t next_mask(std::uint64_t v) {
  std::uint64_t c = v & (~v + 1);
  std::uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

struct RowCounts {
  int o[8];  // occupied per row, 1-based, H <= 7 in practice
};

RowCounts row_counts(std::uint64_t bits, int L, int H) {
  RowCounts rc{};
  std::uint64_t col_mask = (L == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << L) - 1);
  for (int h = 1; h <= H; ++h)
    rc.o[h] = std::popcount((bits >> ((h - 1) * L)) & col_mask);
  return rc;
}

std::int64_t count_moves(std::uint64_t bits, int L, int H, bool excl) {
  RowCounts rc = row_counts(bits, L, H);
  std::uint64_t col_mask = (std::uint64_t{1} << L) - 1;
  std::int64_t n = 0;
  for (int h = 1; h < H; ++h) {
    n += static_cast<std::int64_t>(rc.o[h]) * (L - rc.o[h + 1]);
    n += static_cast<std::int64_t>(rc.o[h + 1]) * (L - rc.o[h]);
    if (excl) {
      std::uint64_t lo = (bits >> ((h - 1) * L)) & col_mask;
      std::uint64_t hi = (bits >> (h * L)) & col_mask;
      n -= std::popcount(lo & ~hi);
      n -= std::popcount(hi & ~lo);
    }
  }
  return n;
}

}  // namespace

FullSectorSymOp::FullSectorSymOp(const EnsembleParams& params,
                                 bool exclude_same_stick, std::uint64_t cap)
    : params_(params) {
  params.validate();
  const int L = params.L, H = params.H;
  const int n_sites = params.sites();
  if (n_sites > 63) throw cap_exceeded("sector needs more than 63 sites");
  if (H >= 8) throw cap_exceeded("stick height limit exceeded");
  SubsetSpace space(n_sites, static_cast<int>(params.N));
  if (space.dim() > cap) throw cap_exceeded("sector dimension exceeds cap");
  if (space.dim() > std::numeric_limits<std::uint32_t>::max())
    throw cap_exceeded("sector dimension exceeds 32-bit index range");
  const std::int64_t dim = static_cast<std::int64_t>(space.dim());
  const double q = params.q;
  const double lq = std::log(q);
  const std::uint64_t first =
      params.N == 0 ? 0 : ((std::uint64_t{1} << params.N) - 1);

  std::int64_t nnz = 0;
  {
    std::uint64_t m = first;
    for (std::int64_t a = 0; a < dim; ++a) {
      nnz += count_moves(m, L, H, exclude_same_stick);
      if (a + 1 < dim) m = next_mask(m);
    }
  }

  row_ptr_.assign(dim + 1, 0);
  col_.resize(nnz);
  diag_.resize(dim);
  log_pi_.resize(dim);
  offdiag_ = 1.0 / L;

  std::int64_t p = 0;
  std::uint64_t m = first;
  for (std::int64_t a = 0; a < dim; ++a) {
    double rate_sum = 0.0;
    double lp = 0.0;
    for (std::uint64_t rest = m; rest != 0; rest &= rest - 1) {
      const int s = std::countr_zero(rest);
      const int h = s / L + 1;
      const int i = s % L;
      lp += 2.0 * h * lq;
      for (int dir = -1; dir <= 1; dir += 2) {
        const int hp = h + dir;
        if (hp < 1 || hp > H) continue;
        const double r = dir > 0 ? q : 1.0 / q;
        const int base = (hp - 1) * L;
        for (int j = 0; j < L; ++j) {
          if (exclude_same_stick && j == i) continue;
          const int t = base + j;
          if ((m >> t) & 1u) continue;
          const std::uint64_t nb = (m ^ (std::uint64_t{1} << s)) | (std::uint64_t{1} << t);
          col_[p++] = static_cast<std::uint32_t>(space.rank(nb));
          rate_sum += r;
        }
      }
    }
    diag_[a] = rate_sum / L;
    log_pi_[a] = lp;
    row_ptr_[a + 1] = p;
    if (a + 1 < dim) m = next_mask(m);
  }
}

void FullSectorSymOp::apply(const double* x, double* y) const {
  const std::int64_t n = dim();
  for (std::int64_t a = 0; a < n; ++a) {
    double s = 0.0;
    for (std::int64_t k = row_ptr_[a]; k < row_ptr_[a + 1]; ++k)
      s += x[col_[k]];
    y[a] = diag_[a] * x[a] - offdiag_ * s;
  }
}

std::vector<double> FullSectorSymOp::sqrt_pi() const {
  const std::int64_t n = dim();
  double mx = kNegInf;
  for (double lp : log_pi_)
    if (lp > mx) mx = lp;
  std::vector<double> v(n);
  double nrm2 = 0.0;
  for (std::int64_t a = 0; a < n; ++a) {
    v[a] = std::exp(0.5 * (log_pi_[a] - mx));
    nrm2 += v[a] * v[a];
  }
  const double inv = 1.0 / std::sqrt(nrm2);
  for (double& x : v) x *= inv;
  return v;
}

std::vector<double> FullSectorSymOp::map_states(
    const std::function<double(std::uint64_t)>& f) const {
  const std::int64_t n = dim();
  std::vector<double> out(n);
  std::uint64_t m =
      params_.N == 0 ? 0 : ((std::uint64_t{1} << params_.N) - 1);
  for (std::int64_t a = 0; a < n; ++a) {
    out[a] = f(m);
    if (a + 1 < n) m = next_mask(m);
  }
  return out;
}

std::uint64_t FullSectorSymOp::memory_estimate(const EnsembleParams& params) {
  const int n_sites = params.sites();
  if (n_sites > 63) return std::numeric_limits<std::uint64_t>::max();
  SubsetSpace space(n_sites, static_cast<int>(params.N));
  const std::int64_t dim = static_cast<std::int64_t>(space.dim());
  std::uint64_t nnz = 0;
  std::uint64_t m = params.N == 0 ? 0 : ((std::uint64_t{1} << params.N) - 1);
  for (std::int64_t a = 0; a < dim; ++a) {
    nnz += count_moves(m, params.L, params.H, false);
    if (a + 1 < dim) m = next_mask(m);
  }
  return nnz * sizeof(std::uint32_t) + dim * 3 * sizeof(double);
}

}  // namespace asepgap
