// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "state_space.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace asepgap {

void EnsembleParams::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw invalid_params("q must lie in (0,1)");
  if (L < 1 || H < 1) throw invalid_params("L and H must be >= 1");
  if (N < 0 || N > static_cast<long long>(L) * H)
    throw invalid_params("N must satisfy 0 <= N <= L*H");
  if (static_cast<long long>(L) * H > 64)
    throw invalid_params("lattice larger than 64 sites is not enumerable");
}

int LatticeConfig::particle_count() const { return std::popcount(bits); }

long long ProfileConfig::total() const {
  long long s = 0;
  for (int v : heights) s += v;
  return s;
}

ProfileConfig profile_of(const LatticeConfig& alpha, int L, int H) {
  ProfileConfig omega;
  omega.heights.assign(H, 0);
  for (int h = 0; h < H; ++h)
    for (int i = 0; i < L; ++i)
      omega.heights[h] += static_cast<int>(alpha.occupied(h * L + i));
  return omega;
}

SubsetSpace::SubsetSpace(int n_sites, int n_particles)
    : n_sites_(n_sites), n_particles_(n_particles), binom_(n_sites) {
  if (n_sites < 0 || n_sites > 64 || n_particles < 0 || n_particles > n_sites)
    throw invalid_params("bad subset space (need 0 <= N <= sites <= 64)");
  dim_ = binom_(n_sites, n_particles);
}

std::uint64_t SubsetSpace::rank(std::uint64_t bits) const {
  std::uint64_t r = 0;
  int k = 0;
  while (bits) {
    const int s = std::countr_zero(bits);
    bits &= bits - 1;
    ++k;
    r += binom_(s, k);
  }
  return r;
}

std::uint64_t SubsetSpace::unrank(std::uint64_t r) const {
  std::uint64_t bits = 0;
  int s = n_sites_ - 1;
  for (int k = n_particles_; k >= 1; --k) {
    while (binom_(s, k) > r) --s;
    bits |= std::uint64_t{1} << s;
    r -= binom_(s, k);
    --s;
  }
  return bits;
}

CompositionSpace::CompositionSpace(int len, int cap, long long total)
    : len_(len), cap_(cap), total_(total) {
  if (len < 1 || cap < 0 || total < 0 ||
      total > static_cast<long long>(len) * cap)
    throw invalid_params("bad composition space");
  counts_.assign(len + 1, std::vector<std::uint64_t>(total + 1, 0));
  counts_[0][0] = 1;
  for (int k = 1; k <= len; ++k)
    for (long long m = 0; m <= total; ++m) {
      std::uint64_t c = 0;
      for (int v = 0; v <= cap && v <= m; ++v) c += counts_[k - 1][m - v];
      counts_[k][m] = c;
    }
  dim_ = counts_[len][total];
}

std::uint64_t CompositionSpace::count(int k, long long m) const {
  if (k < 0 || k > len_ || m < 0 || m > total_) return 0;
  return counts_[k][m];
}

std::uint64_t CompositionSpace::rank(const std::vector<int>& v) const {
  if (static_cast<int>(v.size()) != len_)
    throw dimension_mismatch("composition length mismatch");
  std::uint64_t r = 0;
  long long rem = total_;
  for (int k = 0; k < len_; ++k) {
    const int x = v[k];
    if (x < 0 || x > cap_) throw invalid_params("composition entry out of range");
    for (int w = 0; w < x; ++w)
      if (rem - w >= 0) r += count(len_ - k - 1, rem - w);
    rem -= x;
  }
  if (rem != 0) throw invalid_params("composition does not match total");
  return r;
}

std::vector<int> CompositionSpace::unrank(std::uint64_t r) const {
  std::vector<int> v(len_, 0);
  long long rem = total_;
  for (int k = 0; k < len_; ++k) {
    int x = 0;
    while (true) {
      const std::uint64_t c =
          rem - x >= 0 ? count(len_ - k - 1, rem - x) : 0;
      if (r < c) break;
      r -= c;
      ++x;
    }
    v[k] = x;
    rem -= x;
  }
  return v;
}

std::vector<LatticeConfig> enumerate_lattice_configs(const EnsembleParams& params,
                                                     std::uint64_t cap) {
  params.validate();
  SubsetSpace space(params.sites(), static_cast<int>(params.N));
  if (space.dim() > cap)
    throw cap_exceeded("lattice sector exceeds enumeration cap: " +
                       std::to_string(space.dim()));
  std::vector<LatticeConfig> out;
  out.reserve(space.dim());
  for (std::uint64_t r = 0; r < space.dim(); ++r)
    out.push_back(LatticeConfig{space.unrank(r), params.sites()});
  return out;
}

std::vector<ProfileConfig> enumerate_profiles(const EnsembleParams& params,
                                              std::uint64_t cap) {
  params.validate();
  CompositionSpace space(params.H, params.L, params.N);
  if (space.dim() > cap)
    throw cap_exceeded("profile sector exceeds enumeration cap: " +
                       std::to_string(space.dim()));
  std::vector<ProfileConfig> out;
  out.reserve(space.dim());
  for (std::uint64_t r = 0; r < space.dim(); ++r)
    out.push_back(ProfileConfig{space.unrank(r)});
  return out;
}

PartitionTable build_partition_table(const EnsembleParams& params) {
  params.validate();
  PartitionTable t;
  t.L = params.L;
  t.H = params.H;
  t.N = params.N;
  t.log_q = std::log(params.q);

  // g(n) = [z^n] prod_h (1 + q^{2h} z), accumulated stick by stick.
  t.log_g.assign(params.H + 1, kNegInf);
  t.log_g[0] = 0.0;
  for (int h = 1; h <= params.H; ++h) {
    const double lw = 2.0 * h * t.log_q;
    for (int n = std::min(h, params.H); n >= 1; --n)
      t.log_g[n] = log_add(t.log_g[n], t.log_g[n - 1] + lw);
  }

  // Z_l(m) = sum_n g(n) Z_{l-1}(m-n).
  t.log_z.assign(params.L + 1, std::vector<double>(params.N + 1, kNegInf));
  t.log_z[0][0] = 0.0;
  for (int l = 1; l <= params.L; ++l)
    for (long long m = 0; m <= params.N; ++m) {
      double acc = kNegInf;
      for (int n = 0; n <= params.H && n <= m; ++n)
        acc = log_add(acc, t.log_g[n] + t.log_z[l - 1][m - n]);
      t.log_z[l][m] = acc;
    }
  return t;
}

double nu_weight(const LatticeConfig& alpha, const EnsembleParams& params,
                 const PartitionTable& table) {
  if (alpha.particle_count() != params.N)
    throw invalid_params("configuration particle count differs from N");
  double log_w = 0.0;
  for (int h = 1; h <= params.H; ++h)
    for (int i = 0; i < params.L; ++i)
      if (alpha.occupied((h - 1) * params.L + i)) log_w += 2.0 * h * table.log_q;
  return std::exp(log_w - table.log_z_at(params.L, params.N));
}

double hat_nu_weight(const ProfileConfig& omega, const EnsembleParams& params,
                     const PartitionTable& table) {
  if (static_cast<int>(omega.heights.size()) != params.H)
    throw dimension_mismatch("profile length differs from H");
  if (omega.total() != params.N)
    throw invalid_params("profile total differs from N");
  double log_w = 0.0;
  for (int h = 1; h <= params.H; ++h) {
    const int w = omega.heights[h - 1];
    if (w < 0 || w > params.L) throw invalid_params("profile entry out of [0,L]");
    log_w += log_binomial(params.L, w) + 2.0 * h * w * table.log_q;
  }
  // The lumped normalizer coincides with Z_L(N).
  return std::exp(log_w - table.log_z_at(params.L, params.N));
}

StickKernel stick_occupation_kernel(const EnsembleParams& params,
                                    const PartitionTable& table) {
  if (params.L < 2)
    throw invalid_params("conditional stick kernel needs L >= 2");
  StickKernel k;
  k.n_lo = static_cast<int>(
      std::max<long long>(0, params.N - static_cast<long long>(params.L - 1) * params.H));
  k.n_hi = static_cast<int>(std::min<long long>(params.H, params.N));
  const int sz = k.size();
  k.nu0.assign(sz, 0.0);
  for (int n = k.n_lo; n <= k.n_hi; ++n)
    k.nu0[n - k.n_lo] = std::exp(table.log_g[n] +
                                 table.log_z_at(params.L - 1, params.N - n) -
                                 table.log_z_at(params.L, params.N));
  k.cond.assign(sz, std::vector<double>(sz, 0.0));
  for (int m = k.n_lo; m <= k.n_hi; ++m) {
    const double log_den = table.log_z_at(params.L - 1, params.N - m);
    for (int n = k.n_lo; n <= k.n_hi; ++n) {
      const double log_num =
          table.log_g[n] + table.log_z_at(params.L - 2, params.N - m - n);
      if (log_num == kNegInf) continue;
      k.cond[m - k.n_lo][n - k.n_lo] = std::exp(log_num - log_den);
    }
  }
  return k;
}

GrandCanonicalStats chemical_potential(double rho, int H, double q) {
  if (!(rho > 0.0 && rho < H))
    throw out_of_range_error("rho must lie strictly between 0 and H");
  if (!(q > 0.0 && q < 1.0)) throw invalid_params("q must lie in (0,1)");
  const double log_q = std::log(q);
  const auto mean_at = [&](double lambda) {
    double s = 0.0;
    for (int h = 1; h <= H; ++h) {
      const double e = 2.0 * (h - lambda) * log_q;
      s += 1.0 / (1.0 + std::exp(-e));
    }
    return s;
  };

  // The mean is strictly increasing in lambda; widen the bracket, then bisect.
  double lo = 0.0, hi = H + 1.0;
  while (mean_at(lo) > rho) lo -= std::max(1.0, hi - lo);
  while (mean_at(hi) < rho) hi += std::max(1.0, hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_at(mid) < rho ? lo : hi) = mid;
  }

  GrandCanonicalStats out;
  out.lambda = 0.5 * (lo + hi);
  out.mean = mean_at(out.lambda);
  out.sigma2 = 0.0;
  for (int h = 1; h <= H; ++h) {
    const double e = 2.0 * (h - out.lambda) * log_q;
    const double p = 1.0 / (1.0 + std::exp(-e));
    out.sigma2 += p * (1.0 - p);
  }
  return out;
}

}  // namespace asepgap
