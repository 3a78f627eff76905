// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// State spaces and exact measures of the anisotropic exclusion model:
// occupation configurations on the L x H rectangle, lumped height profiles,
// canonical partition functions (log domain), the single-stick occupation
// kernel and the chemical-potential solver.

#pragma once

#include <cstdint>
#include <vector>

#include "util.hpp"

namespace asepgap {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

struct EnsembleParams {
  double q = 0.5;       // anisotropy, in (0,1)
  int L = 1;            // number of sticks
  int H = 1;            // stick height
  long long N = 0;      // total particles, 0 <= N <= L*H

  double rho() const { return static_cast<double>(N) / L; }
  int sites() const { return L * H; }
  bool degenerate() const { return N == 0 || N == static_cast<long long>(L) * H; }
  void validate() const;
};

// Occupation configuration as a bitmask over sites linearized as
// s = (h-1)*L + (i-1), i in [1,L], h in [1,H]. Supports up to 64 sites.
struct LatticeConfig {
  std::uint64_t bits = 0;
  int n_sites = 0;

  bool occupied(int site) const { return (bits >> site) & 1u; }
  int particle_count() const;
};

struct ProfileConfig {
  std::vector<int> heights;  // omega_h, h = 1..H, each in [0, L]

  long long total() const;
};

ProfileConfig profile_of(const LatticeConfig& alpha, int L, int H);

// Fixed-weight subsets of [0, n_sites) in colexicographic order of the
// occupied-site set. rank/unrank are O(n_sites).
class SubsetSpace {
 public:
  SubsetSpace(int n_sites, int n_particles);

  std::uint64_t dim() const { return dim_; }
  int n_sites() const { return n_sites_; }
  int n_particles() const { return n_particles_; }

  std::uint64_t rank(std::uint64_t bits) const;
  std::uint64_t unrank(std::uint64_t r) const;
  std::uint64_t binom(int n, int k) const { return binom_(n, k); }

 private:
  int n_sites_;
  int n_particles_;
  BinomialTable binom_;
  std::uint64_t dim_;
};

// Bounded compositions: integer vectors of length `len` with entries in
// [0, cap] summing to total, ordered lexicographically (first entry most
// significant, ascending).
class CompositionSpace {
 public:
  CompositionSpace(int len, int cap, long long total);

  std::uint64_t dim() const { return dim_; }
  int len() const { return len_; }
  int cap() const { return cap_; }
  long long total() const { return total_; }

  std::uint64_t rank(const std::vector<int>& v) const;
  std::vector<int> unrank(std::uint64_t r) const;

  // Number of length-k suffixes with entries in [0,cap] summing to m.
  std::uint64_t count(int k, long long m) const;

 private:
  int len_;
  int cap_;
  long long total_;
  std::uint64_t dim_;
  std::vector<std::vector<std::uint64_t>> counts_;  // counts_[k][m]
};

std::vector<LatticeConfig> enumerate_lattice_configs(
    const EnsembleParams& params, std::uint64_t cap = kDefaultEnumerationCap);

std::vector<ProfileConfig> enumerate_profiles(
    const EnsembleParams& params, std::uint64_t cap = kDefaultEnumerationCap);

// Log-domain canonical partition functions of stick subsystems.
//   log_g[n]    = log g(n), single-stick weight of n particles
//   log_z[l][m] = log Z_l(m), l sticks holding m particles
struct PartitionTable {
  int L = 0;
  int H = 0;
  long long N = 0;
  double log_q = 0.0;
  std::vector<double> log_g;
  std::vector<std::vector<double>> log_z;

  double log_z_at(int l, long long m) const {
    if (l < 0 || l > L || m < 0 || m > N) return kNegInf;
    return log_z[l][m];
  }
};

PartitionTable build_partition_table(const EnsembleParams& params);

double nu_weight(const LatticeConfig& alpha, const EnsembleParams& params,
                 const PartitionTable& table);

double hat_nu_weight(const ProfileConfig& omega, const EnsembleParams& params,
                     const PartitionTable& table);

// Marginal/conditional law of the particle count in one stick.
//   nu0[n - n_lo]        = nu_0(n)
//   cond[m - n_lo][n - n_lo] = nu(n | m)
struct StickKernel {
  int n_lo = 0;
  int n_hi = 0;
  std::vector<double> nu0;
  std::vector<std::vector<double>> cond;

  int size() const { return n_hi - n_lo + 1; }
};

StickKernel stick_occupation_kernel(const EnsembleParams& params,
                                    const PartitionTable& table);

struct GrandCanonicalStats {
  double lambda = 0.0;
  double mean = 0.0;
  double sigma2 = 0.0;
};

// Solves sum_h p_h(lambda) = rho by bisection; p_h = q^{2(h-lambda)} /
// (1 + q^{2(h-lambda)}).
GrandCanonicalStats chemical_potential(double rho, int H, double q);

}  // namespace asepgap
