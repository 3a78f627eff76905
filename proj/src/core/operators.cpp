// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "operators.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

namespace asepgap {

namespace {

std::vector<double> sector_pi(const SubsetSpace& space, const EnsembleParams& params,
                              const PartitionTable& table) {
  std::vector<double> pi(space.dim());
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    std::uint64_t bits = space.unrank(r);
    double log_w = 0.0;
    while (bits) {
      const int s = std::countr_zero(bits);
      bits &= bits - 1;
      log_w += 2.0 * (s / params.L + 1) * table.log_q;
    }
    pi[r] = std::exp(log_w - table.log_z_at(params.L, params.N));
  }
  return pi;
}

}  // namespace

ReversibleOperator full_generator(const EnsembleParams& params, std::uint64_t cap,
                                  bool exclude_same_stick) {
  params.validate();
  if (params.degenerate())
    throw degenerate_sector("full generator needs 1 <= N <= LH-1");
  SubsetSpace space(params.sites(), static_cast<int>(params.N));
  if (space.dim() > cap) throw cap_exceeded("sector exceeds enumeration cap");

  const PartitionTable table = build_partition_table(params);
  const int L = params.L;
  OperatorBuilder builder(space.dim());
  builder.set_pi(sector_pi(space, params, table));
  const double up = params.q / L;        // particle from row h to h+1
  const double down = 1.0 / (params.q * L);  // particle from row h+1 to h

  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    const std::uint64_t bits = space.unrank(r);
    for (int h = 0; h + 1 < params.H; ++h)
      for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
          if (exclude_same_stick && i == j) continue;
          const int x = h * L + i;
          const int y = (h + 1) * L + j;
          const bool ox = (bits >> x) & 1u;
          const bool oy = (bits >> y) & 1u;
          if (ox == oy) continue;
          const std::uint64_t nb = bits ^ (std::uint64_t{1} << x) ^ (std::uint64_t{1} << y);
          builder.add(r, space.rank(nb), ox ? up : down);
        }
  }
  return builder.finalize(exclude_same_stick ? "L_modified" : "L_full");
}

ReversibleOperator profile_generator(const EnsembleParams& params, std::uint64_t cap) {
  params.validate();
  if (params.degenerate())
    throw degenerate_sector("profile generator needs 1 <= N <= LH-1");
  CompositionSpace space(params.H, params.L, params.N);
  if (space.dim() > cap) throw cap_exceeded("profile sector exceeds enumeration cap");

  const PartitionTable table = build_partition_table(params);
  std::vector<double> pi(space.dim());
  OperatorBuilder builder(space.dim());
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    std::vector<int> w = space.unrank(r);
    pi[r] = hat_nu_weight(ProfileConfig{w}, params, table);
    for (int h = 0; h + 1 < params.H; ++h) {
      // omega^{+,h}: particle drops from row h+1 to row h.
      if (w[h] < params.L && w[h + 1] > 0) {
        const double rate =
            (params.L - w[h]) * w[h + 1] / (params.q * params.L);
        std::vector<int> v = w;
        ++v[h];
        --v[h + 1];
        builder.add(r, space.rank(v), rate);
      }
      // omega^{-,h}: particle climbs from row h to row h+1.
      if (w[h] > 0 && w[h + 1] < params.L) {
        const double rate =
            params.q * (params.L - w[h + 1]) * w[h] / params.L;
        std::vector<int> v = w;
        --v[h];
        ++v[h + 1];
        builder.add(r, space.rank(v), rate);
      }
    }
  }
  builder.set_pi(std::move(pi));
  return builder.finalize("L_profile");
}

ReversibleOperator operator_K(const EnsembleParams& params) {
  params.validate();
  if (params.L < 2) throw invalid_params("operator K needs L >= 2");
  const PartitionTable table = build_partition_table(params);
  const StickKernel kern = stick_occupation_kernel(params, table);
  const int sz = kern.size();
  OperatorBuilder builder(sz);
  builder.set_pi(kern.nu0);
  for (int a = 0; a < sz; ++a)
    for (int b = 0; b < sz; ++b)
      if (a != b) builder.add(a, b, kern.cond[a][b]);
  // diag becomes K(n,n) - 1 automatically once rows of K sum to one.
  ReversibleOperator op = builder.finalize("K");
  for (int a = 0; a < sz; ++a) op.diag[a] = kern.cond[a][a] - 1.0;
  return op;
}

ReversibleOperator operator_P(const EnsembleParams& params, std::uint64_t cap) {
  params.validate();
  SubsetSpace space(params.sites(), static_cast<int>(params.N));
  if (space.dim() > cap) throw cap_exceeded("sector exceeds enumeration cap");
  const PartitionTable table = build_partition_table(params);
  const std::vector<double> pi = sector_pi(space, params, table);
  const int L = params.L;
  const std::uint64_t dim = space.dim();

  // stick_mask extracts eta_k; groups share the conditional law nu(.|eta_k).
  std::vector<std::uint64_t> states(dim);
  for (std::uint64_t r = 0; r < dim; ++r) states[r] = space.unrank(r);

  std::vector<std::vector<double>> p(dim, std::vector<double>(dim, 0.0));
  for (int k = 0; k < L; ++k) {
    std::uint64_t stick_mask = 0;
    for (int h = 0; h < params.H; ++h)
      stick_mask |= std::uint64_t{1} << (h * L + k);
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> groups;
    for (std::uint64_t r = 0; r < dim; ++r)
      groups[states[r] & stick_mask].push_back(r);
    for (const auto& [key, members] : groups) {
      double total = 0.0;
      for (std::uint64_t r : members) total += pi[r];
      for (std::uint64_t a : members)
        for (std::uint64_t b : members) p[a][b] += pi[b] / (total * L);
    }
  }

  OperatorBuilder builder(dim);
  builder.set_pi(pi);
  for (std::uint64_t a = 0; a < dim; ++a)
    for (std::uint64_t b = 0; b < dim; ++b)
      if (a != b && p[a][b] > 0.0) builder.add(a, b, p[a][b]);
  ReversibleOperator op = builder.finalize("P");
  for (std::uint64_t a = 0; a < dim; ++a) op.diag[a] = p[a][a] - 1.0;
  return op;
}

ReversibleOperator bernoulli_laplace(int L, long long N) {
  if (L < 2 || N < 1 || N > L - 1)
    throw invalid_params("Bernoulli-Laplace needs 1 <= N <= L-1");
  SubsetSpace space(L, static_cast<int>(N));
  OperatorBuilder builder(space.dim());
  builder.set_pi(std::vector<double>(space.dim(), 1.0 / space.dim()));
  const double rate = 2.0 / L;  // both orderings of the pair (i,j)
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    const std::uint64_t bits = space.unrank(r);
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) {
        const bool oi = (bits >> i) & 1u;
        const bool oj = (bits >> j) & 1u;
        if (oi == oj) continue;
        const std::uint64_t nb = bits ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j);
        builder.add(r, space.rank(nb), rate);
      }
  }
  return builder.finalize("bernoulli_laplace");
}

double dirichlet_form(const ReversibleOperator& op, const std::vector<double>& f) {
  return op.dirichlet(f);
}

double modified_dirichlet_form(const EnsembleParams& params,
                               const std::vector<double>& f, std::uint64_t cap) {
  const ReversibleOperator op = full_generator(params, cap, true);
  return op.dirichlet(f);
}

}  // namespace asepgap
