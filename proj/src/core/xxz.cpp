// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "xxz.hpp"

#include <bit>
#include <cmath>
#include <map>

#include "operators.hpp"

namespace asepgap {

namespace {

// Raising/lowering amplitudes in occupation coordinates w = S + m.
double c_raise(int twiceS, int w) {  // c_+(S, m)
  return std::sqrt(static_cast<double>(twiceS - w) * (w + 1));
}
double c_lower(int twiceS, int w) {  // c_-(S, m)
  return std::sqrt(static_cast<double>(w) * (twiceS - w + 1));
}

Eigen::MatrixXd bond_hamiltonian(const CompositionSpace& space,
                                 const std::vector<std::pair<int, int>>& bonds,
                                 int twiceS, double Delta, std::uint64_t cap) {
  if (space.dim() > cap) throw cap_exceeded("spin sector exceeds cap");
  const double S = 0.5 * twiceS;
  const double kink = S * std::sqrt(1.0 - 1.0 / (Delta * Delta));
  const std::int64_t dim = space.dim();
  Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r) {
    std::vector<int> w = space.unrank(r);
    for (const auto& [x, y] : bonds) {
      const double mx = w[x] - S;
      const double my = w[y] - S;
      ham(r, r) += S * S - mx * my + kink * (my - mx);
      if (w[x] < twiceS && w[y] > 0) {
        std::vector<int> v = w;
        ++v[x];
        --v[y];
        ham(r, space.rank(v)) -=
            c_raise(twiceS, w[x]) * c_lower(twiceS, w[y]) / (2.0 * Delta);
      }
      if (w[x] > 0 && w[y] < twiceS) {
        std::vector<int> v = w;
        --v[x];
        ++v[y];
        ham(r, space.rank(v)) -=
            c_lower(twiceS, w[x]) * c_raise(twiceS, w[y]) / (2.0 * Delta);
      }
    }
  }
  return ham;
}

Eigen::VectorXd kink_ground_state(const CompositionSpace& space,
                                  const std::vector<int>& levels, int twiceS,
                                  double Delta, std::uint64_t cap) {
  if (space.dim() > cap) throw cap_exceeded("spin sector exceeds cap");
  const double S = 0.5 * twiceS;
  const double log_q = std::log(Delta - std::sqrt(Delta * Delta - 1.0));
  const std::int64_t dim = space.dim();
  std::vector<double> log_psi(dim);
  double m = kNegInf;
  for (std::int64_t r = 0; r < dim; ++r) {
    std::vector<int> w = space.unrank(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
      acc += levels[k] * (w[k] - S) * log_q + 0.5 * log_binomial(twiceS, w[k]);
    log_psi[r] = acc;
    m = std::max(m, acc);
  }
  Eigen::VectorXd psi(dim);
  for (std::int64_t r = 0; r < dim; ++r) psi[r] = std::exp(log_psi[r] - m);
  psi.normalize();
  return psi;
}

std::vector<double> composition_pi(const CompositionSpace& space,
                                   const std::vector<int>& levels, int twiceS,
                                   double q) {
  const double log_q = std::log(q);
  const std::int64_t dim = space.dim();
  std::vector<double> log_w(dim);
  for (std::int64_t r = 0; r < dim; ++r) {
    std::vector<int> w = space.unrank(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
      acc += log_binomial(twiceS, w[k]) + 2.0 * levels[k] * w[k] * log_q;
    log_w[r] = acc;
  }
  const double log_z = log_sum_exp(log_w);
  std::vector<double> pi(dim);
  for (std::int64_t r = 0; r < dim; ++r) pi[r] = std::exp(log_w[r] - log_z);
  return pi;
}

// hat-G over an arbitrary bond structure; profile entries in [0, 2S].
ReversibleOperator composition_generator(const CompositionSpace& space,
                                         const std::vector<int>& levels,
                                         const std::vector<std::pair<int, int>>& bonds,
                                         int twiceS, double q, double prefactor,
                                         std::string label, std::uint64_t cap) {
  if (space.dim() > cap) throw cap_exceeded("profile sector exceeds cap");
  if (space.dim() <= 1) throw degenerate_sector("one-state profile sector");
  OperatorBuilder builder(space.dim());
  builder.set_pi(composition_pi(space, levels, twiceS, q));
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    std::vector<int> w = space.unrank(r);
    for (const auto& [x, y] : bonds) {
      if (w[x] < twiceS && w[y] > 0) {  // w_b^+: particle drops y -> x
        std::vector<int> v = w;
        ++v[x];
        --v[y];
        builder.add(r, space.rank(v),
                    prefactor * w[y] * (twiceS - w[x]) / q);
      }
      if (w[x] > 0 && w[y] < twiceS) {  // w_b^-: particle climbs x -> y
        std::vector<int> v = w;
        --v[x];
        ++v[y];
        builder.add(r, space.rank(v),
                    prefactor * q * w[x] * (twiceS - w[y]));
      }
    }
  }
  return builder.finalize(std::move(label));
}

}  // namespace

void XXZParams::validate() const {
  if (twiceS < 1) throw invalid_params("2S must be >= 1");
  if (H < 2) throw invalid_params("chain length H must be >= 2");
  if (!(Delta > 1.0)) throw invalid_params("Delta must exceed 1");
  const long long span = static_cast<long long>(twiceS) * H;
  if (twice_n < -span || twice_n > span)
    throw invalid_params("sector 2n out of [-2SH, 2SH]");
  if (((twice_n - span) % 2) != 0)
    throw invalid_params("sector 2n has wrong parity for 2S*H");
}

CompositionSpace xxz_sector_basis(const XXZParams& xxz) {
  xxz.validate();
  return CompositionSpace(xxz.H, xxz.twiceS, xxz.sector_particles());
}

Eigen::MatrixXd xxz_chain_hamiltonian(const XXZParams& xxz, std::uint64_t cap) {
  const CompositionSpace space = xxz_sector_basis(xxz);
  std::vector<std::pair<int, int>> bonds;
  for (int h = 0; h + 1 < xxz.H; ++h) bonds.emplace_back(h, h + 1);
  return bond_hamiltonian(space, bonds, xxz.twiceS, xxz.Delta, cap);
}

Eigen::VectorXd xxz_ground_state(const XXZParams& xxz, std::uint64_t cap) {
  const CompositionSpace space = xxz_sector_basis(xxz);
  std::vector<int> levels(xxz.H);
  for (int h = 0; h < xxz.H; ++h) levels[h] = h + 1;
  return kink_ground_state(space, levels, xxz.twiceS, xxz.Delta, cap);
}

ConjugationResult conjugate_to_profile(const XXZParams& xxz, std::uint64_t cap) {
  const CompositionSpace space = xxz_sector_basis(xxz);
  if (space.dim() <= 1) throw degenerate_sector("one-state XXZ sector");
  const Eigen::MatrixXd ham = xxz_chain_hamiltonian(xxz, cap);
  const double S = xxz.S();

  EnsembleParams ep;
  ep.q = xxz.q();
  ep.L = xxz.twiceS;
  ep.H = xxz.H;
  ep.N = xxz.sector_particles();
  const ReversibleOperator direct = profile_generator(ep, cap);

  const std::int64_t dim = space.dim();
  const std::vector<double>& pi = direct.pi;  // hat-nu of the sector
  OperatorBuilder builder(dim);
  builder.set_pi(pi);
  double max_dev = 0.0;
  for (std::int64_t a = 0; a < dim; ++a) {
    double conj_diag = 0.0;
    for (std::int64_t b = 0; b < dim; ++b) {
      const double entry =
          -(xxz.Delta / S) * ham(a, b) * std::sqrt(pi[b] / pi[a]);
      if (a == b) {
        conj_diag = entry;
        continue;
      }
      max_dev = std::max(max_dev, std::abs(entry - direct.rate_at(a, b)));
      if (entry > 0.0) builder.add(a, b, entry);
    }
    max_dev = std::max(max_dev, std::abs(conj_diag - direct.diag[a]));
  }
  return ConjugationResult{builder.finalize("L_profile_conjugated"), max_dev};
}

DiagonalRegion diagonal_region(int R, int H) {
  if (R < 0 || H < 1) throw invalid_params("need R >= 0 and H >= 1");
  DiagonalRegion region;
  region.R = R;
  region.H = H;
  for (int level = 1; level <= H; ++level)
    for (int t = -R; t <= R; ++t) {
      if (((level + t) % 2 + 2) % 2 != 0) continue;
      region.sites.push_back({(level + t) / 2, (level - t) / 2});
    }
  std::map<std::pair<int, int>, int> index;
  for (std::size_t k = 0; k < region.sites.size(); ++k)
    index[{region.sites[k].x1, region.sites[k].x2}] = static_cast<int>(k);
  for (std::size_t k = 0; k < region.sites.size(); ++k) {
    const auto& s = region.sites[k];
    for (const auto& [dx1, dx2] : {std::pair<int, int>{1, 0}, {0, 1}}) {
      const auto it = index.find({s.x1 + dx1, s.x2 + dx2});
      if (it != index.end())
        region.bonds.emplace_back(static_cast<int>(k), it->second);
    }
  }
  return region;
}

Eigen::MatrixXd diagonal_hamiltonian(const DiagonalRegion& region, int twiceS,
                                     double Delta, int twice_n, std::uint64_t cap) {
  const long long span = static_cast<long long>(twiceS) * region.sites.size();
  if (twice_n < -span || twice_n > span || ((twice_n - span) % 2) != 0)
    throw invalid_params("diagonal sector 2n out of range");
  CompositionSpace space(static_cast<int>(region.sites.size()), twiceS,
                         (span + twice_n) / 2);
  return bond_hamiltonian(space, region.bonds, twiceS, Delta, cap);
}

Eigen::VectorXd diagonal_ground_state(const DiagonalRegion& region, int twiceS,
                                      double Delta, int twice_n, std::uint64_t cap) {
  const long long span = static_cast<long long>(twiceS) * region.sites.size();
  CompositionSpace space(static_cast<int>(region.sites.size()), twiceS,
                         (span + twice_n) / 2);
  std::vector<int> levels;
  for (const auto& s : region.sites) levels.push_back(s.level());
  return kink_ground_state(space, levels, twiceS, Delta, cap);
}

ReversibleOperator diagonal_profile_generator(const DiagonalRegion& region,
                                              int twiceS, double Delta, long long N,
                                              std::uint64_t cap) {
  CompositionSpace space(static_cast<int>(region.sites.size()), twiceS, N);
  std::vector<int> levels;
  for (const auto& s : region.sites) levels.push_back(s.level());
  const double q = Delta - std::sqrt(Delta * Delta - 1.0);
  return composition_generator(space, levels, region.bonds, twiceS, q, 1.0,
                               "G_hat_diagonal", cap);
}

ReversibleOperator lifted_diagonal_generator(const DiagonalRegion& region,
                                             int twiceS, double Delta, long long N,
                                             std::uint64_t cap) {
  const int n_cols = static_cast<int>(region.sites.size());
  const int n_sites = n_cols * twiceS;
  if (n_sites > 64) throw invalid_params("lifted diagonal region exceeds 64 sites");
  if (N <= 0 || N >= n_sites) throw degenerate_sector("lifted diagonal sector");
  SubsetSpace space(n_sites, static_cast<int>(N));
  if (space.dim() > cap) throw cap_exceeded("lifted sector exceeds cap");
  const double q = Delta - std::sqrt(Delta * Delta - 1.0);
  const double log_q = std::log(q);

  const auto site_of = [&](int col, int i) { return col * twiceS + i; };
  std::vector<double> log_w(space.dim());
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    std::uint64_t bits = space.unrank(r);
    double acc = 0.0;
    while (bits) {
      const int s = std::countr_zero(bits);
      bits &= bits - 1;
      acc += 2.0 * region.sites[s / twiceS].level() * log_q;
    }
    log_w[r] = acc;
  }
  const double log_z = log_sum_exp(log_w);
  std::vector<double> pi(space.dim());
  for (std::uint64_t r = 0; r < space.dim(); ++r)
    pi[r] = std::exp(log_w[r] - log_z);

  OperatorBuilder builder(space.dim());
  builder.set_pi(std::move(pi));
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    const std::uint64_t bits = space.unrank(r);
    for (const auto& [x, y] : region.bonds)
      for (int i = 0; i < twiceS; ++i)
        for (int j = 0; j < twiceS; ++j) {
          const int sx = site_of(x, i);
          const int sy = site_of(y, j);
          const bool ox = (bits >> sx) & 1u;
          const bool oy = (bits >> sy) & 1u;
          if (ox == oy) continue;
          const std::uint64_t nb =
              bits ^ (std::uint64_t{1} << sx) ^ (std::uint64_t{1} << sy);
          builder.add(r, space.rank(nb), (ox ? q : 1.0 / q) / twiceS);
        }
  }
  return builder.finalize("G_diagonal_lifted");
}

}  // namespace asepgap
