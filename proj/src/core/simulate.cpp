// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <random>

namespace asepgap {

namespace {

// Deterministic uniform in [0,1); fixed bit recipe so outputs do not depend
// on the standard library's distribution implementations.
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t pick_index(std::mt19937_64& rng, std::int64_t count) {
  auto i = static_cast<std::int64_t>(u01(rng) * static_cast<double>(count));
  return std::min(i, count - 1);
}

}  // namespace

int SimulationPlan::resolved_row() const {
  if (observable_row > 0) return observable_row;
  const int h = static_cast<int>(std::lround(params.rho()));
  return std::clamp(h, 1, params.H);
}

void SimulationPlan::validate() const {
  params.validate();
  if (!(t_run > 0.0) || !(sample_dt > 0.0) || t_burn < 0.0)
    throw invalid_params("simulation times must be positive");
  if (!(t_run > t_burn))
    throw invalid_params("t_run must exceed t_burn");
  if (observable_row < 0 || observable_row > params.H)
    throw invalid_params("observable row out of range");
}

SimulationResult gillespie_run(const SimulationPlan& plan) {
  plan.validate();
  const EnsembleParams& ep = plan.params;
  const int L = ep.L, H = ep.H;
  const double q = ep.q;
  const int h0 = plan.resolved_row();

  std::mt19937_64 rng(plan.seed);

  // State: row occupancy counts, plus per-row bitmasks in lattice mode.
  std::vector<int> omega(H + 1, 0);  // 1-based
  std::vector<std::uint32_t> row(H + 1, 0);
  {
    // Fill rows bottom-up; this is a valid configuration of the sector.
    long long left = ep.N;
    for (int h = 1; h <= H && left > 0; ++h) {
      const int k = static_cast<int>(std::min<long long>(left, L));
      omega[h] = k;
      row[h] = (k == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << k) - 1);
      left -= k;
    }
  }

  SubsetSpace* sub = nullptr;
  CompositionSpace* comp = nullptr;
  SubsetSpace sub_space(1, 0);
  std::vector<double> histogram;
  std::unique_ptr<CompositionSpace> comp_space;
  if (plan.collect_histogram) {
    if (plan.profile_mode) {
      comp_space = std::make_unique<CompositionSpace>(H, L, ep.N);
      comp = comp_space.get();
      histogram.assign(comp->dim(), 0.0);
    } else {
      sub_space = SubsetSpace(ep.sites(), static_cast<int>(ep.N));
      sub = &sub_space;
      if (sub->dim() > kDefaultEnumerationCap)
        throw cap_exceeded("histogram needs an enumerable sector");
      histogram.assign(sub->dim(), 0.0);
    }
  }
  std::vector<int> comp_state(H);

  auto state_rank = [&]() -> std::int64_t {
    if (plan.profile_mode) {
      for (int h = 1; h <= H; ++h) comp_state[h - 1] = omega[h];
      return static_cast<std::int64_t>(comp->rank(comp_state));
    }
    std::uint64_t bits = 0;
    for (int h = 1; h <= H; ++h)
      bits |= static_cast<std::uint64_t>(row[h]) << ((h - 1) * L);
    return static_cast<std::int64_t>(sub->rank(bits));
  };

  // Move classes: (h, up) has omega_h (L - omega_{h+1}) moves of rate q/L
  // each, (h, down) has omega_{h+1} (L - omega_h) moves of rate 1/(qL).
  const double rate_up = q / L;
  const double rate_down = 1.0 / (q * L);
  std::vector<double> class_rate(2 * (H - 1));
  const int n_samples =
      static_cast<int>(std::floor(plan.t_run / plan.sample_dt)) + 1;
  const double t_end = plan.t_burn + plan.t_run;

  SimulationResult res;
  res.sample_dt = plan.sample_dt;
  res.seed = plan.seed;
  res.samples.reserve(n_samples);

  double t = 0.0;
  int recorded = 0;
  while (recorded < n_samples) {
    double R = 0.0;
    for (int h = 1; h < H; ++h) {
      const double cu = static_cast<double>(omega[h]) * (L - omega[h + 1]);
      const double cd = static_cast<double>(omega[h + 1]) * (L - omega[h]);
      class_rate[2 * (h - 1)] = cu * rate_up;
      class_rate[2 * (h - 1) + 1] = cd * rate_down;
      R += cu * rate_up + cd * rate_down;
    }
    if (!(R > 0.0)) {
      while (recorded < n_samples) {
        res.samples.push_back(omega[h0]);
        ++recorded;
      }
      if (!histogram.empty()) histogram[state_rank()] += 1.0;
      break;
    }
    const double dt = -std::log1p(-u01(rng)) / R;
    const double t_new = t + dt;

    while (recorded < n_samples &&
           plan.t_burn + recorded * plan.sample_dt <= t_new) {
      res.samples.push_back(omega[h0]);
      ++recorded;
    }
    if (!histogram.empty()) {
      const double w = std::min(t_new, t_end) - std::max(t, plan.t_burn);
      if (w > 0.0) histogram[state_rank()] += w;
    }
    if (recorded >= n_samples) {
      res.total_time = t_new;
      break;
    }

    double x = u01(rng) * R;
    int cls = 0;
    for (; cls + 1 < static_cast<int>(class_rate.size()); ++cls) {
      if (x < class_rate[cls]) break;
      x -= class_rate[cls];
    }
    const int h = cls / 2 + 1;
    const bool up = (cls % 2) == 0;
    const int src_row = up ? h : h + 1;
    const int dst_row = up ? h + 1 : h;
    if (!plan.profile_mode) {
      // Uniform occupied column in the source row, uniform empty column in
      // the destination row; all moves in a class carry the same rate.
      std::int64_t si = pick_index(rng, omega[src_row]);
      std::int64_t di = pick_index(rng, L - omega[dst_row]);
      std::uint32_t bits = row[src_row];
      for (std::int64_t s = 0; s < si; ++s) bits &= bits - 1;
      const int src_col = std::countr_zero(bits);
      std::uint32_t holes =
          ~row[dst_row] & ((L == 32) ? ~std::uint32_t{0}
                                     : ((std::uint32_t{1} << L) - 1));
      for (std::int64_t s = 0; s < di; ++s) holes &= holes - 1;
      const int dst_col = std::countr_zero(holes);
      row[src_row] &= ~(std::uint32_t{1} << src_col);
      row[dst_row] |= std::uint32_t{1} << dst_col;
    }
    --omega[src_row];
    ++omega[dst_row];
    ++res.n_events;
    t = t_new;
    res.total_time = t;
  }

  if (!histogram.empty()) {
    double tot = 0.0;
    for (double w : histogram) tot += w;
    if (tot > 0.0)
      for (double& w : histogram) w /= tot;
    res.histogram = std::move(histogram);
  }
  return res;
}

namespace {

struct AutocorrFit {
  double rate;
  int lag_lo, lag_hi;
};

// Fit -d/dt log C(t) over the window c_lo <= C <= c_hi.
AutocorrFit fit_rate(const std::vector<double>& x, double dt, double c_lo,
                     double c_hi, int lag_cap) {
  const int n = static_cast<int>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  c0 /= n;
  if (!(c0 > 0.0)) throw insufficient_data("observable is constant");

  std::vector<double> ts, ys;
  int lag_lo = 0, lag_hi = 0;
  bool below_floor = false;
  for (int lag = 1; lag <= lag_cap; ++lag) {
    double c = 0.0;
    for (int i = 0; i + lag < n; ++i)
      c += (x[i] - mean) * (x[i + lag] - mean);
    c /= (n - lag) * c0;
    if (c > c_hi) continue;
    if (c < c_lo) {
      below_floor = true;
      break;
    }
    if (ts.empty()) lag_lo = lag;
    lag_hi = lag;
    ts.push_back(lag * dt);
    ys.push_back(std::log(c));
  }
  if (ts.empty() && below_floor)
    // Already at the noise floor at lag 1: no exponential structure.
    throw non_decaying_correlation(
        "autocorrelation carries no resolvable decay at this sampling rate");
  if (ts.size() < 3)
    throw insufficient_data(
        "autocorrelation window too narrow; adjust sample_dt or t_run");

  const int m = static_cast<int>(ts.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (int i = 0; i < m; ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double denom = m * stt - st * st;
  if (!(std::abs(denom) > 0.0)) throw insufficient_data("degenerate fit window");
  const double slope = (m * sty - st * sy) / denom;
  if (!(slope < 0.0))
    throw non_decaying_correlation("autocorrelation does not decay");
  return {-slope, lag_lo, lag_hi};
}

}  // namespace

RelaxationEstimate relaxation_estimate(const std::vector<double>& samples,
                                       double sample_dt, double c_lo,
                                       double c_hi, int n_boot,
                                       std::uint64_t seed) {
  const int n = static_cast<int>(samples.size());
  if (n < 64) throw insufficient_data("need at least 64 samples");
  if (!(sample_dt > 0.0)) throw invalid_params("sample_dt must be positive");
  if (!(0.0 < c_lo && c_lo < c_hi && c_hi < 1.0))
    throw invalid_params("need 0 < c_lo < c_hi < 1");

  const int lag_cap = std::min(n / 4, 100000);
  const AutocorrFit fit = fit_rate(samples, sample_dt, c_lo, c_hi, lag_cap);

  RelaxationEstimate est;
  est.rate = fit.rate;
  est.n_samples = n;
  est.lag_lo = fit.lag_lo;
  est.lag_hi = fit.lag_hi;

  // Moving-block bootstrap; blocks much longer than the fit window.
  const int block = std::max(4 * fit.lag_hi, 16);
  if (n < 4 * block)
    throw insufficient_data("trajectory too short for block bootstrap");
  const int n_blocks = n / block;
  std::mt19937_64 rng(seed);
  std::vector<double> rates;
  rates.reserve(n_boot);
  std::vector<double> resampled(static_cast<std::size_t>(n_blocks) * block);
  for (int b = 0; b < n_boot; ++b) {
    for (int k = 0; k < n_blocks; ++k) {
      const auto start = static_cast<std::int64_t>(
          u01(rng) * static_cast<double>(n - block));
      std::copy(samples.begin() + start, samples.begin() + start + block,
                resampled.begin() + static_cast<std::int64_t>(k) * block);
    }
    try {
      rates.push_back(
          fit_rate(resampled, sample_dt, c_lo, c_hi, lag_cap).rate);
    } catch (const std::exception&) {
      // skip degenerate resamples
    }
  }
  if (static_cast<int>(rates.size()) < n_boot / 2)
    throw insufficient_data("bootstrap resamples mostly degenerate");
  double bm = 0.0;
  for (double r : rates) bm += r;
  bm /= rates.size();
  double v = 0.0;
  for (double r : rates) v += (r - bm) * (r - bm);
  est.stderr_rate = std::sqrt(v / (rates.size() - 1));
  return est;
}

}  // namespace asepgap
