// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "bigsector.hpp"
#include "operators.hpp"

namespace asepgap {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

Eigen::MatrixXd dense_generator(const ReversibleOperator& op) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(op.dim, op.dim);
  for (std::int64_t a = 0; a < op.dim; ++a) {
    M(a, a) = op.diag[a];
    for (std::int64_t k = op.row_ptr[a]; k < op.row_ptr[a + 1]; ++k)
      M(a, op.col[k]) += op.rate[k];
  }
  return M;
}

Eigen::MatrixXd symmetrize(const ReversibleOperator& op) {
  for (std::int64_t a = 0; a < op.dim; ++a)
    if (!(op.pi[a] > 0.0))
      throw zero_weight_state("stationary weight vanished at state " +
                              std::to_string(a));
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(op.dim, op.dim);
  for (std::int64_t a = 0; a < op.dim; ++a) {
    M(a, a) = op.diag[a];
    for (std::int64_t k = op.row_ptr[a]; k < op.row_ptr[a + 1]; ++k) {
      const std::int64_t b = op.col[k];
      M(a, b) += op.rate[k] * std::sqrt(op.pi[a] / op.pi[b]);
    }
  }
  return 0.5 * (M + M.transpose()).eval();
}

SpectrumReport dense_gap(const ReversibleOperator& op, std::uint64_t dense_cap) {
  if (static_cast<std::uint64_t>(op.dim) > dense_cap)
    throw cap_exceeded("dimension " + std::to_string(op.dim) +
                       " exceeds dense cap " + std::to_string(dense_cap));
  if (op.dim <= 1) throw degenerate_sector("one-dimensional sector");

  Eigen::MatrixXd A = -symmetrize(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw no_convergence("dense eigensolver failed");

  SpectrumReport rep;
  rep.method = "dense";
  rep.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + op.dim);
  std::int64_t gap_idx = -1;
  for (std::int64_t i = 0; i < op.dim; ++i) {
    if (rep.eigenvalues[i] < kZeroEigTol)
      ++rep.zero_multiplicity;
    else if (gap_idx < 0)
      gap_idx = i;
  }
  rep.degenerate_spectrum = rep.zero_multiplicity != 1;
  if (gap_idx >= 0) {
    rep.gap = rep.eigenvalues[gap_idx];
    Eigen::VectorXd v = es.eigenvectors().col(gap_idx);
    rep.residual = (A * v - rep.gap * v).norm();
  }
  rep.iterations = 1;
  return rep;
}

SpectrumReport iterative_gap(const SymLinOp& A, const std::vector<double>& kernel,
                             const LanczosOptions& opts) {
  const std::int64_t n = A.dim;
  if (n <= 1) throw degenerate_sector("one-dimensional sector");
  if (static_cast<std::int64_t>(kernel.size()) != n)
    throw dimension_mismatch("kernel vector length mismatch");

  Eigen::Map<const Eigen::VectorXd> kmap(kernel.data(), n);
  const double knorm = kmap.norm();
  if (!(knorm > 0.0)) throw zero_weight_state("kernel vector vanished");
  Eigen::VectorXd u = kmap / knorm;

  int m = opts.basis_size;
  if (m <= 0) {
    // Basis memory budget ~1.5 GB; never below 12 or above 60 vectors.
    m = static_cast<int>(1.5e9 / (8.0 * static_cast<double>(n)));
    m = std::clamp(m, 12, 60);
  }
  m = static_cast<int>(std::min<std::int64_t>(m, n - 1));
  if (m < 1) m = 1;

  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd w(n);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (opts.initial_guess) {
    if (static_cast<std::int64_t>(opts.initial_guess->size()) != n)
      throw dimension_mismatch("initial guess length mismatch");
    V.col(0) = Eigen::Map<const Eigen::VectorXd>(opts.initial_guess->data(), n);
  } else {
    for (std::int64_t i = 0; i < n; ++i) V(i, 0) = gauss(rng);
  }
  V.col(0) -= u * u.dot(V.col(0));
  double nrm = V.col(0).norm();
  if (!(nrm > 1e-14)) {
    for (std::int64_t i = 0; i < n; ++i) V(i, 0) = gauss(rng);
    V.col(0) -= u * u.dot(V.col(0));
    nrm = V.col(0).norm();
  }
  V.col(0) /= nrm;

  int matvecs = 0;
  int cur = 0;
  int jmax = 0;
  bool breakdown = false;
  Eigen::VectorXd thetas;
  Eigen::MatrixXd S;

  for (;;) {
    int j = cur;
    for (; j < m; ++j) {
      A.apply(V.col(j).data(), w.data());
      ++matvecs;
      // Deflate the kernel direction after every pass; a single projection
      // lets the component regrow geometrically over the sweep.
      w -= u * u.dot(w);
      Eigen::VectorXd h = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h;
      w -= u * u.dot(w);
      Eigen::VectorXd h2 = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h2;
      w -= u * u.dot(w);
      h += h2;
      for (int i = 0; i <= j; ++i) {
        T(i, j) = h(i);
        T(j, i) = h(i);
      }
      const double beta = w.norm();
      const double scale = std::max(1e-300, T.topLeftCorner(j + 1, j + 1)
                                                .cwiseAbs()
                                                .maxCoeff());
      // Near-breakdown: the Krylov space exhausted an invariant subspace.
      // Normalizing the residual noise would reintroduce the deflated
      // kernel, so stop expanding; Ritz values are exact at this point.
      if (beta <= 1e-8 * scale) {
        breakdown = true;
        jmax = j + 1;
        break;
      }
      V.col(j + 1) = w / beta;
      T(j, j + 1) = beta;
      T(j + 1, j) = beta;
    }
    if (!breakdown) jmax = m;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        T.topLeftCorner(jmax, jmax));
    if (es.info() != Eigen::Success)
      throw no_convergence("projected eigensolver failed");
    thetas = es.eigenvalues();
    S = es.eigenvectors();

    const double beta_m = breakdown ? 0.0 : T(jmax, jmax - 1);
    const double res0 = std::abs(beta_m * S(jmax - 1, 0));
    const double theta_scale =
        std::max(std::abs(thetas(0)), std::abs(thetas(jmax - 1)));
    if (breakdown || res0 <= opts.tol * std::max(theta_scale, 1e-300) ||
        matvecs >= opts.max_iters)
      break;

    // Thick restart: keep the lowest Ritz pairs plus the residual direction.
    int k = std::clamp(m / 3, 4, m - 2);
    k = std::min(k, jmax - 1);
    if (k < 1) k = 1;
    Eigen::MatrixXd Y = V.leftCols(jmax) * S.leftCols(k);
    V.leftCols(k) = Y;
    V.col(k) = V.col(jmax);
    T.setZero();
    for (int i = 0; i < k; ++i) {
      T(i, i) = thetas(i);
      T(i, k) = beta_m * S(jmax - 1, i);
      T(k, i) = T(i, k);
    }
    cur = k;
  }

  SpectrumReport rep;
  rep.method = "lanczos";
  rep.iterations = matvecs;
  rep.gap = thetas(0);
  rep.eigenvalues.assign(thetas.data(), thetas.data() + std::min(jmax, 4));
  rep.zero_multiplicity = 1;  // the deflated kernel direction
  rep.degenerate_spectrum = thetas(0) < kZeroEigTol;

  Eigen::VectorXd x = V.leftCols(jmax) * S.col(0);
  x -= u * u.dot(x);
  x /= x.norm();
  A.apply(x.data(), w.data());
  ++matvecs;
  rep.residual = (w - rep.gap * x).norm();
  rep.iterations = matvecs;

  const double theta_scale =
      std::max(std::abs(thetas(0)), std::abs(thetas(jmax - 1)));
  if (!rep.degenerate_spectrum &&
      rep.residual > 100.0 * opts.tol * std::max(theta_scale, 1e-300))
    throw no_convergence("lanczos residual " + std::to_string(rep.residual) +
                         " after " + std::to_string(matvecs) + " matvecs");
  return rep;
}

SpectrumReport iterative_gap(const ReversibleOperator& op,
                             const LanczosOptions& opts) {
  SymLinOp A;
  A.dim = op.dim;
  A.apply = [&op](const double* x, double* y) { op.apply_sym_neg(x, y); };
  std::vector<double> kernel(op.dim);
  for (std::int64_t a = 0; a < op.dim; ++a) kernel[a] = std::sqrt(op.pi[a]);
  return iterative_gap(A, kernel, opts);
}

namespace {

// Second eigenvector of the lumped profile chain lifted to the sector;
// the lift is an exact eigenvector, so it makes a strong warm start.
std::optional<std::vector<double>> lifted_profile_guess(
    const EnsembleParams& ep, const FullSectorSymOp& bs, std::uint64_t seed) {
  try {
    CompositionSpace cs(ep.H, ep.L, ep.N);
    if (cs.dim() < 2 || cs.dim() > 20000) return std::nullopt;
    ReversibleOperator hat = profile_generator(ep);
    Eigen::MatrixXd A = -symmetrize(hat);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) return std::nullopt;
    if (es.eigenvalues()(1) < kZeroEigTol) return std::nullopt;
    Eigen::VectorXd phi = es.eigenvectors().col(1);
    for (std::int64_t i = 0; i < hat.dim; ++i) phi(i) /= std::sqrt(hat.pi[i]);

    const int L = ep.L, H = ep.H;
    std::vector<int> heights(H);
    std::vector<double> vals = bs.map_states([&](std::uint64_t bits) {
      const std::uint64_t col_mask = (std::uint64_t{1} << L) - 1;
      for (int h = 0; h < H; ++h)
        heights[h] = std::popcount((bits >> (h * L)) & col_mask);
      return phi(static_cast<std::int64_t>(cs.rank(heights)));
    });
    std::vector<double> sq = bs.sqrt_pi();
    const std::int64_t n = bs.dim();
    double nrm2 = 0.0;
    for (std::int64_t a = 0; a < n; ++a) {
      vals[a] *= sq[a];
      nrm2 += vals[a] * vals[a];
    }
    if (!(nrm2 > 0.0)) return std::nullopt;
    const double s = 1.0 / std::sqrt(nrm2);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise = 0.3 / std::sqrt(static_cast<double>(n));
    for (std::int64_t a = 0; a < n; ++a)
      vals[a] = vals[a] * s + noise * gauss(rng);
    return vals;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

GapCell scan_cell(const EnsembleParams& ep, bool use_modified,
                  const GammaScanOptions& opts) {
  GapCell c;
  c.q = ep.q;
  c.L = ep.L;
  c.H = ep.H;
  c.N = ep.N;
  c.form = use_modified ? "modified" : "full";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SubsetSpace space(ep.sites(), static_cast<int>(ep.N));
    c.dim = space.dim();
    SpectrumReport rep;
    if (c.dim <= opts.dense_cap) {
      ReversibleOperator op = full_generator(ep, opts.dense_cap, use_modified);
      rep = dense_gap(op, opts.dense_cap);
    } else if (c.dim <= opts.iter_cap) {
      FullSectorSymOp bs(ep, use_modified, opts.iter_cap);
      SymLinOp A;
      A.dim = bs.dim();
      A.apply = [&bs](const double* x, double* y) { bs.apply(x, y); };
      LanczosOptions lo;
      lo.tol = opts.tol;
      lo.max_iters = 800;
      lo.seed = 12345 + static_cast<std::uint64_t>(ep.N);
      if (!use_modified)
        lo.initial_guess = lifted_profile_guess(ep, bs, lo.seed * 7 + 1);
      rep = iterative_gap(A, bs.sqrt_pi(), lo);
    } else {
      throw cap_exceeded("sector dimension exceeds iterative cap");
    }
    c.gap = rep.gap;
    c.method = rep.method;
    c.residual = rep.residual;
    c.iterations = rep.iterations;
    if (rep.degenerate_spectrum || !(rep.gap > 0.0)) {
      c.error = "NonErgodic";
      c.gamma = std::numeric_limits<double>::infinity();
    } else {
      c.gamma = 1.0 / rep.gap;
    }
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  c.seconds = seconds_since(t0);
  return c;
}

}  // namespace

std::vector<GapCell> gamma_scan(const GammaScanOptions& opts,
                                const GapCellCallback& on_cell) {
  std::vector<GapCell> out;
  for (int L : opts.Ls) {
    for (int H : opts.Hs) {
      const long long half = static_cast<long long>(L) * H / 2;
      GapCell summary;
      summary.q = opts.q;
      summary.L = L;
      summary.H = H;
      summary.N = -1;
      summary.form = opts.use_modified ? "modified" : "full";
      summary.method = "sup";
      summary.gap = std::numeric_limits<double>::infinity();
      bool any_ok = false, any_err = false;
      for (long long N = 1; N <= half; ++N) {
        EnsembleParams ep{opts.q, L, H, N};
        GapCell c = scan_cell(ep, opts.use_modified, opts);
        summary.seconds += c.seconds;
        if (c.error.empty()) {
          any_ok = true;
          summary.gamma = std::max(summary.gamma, c.gamma);
          summary.gap = std::min(summary.gap, c.gap);
        } else {
          any_err = true;
          if (!opts.keep_going) {
            if (on_cell) on_cell(c);
            out.push_back(std::move(c));
            throw no_convergence("gamma scan cell (L=" + std::to_string(L) +
                                 ",H=" + std::to_string(H) +
                                 ",N=" + std::to_string(N) +
                                 ") failed: " + out.back().error);
          }
        }
        if (on_cell) on_cell(c);
        out.push_back(std::move(c));
      }
      if (!any_ok) {
        summary.gap = 0.0;
        summary.error = "no feasible sector";
      } else if (any_err) {
        summary.error = "partial";
      }
      if (on_cell) on_cell(summary);
      out.push_back(std::move(summary));
    }
  }
  return out;
}

std::vector<GapCell> bernoulli_laplace_scan(const std::vector<int>& Ls,
                                            const GapCellCallback& on_cell) {
  std::vector<GapCell> out;
  for (int L : Ls) {
    GapCell summary;
    summary.q = 1.0;
    summary.L = L;
    summary.H = 1;
    summary.N = -1;
    summary.form = "bernoulli_laplace";
    summary.method = "sup";
    summary.gap = std::numeric_limits<double>::infinity();
    bool any_ok = false;
    for (long long N = 1; N < L; ++N) {
      GapCell c;
      c.q = 1.0;
      c.L = L;
      c.H = 1;
      c.N = N;
      c.form = "bernoulli_laplace";
      const auto t0 = std::chrono::steady_clock::now();
      try {
        ReversibleOperator op = bernoulli_laplace(L, N);
        c.dim = static_cast<std::uint64_t>(op.dim);
        SpectrumReport rep = dense_gap(op);
        c.gap = rep.gap;
        c.gamma = 1.0 / rep.gap;
        c.method = rep.method;
        c.residual = rep.residual;
        c.iterations = rep.iterations;
      } catch (const std::exception& e) {
        c.error = e.what();
      }
      c.seconds = seconds_since(t0);
      summary.seconds += c.seconds;
      if (c.error.empty()) {
        any_ok = true;
        summary.gamma = std::max(summary.gamma, c.gamma);
        summary.gap = std::min(summary.gap, c.gap);
      } else {
        summary.error = "partial";
      }
      if (on_cell) on_cell(c);
      out.push_back(std::move(c));
    }
    if (!any_ok) {
      summary.gap = 0.0;
      summary.error = "no feasible sector";
    }
    if (on_cell) on_cell(summary);
    out.push_back(std::move(summary));
  }
  return out;
}

KSpectrumReport k_spectrum_report(const EnsembleParams& params) {
  ReversibleOperator op = operator_K(params);
  const std::int64_t n = op.dim;
  if (n < 2) throw degenerate_sector("stick occupation kernel has one state");

  KSpectrumReport rep;
  std::vector<double> ones(n, 1.0), out(n);
  op.apply(ones.data(), out.data());
  for (double v : out) rep.eig_top_residual = std::max(rep.eig_top_residual, std::abs(v));

  // Centered stick count in L^2(nu_0).
  const PartitionTable table = build_partition_table(params);
  const StickKernel kern = stick_occupation_kernel(params, table);
  std::vector<double> f(n);
  double mean = 0.0;
  for (std::int64_t i = 0; i < n; ++i) mean += op.pi[i] * (kern.n_lo + i);
  for (std::int64_t i = 0; i < n; ++i) f[i] = (kern.n_lo + i) - mean;

  op.apply(f.data(), out.data());  // (K - I) f
  double num = 0.0, den = 0.0, res2 = 0.0;
  const double lam = -1.0 / (params.L - 1);
  for (std::int64_t i = 0; i < n; ++i) {
    const double kf = out[i] + f[i];
    num += op.pi[i] * f[i] * kf;
    den += op.pi[i] * f[i] * f[i];
    res2 += op.pi[i] * (kf - lam * f[i]) * (kf - lam * f[i]);
  }
  rep.eig_nbar = num / den;
  rep.eig_nbar_residual = std::sqrt(res2 / den);

  Eigen::MatrixXd Ks =
      symmetrize(op) + Eigen::MatrixXd::Identity(n, n);  // sym of K itself
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ks);
  if (es.info() != Eigen::Success)
    throw no_convergence("dense eigensolver failed");
  Eigen::VectorXd u1(n), u2(n);
  for (std::int64_t i = 0; i < n; ++i) {
    u1(i) = std::sqrt(op.pi[i]);
    u2(i) = std::sqrt(op.pi[i]) * f[i];
  }
  u1 /= u1.norm();
  u2 /= u2.norm();
  std::int64_t i1 = 0, i2 = -1;
  double best = -1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = std::abs(es.eigenvectors().col(i).dot(u1));
    if (a > best) {
      best = a;
      i1 = i;
    }
  }
  best = -1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i == i1) continue;
    const double a = std::abs(es.eigenvectors().col(i).dot(u2));
    if (a > best) {
      best = a;
      i2 = i;
    }
  }
  double lam2 = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < n; ++i) {
    if (i == i1) continue;
    lam2 = std::max(lam2, es.eigenvalues()(i));
    if (i == i2) continue;
    rep.third_modulus = std::max(rep.third_modulus, std::abs(es.eigenvalues()(i)));
  }
  rep.gap_id_minus_k = 1.0 - lam2;
  return rep;
}

double w_of(double q, int L, int H) {
  double w = 0.0;
  bool any = false;
  for (long long N = 1; N < static_cast<long long>(L) * H; ++N) {
    EnsembleParams ep{q, L, H, N};
    KSpectrumReport rep;
    try {
      rep = k_spectrum_report(ep);
    } catch (const degenerate_sector&) {
      continue;
    }
    if (!(rep.gap_id_minus_k > 0.0))
      return std::numeric_limits<double>::infinity();
    w = std::max(w, 1.0 / rep.gap_id_minus_k);
    any = true;
  }
  if (!any) throw degenerate_sector("no nondegenerate sector for w");
  return w;
}

double gamma_of(double q, int L, int H, bool use_modified,
                const GammaScanOptions& opts) {
  double g = 0.0;
  bool any = false;
  const long long half = static_cast<long long>(L) * H / 2;
  for (long long N = 1; N <= half; ++N) {
    EnsembleParams ep{q, L, H, N};
    GapCell c = scan_cell(ep, use_modified, opts);
    // A non-ergodic cell has an infinite gamma; that is a value, not an
    // error, for the modified form at small L.
    if (!c.error.empty() && c.error != "NonErgodic")
      throw no_convergence("gamma cell failed: " + c.error);
    g = std::max(g, c.gamma);
    any = true;
  }
  if (!any) throw degenerate_sector("no feasible sector for gamma");
  return g;
}

namespace {

// Conditional expectation of f given the configuration of stick k.
struct StickCondition {
  std::vector<std::vector<std::int64_t>> groups;
};

std::vector<StickCondition> stick_conditions(
    const std::vector<LatticeConfig>& configs, int L, int H) {
  std::vector<StickCondition> conds(L);
  for (int k = 0; k < L; ++k) {
    std::uint64_t mask = 0;
    for (int h = 0; h < H; ++h) mask |= std::uint64_t{1} << (h * L + k);
    std::unordered_map<std::uint64_t, std::int64_t> index;
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(configs.size()); ++a) {
      const std::uint64_t key = configs[a].bits & mask;
      auto [it, fresh] = index.try_emplace(key, conds[k].groups.size());
      if (fresh) conds[k].groups.emplace_back();
      conds[k].groups[it->second].push_back(a);
    }
  }
  return conds;
}

}  // namespace

std::vector<CheckResult> recursion_check(const EnsembleParams& params,
                                         int n_random_f, std::uint64_t seed,
                                         bool include_gamma) {
  params.validate();
  if (params.degenerate()) throw degenerate_sector("empty or full sector");
  const int L = params.L, H = params.H;
  const std::string inst = "L=" + std::to_string(L) + ",H=" + std::to_string(H) +
                           ",q=" + std::to_string(params.q) +
                           ",N=" + std::to_string(params.N);

  const auto configs = enumerate_lattice_configs(params);
  const std::int64_t n = static_cast<std::int64_t>(configs.size());
  const PartitionTable table = build_partition_table(params);
  std::vector<double> pi(n);
  for (std::int64_t a = 0; a < n; ++a) pi[a] = nu_weight(configs[a], params, table);
  const auto conds = stick_conditions(configs, L, H);
  const ReversibleOperator P = operator_P(params);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> f(n), pf(n);

  double dev_a = 0.0, dev_b = 0.0;
  for (int t = 0; t < n_random_f; ++t) {
    double mean = 0.0;
    for (std::int64_t a = 0; a < n; ++a) {
      f[a] = gauss(rng);
      mean += pi[a] * f[a];
    }
    double var = 0.0;
    for (std::int64_t a = 0; a < n; ++a) {
      f[a] -= mean;
      var += pi[a] * f[a] * f[a];
    }
    const double scale = 1.0 / std::sqrt(var);
    for (std::int64_t a = 0; a < n; ++a) f[a] *= scale;
    var = 1.0;

    double sum_evar = 0.0, sum_vare = 0.0;
    for (int k = 0; k < L; ++k) {
      for (const auto& grp : conds[k].groups) {
        double w = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::int64_t a : grp) {
          w += pi[a];
          m1 += pi[a] * f[a];
          m2 += pi[a] * f[a] * f[a];
        }
        const double ce = m1 / w;
        sum_evar += m2 - w * ce * ce;  // weighted conditional variance
        sum_vare += w * ce * ce;       // f is mean zero
      }
    }
    dev_a = std::max(dev_a, std::abs(var - (sum_evar + sum_vare) / L));

    P.apply(f.data(), pf.data());  // (P - I) f
    double fpf = 0.0;
    for (std::int64_t a = 0; a < n; ++a) fpf += pi[a] * f[a] * (pf[a] + f[a]);
    dev_b = std::max(dev_b, std::abs(sum_vare / L - fpf));
  }

  std::vector<CheckResult> out;
  out.push_back({"variance_decomposition", inst, dev_a, 1e-12, dev_a <= 1e-12});
  out.push_back({"p_identity", inst, dev_b, 1e-12, dev_b <= 1e-12});

  // Class A: f = sum_k a_k (n_k - nu(n_k)) satisfies (I - P) f = (L-2)/(L-1) f.
  {
    std::vector<double> a_coef(L);
    for (int k = 0; k < L; ++k) a_coef[k] = gauss(rng);
    std::vector<double> nk(n, 0.0);
    for (std::int64_t a = 0; a < n; ++a) {
      double v = 0.0;
      for (int k = 0; k < L; ++k) {
        int cnt = 0;
        for (int h = 0; h < H; ++h) cnt += configs[a].occupied(h * L + k);
        v += a_coef[k] * cnt;
      }
      nk[a] = v;
    }
    double mean = 0.0;
    for (std::int64_t a = 0; a < n; ++a) mean += pi[a] * nk[a];
    double fmax = 0.0;
    for (std::int64_t a = 0; a < n; ++a) {
      nk[a] -= mean;
      fmax = std::max(fmax, std::abs(nk[a]));
    }
    P.apply(nk.data(), pf.data());  // (P - I) f = -(I - P) f
    const double c = static_cast<double>(L - 2) / (L - 1);
    double dev = 0.0;
    for (std::int64_t a = 0; a < n; ++a)
      dev = std::max(dev, std::abs(-pf[a] - c * nk[a]));
    if (fmax > 0.0) dev /= fmax;
    out.push_back({"class_A", inst, dev, 1e-10, dev <= 1e-10});
  }

  // One-step recursion gamma~(L,H) <= max(1, w(L,H)) gamma~(L-1,H).
  if (include_gamma && L >= 3) {
    GammaScanOptions gopts;
    gopts.q = params.q;
    const double gm_L = gamma_of(params.q, L, H, true, gopts);
    const double gm_Lm1 = gamma_of(params.q, L - 1, H, true, gopts);
    const double w = w_of(params.q, L, H);
    const double bound = std::max(1.0, w) * gm_Lm1;
    const double dev = gm_L - bound;
    out.push_back({"gamma_recursion", inst, dev, 1e-9, dev <= 1e-9});
  }
  return out;
}

}  // namespace asepgap
