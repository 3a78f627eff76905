// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "asepgap/asepgap.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "core/operators.hpp"
#include "core/simulate.hpp"
#include "core/spectral.hpp"
#include "core/state_space.hpp"
#include "core/verify.hpp"
#include "core/xxz.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
asepgap_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ASEPGAP_OK;
  } catch (const asepgap::invalid_params& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_INVALID;
  } catch (const asepgap::dimension_mismatch& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_INVALID;
  } catch (const asepgap::out_of_range_error& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_INVALID;
  } catch (const asepgap::cap_exceeded& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_CAP;
  } catch (const asepgap::degenerate_sector& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_DEGENERATE;
  } catch (const asepgap::no_convergence& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_NO_CONVERGENCE;
  } catch (const asepgap::insufficient_data& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_DATA;
  } catch (const asepgap::non_decaying_correlation& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_DATA;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ASEPGAP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ASEPGAP_ERR_INTERNAL;
  }
}

void emit_cell(const asepgap::GapCell& c, asepgap_gap_row_cb cb, void* user) {
  if (!cb) return;
  asepgap_gap_row row;
  row.q = c.q;
  row.L = c.L;
  row.H = c.H;
  row.N = c.N;
  row.dim = c.dim;
  row.form = c.form.c_str();
  row.gap = c.gap;
  row.gamma = c.gamma;
  row.method = c.method.c_str();
  row.residual = c.residual;
  row.iterations = c.iterations;
  row.seconds = c.seconds;
  row.error = c.error.c_str();
  cb(&row, user);
}

}  // namespace

extern "C" {

const char* asepgap_version(void) { return "0.1.0"; }

const char* asepgap_last_error(void) { return g_last_error.c_str(); }

asepgap_status asepgap_gap_scan(double q, const int* Ls, int nL, const int* Hs,
                                int nH, int use_modified,
                                unsigned long long dense_cap,
                                unsigned long long iter_cap, double tol,
                                int keep_going, asepgap_gap_row_cb cb,
                                void* user) {
  return wrap([&] {
    if (!Ls || !Hs || nL <= 0 || nH <= 0)
      throw asepgap::invalid_params("empty L or H range");
    asepgap::GammaScanOptions opts;
    opts.q = q;
    opts.Ls.assign(Ls, Ls + nL);
    opts.Hs.assign(Hs, Hs + nH);
    opts.use_modified = use_modified != 0;
    if (dense_cap > 0) opts.dense_cap = dense_cap;
    if (iter_cap > 0) opts.iter_cap = iter_cap;
    if (tol > 0) opts.tol = tol;
    opts.keep_going = keep_going != 0;
    asepgap::gamma_scan(
        opts, [&](const asepgap::GapCell& c) { emit_cell(c, cb, user); });
  });
}

asepgap_status asepgap_bernoulli_laplace_scan(const int* Ls, int nL,
                                              asepgap_gap_row_cb cb,
                                              void* user) {
  return wrap([&] {
    if (!Ls || nL <= 0) throw asepgap::invalid_params("empty L range");
    asepgap::bernoulli_laplace_scan(
        std::vector<int>(Ls, Ls + nL),
        [&](const asepgap::GapCell& c) { emit_cell(c, cb, user); });
  });
}

asepgap_status asepgap_xxz_scan(double Delta, const int* twiceS_list, int nS,
                                const int* Hs, int nH, int R,
                                asepgap_xxz_row_cb cb, void* user) {
  return wrap([&] {
    if (!twiceS_list || !Hs || nS <= 0 || nH <= 0)
      throw asepgap::invalid_params("empty parameter range");
    if (!(Delta > 1.0))
      throw asepgap::invalid_params("Delta must exceed 1");
    for (int si = 0; si < nS; ++si) {
      const int twiceS = twiceS_list[si];
      const double S = 0.5 * twiceS;
      for (int hi = 0; hi < nH; ++hi) {
        const int H = Hs[hi];
        asepgap::DiagonalRegion region;
        int n_levels = H;
        if (R > 0) {
          region = asepgap::diagonal_region(R, H);
          n_levels = static_cast<int>(region.sites.size());
        }
        const int tot = twiceS * n_levels;
        for (int twice_n = -tot + 2; twice_n <= tot - 2; twice_n += 2) {
          asepgap_xxz_row row;
          row.Delta = Delta;
          row.twiceS = twiceS;
          row.H = H;
          row.R = R > 0 ? R : -1;
          row.sector_2n = twice_n;
          row.gap_times_R2_over_S =
              std::numeric_limits<double>::quiet_NaN();
          row.error = "";
          std::string err;
          try {
            const long long N = (static_cast<long long>(tot) + twice_n) / 2;
            Eigen::MatrixXd A;
            double residual = 0.0;
            if (R > 0) {
              row.q = asepgap::XXZParams{twiceS, H, Delta, 0}.q();
              A = asepgap::diagonal_hamiltonian(region, twiceS, Delta,
                                                twice_n);
              const asepgap::ReversibleOperator ghat =
                  asepgap::diagonal_profile_generator(region, twiceS, Delta,
                                                      N);
              const double c = 1.0 / (2.0 * Delta);
              for (std::int64_t a = 0; a < ghat.dim; ++a) {
                residual =
                    std::max(residual, std::abs(A(a, a) + c * ghat.diag[a]));
                for (std::int64_t k = ghat.row_ptr[a];
                     k < ghat.row_ptr[a + 1]; ++k) {
                  const std::int64_t b = ghat.col[k];
                  const double entry =
                      ghat.rate[k] * std::sqrt(ghat.pi[a] / ghat.pi[b]);
                  residual = std::max(residual, std::abs(A(a, b) + c * entry));
                }
              }
            } else {
              asepgap::XXZParams xxz{twiceS, H, Delta, twice_n};
              row.q = xxz.q();
              A = asepgap::xxz_chain_hamiltonian(xxz);
              residual = asepgap::conjugate_to_profile(xxz).max_deviation;
            }
            row.dim = static_cast<unsigned long long>(A.rows());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
            if (es.info() != Eigen::Success)
              throw asepgap::no_convergence("dense eigensolver failed");
            double gap = std::numeric_limits<double>::infinity();
            for (std::int64_t i = 0; i < A.rows(); ++i)
              if (es.eigenvalues()(i) > asepgap::kZeroEigTol) {
                gap = es.eigenvalues()(i);
                break;
              }
            row.gap = gap;
            row.gap_over_S = gap / S;
            if (R > 0) row.gap_times_R2_over_S = gap * R * R / S;
            row.equivalence_residual = residual;
          } catch (const std::exception& e) {
            err = e.what();
            row.dim = 0;
            row.gap = row.gap_over_S = 0.0;
            row.equivalence_residual =
                std::numeric_limits<double>::quiet_NaN();
            row.error = err.c_str();
          }
          if (cb) cb(&row, user);
        }
      }
    }
  });
}

asepgap_status asepgap_verify(const char* filter, int corrupt_hook,
                              asepgap_check_cb cb, void* user, int* all_pass) {
  return wrap([&] {
    asepgap::VerifyOptions opts;
    if (filter) opts.filter = filter;
    opts.corrupt_hook = corrupt_hook != 0;
    if (cb) {
      opts.on_result = [&](const asepgap::CheckResult& r) {
        asepgap_check_row row;
        row.name = r.name.c_str();
        row.instance = r.instance.c_str();
        row.deviation = r.deviation;
        row.tolerance = r.tolerance;
        row.pass = r.pass ? 1 : 0;
        cb(&row, user);
      };
    }
    const asepgap::VerifySummary summary = asepgap::run_verify(opts);
    if (all_pass) *all_pass = summary.all_pass ? 1 : 0;
  });
}

asepgap_status asepgap_simulate(const asepgap_sim_plan* plan,
                                asepgap_sample_cb cb, void* user,
                                asepgap_relaxation* estimate,
                                double* tv_distance) {
  return wrap([&] {
    if (!plan) throw asepgap::invalid_params("null plan");
    asepgap::SimulationPlan p;
    p.params = asepgap::EnsembleParams{plan->q, plan->L, plan->H, plan->N};
    p.profile_mode = plan->profile_mode != 0;
    p.seed = plan->seed;
    p.t_burn = plan->t_burn;
    p.t_run = plan->t_run;
    p.sample_dt = plan->sample_dt;
    p.observable_row = plan->observable_row;
    p.collect_histogram = plan->collect_histogram != 0 || tv_distance;

    const asepgap::SimulationResult res = asepgap::gillespie_run(p);
    if (cb)
      for (std::size_t k = 0; k < res.samples.size(); ++k)
        cb(p.t_burn + static_cast<double>(k) * p.sample_dt, res.samples[k],
           user);

    if (estimate) {
      const asepgap::RelaxationEstimate est =
          asepgap::relaxation_estimate(res.samples, p.sample_dt);
      estimate->rate = est.rate;
      estimate->stderr_rate = est.stderr_rate;
      estimate->n_samples = est.n_samples;
      estimate->lag_lo = est.lag_lo;
      estimate->lag_hi = est.lag_hi;
    }

    if (tv_distance) {
      const asepgap::EnsembleParams& ep = p.params;
      const asepgap::PartitionTable tab = asepgap::build_partition_table(ep);
      std::vector<double> exact;
      if (p.profile_mode) {
        asepgap::CompositionSpace cs(ep.H, ep.L, ep.N);
        exact.resize(cs.dim());
        for (std::uint64_t r = 0; r < cs.dim(); ++r)
          exact[r] = asepgap::hat_nu_weight(
              asepgap::ProfileConfig{cs.unrank(r)}, ep, tab);
      } else {
        const auto configs = asepgap::enumerate_lattice_configs(ep);
        asepgap::SubsetSpace space(ep.sites(), static_cast<int>(ep.N));
        exact.resize(space.dim());
        for (const auto& a : configs)
          exact[space.rank(a.bits)] = asepgap::nu_weight(a, ep, tab);
      }
      if (exact.size() != res.histogram.size())
        throw asepgap::dimension_mismatch("histogram size mismatch");
      double tv = 0.0;
      for (std::size_t i = 0; i < exact.size(); ++i)
        tv += std::abs(exact[i] - res.histogram[i]);
      *tv_distance = 0.5 * tv;
    }
  });
}

struct asepgap_operator {
  asepgap::ReversibleOperator op;
};

asepgap_status asepgap_operator_create(const char* kind, double q, int L,
                                       int H, long long N,
                                       asepgap_operator** out) {
  return wrap([&] {
    if (!kind || !out) throw asepgap::invalid_params("null argument");
    asepgap::EnsembleParams ep{q, L, H, N};
    asepgap::ReversibleOperator op;
    const std::string k = kind;
    if (k == "full")
      op = asepgap::full_generator(ep);
    else if (k == "modified")
      op = asepgap::full_generator(ep, asepgap::kDefaultEnumerationCap, true);
    else if (k == "profile")
      op = asepgap::profile_generator(ep);
    else if (k == "K")
      op = asepgap::operator_K(ep);
    else if (k == "P")
      op = asepgap::operator_P(ep);
    else if (k == "bernoulli_laplace")
      op = asepgap::bernoulli_laplace(L, N);
    else
      throw asepgap::invalid_params("unknown operator kind: " + k);
    *out = new asepgap_operator{std::move(op)};
  });
}

asepgap_status asepgap_operator_dim(const asepgap_operator* op,
                                    long long* dim) {
  return wrap([&] {
    if (!op || !dim) throw asepgap::invalid_params("null argument");
    *dim = op->op.dim;
  });
}

asepgap_status asepgap_operator_gap(const asepgap_operator* op,
                                    unsigned long long dense_cap, double tol,
                                    double* gap, double* residual,
                                    int* iterations) {
  return wrap([&] {
    if (!op || !gap) throw asepgap::invalid_params("null argument");
    const std::uint64_t cap =
        dense_cap > 0 ? dense_cap : asepgap::kDefaultDenseCap;
    asepgap::SpectrumReport rep;
    if (static_cast<std::uint64_t>(op->op.dim) <= cap) {
      rep = asepgap::dense_gap(op->op, cap);
    } else {
      asepgap::LanczosOptions lo;
      if (tol > 0) lo.tol = tol;
      rep = asepgap::iterative_gap(op->op, lo);
    }
    if (rep.degenerate_spectrum)
      throw asepgap::degenerate_sector("zero eigenvalue is not simple");
    *gap = rep.gap;
    if (residual) *residual = rep.residual;
    if (iterations) *iterations = rep.iterations;
  });
}

void asepgap_operator_destroy(asepgap_operator* op) { delete op; }

asepgap_status asepgap_exact_gap(double q, int L, int H, long long N,
                                 unsigned long long dense_cap, double* gap) {
  return wrap([&] {
    if (!gap) throw asepgap::invalid_params("null argument");
    asepgap::EnsembleParams ep{q, L, H, N};
    const std::uint64_t cap =
        dense_cap > 0 ? dense_cap : asepgap::kDefaultDenseCap;
    const asepgap::SpectrumReport rep =
        asepgap::dense_gap(asepgap::full_generator(ep, cap), cap);
    *gap = rep.gap;
  });
}

}  // extern "C"
