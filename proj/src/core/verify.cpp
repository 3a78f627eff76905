// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "operators.hpp"
#include "xxz.hpp"

namespace asepgap {

double multiset_inclusion(std::vector<double> sub, std::vector<double> super) {
  if (sub.size() > super.size())
    return std::numeric_limits<double>::infinity();
  std::sort(sub.begin(), sub.end());
  std::sort(super.begin(), super.end());
  double dev = 0.0;
  std::size_t j = 0;
  const std::size_t slack = super.size() - sub.size();
  for (std::size_t i = 0; i < sub.size(); ++i) {
    // Never consume more than `slack` extra entries overall.
    const std::size_t j_max = i + slack;
    while (j < j_max &&
           std::abs(super[j + 1] - sub[i]) <= std::abs(super[j] - sub[i]))
      ++j;
    dev = std::max(dev, std::abs(super[j] - sub[i]));
    ++j;
  }
  return dev;
}

double multiset_distance(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev;
}

namespace {

const double kQs[] = {0.3, 0.5, 0.8};

std::string inst_str(double q, int L, int H, long long N) {
  std::ostringstream os;
  os << "q=" << q << ",L=" << L << ",H=" << H << ",N=" << N;
  return os.str();
}

std::vector<double> spectrum_of(const ReversibleOperator& op, double scale = 1.0) {
  Eigen::MatrixXd A = scale * symmetrize(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw no_convergence("dense eigensolver failed");
  return {es.eigenvalues().data(), es.eigenvalues().data() + op.dim};
}

std::vector<double> spectrum_of(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw no_convergence("dense eigensolver failed");
  return {es.eigenvalues().data(), es.eigenvalues().data() + A.rows()};
}

struct Suite {
  const VerifyOptions& opts;
  VerifySummary out;

  bool wants(const std::string& name) const {
    return opts.filter.empty() || name.find(opts.filter) != std::string::npos;
  }

  void record(const std::string& name, const std::string& instance, double dev,
              double tol) {
    CheckResult r{name, instance, dev, tol, dev <= tol};
    if (!r.pass) out.all_pass = false;
    if (opts.on_result) opts.on_result(r);
    out.results.push_back(std::move(r));
  }

  void guarded(const std::string& name, const std::string& instance,
               double tol, const std::function<double()>& body) {
    if (!wants(name)) return;
    try {
      record(name, instance, body(), tol);
    } catch (const std::exception& e) {
      CheckResult r{name, instance + " [" + e.what() + "]",
                    std::numeric_limits<double>::infinity(), tol, false};
      out.all_pass = false;
      if (opts.on_result) opts.on_result(r);
      out.results.push_back(std::move(r));
    }
  }
};

void measures_checks(Suite& s) {
  for (double q : kQs)
    for (int L = 1; L <= 4; ++L)
      for (int H = 1; H <= 3; ++H)
        for (long long N = 1; N < static_cast<long long>(L) * H; ++N) {
          EnsembleParams ep{q, L, H, N};
          const std::string inst = inst_str(q, L, H, N);
          s.guarded("measures/normalization", inst, 1e-12, [&] {
            const PartitionTable tab = build_partition_table(ep);
            double sn = 0.0;
            for (const auto& a : enumerate_lattice_configs(ep))
              sn += nu_weight(a, ep, tab);
            double sh = 0.0;
            for (const auto& w : enumerate_profiles(ep))
              sh += hat_nu_weight(w, ep, tab);
            return std::max(std::abs(sn - 1.0), std::abs(sh - 1.0));
          });
          s.guarded("measures/lumping_weights", inst, 1e-12, [&] {
            const PartitionTable tab = build_partition_table(ep);
            CompositionSpace cs(H, L, N);
            std::vector<double> acc(cs.dim(), 0.0);
            for (const auto& a : enumerate_lattice_configs(ep)) {
              const ProfileConfig w = profile_of(a, L, H);
              acc[cs.rank(w.heights)] += nu_weight(a, ep, tab);
            }
            double dev = 0.0;
            for (std::uint64_t r = 0; r < cs.dim(); ++r) {
              const ProfileConfig w{cs.unrank(r)};
              dev = std::max(dev,
                             std::abs(acc[r] - hat_nu_weight(w, ep, tab)));
            }
            return dev;
          });
        }
}

void operator_checks(Suite& s) {
  bool corrupted_once = false;
  for (double q : kQs)
    for (int L = 1; L <= 4; ++L)
      for (int H = 1; H <= 3; ++H)
        for (long long N = 1; N < static_cast<long long>(L) * H; ++N) {
          EnsembleParams ep{q, L, H, N};
          const std::string inst = inst_str(q, L, H, N);
          s.guarded("operators/detailed_balance", inst, 1e-12, [&] {
            ReversibleOperator op = full_generator(ep);
            if (s.opts.corrupt_hook && !corrupted_once && !op.rate.empty()) {
              corrupted_once = true;
              op.rate[0] *= 1.5;
            }
            double dev = op.detailed_balance_residual();
            dev = std::max(dev, op.row_sum_residual());
            if (H >= 2) {
              ReversibleOperator hat = profile_generator(ep);
              dev = std::max(dev, hat.detailed_balance_residual());
              dev = std::max(dev, hat.row_sum_residual());
            }
            return dev;
          });
        }
}

void k_spectrum_checks(Suite& s) {
  for (double q : kQs)
    for (int L = 2; L <= 4; ++L)
      for (int H = 1; H <= 3; ++H)
        for (long long N = 1; N < static_cast<long long>(L) * H; ++N) {
          EnsembleParams ep{q, L, H, N};
          const PartitionTable tab = build_partition_table(ep);
          const StickKernel kern = stick_occupation_kernel(ep, tab);
          if (kern.size() < 2) continue;  // forced stick count
          const std::string inst = inst_str(q, L, H, N);
          s.guarded("k-spectrum/top", inst, 1e-10, [&] {
            return k_spectrum_report(ep).eig_top_residual;
          });
          s.guarded("k-spectrum/nbar", inst, 1e-10, [&] {
            const KSpectrumReport rep = k_spectrum_report(ep);
            const double target = -1.0 / (L - 1);
            return std::max(std::abs(rep.eig_nbar - target),
                            rep.eig_nbar_residual);
          });
        }
  s.guarded("k-spectrum/small_exact", "q=0.5,L=3,H=1,N=1", 1e-12, [&] {
    EnsembleParams ep{0.5, 3, 1, 1};
    const KSpectrumReport rep = k_spectrum_report(ep);
    ReversibleOperator op = operator_K(ep);
    const double dev = multiset_distance(spectrum_of(op), {-1.5, 0.0});
    return std::max({dev, rep.third_modulus, std::abs(rep.eig_nbar + 0.5)});
  });
}

void recursion_checks(Suite& s) {
  const bool any = s.wants("recursion/variance_decomposition") ||
                   s.wants("recursion/p_identity") ||
                   s.wants("recursion/class_A");
  if (any) {
    for (double q : kQs)
      for (int L = 2; L <= 4; ++L)
        for (int H = 1; H <= 3; ++H)
          for (long long N = 1; N < static_cast<long long>(L) * H; ++N) {
            EnsembleParams ep{q, L, H, N};
            std::vector<CheckResult> rs;
            try {
              rs = recursion_check(ep, 100, 2026, false);
            } catch (const std::exception& e) {
              s.record("recursion/variance_decomposition",
                       inst_str(q, L, H, N) + " [" + e.what() + "]",
                       std::numeric_limits<double>::infinity(), 1e-12);
              continue;
            }
            for (const auto& r : rs) {
              const std::string name = "recursion/" + r.name;
              if (!s.wants(name)) continue;
              s.record(name, r.instance, r.deviation, r.tolerance);
            }
          }
  }
  for (int L : {4, 5}) {
    s.guarded("recursion/gamma_recursion", inst_str(0.5, L, 2, -1), 1e-9, [&] {
      GammaScanOptions gopts;
      const double gm_L = gamma_of(0.5, L, 2, true, gopts);
      const double gm_Lm1 = gamma_of(0.5, L - 1, 2, true, gopts);
      const double w = w_of(0.5, L, 2);
      return gm_L - std::max(1.0, w) * gm_Lm1;
    });
  }
}

void lumping_checks(Suite& s) {
  for (double q : kQs)
    for (int L = 2; L <= 4; ++L)
      for (int H = 2; H <= 3; ++H)
        for (long long N = 1; N < static_cast<long long>(L) * H; ++N) {
          EnsembleParams ep{q, L, H, N};
          s.guarded("lumping/spectrum_inclusion", inst_str(q, L, H, N), 1e-10,
                    [&] {
                      return multiset_inclusion(
                          spectrum_of(profile_generator(ep)),
                          spectrum_of(full_generator(ep)));
                    });
        }
}

void xxz_checks(Suite& s) {
  const std::pair<int, int> cases[] = {{1, 2}, {1, 3}, {2, 2}, {3, 2}};
  for (double Delta : {1.25, 2.0, 5.0})
    for (auto [twiceS, H] : cases) {
      const int tot = twiceS * H;
      for (int twice_n = -tot; twice_n <= tot; twice_n += 2) {
        XXZParams xxz{twiceS, H, Delta, twice_n};
        const long long N = xxz.sector_particles();
        const bool degenerate = N == 0 || N == tot;
        std::ostringstream os;
        os << "Delta=" << Delta << ",2S=" << twiceS << ",H=" << H
           << ",2n=" << twice_n;
        const std::string inst = os.str();

        s.guarded("xxz/ground_state", inst, 1e-10, [&] {
          const Eigen::MatrixXd A = xxz_chain_hamiltonian(xxz);
          const Eigen::VectorXd psi = xxz_ground_state(xxz);
          return (A * psi).cwiseAbs().maxCoeff();
        });
        if (degenerate) continue;
        s.guarded("xxz/equivalence", inst, 1e-10, [&] {
          const ConjugationResult conj = conjugate_to_profile(xxz);
          const Eigen::MatrixXd A = xxz_chain_hamiltonian(xxz);
          EnsembleParams ep{xxz.q(), twiceS, H, N};
          const double scale = xxz.S() / Delta;
          const double dev = multiset_distance(
              spectrum_of(A), spectrum_of(profile_generator(ep), -scale));
          return std::max(dev, conj.max_deviation);
        });
      }
    }
}

void diagonal_checks(Suite& s) {
  const std::pair<int, int> cases[] = {{1, 2}, {1, 3}, {2, 2}};
  for (double Delta : {1.25, 2.0})
    for (auto [R, H] : cases) {
      const DiagonalRegion region = diagonal_region(R, H);
      const int twiceS = 1;
      const int tot = twiceS * static_cast<int>(region.sites.size());
      for (int twice_n = -tot; twice_n <= tot; twice_n += 2) {
        const long long N = (static_cast<long long>(tot) + twice_n) / 2;
        std::ostringstream os;
        os << "Delta=" << Delta << ",R=" << R << ",H=" << H
           << ",2n=" << twice_n;
        const std::string inst = os.str();

        s.guarded("diagonal/ground_state", inst, 1e-10, [&] {
          const Eigen::MatrixXd A =
              diagonal_hamiltonian(region, twiceS, Delta, twice_n);
          const Eigen::VectorXd psi =
              diagonal_ground_state(region, twiceS, Delta, twice_n);
          return (A * psi).cwiseAbs().maxCoeff();
        });
        if (N == 0 || N == tot) continue;
        s.guarded("diagonal/equivalence", inst, 1e-10, [&] {
          const Eigen::MatrixXd A =
              diagonal_hamiltonian(region, twiceS, Delta, twice_n);
          const ReversibleOperator ghat =
              diagonal_profile_generator(region, twiceS, Delta, N);
          // H = -(1/(2 Delta)) U Ghat U^{-1}, entrywise.
          const double c = 1.0 / (2.0 * Delta);
          double dev = 0.0;
          for (std::int64_t a = 0; a < ghat.dim; ++a) {
            dev = std::max(dev, std::abs(A(a, a) + c * ghat.diag[a]));
            for (std::int64_t k = ghat.row_ptr[a]; k < ghat.row_ptr[a + 1]; ++k) {
              const std::int64_t b = ghat.col[k];
              const double entry =
                  ghat.rate[k] * std::sqrt(ghat.pi[a] / ghat.pi[b]);
              dev = std::max(dev, std::abs(A(a, b) + c * entry));
            }
          }
          dev = std::max(dev, multiset_distance(spectrum_of(A),
                                                spectrum_of(ghat, -c)));
          return dev;
        });
        s.guarded("diagonal/lift_lumping", inst, 1e-10, [&] {
          const ReversibleOperator ghat =
              diagonal_profile_generator(region, twiceS, Delta, N);
          const ReversibleOperator g =
              lifted_diagonal_generator(region, twiceS, Delta, N);
          return multiset_inclusion(spectrum_of(ghat, 1.0 / twiceS),
                                    spectrum_of(g));
        });
      }
    }
}

void spectral_checks(Suite& s) {
  const EnsembleParams sectors[] = {
      {0.5, 2, 3, 3}, {0.5, 3, 2, 3}, {0.3, 2, 4, 4}, {0.8, 4, 2, 4}};
  for (const EnsembleParams& ep : sectors) {
    const std::string inst = inst_str(ep.q, ep.L, ep.H, ep.N);
    s.guarded("spectral/dense_iterative_agree", inst, 1e-7, [&] {
      ReversibleOperator op = full_generator(ep);
      const SpectrumReport d = dense_gap(op);
      LanczosOptions lo;
      lo.tol = 1e-10;
      const SpectrumReport it = iterative_gap(op, lo);
      return std::abs(d.gap - it.gap) / d.gap;
    });
  }
  for (double q : kQs) {
    s.guarded("closed_form/two_state_gap", inst_str(q, 1, 2, 1), 1e-12, [&] {
      EnsembleParams ep{q, 1, 2, 1};
      const SpectrumReport rep = dense_gap(full_generator(ep));
      return std::abs(rep.gap - (q + 1.0 / q));
    });
  }
  for (double Delta : {1.25, 2.0, 5.0}) {
    std::ostringstream os;
    os << "Delta=" << Delta << ",2S=1,H=2,2n=0";
    s.guarded("closed_form/xxz_h2_gap", os.str(), 1e-10, [&] {
      XXZParams xxz{1, 2, Delta, 0};
      const std::vector<double> ev = spectrum_of(xxz_chain_hamiltonian(xxz));
      double gap = std::numeric_limits<double>::infinity();
      for (double e : ev)
        if (e > kZeroEigTol) gap = std::min(gap, e);
      return std::abs(gap - 1.0);
    });
  }
  for (int L : {3, 4, 5}) {
    s.guarded("bernoulli_laplace/gamma", "L=" + std::to_string(L), 1e-10, [&] {
      double dev = 0.0;
      for (long long N = 1; N < L; ++N) {
        const SpectrumReport rep = dense_gap(bernoulli_laplace(L, N));
        dev = std::max(dev, std::abs(1.0 / rep.gap - 0.5));
      }
      return dev;
    });
  }
}

}  // namespace

VerifySummary run_verify(const VerifyOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Suite s{opts, {}};
  measures_checks(s);
  operator_checks(s);
  k_spectrum_checks(s);
  recursion_checks(s);
  lumping_checks(s);
  xxz_checks(s);
  diagonal_checks(s);
  spectral_checks(s);
  s.out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return s.out;
}

}  // namespace asepgap
