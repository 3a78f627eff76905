// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Spectral gaps of reversible operators: dense solves through the
// similarity transform D^{1/2} G D^{-1/2}, a thick-restart Lanczos for
// sectors past the dense cap, the gamma scans, and the identity checks
// around the operators K and P.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reversible.hpp"
#include "state_space.hpp"

namespace asepgap {

// Eigenvalues below this are treated as the kernel of -(generator).
inline constexpr double kZeroEigTol = 1e-9;
inline constexpr std::uint64_t kDefaultDenseCap = 4096;

struct SpectrumReport {
  std::vector<double> eigenvalues;  // of -(generator), ascending (dense only)
  double gap = 0.0;
  int zero_multiplicity = 0;
  std::string method;
  double residual = 0.0;
  int iterations = 0;
  bool degenerate_spectrum = false;  // kernel multiplicity != 1
};

Eigen::MatrixXd dense_generator(const ReversibleOperator& op);

// D^{1/2} G D^{-1/2}, D = diag(pi). Spectrum-preserving and symmetric.
Eigen::MatrixXd symmetrize(const ReversibleOperator& op);

SpectrumReport dense_gap(const ReversibleOperator& op,
                         std::uint64_t dense_cap = kDefaultDenseCap);

// Abstract symmetric PSD operator (the symmetrized -(generator)).
struct SymLinOp {
  std::int64_t dim = 0;
  std::function<void(const double*, double*)> apply;
};

struct LanczosOptions {
  double tol = 1e-8;        // relative residual on the smallest Ritz pair
  int max_iters = 5000;     // total matvec budget
  int basis_size = 0;       // 0 = pick from dimension and memory budget
  std::uint64_t seed = 12345;
  std::optional<std::vector<double>> initial_guess;
};

// Smallest nonzero eigenvalue with the known kernel direction deflated.
// `kernel` is sqrt(pi) up to normalization.
SpectrumReport iterative_gap(const SymLinOp& op, const std::vector<double>& kernel,
                             const LanczosOptions& opts = {});

SpectrumReport iterative_gap(const ReversibleOperator& op,
                             const LanczosOptions& opts = {});

struct GapCell {
  double q = 0.0;
  int L = 0, H = 0;
  long long N = 0;  // -1 marks the per-(L,H) summary row
  std::uint64_t dim = 0;
  std::string form;  // "full" | "modified" | "bernoulli_laplace"
  double gap = 0.0;
  double gamma = 0.0;
  std::string method;
  double residual = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string error;  // empty on success
};

struct GammaScanOptions {
  double q = 0.5;
  std::vector<int> Ls;
  std::vector<int> Hs;
  bool use_modified = false;
  std::uint64_t dense_cap = kDefaultDenseCap;
  std::uint64_t iter_cap = std::uint64_t{1} << 24;
  double tol = 1e-8;
  bool keep_going = true;
};

using GapCellCallback = std::function<void(const GapCell&)>;

std::vector<GapCell> gamma_scan(const GammaScanOptions& opts,
                                const GapCellCallback& on_cell = nullptr);

// gamma-tilde of the Bernoulli-Laplace model, one summary cell per (L, N).
std::vector<GapCell> bernoulli_laplace_scan(const std::vector<int>& Ls,
                                            const GapCellCallback& on_cell = nullptr);

struct KSpectrumReport {
  double eig_top_residual = 0.0;   // constants as eigenvector of eigenvalue 1
  double eig_nbar = 0.0;           // Rayleigh quotient of centered count
  double eig_nbar_residual = 0.0;
  double third_modulus = 0.0;      // largest |eigenvalue| off span{1, nbar}
  double gap_id_minus_k = 0.0;
};

KSpectrumReport k_spectrum_report(const EnsembleParams& params);

// sup_N 1/gap(id - K) over feasible nondegenerate N.
double w_of(double q, int L, int H);

// sup_N 1/gap at fixed (L, H); dense or iterative per sector.
double gamma_of(double q, int L, int H, bool use_modified,
                const GammaScanOptions& opts);

struct CheckResult {
  std::string name;
  std::string instance;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Identity and recursion checks on one sector: variance decomposition,
// the P identity, the class-A eigenrelation, and the one-step gamma-tilde
// recursion (the latter runs over all N at the cell's L, H).
std::vector<CheckResult> recursion_check(const EnsembleParams& params,
                                         int n_random_f = 100,
                                         std::uint64_t seed = 2026,
                                         bool include_gamma = true);

}  // namespace asepgap
