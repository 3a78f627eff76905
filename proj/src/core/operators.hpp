// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Builders for the stochastic operators of the exclusion model: the full
// lattice generator, the lumped profile generator, the single-stick kernel
// K, the stick-averaging operator P and the Bernoulli-Laplace exchange
// process. Kernel-form operators are stored as (kernel - identity).

#pragma once

#include "reversible.hpp"
#include "state_space.hpp"

namespace asepgap {

// Exclusion generator on the canonical sector. With exclude_same_stick the
// within-stick terms D_ii are dropped, i.e. the generator of the modified
// Dirichlet form.
ReversibleOperator full_generator(const EnsembleParams& params,
                                  std::uint64_t cap = kDefaultEnumerationCap,
                                  bool exclude_same_stick = false);

ReversibleOperator profile_generator(const EnsembleParams& params,
                                     std::uint64_t cap = kDefaultEnumerationCap);

// Random walk on stick occupation numbers, stored as K - identity in
// L^2(nu_0). States are n in [n_lo, n_hi].
ReversibleOperator operator_K(const EnsembleParams& params);

// P f = (1/L) sum_k nu(f | F_k), stored as P - identity in L^2(nu).
ReversibleOperator operator_P(const EnsembleParams& params,
                              std::uint64_t cap = kDefaultEnumerationCap);

// Symmetric exclusion on the complete graph, uniform stationary measure,
// pair rate normalized so the Dirichlet form equals the modified form with
// E_ij in place of D_ij.
ReversibleOperator bernoulli_laplace(int L, long long N);

double dirichlet_form(const ReversibleOperator& op, const std::vector<double>& f);

// (1/L) sum_i sum_{j != i} D_ij(f); requires enumerable sector.
double modified_dirichlet_form(const EnsembleParams& params,
                               const std::vector<double>& f,
                               std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace asepgap
