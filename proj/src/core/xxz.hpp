// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Spin-S XXZ chains with kink boundary conditions, their kink ground
// states, the unitary conjugation onto the lumped profile generator, and
// the diagonal-interface variant on the tilted strip.

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "reversible.hpp"
#include "state_space.hpp"

namespace asepgap {

struct XXZParams {
  int twiceS = 1;     // 2S, integer >= 1
  int H = 2;          // chain length
  double Delta = 2.0; // anisotropy > 1
  int twice_n = 0;    // 2n, eigenvalue of 2*S^3_tot

  double S() const { return 0.5 * twiceS; }
  double q() const { return Delta - std::sqrt(Delta * Delta - 1.0); }
  // Total particles of the equivalent exclusion sector, N = SH + n.
  long long sector_particles() const { return (static_cast<long long>(twiceS) * H + twice_n) / 2; }
  void validate() const;
};

// Sector basis: compositions omega = m + S, entries in [0, 2S], summing to
// SH + n (indexing shared with CompositionSpace).
CompositionSpace xxz_sector_basis(const XXZParams& xxz);

// Real symmetric PSD matrix of the chain Hamiltonian on the sector.
Eigen::MatrixXd xxz_chain_hamiltonian(const XXZParams& xxz,
                                      std::uint64_t cap = kDefaultEnumerationCap);

// Normalized kink ground state, componentwise square equals hat-nu.
Eigen::VectorXd xxz_ground_state(const XXZParams& xxz,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// U_n H U_n^{-1} = -(S/Delta) L_profile. Returns the generator recovered
// from the conjugated Hamiltonian plus the max entrywise deviation from the
// directly built profile generator.
struct ConjugationResult {
  ReversibleOperator op;
  double max_deviation = 0.0;
};
ConjugationResult conjugate_to_profile(const XXZParams& xxz,
                                       std::uint64_t cap = kDefaultEnumerationCap);

struct DiagonalRegion {
  struct Site {
    int x1 = 0, x2 = 0;
    int level() const { return x1 + x2; }
    int tilt() const { return x1 - x2; }
  };
  int R = 0;
  int H = 0;
  std::vector<Site> sites;
  std::vector<std::pair<int, int>> bonds;  // site indices, level raises by 1
};

DiagonalRegion diagonal_region(int R, int H);

Eigen::MatrixXd diagonal_hamiltonian(const DiagonalRegion& region, int twiceS,
                                     double Delta, int twice_n,
                                     std::uint64_t cap = kDefaultEnumerationCap);

Eigen::VectorXd diagonal_ground_state(const DiagonalRegion& region, int twiceS,
                                      double Delta, int twice_n,
                                      std::uint64_t cap = kDefaultEnumerationCap);

// hat-G_{R,S} on occupation profiles over the region (no 1/L prefactor).
ReversibleOperator diagonal_profile_generator(const DiagonalRegion& region,
                                              int twiceS, double Delta, long long N,
                                              std::uint64_t cap = kDefaultEnumerationCap);

// G_{R,S} on {0,1}^{Gamma^(S)} with the 1/(2S) prefactor.
ReversibleOperator lifted_diagonal_generator(const DiagonalRegion& region,
                                             int twiceS, double Delta, long long N,
                                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace asepgap
