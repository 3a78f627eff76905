// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "core/state_space.hpp"
#include "doctest.h"

using namespace asepgap;

TEST_CASE("params validation") {
  EnsembleParams ok{0.5, 3, 3, 4};
  CHECK_NOTHROW(ok.validate());
  CHECK_THROWS_AS((EnsembleParams{1.2, 3, 3, 4}.validate()), invalid_params);
  CHECK_THROWS_AS((EnsembleParams{0.5, 0, 3, 1}.validate()), invalid_params);
  CHECK_THROWS_AS((EnsembleParams{0.5, 3, 3, 10}.validate()), invalid_params);
  CHECK_THROWS_AS((EnsembleParams{0.5, 3, 3, -1}.validate()), invalid_params);
}

TEST_CASE("subset space rank round trip") {
  SubsetSpace space(9, 4);
  CHECK(space.dim() == 126);  // 9 choose 4
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    const std::uint64_t bits = space.unrank(r);
    CHECK(std::popcount(bits) == 4);
    CHECK(bits < (1u << 9));
    CHECK(space.rank(bits) == r);
    seen.insert(bits);
  }
  CHECK(seen.size() == 126);
}

TEST_CASE("composition space rank round trip") {
  CompositionSpace space(3, 2, 3);
  // Brute-force count of vectors in [0,2]^3 summing to 3.
  int expected = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        if (a + b + c == 3) ++expected;
  CHECK(space.dim() == static_cast<std::uint64_t>(expected));
  for (std::uint64_t r = 0; r < space.dim(); ++r) {
    const std::vector<int> v = space.unrank(r);
    int tot = 0;
    for (int x : v) {
      CHECK(x >= 0);
      CHECK(x <= 2);
      tot += x;
    }
    CHECK(tot == 3);
    CHECK(space.rank(v) == r);
  }
}

TEST_CASE("profile of a configuration") {
  // L=2, H=2; occupy sites (i=1,h=1) and (i=2,h=2): bits 0 and 3.
  LatticeConfig alpha{0b1001, 4};
  CHECK(alpha.particle_count() == 2);
  const ProfileConfig omega = profile_of(alpha, 2, 2);
  REQUIRE(omega.heights.size() == 2);
  CHECK(omega.heights[0] == 1);
  CHECK(omega.heights[1] == 1);
  CHECK(omega.total() == 2);
}

TEST_CASE("canonical measure normalizes and matches brute force") {
  for (double q : {0.3, 0.5, 0.8}) {
    EnsembleParams ep{q, 3, 2, 3};
    const PartitionTable table = build_partition_table(ep);
    const auto configs = enumerate_lattice_configs(ep);
    CHECK(configs.size() == 20);  // 6 choose 3
    // Brute-force weights q^{2 sum h alpha(i,h)}.
    double z = 0.0;
    std::vector<double> w(configs.size());
    for (std::size_t k = 0; k < configs.size(); ++k) {
      double e = 0.0;
      for (int h = 1; h <= ep.H; ++h)
        for (int i = 1; i <= ep.L; ++i)
          if (configs[k].occupied((h - 1) * ep.L + (i - 1))) e += 2.0 * h;
      w[k] = std::pow(q, e);
      z += w[k];
    }
    double total = 0.0;
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const double nu = nu_weight(configs[k], ep, table);
      CHECK(nu == doctest::Approx(w[k] / z).epsilon(1e-12));
      total += nu;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("two-state sector measure") {
  // One particle on a single stick of height 2: nu(h=1) = 1/(1+q^2).
  for (double q : {0.3, 0.5, 0.8}) {
    EnsembleParams ep{q, 1, 2, 1};
    const PartitionTable table = build_partition_table(ep);
    LatticeConfig lo{0b01, 2};
    CHECK(nu_weight(lo, ep, table) ==
          doctest::Approx(1.0 / (1.0 + q * q)).epsilon(1e-14));
  }
}

TEST_CASE("lumped measure sums the fibers") {
  EnsembleParams ep{0.5, 3, 2, 3};
  const PartitionTable table = build_partition_table(ep);
  const auto configs = enumerate_lattice_configs(ep);
  const auto profiles = enumerate_profiles(ep);
  double total = 0.0;
  for (const ProfileConfig& omega : profiles) {
    double fiber = 0.0;
    for (const LatticeConfig& alpha : configs) {
      const ProfileConfig p = profile_of(alpha, ep.L, ep.H);
      if (p.heights == omega.heights) fiber += nu_weight(alpha, ep, table);
    }
    const double hat = hat_nu_weight(omega, ep, table);
    CHECK(hat == doctest::Approx(fiber).epsilon(1e-12));
    total += hat;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stick kernel rows are distributions") {
  EnsembleParams ep{0.5, 3, 3, 4};
  const PartitionTable table = build_partition_table(ep);
  const StickKernel k = stick_occupation_kernel(ep, table);
  double s0 = 0.0;
  for (double p : k.nu0) s0 += p;
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& row : k.cond) {
    double s = 0.0;
    for (double p : row) s += p;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("chemical potential matches target density") {
  for (double rho : {0.5, 1.0, 2.5}) {
    const GrandCanonicalStats gc = chemical_potential(rho, 4, 0.5);
    CHECK(gc.mean == doctest::Approx(rho).epsilon(1e-9));
    CHECK(gc.sigma2 > 0.0);
  }
}
