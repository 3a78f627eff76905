// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "core/operators.hpp"
#include "core/spectral.hpp"
#include "doctest.h"

using namespace asepgap;

namespace {

void check_detailed_balance(const ReversibleOperator& op) {
  std::map<std::pair<std::int64_t, std::int64_t>, double> flow;
  for (std::int64_t a = 0; a < op.dim; ++a)
    for (std::int64_t k = op.row_ptr[a]; k < op.row_ptr[a + 1]; ++k)
      flow[{a, op.col[k]}] = op.pi[a] * op.rate[k];
  for (const auto& [ab, f] : flow) {
    const auto rev = flow.find({ab.second, ab.first});
    REQUIRE(rev != flow.end());
    CHECK(f == doctest::Approx(rev->second).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("full generator satisfies detailed balance") {
  for (double q : {0.3, 0.8})
    for (int L : {2, 3})
      for (int H : {2, 3}) {
        EnsembleParams ep{q, L, H, L * H / 2};
        check_detailed_balance(full_generator(ep));
      }
}

TEST_CASE("profile generator satisfies detailed balance") {
  EnsembleParams ep{0.5, 3, 3, 4};
  check_detailed_balance(profile_generator(ep));
}

TEST_CASE("two-state gap is q plus 1/q") {
  for (double q : {0.3, 0.5, 0.8}) {
    EnsembleParams ep{q, 1, 2, 1};
    const SpectrumReport rep = dense_gap(full_generator(ep));
    CHECK(rep.gap == doctest::Approx(q + 1.0 / q).epsilon(1e-12));
  }
}

TEST_CASE("diagonal entries balance the exit rates") {
  EnsembleParams ep{0.5, 2, 3, 3};
  const ReversibleOperator op = full_generator(ep);
  for (std::int64_t a = 0; a < op.dim; ++a) {
    double out = 0.0;
    for (std::int64_t k = op.row_ptr[a]; k < op.row_ptr[a + 1]; ++k)
      out += op.rate[k];
    CHECK(op.diag[a] == doctest::Approx(-out).epsilon(1e-12));
  }
}

TEST_CASE("stick kernel K spectrum at L=3 H=1 N=1") {
  // Kernel acts on {0, 1} occupancy of one stick; K has eigenvalues
  // {1, -1/2}, so the stored K - I has gap 3/2.
  EnsembleParams ep{0.5, 3, 1, 1};
  const ReversibleOperator k = operator_K(ep);
  CHECK(k.dim == 2);
  const SpectrumReport rep = dense_gap(k);
  CHECK(rep.gap == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("averaging operator P fixes constants and is a contraction") {
  EnsembleParams ep{0.5, 3, 2, 3};
  const ReversibleOperator p = operator_P(ep);  // stored as P - I
  const Eigen::MatrixXd m =
      dense_generator(p) + Eigen::MatrixXd::Identity(p.dim, p.dim);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p.dim);
  CHECK((m * ones - ones).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      symmetrize(p) + Eigen::MatrixXd::Identity(p.dim, p.dim));
  REQUIRE(es.info() == Eigen::Success);
  CHECK(es.eigenvalues().minCoeff() > -1.0 - 1e-12);
  CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-12);
}

TEST_CASE("bernoulli-laplace gap gives gamma one half") {
  for (int L : {3, 4, 5})
    for (long long N : {1LL, static_cast<long long>(L / 2)}) {
      const ReversibleOperator op = bernoulli_laplace(L, N);
      const SpectrumReport rep = dense_gap(op);
      CHECK(1.0 / rep.gap <= 0.5 + 1e-10);
    }
}

TEST_CASE("modified dirichlet form matches the modified generator") {
  EnsembleParams ep{0.5, 3, 2, 3};
  const ReversibleOperator mod = full_generator(ep, kDefaultEnumerationCap,
                                                /*exclude_same_stick=*/true);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> f(mod.dim);
    for (double& x : f) x = gauss(rng);
    CHECK(modified_dirichlet_form(ep, f) ==
          doctest::Approx(dirichlet_form(mod, f)).epsilon(1e-10));
  }
}

TEST_CASE("dirichlet form is nonnegative and kills constants") {
  EnsembleParams ep{0.5, 2, 3, 3};
  const ReversibleOperator op = full_generator(ep);
  const std::vector<double> ones(op.dim, 1.0);
  CHECK(std::abs(dirichlet_form(op, ones)) < 1e-14);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> f(op.dim);
  for (double& x : f) x = gauss(rng);
  CHECK(dirichlet_form(op, f) >= 0.0);
}
