// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library interface end to end: scans, the identity
// suite, simulation, operator handles, and the error-code mapping.

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "asepgap/asepgap.h"
#include "doctest.h"

namespace {

struct GapRows {
  std::vector<asepgap_gap_row> rows;
  std::vector<std::string> forms;  // keep string fields alive
};

void collect_gap(const asepgap_gap_row* row, void* user) {
  auto* out = static_cast<GapRows*>(user);
  out->rows.push_back(*row);
  out->forms.emplace_back(row->form);
}

}  // namespace

TEST_CASE("version and error strings") {
  CHECK(asepgap_version() != nullptr);
  CHECK(std::strlen(asepgap_version()) > 0);
}

TEST_CASE("exact gap of the two-state sector") {
  double gap = 0.0;
  REQUIRE(asepgap_exact_gap(0.5, 1, 2, 1, 4096, &gap) == ASEPGAP_OK);
  CHECK(gap == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("invalid parameters map to the invalid status") {
  double gap = 0.0;
  CHECK(asepgap_exact_gap(1.5, 1, 2, 1, 4096, &gap) == ASEPGAP_ERR_INVALID);
  CHECK(std::strlen(asepgap_last_error()) > 0);
  CHECK(asepgap_exact_gap(0.5, 1, 2, 9, 4096, &gap) == ASEPGAP_ERR_INVALID);
}

TEST_CASE("cap overflow maps to the cap status") {
  double gap = 0.0;
  CHECK(asepgap_exact_gap(0.5, 4, 4, 8, /*dense_cap=*/8, &gap) ==
        ASEPGAP_ERR_CAP);
}

TEST_CASE("gap scan streams cells and summary rows") {
  GapRows out;
  const int Ls[] = {2, 3};
  const int Hs[] = {2};
  REQUIRE(asepgap_gap_scan(0.5, Ls, 2, Hs, 1, /*use_modified=*/0, 4096,
                           1u << 20, 1e-8, /*keep_going=*/1, collect_gap,
                           &out) == ASEPGAP_OK);
  int sup = 0;
  for (const auto& r : out.rows) {
    if (r.N < 0) {
      ++sup;
      CHECK(r.gamma > 0.0);
    } else {
      CHECK(r.gamma == doctest::Approx(1.0 / r.gap));
    }
  }
  CHECK(sup == 2);
}

TEST_CASE("bernoulli-laplace scan reports gamma one half") {
  GapRows out;
  const int Ls[] = {3, 4};
  REQUIRE(asepgap_bernoulli_laplace_scan(Ls, 2, collect_gap, &out) ==
          ASEPGAP_OK);
  bool saw = false;
  for (const auto& r : out.rows)
    if (r.N < 0) {
      saw = true;
      CHECK(r.gamma == doctest::Approx(0.5).epsilon(1e-10));
    }
  CHECK(saw);
}

TEST_CASE("xxz scan covers chain sectors") {
  struct Ctx {
    int rows = 0;
    double max_res = 0.0;
  } ctx;
  const int sList[] = {1};
  const int hList[] = {2, 3};
  REQUIRE(asepgap_xxz_scan(
              2.0, sList, 1, hList, 2, /*R=*/0,
              [](const asepgap_xxz_row* row, void* user) {
                auto* c = static_cast<Ctx*>(user);
                ++c->rows;
                c->max_res = std::max(c->max_res, row->equivalence_residual);
              },
              &ctx) == ASEPGAP_OK);
  CHECK(ctx.rows > 0);
  CHECK(ctx.max_res < 1e-10);
}

TEST_CASE("verify suite passes through the shared library") {
  int all_pass = 0;
  REQUIRE(asepgap_verify("closed_form", /*corrupt_hook=*/0, nullptr, nullptr,
                         &all_pass) == ASEPGAP_OK);
  CHECK(all_pass == 1);
  REQUIRE(asepgap_verify("operators/detailed_balance", /*corrupt_hook=*/1,
                         nullptr, nullptr, &all_pass) == ASEPGAP_OK);
  CHECK(all_pass == 0);
}

TEST_CASE("simulation reproducibility and estimation") {
  asepgap_sim_plan plan{};
  plan.q = 0.5;
  plan.L = 1;
  plan.H = 2;
  plan.N = 1;
  plan.seed = 555;
  plan.t_burn = 50.0;
  plan.t_run = 20000.0;
  plan.sample_dt = 0.1;
  plan.collect_histogram = 1;

  std::vector<double> s1, s2;
  auto collect = [](double, double v, void* user) {
    static_cast<std::vector<double>*>(user)->push_back(v);
  };
  asepgap_relaxation est{};
  double tv = -1.0;
  REQUIRE(asepgap_simulate(&plan, collect, &s1, &est, &tv) == ASEPGAP_OK);
  REQUIRE(asepgap_simulate(&plan, collect, &s2, nullptr, nullptr) ==
          ASEPGAP_OK);
  CHECK(s1 == s2);  // bitwise reproducible
  CHECK(std::abs(est.rate - 2.5) / 2.5 < 0.15);
  CHECK(est.stderr_rate > 0.0);
  CHECK(tv >= 0.0);
  CHECK(tv < 0.05);
}

TEST_CASE("simulation rejects a bad plan with the data-safe status") {
  asepgap_sim_plan plan{};
  plan.q = 0.5;
  plan.L = 1;
  plan.H = 2;
  plan.N = 1;
  plan.t_burn = 10.0;
  plan.t_run = 5.0;  // must exceed the burn-in
  plan.sample_dt = 0.1;
  CHECK(asepgap_simulate(&plan, nullptr, nullptr, nullptr, nullptr) ==
        ASEPGAP_ERR_INVALID);
}

TEST_CASE("operator handles") {
  asepgap_operator* op = nullptr;
  REQUIRE(asepgap_operator_create("full", 0.5, 2, 3, 3, &op) == ASEPGAP_OK);
  long long dim = 0;
  REQUIRE(asepgap_operator_dim(op, &dim) == ASEPGAP_OK);
  CHECK(dim == 20);  // 6 choose 3
  double gap = 0.0, residual = 0.0;
  int iterations = 0;
  REQUIRE(asepgap_operator_gap(op, 4096, 1e-8, &gap, &residual,
                               &iterations) == ASEPGAP_OK);
  CHECK(gap > 0.0);
  asepgap_operator_destroy(op);

  asepgap_operator* bad = nullptr;
  CHECK(asepgap_operator_create("nonsense", 0.5, 2, 3, 3, &bad) ==
        ASEPGAP_ERR_INVALID);
  CHECK(bad == nullptr);
}
