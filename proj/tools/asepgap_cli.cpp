// Copyright 2026 The asepgap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Links only the public C API; emits CSV tables
// and JSON results with a self-describing header block.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asepgap/asepgap.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string resolve_output(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("ASEPGAP_OUT_DIR");
  if (!dir || !*dir) return path;
  return std::string(dir) + "/" + path;
}

// Table sink: stdout when no path is given.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      const std::string full = resolve_output(path);
      file.open(full);
      if (!file) throw CLI::ValidationError("cannot open output file " + full);
      os = &file;
    }
  }
};

void write_header(std::ostream& os, const std::string& command,
                  const std::string& params) {
  os << "# asepgap " << asepgap_version() << "\n";
  os << "# command: " << command << "\n";
  if (!params.empty()) os << "# " << params << "\n";
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct GapSinkCtx {
  std::ostream* os;
  bool failed = false;
};

void gap_row_cb(const asepgap_gap_row* r, void* user) {
  auto* ctx = static_cast<GapSinkCtx*>(user);
  std::ostream& os = *ctx->os;
  os << fmt_double(r->q) << ',' << r->L << ',' << r->H << ',';
  if (r->N < 0)
    os << "sup";
  else
    os << r->N;
  os << ',' << r->dim << ',' << r->form << ',' << fmt_double(r->gap) << ','
     << fmt_double(r->gamma) << ',' << r->method << ','
     << fmt_double(r->residual) << ',' << r->iterations << ','
     << fmt_double(r->seconds);
  if (r->error && *r->error) {
    os << " # " << r->error;
    ctx->failed = true;
  }
  os << '\n';
}

int cmd_gap_scan(double q, std::vector<int> Ls, std::vector<int> Hs,
                 bool modified, bool bl, std::uint64_t dense_cap,
                 std::uint64_t iter_cap, double tol, bool keep_going,
                 const std::string& output) {
  Sink sink(output);
  std::ostringstream params;
  params << "q=" << q << " modified=" << modified << " dense_cap=" << dense_cap
         << " iter_cap=" << iter_cap << " tol=" << tol;
  write_header(*sink.os, bl ? "gap-scan --model bernoulli-laplace" : "gap-scan",
               params.str());
  *sink.os << "q,L,H,N,dim,form,gap,gamma,method,residual,iterations,seconds\n";
  GapSinkCtx ctx{sink.os};
  asepgap_status st;
  if (bl) {
    st = asepgap_bernoulli_laplace_scan(Ls.data(), static_cast<int>(Ls.size()),
                                        gap_row_cb, &ctx);
  } else {
    st = asepgap_gap_scan(q, Ls.data(), static_cast<int>(Ls.size()), Hs.data(),
                          static_cast<int>(Hs.size()), modified ? 1 : 0,
                          dense_cap, iter_cap, tol, keep_going ? 1 : 0,
                          gap_row_cb, &ctx);
  }
  if (st == ASEPGAP_ERR_INVALID) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitUsage;
  }
  if (st != ASEPGAP_OK) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitFailure;
  }
  return (ctx.failed && !keep_going) ? kExitFailure
         : ctx.failed               ? kExitFailure
                                    : kExitOk;
}

struct XxzSinkCtx {
  std::ostream* os;
  bool failed = false;
};

void xxz_row_cb(const asepgap_xxz_row* r, void* user) {
  auto* ctx = static_cast<XxzSinkCtx*>(user);
  std::ostream& os = *ctx->os;
  os << fmt_double(r->Delta) << ',' << fmt_double(r->q) << ',' << r->twiceS
     << ',' << r->H << ',';
  if (r->R > 0) os << r->R;
  os << ',' << r->sector_2n << ',' << r->dim << ',' << fmt_double(r->gap)
     << ',' << fmt_double(r->gap_over_S) << ','
     << fmt_double(r->gap_times_R2_over_S) << ','
     << fmt_double(r->equivalence_residual);
  if (r->error && *r->error) {
    os << " # " << r->error;
    ctx->failed = true;
  }
  os << '\n';
}

int cmd_xxz(double Delta, std::vector<int> twoS, std::vector<int> Hs, int R,
            const std::string& output) {
  Sink sink(output);
  std::ostringstream params;
  params << "Delta=" << Delta << " R=" << R;
  write_header(*sink.os, "xxz", params.str());
  *sink.os << "Delta,q,twiceS,H,R,sector_2n,dim,gap,gap_over_S,"
              "gap_times_R2_over_S,equivalence_residual\n";
  XxzSinkCtx ctx{sink.os};
  const asepgap_status st =
      asepgap_xxz_scan(Delta, twoS.data(), static_cast<int>(twoS.size()),
                       Hs.data(), static_cast<int>(Hs.size()), R, xxz_row_cb,
                       &ctx);
  if (st == ASEPGAP_ERR_INVALID) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitUsage;
  }
  if (st != ASEPGAP_OK) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitFailure;
  }
  return ctx.failed ? kExitFailure : kExitOk;
}

void check_cb(const asepgap_check_row* r, void*) {
  std::printf("%-36s %-42s dev=%-12.3e tol=%-8.0e %s\n", r->name, r->instance,
              r->deviation, r->tolerance, r->pass ? "PASS" : "FAIL");
}

int cmd_verify(const std::string& filter, bool corrupt_hook) {
  int all_pass = 0;
  const asepgap_status st = asepgap_verify(
      filter.c_str(), corrupt_hook ? 1 : 0, check_cb, nullptr, &all_pass);
  if (st != ASEPGAP_OK) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitFailure;
  }
  return all_pass ? kExitOk : kExitFailure;
}

struct SeriesCtx {
  std::ostream* os;
};

void sample_cb(double t, double value, void* user) {
  auto* ctx = static_cast<SeriesCtx*>(user);
  *ctx->os << fmt_double(t) << ',' << fmt_double(value) << '\n';
}

int cmd_simulate(double q, int L, int H, long long N, bool profile,
                 std::uint64_t seed, bool seed_given, double t_burn,
                 double t_run, double sample_dt, int row, bool histogram,
                 const std::string& series_path,
                 const std::string& estimate_path) {
  if (!seed_given) {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }

  asepgap_sim_plan plan;
  plan.q = q;
  plan.L = L;
  plan.H = H;
  plan.N = N;
  plan.profile_mode = profile ? 1 : 0;
  plan.seed = seed;
  plan.t_burn = t_burn;
  plan.t_run = t_run;
  plan.sample_dt = sample_dt;
  plan.observable_row = row;
  plan.collect_histogram = histogram ? 1 : 0;

  Sink series(series_path);
  std::ostringstream params;
  params << "q=" << q << " L=" << L << " H=" << H << " N=" << N
         << " mode=" << (profile ? "profile" : "lattice") << " seed=" << seed
         << " t_burn=" << t_burn << " t_run=" << t_run
         << " sample_dt=" << sample_dt;
  write_header(*series.os, "simulate", params.str());
  *series.os << "t,value\n";
  SeriesCtx sctx{series.os};

  asepgap_relaxation est;
  double tv = 0.0;
  const asepgap_status st = asepgap_simulate(
      &plan, sample_cb, &sctx, &est, histogram ? &tv : nullptr);
  if (st == ASEPGAP_ERR_INVALID) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitUsage;
  }
  if (st != ASEPGAP_OK) {
    std::cerr << "error: " << asepgap_last_error() << "\n";
    return kExitFailure;
  }

  nlohmann::json j;
  j["version"] = asepgap_version();
  j["params"] = {{"q", q},       {"L", L},
                 {"H", H},       {"N", N},
                 {"mode", profile ? "profile" : "lattice"},
                 {"t_burn", t_burn}, {"t_run", t_run},
                 {"sample_dt", sample_dt}, {"observable_row", row}};
  j["seed"] = seed;
  j["rate"] = est.rate;
  j["stderr"] = est.stderr_rate;
  j["n_samples"] = est.n_samples;
  j["fit_window"] = {est.lag_lo, est.lag_hi};
  if (histogram) j["tv_distance"] = tv;
  double exact = 0.0;
  if (asepgap_exact_gap(q, L, H, N, 0, &exact) == ASEPGAP_OK) {
    j["exact_gap"] = exact;
    j["ratio"] = est.rate / exact;
  }
  if (estimate_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(resolve_output(estimate_path));
    if (!out) {
      std::cerr << "error: cannot open " << estimate_path << "\n";
      return kExitFailure;
    }
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asepgap: spectral gaps of anisotropic exclusion dynamics and "
               "equivalent XXZ chains"};
  app.require_subcommand(1);

  // gap-scan
  double q = 0.5;
  std::vector<int> Ls{2, 3, 4, 5}, Hs{2, 3, 4, 5};
  bool modified = false, keep_going = false, bl = false;
  std::uint64_t dense_cap = 4096;
  std::uint64_t iter_cap = std::uint64_t{1} << 24;
  double tol = 1e-8;
  std::string output;
  auto* scan = app.add_subcommand("gap-scan", "per-sector spectral gap table");
  scan->add_option("--q", q, "anisotropy in (0,1)");
  scan->add_option("--L", Ls, "stick counts");
  scan->add_option("--H", Hs, "stick heights");
  scan->add_flag("--modified", modified, "use the modified Dirichlet form");
  scan->add_flag("--bernoulli-laplace", bl,
                 "scan the complete-graph exchange model instead");
  scan->add_option("--dense-cap", dense_cap, "dense solver dimension cap");
  scan->add_option("--iter-cap", iter_cap, "iterative solver dimension cap");
  scan->add_option("--tol", tol, "iterative solver tolerance");
  scan->add_flag("--keep-going", keep_going, "record cell failures and continue");
  scan->add_option("-o,--output", output, "output CSV path (default stdout)");
  int jobs = 1;
  scan->add_option("--jobs", jobs, "worker count (cells currently run serially)");

  // xxz
  double Delta = 2.0;
  std::vector<int> twoS{1};
  std::vector<int> xHs{2};
  int R = 0;
  std::string xxz_out;
  auto* xxz = app.add_subcommand("xxz", "XXZ sector gap table");
  xxz->add_option("--Delta", Delta, "anisotropy > 1")->required();
  xxz->add_option("--twoS", twoS, "list of 2S values");
  xxz->add_option("--H", xHs, "chain lengths");
  xxz->add_option("--diagonal", R, "diagonal strip model with this R");
  xxz->add_option("-o,--output", xxz_out, "output CSV path (default stdout)");

  // verify
  std::string filter;
  bool corrupt_hook = false;
  auto* verify = app.add_subcommand("verify", "run the exact identity suite");
  verify->add_option("--filter", filter, "substring filter on check names");
  verify
      ->add_flag("--corrupt-hook", corrupt_hook,
                 "negative-test hook: corrupt one rate to force a failure")
      ->group("");  // hidden

  // simulate
  double sq = 0.5;
  int sL = 2, sH = 3, srow = 0;
  long long sN = 3;
  bool profile = false, histogram = false;
  std::uint64_t seed = 0;
  double t_burn = 100.0, t_run = 10000.0, sample_dt = 0.5;
  std::string series_path, estimate_path;
  auto* sim = app.add_subcommand("simulate", "Gillespie run + relaxation fit");
  sim->add_option("--q", sq, "anisotropy in (0,1)");
  sim->add_option("--L", sL, "stick count");
  sim->add_option("--H", sH, "stick height");
  sim->add_option("--N", sN, "particle number");
  sim->add_flag("--profile", profile, "simulate the lumped profile chain");
  auto* seed_opt = sim->add_option("--seed", seed, "PRNG seed (drawn if absent)");
  sim->add_option("--t-burn", t_burn, "burn-in time");
  sim->add_option("--t-run", t_run, "sampling time");
  sim->add_option("--sample-dt", sample_dt, "sampling interval");
  sim->add_option("--row", srow, "observable row (0 = auto)");
  sim->add_flag("--histogram", histogram,
                "compare the state histogram to the exact stationary law");
  sim->add_option("--series", series_path, "series CSV path (default stdout)");
  sim->add_option("--estimate", estimate_path,
                  "estimate JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (scan->parsed())
      return cmd_gap_scan(q, Ls, Hs, modified, bl, dense_cap, iter_cap, tol,
                          keep_going, output);
    if (xxz->parsed()) return cmd_xxz(Delta, twoS, xHs, R, xxz_out);
    if (verify->parsed()) return cmd_verify(filter, corrupt_hook);
    if (sim->parsed())
      return cmd_simulate(sq, sL, sH, sN, profile, seed, seed_opt->count() > 0,
                          t_burn, t_run, sample_dt, srow, histogram,
                          series_path, estimate_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
