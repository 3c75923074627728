// Copyright 2026 The dpsbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dpsbm: sweeps, Political Blogs runs, noise calibration and bound tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpsbm/dpsbm.h"

namespace {

using ::dpsbm::DeltaRule;

std::string Num(double v) { return absl::StrFormat("%.17g", v); }

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s.message() << "\n";
  return 1;
}

// ---------------------------------------------------------------------------

struct SweepFlags {
  std::string spec_path;
  std::vector<std::string> mechanisms;
  std::vector<int> n;
  std::vector<double> eps;
  double p = 0.2;
  double q = 0.02;
  double delta = 0.0;
  std::string delta_rule;
  int trials = 100;
  int n_steps = 8;
  uint64_t seed = 1;
  std::string aggregator = "mode";
  std::string sensitivity = "adaptive";
  int64_t max_subgraphs = 1'000'000;
  int workers = 1;
  double eta = 0.01;
  std::string out;
  std::string bounds_out;
};

int RunSweepCommand(const CLI::App& cmd, const SweepFlags& f) {
  dpsbm::SweepSpec spec;
  if (!f.spec_path.empty()) {
    absl::StatusOr<dpsbm::SweepSpec> loaded = dpsbm::LoadSweepSpec(f.spec_path);
    if (!loaded.ok()) return Fail(loaded.status());
    spec = *loaded;
  }
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--mechanism")) {
    spec.mechanisms.clear();
    for (const std::string& m : f.mechanisms) {
      absl::StatusOr<dpsbm::SweepMechanism> v = dpsbm::ParseMechanism(m);
      if (!v.ok()) return Fail(v.status());
      spec.mechanisms.push_back(*v);
    }
  }
  if (given("--n")) spec.n = f.n;
  if (given("--eps")) spec.eps = f.eps;
  if (given("--p")) spec.p = f.p;
  if (given("--q")) spec.q = f.q;
  if (given("--delta")) spec.delta = DeltaRule{false, f.delta};
  if (given("--delta-rule")) {
    absl::StatusOr<DeltaRule> r = dpsbm::ParseDeltaRule(f.delta_rule);
    if (!r.ok()) return Fail(r.status());
    spec.delta = *r;
  }
  if (given("--trials")) spec.trials = f.trials;
  if (given("--n-steps")) spec.n_steps = f.n_steps;
  if (given("--seed")) spec.seed = f.seed;
  if (given("--aggregator")) {
    absl::StatusOr<dpsbm::Aggregator> a = dpsbm::ParseAggregator(f.aggregator);
    if (!a.ok()) return Fail(a.status());
    spec.aggregator = *a;
  }
  if (given("--sensitivity")) {
    absl::StatusOr<dpsbm::SensitivityRule> r =
        dpsbm::ParseSensitivityRule(f.sensitivity);
    if (!r.ok()) return Fail(r.status());
    spec.sensitivity = *r;
  }
  if (given("--max-subgraphs")) spec.max_subgraphs = f.max_subgraphs;
  if (given("--workers")) spec.workers = f.workers;
  if (given("--eta")) spec.eta = f.eta;
  if (given("--out")) spec.out = f.out;
  if (given("--bounds-out")) spec.bounds_out = f.bounds_out;

  absl::StatusOr<dpsbm::SweepResult> result = dpsbm::RunSweep(spec);
  if (!result.ok()) return Fail(result.status());
  if (spec.out.empty()) std::cout << dpsbm::SweepCsv(result->records);
  for (const std::string& v : result->bound_violations) {
    std::cerr << "note: overlap floor above measurement: " << v << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct PolblogsFlags {
  std::string edges;
  std::string labels;
  std::vector<double> eps;
  double delta = 0.0;
  std::string delta_rule;
  int n_steps = 3;
  int trials = 100;
  std::vector<std::string> variants;
  std::string sensitivity = "adaptive";
  uint64_t seed = 1;
  int workers = 1;
  std::string out;
};

int RunPolblogsCommand(const CLI::App& cmd, const PolblogsFlags& f) {
  dpsbm::PolblogsSpec spec;
  spec.edges_path = f.edges;
  spec.labels_path = f.labels;
  if (cmd.count("--eps")) spec.eps = f.eps;
  if (cmd.count("--delta")) spec.delta = DeltaRule{false, f.delta};
  if (cmd.count("--delta-rule")) {
    absl::StatusOr<DeltaRule> r = dpsbm::ParseDeltaRule(f.delta_rule);
    if (!r.ok()) return Fail(r.status());
    spec.delta = *r;
  }
  spec.n_steps = f.n_steps;
  spec.trials = f.trials;
  if (cmd.count("--variant")) {
    spec.variants.clear();
    for (const std::string& v : f.variants) {
      absl::StatusOr<dpsbm::PolblogsVariant> pv = dpsbm::ParseVariant(v);
      if (!pv.ok()) return Fail(pv.status());
      spec.variants.push_back(*pv);
    }
  }
  absl::StatusOr<dpsbm::SensitivityRule> rule =
      dpsbm::ParseSensitivityRule(f.sensitivity);
  if (!rule.ok()) return Fail(rule.status());
  spec.sensitivity = *rule;
  spec.seed = f.seed;
  spec.workers = f.workers;
  spec.out = f.out;

  absl::StatusOr<dpsbm::PolblogsData> data =
      dpsbm::LoadPolblogs(spec.edges_path, spec.labels_path);
  if (!data.ok()) return Fail(data.status());
  std::cerr << absl::StrFormat(
      "loaded %d nodes, %d undirected edges, %d labelled +1\n",
      data->graph.size(), data->graph.EdgeCount(),
      data->truth.CountPositive());
  absl::StatusOr<std::vector<dpsbm::SweepRecord>> rows =
      dpsbm::RunPolblogs(spec, *data);
  if (!rows.ok()) return Fail(rows.status());
  if (spec.out.empty()) std::cout << dpsbm::SweepCsv(*rows);
  return 0;
}

// ---------------------------------------------------------------------------

struct AccountFlags {
  double eps = 1.0;
  double delta = 0.0;
  double sigma = 0.0;
  int n_steps = 1;
  bool basic = false;
};

int RunAccountCommand(const CLI::App& cmd, const AccountFlags& f) {
  if (cmd.count("--sigma")) {
    absl::StatusOr<double> d =
        dpsbm::DeltaOfEpsilon(f.eps, {f.sigma, f.n_steps});
    if (!d.ok()) return Fail(d.status());
    std::cout << Num(*d) << "\n";
    return 0;
  }
  if (!cmd.count("--delta")) {
    return Fail(absl::InvalidArgumentError("give --delta or --sigma"));
  }
  absl::StatusOr<double> s =
      f.basic ? dpsbm::SigmaBasic(f.eps, f.delta, f.n_steps)
              : dpsbm::SigmaForBudget(f.eps, f.delta, f.n_steps);
  if (!s.ok()) return Fail(s.status());
  std::cout << Num(*s) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BoundsFlags {
  bool converse = false;
  bool literal = false;
  bool exp_beta = false;
  double beta = 0.05;
  double eta = 0.01;
  double eps = 1.0;
  double p = 0.2;
  double q = 0.02;
  int n = 200;
  double delta = 0.0;
  std::string delta_rule = "inv_n2";
  int n_steps = 8;
  bool csv = false;
  dpsbm::UniversalConstants consts;
};

int RunBoundsCommand(const CLI::App& cmd, const BoundsFlags& f) {
  dpsbm::ConverseOptions copt;
  copt.form = f.literal ? dpsbm::ConverseForm::kUnscaledDiscriminant
                        : dpsbm::ConverseForm::kExactRoot;
  copt.log_term = f.exp_beta ? dpsbm::ConverseLogTerm::kExpBeta
                             : dpsbm::ConverseLogTerm::kEBeta;
  const dpsbm::AccuracyTarget target{f.beta, f.eta};
  auto converse = dpsbm::ConverseMinN(target, f.eps, f.p, f.q, copt);
  if (f.converse) {
    if (!converse.ok()) return Fail(converse.status());
    if (!converse->has_value()) {
      std::cout << "infeasible\n";
      return 0;
    }
    std::cout << Num(**converse) << "\n";
    return 0;
  }

  DeltaRule rule{false, f.delta};
  if (!cmd.count("--delta")) {
    absl::StatusOr<DeltaRule> r = dpsbm::ParseDeltaRule(f.delta_rule);
    if (!r.ok()) return Fail(r.status());
    rule = *r;
  }
  const double delta = rule.Resolve(f.n);
  if (absl::Status st = f.consts.Validate(); !st.ok()) return Fail(st);

  std::vector<std::pair<std::string, std::string>> rows;
  auto add = [&](const std::string& name, double v) {
    rows.emplace_back(name, Num(v));
  };
  auto add_status = [&](const std::string& name, const absl::Status& s) {
    rows.emplace_back(name, absl::StrCat("error: ", s.message()));
  };
  auto add_opt = [&](const std::string& name,
                     const absl::StatusOr<std::optional<double>>& v) {
    if (!v.ok()) {
      add_status(name, v.status());
    } else if (!v->has_value()) {
      rows.emplace_back(name, "infeasible");
    } else {
      add(name, **v);
    }
  };

  add("n", f.n);
  add("p", f.p);
  add("q", f.q);
  add("eps", f.eps);
  add("delta", delta);
  add("eta", f.eta);
  add("beta", f.beta);
  add("n_steps", f.n_steps);
  add("c_laplacian", f.consts.c_laplacian);
  add("c_rr", f.consts.c_rr);
  add("c_sub", f.consts.c_sub);
  add("c1", f.consts.c1);
  add("c2", f.consts.c2);
  add("c_overlap_sub", f.consts.c_overlap_sub);
  add_opt("converse_min_n", converse);

  absl::StatusOr<double> rr = dpsbm::RrDistanceBound(f.n, f.p, f.q, f.eps,
                                                     f.eta);
  if (rr.ok()) {
    add("rr_distance", *rr);
    add("rr_overlap_floor",
        *dpsbm::OverlapLowerBound(*rr, dpsbm::BoundMechanism::kRr));
  } else {
    add_status("rr_distance", rr.status());
  }
  absl::StatusOr<dpsbm::SeparationResult> sep =
      dpsbm::RrSeparation(f.n, f.p, f.q, f.eps, f.eta, f.consts);
  if (sep.ok()) {
    add("rr_separation_margin", sep->margin);
    rows.emplace_back("rr_separation_ok", sep->ok ? "true" : "false");
  } else {
    add_status("rr_separation_margin", sep.status());
  }

  absl::StatusOr<dpsbm::SubsampleConfig> sc =
      dpsbm::SubsampleConfig::Compute(
          f.n, f.eps, delta,
          {dpsbm::Aggregator::kVectorMode, std::numeric_limits<int64_t>::max()});
  if (sc.ok()) {
    const double half = f.n / 2.0;
    const int64_t inter = std::llround(half * half * f.q);
    const int64_t edges =
        std::llround(half * (half - 1.0) * f.p) + inter;
    add("subsample_q_s", sc->q_s);
    add("subsample_m", static_cast<double>(sc->m));
    add("subsample_expected_edges", static_cast<double>(edges));
    add("subsample_expected_inter_edges", static_cast<double>(inter));
    absl::StatusOr<double> sd = dpsbm::SubsampleDistanceBound(
        f.n, f.p, f.q, sc->q_s, edges, inter, f.eta);
    if (sd.ok()) {
      add("subsample_distance", *sd);
      add("subsample_overlap_floor",
          *dpsbm::OverlapLowerBound(*sd, dpsbm::BoundMechanism::kSubsample,
                                    sc->m, f.consts));
    } else {
      add_status("subsample_distance", sd.status());
    }
  } else {
    add_status("subsample_q_s", sc.status());
  }

  absl::StatusOr<double> sigma = dpsbm::SigmaForBudget(f.eps, delta, f.n_steps);
  if (sigma.ok()) {
    add("npi_sigma", *sigma);
    auto nd = dpsbm::NpiDistanceBound(f.n, f.p, f.q, *sigma, f.n_steps, f.eta,
                                      f.consts);
    add_opt("npi_distance", nd);
    if (nd.ok() && nd->has_value()) {
      add("npi_overlap_floor",
          *dpsbm::OverlapLowerBound(**nd, dpsbm::BoundMechanism::kNpi));
    }
  } else {
    add_status("npi_sigma", sigma.status());
  }

  const dpsbm::SbmLogScale scale = dpsbm::SbmLogScale::FromParams(f.n, f.p,
                                                                  f.q);
  add("alpha", scale.alpha);
  add("beta_par", scale.beta);
  absl::StatusOr<dpsbm::SpectralGapBounds> gap =
      dpsbm::SpectralGapBound(scale, f.n, f.consts);
  if (gap.ok()) {
    add("lambda1_lower", gap->lambda1_lower);
    add("lambda_rest_upper", gap->lambda_rest_upper);
    add("gap_success_probability_raw", gap->success_probability_raw);
    add("gap_success_probability", gap->success_probability);
  } else {
    add_status("lambda1_lower", gap.status());
  }
  std::optional<double> inv = dpsbm::GapReciprocalBound(f.n, f.p, f.q,
                                                        f.consts);
  add_opt("gap_reciprocal", inv);

  if (f.csv) {
    std::cout << "quantity,value\n";
    for (const auto& [k, v] : rows) {
      std::cout << k << "," << dpsbm::internal::CsvField(v) << "\n";
    }
  } else {
    size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    for (const auto& [k, v] : rows) {
      std::cout << absl::StrFormat("%-*s  %s\n", static_cast<int>(width), k,
                                   v);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-private community detection on two-block SBMs"};
  app.require_subcommand(1);

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo overlap sweep");
  sweep->add_option("--spec", sf.spec_path, "JSON sweep spec")
      ->check(CLI::ExistingFile);
  sweep->add_option("--mechanism", sf.mechanisms,
                    "spectral, rr, subsample, npi, npi_init")
      ->delimiter(',');
  sweep->add_option("--n", sf.n, "node counts")->delimiter(',');
  sweep->add_option("--eps", sf.eps, "privacy levels")->delimiter(',');
  sweep->add_option("--p", sf.p, "intra-community edge probability");
  sweep->add_option("--q", sf.q, "inter-community edge probability");
  auto* sweep_delta = sweep->add_option("--delta", sf.delta, "fixed delta");
  sweep->add_option("--delta-rule", sf.delta_rule, "inv_n2 or a number")
      ->excludes(sweep_delta);
  sweep->add_option("--trials", sf.trials, "trials per grid point");
  sweep->add_option("--n-steps", sf.n_steps, "power iterations N");
  sweep->add_option("--seed", sf.seed, "base seed");
  sweep->add_option("--aggregator", sf.aggregator, "mode or majority");
  sweep->add_option("--sensitivity", sf.sensitivity,
                    "adaptive, worst_case or edge_flip");
  sweep->add_option("--max-subgraphs", sf.max_subgraphs,
                    "cap on subsampling subgraph count");
  sweep->add_option("--workers", sf.workers, "worker threads");
  sweep->add_option("--eta", sf.eta, "failure probability for bound floors");
  sweep->add_option("--out", sf.out, "CSV path (stdout when omitted)");
  sweep->add_option("--bounds-out", sf.bounds_out,
                    "CSV of overlap floors against measurements");

  PolblogsFlags pf;
  CLI::App* pol = app.add_subcommand("polblogs", "Political Blogs experiment");
  pol->add_option("--edges", pf.edges, "edge list")
      ->required()
      ->check(CLI::ExistingFile);
  pol->add_option("--labels", pf.labels, "node labels")
      ->required()
      ->check(CLI::ExistingFile);
  pol->add_option("--eps", pf.eps, "privacy levels")->delimiter(',');
  auto* pol_delta = pol->add_option("--delta", pf.delta, "fixed delta");
  pol->add_option("--delta-rule", pf.delta_rule, "inv_n2 or a number")
      ->excludes(pol_delta);
  pol->add_option("--n-steps", pf.n_steps, "power iterations N");
  pol->add_option("--trials", pf.trials, "trials per point");
  pol->add_option("--variant", pf.variants,
                  "private_init, fixed_init, graph_perturb")
      ->delimiter(',');
  pol->add_option("--sensitivity", pf.sensitivity,
                  "adaptive, worst_case or edge_flip");
  pol->add_option("--seed", pf.seed, "base seed");
  pol->add_option("--workers", pf.workers, "worker threads");
  pol->add_option("--out", pf.out, "CSV path (stdout when omitted)");

  AccountFlags af;
  CLI::App* account =
      app.add_subcommand("account", "Gaussian noise calibration");
  account->add_option("--eps", af.eps, "epsilon")->required();
  auto* acc_delta = account->add_option("--delta", af.delta, "target delta");
  account->add_option("--sigma", af.sigma, "noise ratio; prints delta")
      ->excludes(acc_delta);
  account->add_option("--n-steps", af.n_steps, "composition length N");
  account->add_flag("--basic", af.basic, "use sqrt(4 N log(1/delta)) / eps");

  BoundsFlags bf;
  CLI::App* bounds = app.add_subcommand("bounds", "Theoretical bounds");
  bounds->add_flag("--converse", bf.converse, "print only the converse min n");
  bounds->add_flag("--literal", bf.literal,
                   "converse root without beta under the square root");
  bounds->add_flag("--exp-beta", bf.exp_beta,
                   "converse with A = log(1 / (8 e^beta))");
  bounds->add_option("--beta", bf.beta, "tolerated error rate");
  bounds->add_option("--eta", bf.eta, "failure probability");
  bounds->add_option("--eps", bf.eps, "epsilon");
  bounds->add_option("--p", bf.p, "intra-community probability");
  bounds->add_option("--q", bf.q, "inter-community probability");
  bounds->add_option("--n", bf.n, "node count");
  auto* b_delta = bounds->add_option("--delta", bf.delta, "fixed delta");
  bounds->add_option("--delta-rule", bf.delta_rule, "inv_n2 or a number")
      ->excludes(b_delta);
  bounds->add_option("--n-steps", bf.n_steps, "power iterations N");
  bounds->add_flag("--csv", bf.csv, "CSV instead of an aligned table");
  bounds->add_option("--c-laplacian", bf.consts.c_laplacian,
                     "Laplacian concentration constant");
  bounds->add_option("--c-rr", bf.consts.c_rr, "perturbed-graph constant");
  bounds->add_option("--c-sub", bf.consts.c_sub, "subsampling constant");
  bounds->add_option("--c1", bf.consts.c1, "spectral norm constant");
  bounds->add_option("--c2", bf.consts.c2, "gap probability constant");
  bounds->add_option("--c-overlap-sub", bf.consts.c_overlap_sub,
                     "subsampling overlap constant");

  CLI11_PARSE(app, argc, argv);

  if (sweep->parsed()) return RunSweepCommand(*sweep, sf);
  if (pol->parsed()) return RunPolblogsCommand(*pol, pf);
  if (account->parsed()) return RunAccountCommand(*account, af);
  if (bounds->parsed()) return RunBoundsCommand(*bounds, bf);
  return 1;
}
