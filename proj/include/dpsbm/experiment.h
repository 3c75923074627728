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

// Monte-Carlo sweeps over (mechanism, n, eps) and the Political Blogs driver.
//
// Seeding: the truth vector and SBM graph of trial t at size n depend only
// on (base seed, n, t), so every mechanism and every eps sees the same
// graphs. The mechanism's own seed additionally mixes in the mechanism and
// eps. Trials are distributed over worker threads by index and reduced in
// index order, so the output does not depend on the worker count.

#ifndef DPSBM_EXPERIMENT_H_
#define DPSBM_EXPERIMENT_H_

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpsbm/accounting.h"
#include "dpsbm/bounds.h"
#include "dpsbm/graph.h"
#include "dpsbm/internal/status_macros.h"
#include "dpsbm/mechanisms.h"
#include "dpsbm/random.h"
#include "dpsbm/spectral.h"
#include "nlohmann/json.hpp"

namespace dpsbm {

enum class SweepMechanism {
  kSpectral,   // non-private Fiedler clustering
  kRr,         // randomized response + spectral clustering
  kSubsample,  // subsampling stability
  kNpi,        // noisy power iteration, random start
  kNpiInit,    // noisy power iteration, private start
};

inline const char* MechanismName(SweepMechanism m) {
  switch (m) {
    case SweepMechanism::kSpectral:
      return "spectral";
    case SweepMechanism::kRr:
      return "rr";
    case SweepMechanism::kSubsample:
      return "subsample";
    case SweepMechanism::kNpi:
      return "npi";
    case SweepMechanism::kNpiInit:
      return "npi_init";
  }
  return "unknown";
}

inline absl::StatusOr<SweepMechanism> ParseMechanism(absl::string_view s) {
  for (SweepMechanism m :
       {SweepMechanism::kSpectral, SweepMechanism::kRr,
        SweepMechanism::kSubsample, SweepMechanism::kNpi,
        SweepMechanism::kNpiInit}) {
    if (s == MechanismName(m)) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mechanism '", s,
      "' (expected spectral, rr, subsample, npi or npi_init)"));
}

inline absl::StatusOr<Aggregator> ParseAggregator(absl::string_view s) {
  if (s == "mode") return Aggregator::kVectorMode;
  if (s == "majority") return Aggregator::kNodeMajority;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown aggregator '", s, "' (expected mode or majority)"));
}

inline absl::StatusOr<SensitivityRule> ParseSensitivityRule(
    absl::string_view s) {
  if (s == "adaptive") return SensitivityRule::kAdaptive;
  if (s == "worst_case") return SensitivityRule::kWorstCase;
  if (s == "edge_flip") return SensitivityRule::kEdgeFlip;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown sensitivity rule '", s,
      "' (expected adaptive, worst_case or edge_flip)"));
}

// Fixed delta, or delta = 1 / n^2.
struct DeltaRule {
  bool inverse_n_squared = true;
  double value = 0.0;

  double Resolve(int n) const {
    if (!inverse_n_squared) return value;
    const double dn = static_cast<double>(n);
    return 1.0 / (dn * dn);
  }
  std::string ToString() const {
    return inverse_n_squared ? "inv_n2" : absl::StrFormat("%.17g", value);
  }
};

inline absl::StatusOr<DeltaRule> ParseDeltaRule(absl::string_view s) {
  if (s == "inv_n2" || s == "inv-n2" || s == "n^-2") return DeltaRule{true, 0};
  double v = 0.0;
  if (!absl::SimpleAtod(s, &v) || !(v > 0.0 && v < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "delta rule must be inv_n2 or a number in (0, 1), got '", s, "'"));
  }
  return DeltaRule{false, v};
}

inline const std::vector<double>& DefaultEpsGrid() {
  static const std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  return grid;
}

struct SweepSpec {
  std::vector<SweepMechanism> mechanisms = {SweepMechanism::kRr,
                                            SweepMechanism::kNpi};
  std::vector<int> n = {200};
  std::vector<double> eps = DefaultEpsGrid();
  double p = 0.2;
  double q = 0.02;
  DeltaRule delta;
  int trials = 100;
  int n_steps = 8;
  uint64_t seed = 1;
  Aggregator aggregator = Aggregator::kVectorMode;
  SensitivityRule sensitivity = SensitivityRule::kAdaptive;
  int64_t max_subgraphs = 1'000'000;
  int workers = 1;
  SolverConfig solver;
  // Optional CSV comparing measured overlap with the theoretical floor.
  std::string bounds_out;
  double eta = 0.01;
  UniversalConstants constants;
  std::string out;

  absl::Status Validate() const {
    if (mechanisms.empty() || n.empty() || eps.empty()) {
      return absl::InvalidArgumentError(
          "sweep needs at least one mechanism, n and eps");
    }
    if (trials < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("trials must be >= 1, got %d", trials));
    }
    if (n_steps < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("n_steps must be >= 1, got %d", n_steps));
    }
    if (workers < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("workers must be >= 1, got %d", workers));
    }
    for (int v : n) {
      const SbmParams params{v, p, q};
      DPSBM_RETURN_IF_ERROR(params.Validate());
    }
    for (double e : eps) {
      if (!(e > 0.0) || !std::isfinite(e)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("eps values must be positive, got %g", e));
      }
    }
    if (!delta.inverse_n_squared && !(delta.value > 0.0 && delta.value < 1.0)) {
      return absl::InvalidArgumentError("fixed delta must lie in (0, 1)");
    }
    return solver.Validate();
  }
};

struct SweepRecord {
  std::string mechanism;
  int n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double sigma = 0.0;  // mu, Laplace scale or Gaussian sigma
  int trials = 0;
  double mean_overlap = std::numeric_limits<double>::quiet_NaN();
  double stderr_overlap = std::numeric_limits<double>::quiet_NaN();
  double bottom_rate = 0.0;
  double seconds = 0.0;
  std::string status = "ok";
};

inline constexpr const char* kSweepCsvHeader =
    "mechanism,n,eps,delta,sigma,trials,mean_overlap,stderr,bottom_rate,"
    "seconds,status";

namespace internal {

inline std::string CsvNumber(double v) {
  if (std::isnan(v)) return "nan";
  return absl::StrFormat("%.17g", v);
}

inline std::string CsvField(absl::string_view s) {
  if (s.find_first_of(",\"\n") == absl::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline uint64_t EpsKey(double eps) { return std::bit_cast<uint64_t>(eps); }

inline uint64_t GraphSeed(uint64_t base, int n, int trial) {
  return DeriveSeed(DeriveSeed(DeriveSeed(base, 0x6772617068ULL), n), trial);
}

inline uint64_t MechanismSeed(uint64_t base, SweepMechanism m, double eps,
                              int n, int trial) {
  uint64_t s = DeriveSeed(base, 0x6d656368ULL);
  s = DeriveSeed(s, static_cast<uint64_t>(m));
  s = DeriveSeed(s, EpsKey(eps));
  s = DeriveSeed(s, n);
  return DeriveSeed(s, trial);
}

struct TrialResult {
  double overlap = 0.0;
  bool bottom = false;
  absl::Status status;
};

// Runs fn(i) for i in [0, count) on `workers` threads; results by index.
template <typename Fn>
std::vector<TrialResult> RunIndexed(int count, int workers, Fn&& fn) {
  std::vector<TrialResult> results(count);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      results[i] = fn(i);
    }
  };
  const int threads = std::min(workers, count);
  if (threads <= 1) {
    work();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return results;
}

// Mean, standard error and bottom rate reduced in index order.
inline void Summarize(const std::vector<TrialResult>& results,
                      SweepRecord& rec) {
  for (const TrialResult& r : results) {
    if (!r.status.ok()) {
      rec.status = absl::StrCat("error: ", r.status.message());
      return;
    }
  }
  const double t = static_cast<double>(results.size());
  double sum = 0.0;
  int bottoms = 0;
  for (const TrialResult& r : results) {
    sum += r.overlap;
    bottoms += r.bottom;
  }
  const double mean = sum / t;
  double ss = 0.0;
  for (const TrialResult& r : results) {
    ss += (r.overlap - mean) * (r.overlap - mean);
  }
  rec.mean_overlap = mean;
  rec.stderr_overlap =
      results.size() > 1 ? std::sqrt(ss / (t - 1.0)) / std::sqrt(t) : 0.0;
  rec.bottom_rate = bottoms / t;
}

}  // namespace internal

inline std::string SweepCsvRow(const SweepRecord& r) {
  return absl::StrCat(
      internal::CsvField(r.mechanism), ",", r.n, ",",
      internal::CsvNumber(r.eps), ",", internal::CsvNumber(r.delta), ",",
      internal::CsvNumber(r.sigma), ",", r.trials, ",",
      internal::CsvNumber(r.mean_overlap), ",",
      internal::CsvNumber(r.stderr_overlap), ",",
      internal::CsvNumber(r.bottom_rate), ",",
      internal::CsvNumber(r.seconds), ",", internal::CsvField(r.status));
}

inline std::string SweepCsv(const std::vector<SweepRecord>& records) {
  std::string out = absl::StrCat(kSweepCsvHeader, "\n");
  for (const SweepRecord& r : records) absl::StrAppend(&out, SweepCsvRow(r), "\n");
  return out;
}

inline absl::Status WriteTextFile(const std::string& path,
                                  const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  f << text;
  f.close();
  if (!f) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

// Noise scale a mechanism will use at (n, eps, delta), or why it cannot run.
inline absl::StatusOr<double> SweepNoiseScale(const SweepSpec& spec,
                                              SweepMechanism m, int n,
                                              double eps, double delta) {
  switch (m) {
    case SweepMechanism::kSpectral:
      return 0.0;
    case SweepMechanism::kRr:
      return FlipProbability(eps);
    case SweepMechanism::kSubsample: {
      SubsampleOptions o{spec.aggregator, spec.max_subgraphs};
      DPSBM_ASSIGN_OR_RETURN(const SubsampleConfig c,
                             SubsampleConfig::Compute(n, eps, delta, o));
      return c.laplace_scale;
    }
    case SweepMechanism::kNpi:
      return SigmaForBudget(eps, delta, spec.n_steps);
    case SweepMechanism::kNpiInit:
      return SigmaForBudget(eps, delta, spec.n_steps + 1);
  }
  return absl::InternalError("unhandled mechanism");
}

// One trial: fresh truth and graph, mechanism, overlap.
inline internal::TrialResult RunSweepTrial(const SweepSpec& spec,
                                           SweepMechanism m, int n, double eps,
                                           double delta, double noise,
                                           int trial) {
  internal::TrialResult res;
  auto run = [&]() -> absl::Status {
    const uint64_t gseed = internal::GraphSeed(spec.seed, n, trial);
    DPSBM_ASSIGN_OR_RETURN(const LabelVector truth,
                           RandomBalancedLabels(n, DeriveSeed(gseed, 0)));
    DPSBM_ASSIGN_OR_RETURN(
        const AdjacencyMatrix a,
        GenerateSbm(truth, SbmParams{n, spec.p, spec.q}, DeriveSeed(gseed, 1)));
    const uint64_t mseed =
        internal::MechanismSeed(spec.seed, m, eps, n, trial);
    SolverConfig solver = spec.solver;
    solver.seed = DeriveSeed(mseed, 99);
    MechanismOutcome out;
    switch (m) {
      case SweepMechanism::kSpectral: {
        DPSBM_ASSIGN_OR_RETURN(out, SpectralCluster(a, solver));
        break;
      }
      case SweepMechanism::kRr: {
        DPSBM_ASSIGN_OR_RETURN(out, PerturbAndCluster(a, eps, solver, mseed));
        break;
      }
      case SweepMechanism::kSubsample: {
        SubsampleOptions o{spec.aggregator, spec.max_subgraphs};
        DPSBM_ASSIGN_OR_RETURN(
            out, SubsamplingStability(a, eps, delta, solver, mseed, o));
        break;
      }
      case SweepMechanism::kNpi: {
        NoisyPowerOptions o;
        o.rule = spec.sensitivity;
        DPSBM_ASSIGN_OR_RETURN(
            out, NoisyPowerIteration(a, noise, spec.n_steps, mseed, o));
        break;
      }
      case SweepMechanism::kNpiInit: {
        DPSBM_ASSIGN_OR_RETURN(
            out, PrivatePowerWithInit(a, {eps, delta, spec.n_steps}, solver,
                                      mseed, spec.sensitivity));
        break;
      }
    }
    DPSBM_ASSIGN_OR_RETURN(res.overlap, OverlapRate(out.labels, truth));
    res.bottom = out.bottom;
    return absl::OkStatus();
  };
  res.status = run();
  return res;
}

// Theoretical overlap floor for a sweep row, when the mechanism has one.
inline std::optional<std::pair<double, double>> SweepBoundFloor(
    const SweepSpec& spec, const SweepRecord& rec, SweepMechanism m) {
  auto floor_of = [&](absl::StatusOr<double> dist, BoundMechanism bm,
                      std::optional<int64_t> count)
      -> std::optional<std::pair<double, double>> {
    if (!dist.ok()) return std::nullopt;
    absl::StatusOr<double> f = OverlapLowerBound(*dist, bm, count,
                                                 spec.constants);
    if (!f.ok()) return std::nullopt;
    return std::make_pair(*dist, *f);
  };
  switch (m) {
    case SweepMechanism::kRr:
      return floor_of(RrDistanceBound(rec.n, spec.p, spec.q, rec.eps, spec.eta),
                      BoundMechanism::kRr, std::nullopt);
    case SweepMechanism::kSubsample: {
      absl::StatusOr<SubsampleConfig> c = SubsampleConfig::Compute(
          rec.n, rec.eps, rec.delta, {spec.aggregator, spec.max_subgraphs});
      if (!c.ok()) return std::nullopt;
      // Expected edge counts of the SBM.
      const double half = rec.n / 2.0;
      const double inter = half * half * spec.q;
      const double intra = 2.0 * half * (half - 1.0) / 2.0 * spec.p;
      return floor_of(
          SubsampleDistanceBound(rec.n, spec.p, spec.q, c->q_s,
                                 std::llround(intra + inter),
                                 std::llround(inter), spec.eta),
          BoundMechanism::kSubsample, c->m);
    }
    case SweepMechanism::kNpi:
    case SweepMechanism::kNpiInit: {
      const int steps =
          m == SweepMechanism::kNpi ? spec.n_steps : spec.n_steps + 1;
      absl::StatusOr<std::optional<double>> d = NpiDistanceBound(
          rec.n, spec.p, spec.q, rec.sigma, steps, spec.eta, spec.constants);
      if (!d.ok() || !d->has_value()) return std::nullopt;
      return floor_of(**d, BoundMechanism::kNpi, std::nullopt);
    }
    case SweepMechanism::kSpectral:
      return std::nullopt;
  }
  return std::nullopt;
}

struct SweepResult {
  std::vector<SweepRecord> records;
  // Rows where the overlap floor exceeds mean + 2 stderr.
  std::vector<std::string> bound_violations;
  std::string bounds_csv;
};

inline absl::StatusOr<SweepResult> RunSweep(const SweepSpec& spec) {
  DPSBM_RETURN_IF_ERROR(spec.Validate());
  SweepResult result;

  // Every mechanism seed in the sweep must be distinct.
  std::set<uint64_t> seen;
  for (SweepMechanism m : spec.mechanisms) {
    for (int n : spec.n) {
      for (double eps : spec.eps) {
        for (int t = 0; t < spec.trials; ++t) {
          if (!seen.insert(internal::MechanismSeed(spec.seed, m, eps, n, t))
                   .second) {
            return absl::InternalError("per-trial seed collision");
          }
        }
      }
    }
  }

  std::string bounds_csv =
      "mechanism,n,eps,delta,sigma,distance_bound,overlap_floor,"
      "mean_overlap,stderr,floor_exceeds_measurement\n";
  for (SweepMechanism m : spec.mechanisms) {
    for (int n : spec.n) {
      for (double eps : spec.eps) {
        const auto start = std::chrono::steady_clock::now();
        SweepRecord rec;
        rec.mechanism = MechanismName(m);
        rec.n = n;
        rec.eps = eps;
        rec.delta = spec.delta.Resolve(n);
        rec.trials = spec.trials;
        absl::StatusOr<double> noise =
            SweepNoiseScale(spec, m, n, eps, rec.delta);
        if (!noise.ok()) {
          rec.sigma = std::numeric_limits<double>::quiet_NaN();
          rec.status = absl::StrCat("skipped: ", noise.status().message());
        } else {
          rec.sigma = *noise;
          const std::vector<internal::TrialResult> trials =
              internal::RunIndexed(spec.trials, spec.workers, [&](int t) {
                return RunSweepTrial(spec, m, n, eps, rec.delta, *noise, t);
              });
          internal::Summarize(trials, rec);
        }
        rec.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        if (rec.status == "ok") {
          if (auto fl = SweepBoundFloor(spec, rec, m); fl.has_value()) {
            const bool exceeds =
                fl->second > rec.mean_overlap + 2.0 * rec.stderr_overlap;
            absl::StrAppend(
                &bounds_csv, rec.mechanism, ",", n, ",",
                internal::CsvNumber(eps), ",", internal::CsvNumber(rec.delta),
                ",", internal::CsvNumber(rec.sigma), ",",
                internal::CsvNumber(fl->first), ",",
                internal::CsvNumber(fl->second), ",",
                internal::CsvNumber(rec.mean_overlap), ",",
                internal::CsvNumber(rec.stderr_overlap), ",",
                exceeds ? 1 : 0, "\n");
            if (exceeds) {
              result.bound_violations.push_back(absl::StrFormat(
                  "%s n=%d eps=%g: floor %.4f > mean %.4f + 2 stderr",
                  rec.mechanism, n, eps, fl->second, rec.mean_overlap));
            }
          }
        }
        result.records.push_back(std::move(rec));
      }
    }
  }
  result.bounds_csv = std::move(bounds_csv);
  if (!spec.out.empty()) {
    DPSBM_RETURN_IF_ERROR(WriteTextFile(spec.out, SweepCsv(result.records)));
  }
  if (!spec.bounds_out.empty()) {
    DPSBM_RETURN_IF_ERROR(WriteTextFile(spec.bounds_out, result.bounds_csv));
  }
  return result;
}

// ---------------------------------------------------------------------------
// JSON sweep specification.

inline absl::StatusOr<SweepSpec> SweepSpecFromJson(const nlohmann::json& j) {
  SweepSpec s;
  try {
    if (!j.is_object()) {
      return absl::InvalidArgumentError("sweep spec must be a JSON object");
    }
    static const std::set<std::string> kKeys = {
        "mechanisms", "mechanism", "n",          "eps",       "p",
        "q",          "delta",     "delta_rule", "trials",    "n_steps",
        "seed",       "aggregator", "sensitivity", "max_subgraphs",
        "workers",    "out",       "bounds_out", "eta",       "tol",
        "max_iters"};
    for (const auto& [key, value] : j.items()) {
      if (!kKeys.count(key)) {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown sweep spec key '", key, "'"));
      }
    }
    auto mechs = j.contains("mechanisms") ? j.at("mechanisms")
                 : j.contains("mechanism") ? j.at("mechanism")
                                           : nlohmann::json();
    if (!mechs.is_null()) {
      if (mechs.is_string()) mechs = nlohmann::json::array({mechs});
      s.mechanisms.clear();
      for (const auto& m : mechs) {
        DPSBM_ASSIGN_OR_RETURN(SweepMechanism v,
                               ParseMechanism(m.get<std::string>()));
        s.mechanisms.push_back(v);
      }
    }
    if (j.contains("n")) {
      const auto& v = j.at("n");
      s.n = v.is_array() ? v.get<std::vector<int>>()
                         : std::vector<int>{v.get<int>()};
    }
    if (j.contains("eps")) {
      const auto& v = j.at("eps");
      s.eps = v.is_array() ? v.get<std::vector<double>>()
                           : std::vector<double>{v.get<double>()};
    }
    if (j.contains("p")) s.p = j.at("p").get<double>();
    if (j.contains("q")) s.q = j.at("q").get<double>();
    if (j.contains("delta") && j.contains("delta_rule")) {
      return absl::InvalidArgumentError(
          "give either delta or delta_rule, not both");
    }
    if (j.contains("delta")) {
      s.delta = DeltaRule{false, j.at("delta").get<double>()};
    }
    if (j.contains("delta_rule")) {
      DPSBM_ASSIGN_OR_RETURN(
          s.delta, ParseDeltaRule(j.at("delta_rule").get<std::string>()));
    }
    if (j.contains("trials")) s.trials = j.at("trials").get<int>();
    if (j.contains("n_steps")) s.n_steps = j.at("n_steps").get<int>();
    if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
    if (j.contains("aggregator")) {
      DPSBM_ASSIGN_OR_RETURN(
          s.aggregator, ParseAggregator(j.at("aggregator").get<std::string>()));
    }
    if (j.contains("sensitivity")) {
      DPSBM_ASSIGN_OR_RETURN(
          s.sensitivity,
          ParseSensitivityRule(j.at("sensitivity").get<std::string>()));
    }
    if (j.contains("max_subgraphs")) {
      s.max_subgraphs = j.at("max_subgraphs").get<int64_t>();
    }
    if (j.contains("workers")) s.workers = j.at("workers").get<int>();
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
    if (j.contains("bounds_out")) {
      s.bounds_out = j.at("bounds_out").get<std::string>();
    }
    if (j.contains("eta")) s.eta = j.at("eta").get<double>();
    if (j.contains("tol")) s.solver.tol = j.at("tol").get<double>();
    if (j.contains("max_iters")) {
      s.solver.max_iters = j.at("max_iters").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed sweep spec: ", e.what()));
  }
  DPSBM_RETURN_IF_ERROR(s.Validate());
  return s;
}

inline absl::StatusOr<SweepSpec> LoadSweepSpec(const std::string& path) {
  std::ifstream f(path);
  if (!f) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << f.rdbuf();
  nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("invalid JSON in ", path));
  }
  return SweepSpecFromJson(j);
}

// ---------------------------------------------------------------------------
// Political Blogs.

enum class PolblogsVariant {
  kPrivateInit,   // noisy power from a privately chosen start
  kFixedInit,     // noisy power from the noiseless second eigenvector of A
  kGraphPerturb,  // randomized response + spectral clustering
};

inline const char* VariantName(PolblogsVariant v) {
  switch (v) {
    case PolblogsVariant::kPrivateInit:
      return "private_init";
    case PolblogsVariant::kFixedInit:
      return "fixed_init";
    case PolblogsVariant::kGraphPerturb:
      return "graph_perturb";
  }
  return "unknown";
}

inline absl::StatusOr<PolblogsVariant> ParseVariant(absl::string_view s) {
  for (PolblogsVariant v :
       {PolblogsVariant::kPrivateInit, PolblogsVariant::kFixedInit,
        PolblogsVariant::kGraphPerturb}) {
    if (s == VariantName(v)) return v;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown variant '", s,
      "' (expected private_init, fixed_init or graph_perturb)"));
}

struct PolblogsSpec {
  std::string edges_path;
  std::string labels_path;
  std::vector<double> eps = DefaultEpsGrid();
  DeltaRule delta;
  int n_steps = 3;
  int trials = 100;
  std::vector<PolblogsVariant> variants = {PolblogsVariant::kPrivateInit,
                                           PolblogsVariant::kFixedInit,
                                           PolblogsVariant::kGraphPerturb};
  SensitivityRule sensitivity = SensitivityRule::kAdaptive;
  uint64_t seed = 1;
  int workers = 1;
  SolverConfig solver;
  std::string out;
};

struct PolblogsData {
  AdjacencyMatrix graph;
  LabelVector truth;
};

inline absl::StatusOr<PolblogsData> LoadPolblogs(const std::string& edges,
                                                 const std::string& labels) {
  // Labels cover every node, including isolated ones the edge list omits.
  // The label file fixes the index base for both files: a 1-based file
  // fails to load as 0-based because node 0 has no label.
  PolblogsData d;
  EdgeListOptions options;
  options.index_base = IndexBase::kZero;
  absl::StatusOr<LabelVector> zero_based =
      LoadLabels(labels, std::nullopt, {IndexBase::kZero});
  if (zero_based.ok()) {
    d.truth = *std::move(zero_based);
  } else {
    options.index_base = IndexBase::kOne;
    DPSBM_ASSIGN_OR_RETURN(d.truth,
                           LoadLabels(labels, std::nullopt, {IndexBase::kOne}));
  }
  options.min_nodes = d.truth.size();
  DPSBM_ASSIGN_OR_RETURN(d.graph, LoadEdgeList(edges, options));
  if (d.graph.size() != d.truth.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "edge list has %d nodes but the label file has %d", d.graph.size(),
        d.truth.size()));
  }
  return d;
}

struct PolblogsBaselines {
  // Fixed-init pipeline with sigma = 0.
  double power = 0.0;
  // Fiedler-vector clustering of the unperturbed graph.
  double spectral_laplacian = 0.0;
  std::vector<double> init;  // noiseless second eigenvector of A
};

inline absl::StatusOr<PolblogsBaselines> ComputePolblogsBaselines(
    const PolblogsData& data, int n_steps, const SolverConfig& solver) {
  PolblogsBaselines b;
  DPSBM_ASSIGN_OR_RETURN(b.init,
                         NoisySecondEigenvector(data.graph, 0.0, solver, 0));
  NoisyPowerOptions o;
  o.init = b.init;
  DPSBM_ASSIGN_OR_RETURN(const MechanismOutcome p,
                         NoisyPowerIteration(data.graph, 0.0, n_steps, 0, o));
  DPSBM_ASSIGN_OR_RETURN(b.power, OverlapRate(p.labels, data.truth));
  DPSBM_ASSIGN_OR_RETURN(const MechanismOutcome s,
                         SpectralCluster(data.graph, solver));
  DPSBM_ASSIGN_OR_RETURN(b.spectral_laplacian,
                         OverlapRate(s.labels, data.truth));
  return b;
}

// Trial of one variant on the fixed dataset.
inline internal::TrialResult RunPolblogsTrial(
    const PolblogsSpec& spec, const PolblogsData& data,
    const PolblogsBaselines& base, PolblogsVariant v, double eps,
    double delta, int trial) {
  internal::TrialResult res;
  auto run = [&]() -> absl::Status {
    uint64_t s = DeriveSeed(spec.seed, 0x706f6cULL);
    s = DeriveSeed(DeriveSeed(DeriveSeed(s, static_cast<uint64_t>(v)),
                              internal::EpsKey(eps)),
                   trial);
    SolverConfig solver = spec.solver;
    solver.seed = DeriveSeed(s, 99);
    MechanismOutcome out;
    switch (v) {
      case PolblogsVariant::kPrivateInit: {
        DPSBM_ASSIGN_OR_RETURN(
            out, PrivatePowerWithInit(data.graph, {eps, delta, spec.n_steps},
                                      solver, s, spec.sensitivity));
        break;
      }
      case PolblogsVariant::kFixedInit: {
        DPSBM_ASSIGN_OR_RETURN(const double sigma,
                               SigmaForBudget(eps, delta, spec.n_steps));
        NoisyPowerOptions o;
        o.rule = spec.sensitivity;
        o.init = base.init;
        DPSBM_ASSIGN_OR_RETURN(
            out, NoisyPowerIteration(data.graph, sigma, spec.n_steps, s, o));
        break;
      }
      case PolblogsVariant::kGraphPerturb: {
        DPSBM_ASSIGN_OR_RETURN(out,
                               PerturbAndCluster(data.graph, eps, solver, s));
        break;
      }
    }
    DPSBM_ASSIGN_OR_RETURN(res.overlap, OverlapRate(out.labels, data.truth));
    return absl::OkStatus();
  };
  res.status = run();
  return res;
}

// Rows: one per (variant, eps), preceded by two noiseless baseline rows.
inline absl::StatusOr<std::vector<SweepRecord>> RunPolblogs(
    const PolblogsSpec& spec, const PolblogsData& data) {
  if (spec.trials < 1 || spec.n_steps < 1 || spec.workers < 1) {
    return absl::InvalidArgumentError(
        "trials, n_steps and workers must be >= 1");
  }
  const int n = data.graph.size();
  DPSBM_ASSIGN_OR_RETURN(const PolblogsBaselines base,
                         ComputePolblogsBaselines(data, spec.n_steps,
                                                  spec.solver));
  std::vector<SweepRecord> rows;
  for (auto [name, value] : {std::pair{"baseline_power", base.power},
                             std::pair{"baseline_spectral",
                                       base.spectral_laplacian}}) {
    SweepRecord r;
    r.mechanism = name;
    r.n = n;
    r.eps = std::numeric_limits<double>::infinity();
    r.delta = 0.0;
    r.sigma = 0.0;
    r.trials = 1;
    r.mean_overlap = value;
    r.stderr_overlap = 0.0;
    rows.push_back(r);
  }
  for (PolblogsVariant v : spec.variants) {
    for (double eps : spec.eps) {
      const auto start = std::chrono::steady_clock::now();
      SweepRecord rec;
      rec.mechanism = VariantName(v);
      rec.n = n;
      rec.eps = eps;
      rec.delta = spec.delta.Resolve(n);
      rec.trials = spec.trials;
      switch (v) {
        case PolblogsVariant::kPrivateInit: {
          absl::StatusOr<double> s =
              SigmaForBudget(eps, rec.delta, spec.n_steps + 1);
          rec.sigma = s.ok() ? *s : std::numeric_limits<double>::quiet_NaN();
          break;
        }
        case PolblogsVariant::kFixedInit: {
          absl::StatusOr<double> s =
              SigmaForBudget(eps, rec.delta, spec.n_steps);
          rec.sigma = s.ok() ? *s : std::numeric_limits<double>::quiet_NaN();
          break;
        }
        case PolblogsVariant::kGraphPerturb:
          rec.sigma = FlipProbability(eps);
          break;
      }
      const std::vector<internal::TrialResult> trials =
          internal::RunIndexed(spec.trials, spec.workers, [&](int t) {
            return RunPolblogsTrial(spec, data, base, v, eps, rec.delta, t);
          });
      internal::Summarize(trials, rec);
      rec.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      rows.push_back(std::move(rec));
    }
  }
  if (!spec.out.empty()) {
    DPSBM_RETURN_IF_ERROR(WriteTextFile(spec.out, SweepCsv(rows)));
  }
  return rows;
}

}  // namespace dpsbm

#endif  // DPSBM_EXPERIMENT_H_
