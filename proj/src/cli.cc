// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "capfac/cli.h"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "capfac/alloc_ext.h"
#include "capfac/audit.h"
#include "capfac/bounds.h"
#include "capfac/core_model.h"
#include "capfac/errors.h"
#include "capfac/json_io.h"
#include "capfac/mechanisms.h"
#include "capfac/welfare.h"

namespace capfac {
namespace {

struct RunConfig {
  std::string instance_path;
  std::string mechanism_path;
  std::string out_path;
  std::string site;
  std::string epsilon;
  std::string others = "arbitrary";
  int n = 0;
  int k = 0;
  int q = 6;
  // The demo grid must contain 1/2 and 3/4.
  int demo_q = 4;
  int refine = 0;
  int threads = 1;
  int samples = 100;
  std::uint64_t budget = DefaultBudget();
  std::uint64_t seed = 1;
  bool pretty = false;
};

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// A path, or inline JSON when the argument starts with '{'.
Json LoadJson(const std::string& source) {
  if (!source.empty() && source.front() == '{') return ParseJsonText(source);
  return ParseJsonText(ReadText(source));
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& out)
      : config_(config), out_(out) {}

  void Emit(const std::string& text) const {
    if (config_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(config_.out_path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot write " + config_.out_path);
    file << text;
  }
  void Emit(const Json& value) const {
    Emit(DumpJson(value, config_.pretty ? 2 : -1));
  }

  Instance LoadInstance() const {
    Require(!config_.instance_path.empty(), "--instance is required");
    return InstanceFromJson(LoadJson(config_.instance_path));
  }
  MechanismSpec LoadMechanism() const {
    Require(!config_.mechanism_path.empty(), "--mechanism is required");
    return MechanismFromJson(LoadJson(config_.mechanism_path));
  }
  AuditOptions Audit() const {
    AuditOptions options;
    options.budget = config_.budget;
    options.threads = config_.threads;
    Require(config_.others == "arbitrary" || config_.others == "truthful",
            "--others must be arbitrary or truthful");
    options.others = config_.others == "truthful" ? OthersMode::kTruthful
                                                  : OthersMode::kArbitrary;
    return options;
  }
  std::optional<Rational> Epsilon() const {
    if (config_.epsilon.empty()) return std::nullopt;
    return ParseRational(config_.epsilon);
  }

  int Equilibrium() const {
    Require(!config_.site.empty(), "--site is required");
    const Instance instance = LoadInstance();
    const Location s = Location::Parse(config_.site);
    Json out = ToJson(ResolveEquilibrium(instance, s));
    out["s"] = ToJson(s);
    Emit(out);
    return kExitOk;
  }

  int RunMechanism() const {
    const Instance instance = LoadInstance();
    const MechanismSpec mechanism = LoadMechanism();
    const Location s = Evaluate(mechanism, instance.locations());
    Emit(Json{{"s", ToJson(s)}, {"welfare", ToJson(Welfare(instance, s))}});
    return kExitOk;
  }

  int Optimal() const {
    Emit(ToJson(OptimalLocation(LoadInstance())));
    return kExitOk;
  }

  int Ratio() const {
    Emit(ToJson(RatioReport(LoadInstance(), LoadMechanism())));
    return kExitOk;
  }

  int AuditDicCommand() const {
    const MechanismSpec mechanism = LoadMechanism();
    const GridSpec grid(config_.q);
    const AuditVerdict verdict =
        AuditDic(mechanism, config_.n, config_.k, grid, Audit());
    Json out{{"mechanism", MechanismName(mechanism)},
             {"n", config_.n},
             {"k", config_.k},
             {"q", config_.q},
             {"others", config_.others}};
    out.update(ToJson(verdict));
    Emit(out);
    return verdict.passed ? kExitOk : kExitAuditFailed;
  }

  int AuditUncompromising() const {
    const MechanismSpec mechanism = LoadMechanism();
    const UncompromisingVerdict verdict = IsUncompromisingOnGrid(
        AsFunction(mechanism), config_.n, GridSpec(config_.q), config_.budget);
    Json out{{"mechanism", MechanismName(mechanism)},
             {"n", config_.n},
             {"q", config_.q}};
    out.update(ToJson(verdict));
    Emit(out);
    return verdict.passed ? kExitOk : kExitAuditFailed;
  }

  int RatioCurveCommand() const {
    SearchOptions options;
    options.budget = config_.budget;
    options.threads = config_.threads;
    options.refine_steps = config_.refine;
    Emit(CurveToCsv(RatioCurve(config_.n, GridSpec(config_.q), options)));
    return kExitOk;
  }

  int Misreport() const {
    Emit(ToJson(BuildOptimalMisreport(config_.n, config_.k, Epsilon())));
    return kExitOk;
  }

  int Cluster() const {
    const MechanismSpec mechanism = config_.mechanism_path.empty()
                                        ? MechanismSpec(MedianMechanism{})
                                        : LoadMechanism();
    const Rational eps = Epsilon().value_or(DefaultClusterEpsilon());
    Json out = ToJson(ClusterLowerBound(mechanism, config_.n, config_.k, eps));
    out["mechanism"] = MechanismName(mechanism);
    Emit(out);
    return kExitOk;
  }

  int Impossibility() const {
    const std::vector<Location> pair{Location(1, 2), Location(3, 4)};
    const MechanismFn median = AsFunction(MechanismSpec(MedianMechanism{}));
    Json replays = Json::array();
    for (const auto& domain : {pair, GridSpec(config_.demo_q).points()}) {
      const AllocationTable table =
          ClosestReportersTable(median, config_.n, config_.k, domain);
      Json entry{{"mechanism", "closest_reporters_median"},
                 {"domain", ToJson(std::span<const Location>(domain))},
                 {"anonymity", ToJson(CheckAllocationAnonymous(table))},
                 {"replay", ToJson(ReplayImpossibility(table))},
                 {"audit", ToJson(AuditDicAlloc(table))}};
      replays.push_back(entry);
    }
    Json out{{"n", config_.n}, {"k", config_.k}, {"replays", replays}};
    out["sweep"] = ToJson(SweepAnonymousAllocations(
        config_.n, config_.k, pair, config_.budget, config_.threads));
    out["revelation_gap"] =
        ToJson(
        CheckRevelationGap(config_.n, config_.k, GridSpec(config_.demo_q)));
    Emit(out);
    return kExitOk;
  }

  int Equivalence() const {
    const EquivalenceSummary summary =
        EquivalenceExperiment(config_.n, config_.k, GridSpec(config_.q),
                              config_.samples, config_.seed, Audit());
    Json out{{"n", config_.n},
             {"k", config_.k},
             {"q", config_.q},
             {"seed", config_.seed}};
    out.update(ToJson(summary));
    Emit(out);
    return summary.anomalies == 0 ? kExitOk : kExitAuditFailed;
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig config;
  CLI::App app{"Capacity-constrained facility location: mechanisms, audits "
               "and bounds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("-i,--instance", config.instance_path,
                    "Instance JSON file");
  };
  auto add_mechanism = [&](CLI::App* cmd) {
    cmd->add_option("-m,--mechanism", config.mechanism_path,
                    "Mechanism JSON file");
  };
  auto add_shape = [&](CLI::App* cmd, bool with_k) {
    cmd->add_option("-n", config.n, "Number of agents")->required();
    if (with_k) cmd->add_option("-k", config.k, "Capacity")->required();
  };
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("-q,--grid", config.q, "Grid denominator")
        ->check(CLI::PositiveNumber);
  };
  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget", config.budget, "Enumeration budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", config.threads,
                    "Worker threads (< 1: all cores)");
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-o,--out", config.out_path, "Output file");
    cmd->add_flag("--pretty", config.pretty, "Indent JSON output");
  };

  auto* equilibrium =
      app.add_subcommand("equilibrium", "Served set and utilities at a site");
  add_instance(equilibrium);
  equilibrium->add_option("-s,--site", config.site, "Facility site");
  add_common(equilibrium);

  auto* run = app.add_subcommand("run-mechanism", "Mechanism output");
  add_instance(run);
  add_mechanism(run);
  add_common(run);

  auto* optimal = app.add_subcommand("optimal", "Welfare-optimal site");
  add_instance(optimal);
  add_common(optimal);

  auto* ratio = app.add_subcommand("ratio", "Welfare ratio on one instance");
  add_instance(ratio);
  add_mechanism(ratio);
  add_common(ratio);

  auto* audit = app.add_subcommand("audit-dic", "Incentive audit on a grid");
  add_mechanism(audit);
  add_shape(audit, true);
  add_grid(audit);
  add_budget(audit);
  audit->add_option("--others", config.others,
                    "arbitrary (default) or truthful (exploration only)");
  add_common(audit);

  auto* uncompromising = app.add_subcommand(
      "audit-uncompromising", "Uncompromising check on a grid");
  add_mechanism(uncompromising);
  add_shape(uncompromising, false);
  add_grid(uncompromising);
  add_budget(uncompromising);
  add_common(uncompromising);

  auto* curve = app.add_subcommand("ratio-curve", "Bound curves as CSV");
  add_shape(curve, false);
  add_grid(curve);
  add_budget(curve);
  curve->add_option("--refine", config.refine, "Refinement rounds")
      ->check(CLI::NonNegativeNumber);
  add_common(curve);

  auto* misreport = app.add_subcommand(
      "theorem41", "Profitable misreport against the optimal mechanism");
  add_shape(misreport, true);
  misreport->add_option("--epsilon", config.epsilon, "Perturbation");
  add_common(misreport);

  auto* cluster =
      app.add_subcommand("theorem43", "Clustered lower-bound construction");
  add_mechanism(cluster);
  add_shape(cluster, true);
  cluster->add_option("--epsilon", config.epsilon, "Cluster width");
  add_common(cluster);

  auto* impossibility = app.add_subcommand(
      "impossibility-demo", "Anonymous location-allocation impossibility");
  config.n = 3;
  config.k = 2;
  impossibility->add_option("-n", config.n, "Number of agents");
  impossibility->add_option("-k", config.k, "Capacity");
  impossibility->add_option("-q,--grid", config.demo_q, "Grid denominator")
      ->check(CLI::PositiveNumber);
  add_budget(impossibility);
  add_common(impossibility);

  auto* equivalence = app.add_subcommand(
      "equivalence", "Random GMMs against random compromising tables");
  equivalence->add_option("-n", config.n, "Number of agents");
  equivalence->add_option("-k", config.k, "Capacity");
  add_grid(equivalence);
  add_budget(equivalence);
  equivalence->add_option("--samples", config.samples, "Samples per side")
      ->check(CLI::NonNegativeNumber);
  equivalence->add_option("--seed", config.seed, "Sampler seed");
  add_common(equivalence);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  const Runner runner(config, out);
  try {
    if (*equilibrium) return runner.Equilibrium();
    if (*run) return runner.RunMechanism();
    if (*optimal) return runner.Optimal();
    if (*ratio) return runner.Ratio();
    if (*audit) return runner.AuditDicCommand();
    if (*uncompromising) return runner.AuditUncompromising();
    if (*curve) return runner.RatioCurveCommand();
    if (*misreport) return runner.Misreport();
    if (*cluster) return runner.Cluster();
    if (*impossibility) return runner.Impossibility();
    if (*equivalence) return runner.Equivalence();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace capfac
