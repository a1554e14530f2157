#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsopt/baselines.hpp"
#include "gsopt/objectives.hpp"
#include "gsopt/solver.hpp"
#include "gsopt/testfunctions.hpp"

namespace gsopt {

enum class SolverKind { gso, evogso, sa, ga, greedy, md_greedy };

const char* to_string(SolverKind k);

struct TfConfig {
  TestFunction function;
  double lr = 0.01;
  int steps = 60000;
  int cycle = 1000;
  int population = 64;
  double u_inverse = 0.25;
};

struct ExperimentConfig {
  // Problem source: exactly one of graph_path / sk_n>0 / tf.
  std::string graph_path;
  int sk_n = 0;
  std::optional<TfConfig> tf;

  ObjectiveSpec objective;

  SolverKind solver = SolverKind::gso;
  GsoConfig gso;
  EvoConfig evo;
  SaConfig sa;
  GaConfig ga;
  GreedyOrder greedy_order = GreedyOrder::by_id;

  int instances = 1;
  uint64_t seed = 0;  // master seed; per-instance seeds derive from it

  // Optional one-parameter sweep; identical seeds across values.
  std::string sweep_param;
  std::vector<double> sweep_values;

  std::string out_dir;  // empty = no persistence
  int workers = 1;      // instance-level pool; must not affect results
};

// Per-instance result. wall_seconds deliberately stays out of the persisted
// JSON (it goes to a sidecar timings.csv) so records are byte-reproducible.
struct InstanceRecord {
  int index = 0;
  uint64_t run_seed = 0;
  bool feasible = false;
  double energy = 0.0;
  double metric = 0.0;
  int effective_states = 0;  // distinct labels used (communities for modularity)
  std::vector<int> labels;
  std::vector<double> trajectory;  // every 10th step plus the last
  int steps = 0;
  double wall_seconds = 0.0;
};

struct Summary {
  double mean = 0.0;
  double sem = 0.0;
  bool flagged = false;  // single value: SEM undefined, reported as 0
};

// mean and standard error of the mean (n-1 divisor).
Summary summarize(std::span<const double> values);

struct ReportRow {
  std::string digest;
  std::string label;  // sweep "param=value" or tf variant, else solver name
  std::string sweep_param;
  double sweep_value = 0.0;
  int instances = 0;
  int feasible_count = 0;
  std::vector<double> metrics;  // per-instance best metric (feasible only)
  double mean = 0.0;
  double sem = 0.0;
  bool sem_flagged = false;
  double best = 0.0;  // direction-aware best-of-instances
  double mean_wall = 0.0;
};

struct ExperimentResult {
  std::vector<ReportRow> rows;  // one per sweep value (or variant, or one)
  std::vector<std::vector<InstanceRecord>> records;  // parallel to rows
};

// 16-hex digest over the semantically meaningful fields (problem, objective,
// solver parameters, seeds, instance count, applied sweep value). Output
// paths and worker counts do not participate.
std::string config_digest(const ExperimentConfig& cfg,
                          const std::string& sweep_param, double sweep_value);

// Sets the named parameter (CLI flag spelling, e.g. "ncoms", "lr",
// "u-inverse") on the embedded configs; throws on unknown names.
void apply_sweep_value(ExperimentConfig& cfg, const std::string& param,
                       double value);

// Runs instances through a worker pool (deterministic regardless of
// cfg.workers), aggregates, and persists to cfg.out_dir when set:
// records/instance_NNNN.json + aggregate.csv + timings.csv (+ trials.csv
// for test functions).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Re-persist without re-running (also used internally by run_experiment).
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res);

// Human-readable table for the CLI.
std::string format_report(const ExperimentConfig& cfg,
                          const ExperimentResult& res);

}  // namespace gsopt
