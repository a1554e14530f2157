#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "gsopt/objectives.hpp"
#include "gsopt/relaxation.hpp"

namespace gsopt {

enum class OptimizerKind { sgd, adam };

struct GsoConfig {
  int n_replicas = 128;
  double learning_rate = 0.01;
  int max_steps = 10000;
  TemperatureSchedule schedule;  // total_steps is overridden with max_steps
  uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::sgd;
  // Performance knob only; results must not depend on it.
  int n_threads = 1;
};

enum class SubstitutionMode { best_copy, best_noise, reinit };

struct EvoConfig {
  // Selective substitution: every t1 steps the worst floor(N_bs * u_inverse)
  // replicas take the best replicas' parameters. 0 disables.
  int t1 = 100;
  double u_inverse = 0.125;
  SubstitutionMode substitution = SubstitutionMode::best_copy;
  // Substitution only fires while the population fitness variance exceeds
  // this (no point replacing clones).
  double variance_threshold = 1e-6;

  // GA phase: every t2 steps after the first convergence. 0 disables.
  int t2 = 0;
  double mutation_rate = 0.001;
  double elite_ratio = 0.0625;
  double crossover_rate = 0.8;

  // Convergence detection; tol < 0 means the adaptive default
  // 1e-6*|current best| + 1e-9.
  int convergence_window = 500;
  double convergence_tol = -1.0;

  bool enabled() const { return t1 > 0 || t2 > 0; }
};

struct RunResult {
  // Best feasible solution ever decoded (modularity/sk are always feasible).
  // When no feasible solution was found: feasible=false, labels empty,
  // best_energy/+metric meaningless (+inf/0) — never a silent infeasible
  // answer.
  std::vector<int> best_labels;
  double best_energy = std::numeric_limits<double>::infinity();
  double best_metric = 0.0;
  bool feasible = false;

  // Running best penalized hard energy per step (finite even before the
  // first feasible decode); the optimization signal used for convergence
  // detection and evolution fitness.
  std::vector<double> trajectory;
  int steps_run = 0;
  double wall_seconds = 0.0;
  uint64_t seed = 0;
};

// True when the running-best energy improved by less than tol over the last
// `window` steps; trajectories shorter than `window` never count as
// converged.
bool detect_convergence(std::span<const double> trajectory, int window,
                        double tol);
inline double default_convergence_tol(double current_best) {
  return 1e-6 * std::abs(current_best) + 1e-9;
}

// Pairs each of the floor(n * u_inverse) worst replicas with the
// corresponding best replica (k-th worst <- k-th best). Ties break by index
// for determinism. Minimization: "worst" = largest fitness.
std::vector<std::pair<int, int>> substitution_plan(
    std::span<const double> fitness, double u_inverse);

// Overwrites the worst replicas' parameters in place per `mode`; no-op when
// the fitness variance is at or below variance_threshold. rng feeds the
// best_noise perturbation (sigma 0.1) and reinit redraws.
void selective_substitution(ThetaPopulation& theta,
                            std::span<const double> fitness, double u_inverse,
                            SubstitutionMode mode, double variance_threshold,
                            Rng& rng);

struct GaPhaseResult {
  // Output slot i (i < elite_sources.size()) holds the unchanged parameters
  // of input replica elite_sources[i]; remaining slots are offspring.
  std::vector<int> elite_sources;
};

// Roulette selection on w = max(f) - f + eps, single-point crossover on the
// flattened parameter vector, per-entry mutation that redraws from the
// Normal(0,1) initializer, elitism. Population size preserved.
GaPhaseResult ga_phase(ThetaPopulation& theta, std::span<const double> fitness,
                       const EvoConfig& evo, Rng& rng);

// Batched gradient-based search: sample -> relaxed energy -> backprop ->
// update, tracking the best feasible decode across all replicas and steps.
// Stops at max_steps or on convergence.
RunResult gso_run(const Objective& obj, const GsoConfig& cfg);

// gso_run plus the evolutionary operators. With the GA phase enabled the
// run continues to max_steps (the GA keeps reshuffling the population);
// substitution-only runs stop on convergence like gso_run. With both
// operators disabled this is bit-identical to gso_run.
RunResult evo_gso_run(const Objective& obj, const GsoConfig& cfg,
                      const EvoConfig& evo);

}  // namespace gsopt
