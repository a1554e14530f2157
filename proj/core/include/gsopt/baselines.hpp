#pragma once

#include <cstdint>
#include <vector>

#include "gsopt/objectives.hpp"
#include "gsopt/solver.hpp"

namespace gsopt {

struct SaConfig {
  double t_init = 2.0;
  double t_final = 0.01;
  int sweeps = 3000;  // one sweep = n_nodes single-site proposals
  uint64_t seed = 0;
};

// Metropolis with geometric cooling across sweeps. Proposals flip one site
// to a uniformly random other label; deltas come from the objective's
// incremental LocalMoveState.
RunResult simulated_annealing(const Objective& obj, const SaConfig& cfg);

struct GaConfig {
  int population = 64;
  double crossover_rate = 0.8;
  double mutation_rate = 0.001;
  double elite_ratio = 0.125;
  int generations = 500;
  uint64_t seed = 0;
};

// Plain GA over label strings (not over relaxation parameters): roulette
// selection, single-point crossover, per-site mutation to a random other
// label, elitism. For mis/mvc the result may legitimately be infeasible at
// every generation; that is reported, not hidden.
RunResult label_ga(const Objective& obj, const GaConfig& cfg);

enum class GreedyOrder { by_id, random };

// Scan in the given order, take a node iff none of its neighbors is taken.
std::vector<int> greedy_mis(const Graph& g, GreedyOrder order,
                            uint64_t seed = 0);

// Repeatedly take a minimum-degree node of the residual graph (ties to the
// lowest id) and delete its closed neighborhood. V minus the result is a
// vertex cover.
std::vector<int> md_greedy_mis(const Graph& g);

}  // namespace gsopt
