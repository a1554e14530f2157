#pragma once

#include <vector>

#include "gsopt/objectives.hpp"

namespace gsopt {

struct OracleResult {
  double best_energy;
  std::vector<int> best_labels;  // lexicographically first optimum
  // Best energy among feasible states only; equals best_energy whenever the
  // penalty weight makes the unconstrained optimum feasible.
  double best_feasible_energy;
  std::vector<int> best_feasible_labels;
  bool has_feasible;
};

// Exhaustive enumeration of all K^n label vectors. Throws when the state
// count exceeds `max_states` (default 2^24).
OracleResult brute_force_optimum(const Objective& obj,
                                 long long max_states = 1 << 24);

}  // namespace gsopt
