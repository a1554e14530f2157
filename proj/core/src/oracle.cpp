#include "gsopt/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace gsopt {

OracleResult brute_force_optimum(const Objective& obj, long long max_states) {
  int n = obj.n_nodes();
  int k = obj.n_states();
  double states = std::pow((double)k, (double)n);
  if (states > (double)max_states)
    throw std::runtime_error("brute force: state space too large");

  bool constrained = obj.spec().kind == ObjectiveKind::mis ||
                     obj.spec().kind == ObjectiveKind::mvc;

  OracleResult res{};
  res.best_energy = std::numeric_limits<double>::infinity();
  res.best_feasible_energy = std::numeric_limits<double>::infinity();
  res.has_feasible = false;

  std::vector<int> labels(n, 0);
  while (true) {
    auto rep = obj.hard_energy(labels);
    if (rep.energy < res.best_energy) {
      res.best_energy = rep.energy;
      res.best_labels = labels;
    }
    bool feas = constrained ? rep.feasible : true;
    if (feas && rep.energy < res.best_feasible_energy) {
      res.best_feasible_energy = rep.energy;
      res.best_feasible_labels = labels;
      res.has_feasible = true;
    }
    // odometer increment
    int pos = n - 1;
    while (pos >= 0 && labels[pos] == k - 1) labels[pos--] = 0;
    if (pos < 0) break;
    ++labels[pos];
  }
  return res;
}

}  // namespace gsopt
