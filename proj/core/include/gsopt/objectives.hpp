#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gsopt/graph.hpp"
#include "gsopt/sk.hpp"

namespace gsopt {

enum class ObjectiveKind { modularity, sk, mis, mvc };

const char* to_string(ObjectiveKind k);

// Everything here is a minimization problem; modularity is wrapped as
// E = -Q so one contract covers all four energies.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::sk;
  int n_states = 2;    // K; 2..20 for modularity, exactly 2 otherwise
  double alpha = 3.0;  // penalty weight, mis/mvc only
};

struct EnergyReport {
  double energy = 0.0;
  bool feasible = true;  // always true for modularity/sk
  // Q for modularity, E/N for sk, selected-node count for mis/mvc.
  double derived_metric = 0.0;
};

// Incremental single-site move evaluation. Backs the Metropolis sweep:
// delta() is O(1)..O(degree) and apply() keeps the caches consistent.
class LocalMoveState {
 public:
  virtual ~LocalMoveState() = default;
  virtual double delta(int node, int new_label) const = 0;
  virtual void apply(int node, int new_label) = 0;
  virtual double energy() const = 0;
  virtual long long violations() const = 0;  // 0 where constraints don't apply
  virtual const std::vector<int>& labels() const = 0;
};

// One problem instance bound to its spec. Holds a pointer to the graph or
// SK instance, which must outlive the objective.
class Objective {
 public:
  virtual ~Objective() = default;

  const ObjectiveSpec& spec() const { return spec_; }
  int n_nodes() const { return n_nodes_; }
  int n_states() const { return spec_.n_states; }

  // Exact discrete energy. Throws std::invalid_argument on out-of-range
  // labels or a length mismatch.
  virtual EnergyReport hard_energy(std::span<const int> labels) const = 0;

  // Relaxed energy of one replica row (n_nodes x n_states, row-major).
  virtual double soft_energy(const double* phat) const = 0;

  // Analytic d soft_energy / d phat, same layout as phat.
  virtual void soft_energy_grad(const double* phat, double* grad_out) const = 0;

  // Constraint check; only meaningful for mis/mvc (throws otherwise).
  virtual bool is_feasible(std::span<const int> labels) const;

  double derived_metric(std::span<const int> labels) const {
    return hard_energy(labels).derived_metric;
  }

  struct ReplicaEval {
    double soft_energy;
    double hard_energy;
    bool feasible;
  };
  // Fused per-step evaluation for the solver: soft energy, its gradient and
  // the decoded labels' hard energy/feasibility in one structure sweep.
  virtual ReplicaEval eval_replica(const double* phat, const int* labels,
                                   double* grad_out) const = 0;

  // Starts an incremental-move session from the given labels (validated).
  virtual std::unique_ptr<LocalMoveState> local_state(
      std::vector<int> labels) const = 0;

 protected:
  Objective(ObjectiveSpec spec, int n_nodes) : spec_(spec), n_nodes_(n_nodes) {}
  void check_labels(std::span<const int> labels) const;

  ObjectiveSpec spec_;
  int n_nodes_;
};

// Validate spec against the instance and build the evaluator.
// modularity/mis/mvc bind to a graph; sk binds to an SkInstance.
std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec,
                                          const Graph& g);
std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec,
                                          const SkInstance& sk);

}  // namespace gsopt
