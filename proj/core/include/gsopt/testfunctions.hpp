#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsopt/rng.hpp"

namespace gsopt {

// Multimodal continuous benchmarks for the gradient + substitution hybrid.
// sphere is a convex debug kind.
enum class TestFunctionKind { griewank, rastrigin, sphere };

struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::griewank;
  int dim = 2;

  // Per-axis symmetric bounds; global minimum is 0 at the origin.
  double domain_halfwidth() const;
  double evaluate(const std::vector<double>& x) const;
  std::vector<double> gradient(const std::vector<double>& x) const;
};

struct GdResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> trace;  // best-ever f per step
};

GdResult gd_minimize(const TestFunction& f, std::vector<double> x0, double lr,
                     int steps);

// Re-draws x uniformly in the domain every `cycle` steps (including step 0),
// keeping the best-ever point.
GdResult gd_restart(const TestFunction& f, double lr, int steps, int cycle,
                    Rng& rng);

// population parallel GD trajectories; every `cycle` steps the worst
// floor(population * u_inverse) points are replaced by the best point plus
// Normal(0, 0.1 * domain width) noise. Exact copies would collapse
// diversity instantly in continuous space.
GdResult hybrid_gd_es(const TestFunction& f, int population, double lr,
                      int steps, int cycle, double u_inverse, Rng& rng);

// "Found the global minimum": f below 1e-4 and max|x_i| below 1e-2.
bool is_global_success(const TestFunction& f, const std::vector<double>& x,
                       double fval);

struct TrialOutcome {
  uint64_t seed;
  std::string variant;
  double f;
  std::vector<double> x;
  bool success;
};

struct TrialCounts {
  int gd = 0;
  int restart = 0;
  int hybrid = 0;
};

// Runs the three variants over `trials` seeds derived from `seed`; optional
// CSV (seed, variant, f, x..., success) for external plotting.
TrialCounts run_tf_trials(const TestFunction& f, int trials, double lr,
                          int steps, int cycle, int population,
                          double u_inverse, uint64_t seed,
                          std::vector<TrialOutcome>* outcomes = nullptr);

void write_trials_csv(const std::string& path,
                      const std::vector<TrialOutcome>& outcomes);

}  // namespace gsopt
