#include "gsopt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "gsopt/parallel.hpp"
#include "kernels.hpp"

namespace gsopt {

bool detect_convergence(std::span<const double> trajectory, int window,
                        double tol) {
  if (window < 1) window = 1;
  size_t n = trajectory.size();
  if (n < (size_t)window) return false;
  double improvement = trajectory[n - window] - trajectory[n - 1];
  return improvement < tol;
}

std::vector<std::pair<int, int>> substitution_plan(
    std::span<const double> fitness, double u_inverse) {
  int n = (int)fitness.size();
  int r = (int)std::floor(n * u_inverse);
  r = std::clamp(r, 0, n / 2);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
    return a < b;
  });
  std::vector<std::pair<int, int>> plan;
  plan.reserve(r);
  for (int k = 0; k < r; ++k) plan.emplace_back(order[n - 1 - k], order[k]);
  return plan;
}

namespace {

double population_variance(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= (double)v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return var / (double)v.size();
}

void substitute_slab(double* dst, const double* src, size_t m,
                     SubstitutionMode mode, Rng& rng) {
  switch (mode) {
    case SubstitutionMode::best_copy:
      std::memcpy(dst, src, m * sizeof(double));
      break;
    case SubstitutionMode::best_noise:
      for (size_t i = 0; i < m; ++i) dst[i] = src[i] + 0.1 * rng.gaussian();
      break;
    case SubstitutionMode::reinit:
      for (size_t i = 0; i < m; ++i) dst[i] = rng.gaussian();
      break;
  }
}

}  // namespace

void selective_substitution(ThetaPopulation& theta,
                            std::span<const double> fitness, double u_inverse,
                            SubstitutionMode mode, double variance_threshold,
                            Rng& rng) {
  if ((int)fitness.size() != theta.n_replicas())
    throw std::invalid_argument("selective_substitution: fitness size");
  if (population_variance(fitness) <= variance_threshold) return;
  auto plan = substitution_plan(fitness, u_inverse);
  size_t m = theta.values.slab_size();
  for (auto [dst, src] : plan)
    substitute_slab(theta.values.slab(dst), theta.values.slab(src), m, mode,
                    rng);
}

GaPhaseResult ga_phase(ThetaPopulation& theta, std::span<const double> fitness,
                       const EvoConfig& evo, Rng& rng) {
  int n = theta.n_replicas();
  if ((int)fitness.size() != n)
    throw std::invalid_argument("ga_phase: fitness size");
  size_t m = theta.values.slab_size();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
    return a < b;
  });

  int elites = std::min(n, (int)std::ceil(evo.elite_ratio * n));
  GaPhaseResult result;
  result.elite_sources.assign(order.begin(), order.begin() + elites);

  // Roulette weights: larger for lower (better) energy; eps keeps the
  // degenerate all-equal population selectable.
  double fmax = *std::max_element(fitness.begin(), fitness.end());
  double fmin = *std::min_element(fitness.begin(), fitness.end());
  double eps = 1e-12 + 1e-9 * (fmax - fmin);
  std::vector<double> cum(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += (fmax - fitness[i]) + eps;
    cum[i] = total;
  }
  auto pick = [&]() {
    double u = rng.uniform01() * total;
    return (int)(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
  };
  auto mutate = [&](double* x) {
    if (evo.mutation_rate <= 0.0) return;
    for (size_t i = 0; i < m; ++i)
      if (rng.uniform01() < evo.mutation_rate) x[i] = rng.gaussian();
  };

  Cube<double> out(n, theta.n_nodes(), theta.n_states());
  for (int i = 0; i < elites; ++i)
    std::memcpy(out.slab(i), theta.values.slab(order[i]), m * sizeof(double));

  std::vector<double> c1(m), c2(m);
  int slot = elites;
  while (slot < n) {
    const double* p1 = theta.values.slab(pick());
    const double* p2 = theta.values.slab(pick());
    if (rng.uniform01() < evo.crossover_rate && m >= 2) {
      size_t cut = 1 + rng.below(m - 1);
      std::memcpy(c1.data(), p1, cut * sizeof(double));
      std::memcpy(c1.data() + cut, p2 + cut, (m - cut) * sizeof(double));
      std::memcpy(c2.data(), p2, cut * sizeof(double));
      std::memcpy(c2.data() + cut, p1 + cut, (m - cut) * sizeof(double));
    } else {
      std::memcpy(c1.data(), p1, m * sizeof(double));
      std::memcpy(c2.data(), p2, m * sizeof(double));
    }
    mutate(c1.data());
    std::memcpy(out.slab(slot++), c1.data(), m * sizeof(double));
    if (slot < n) {
      mutate(c2.data());
      std::memcpy(out.slab(slot++), c2.data(), m * sizeof(double));
    }
  }
  theta.values = std::move(out);
  return result;
}

namespace {

RunResult run_engine(const Objective& obj, const GsoConfig& cfg,
                     const EvoConfig* evo) {
  if (cfg.n_replicas < 1) throw std::invalid_argument("n_replicas >= 1");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning_rate > 0");
  if (cfg.max_steps < 1) throw std::invalid_argument("max_steps >= 1");
  if (evo) {
    if (evo->t1 < 0 || evo->t2 < 0)
      throw std::invalid_argument("evo cycles must be >= 0 (0 = disabled)");
    if (evo->u_inverse <= 0.0 || evo->u_inverse > 0.5)
      throw std::invalid_argument("u_inverse in (0, 0.5]");
  }

  auto t_start = std::chrono::steady_clock::now();

  const int nbs = cfg.n_replicas;
  const int n = obj.n_nodes();
  const int k = obj.n_states();
  const size_t m = (size_t)n * k;
  const int threads = std::max(cfg.n_threads, 1);
  const bool adam = cfg.optimizer == OptimizerKind::adam;
  const double inf = std::numeric_limits<double>::infinity();

  TemperatureSchedule sched = cfg.schedule;
  sched.total_steps = cfg.max_steps;
  temperature_at(sched, 0);  // validate endpoints up front

  ThetaPopulation theta = ThetaPopulation::random_init(nbs, n, k, cfg.seed);
  Cube<double> phat(nbs, n, k), grad(nbs, n, k), scratch(nbs, 2, n);
  Mat<int> labels(nbs, n);
  Cube<double> mom, vel;
  if (adam) {
    mom = Cube<double>(nbs, n, k, 0.0);
    vel = Cube<double>(nbs, n, k, 0.0);
  }
  int adam_t = 0;

  std::vector<double> fitness(nbs, inf);  // per-replica best-ever penalized
  std::vector<double> hard_e(nbs, 0.0);
  std::vector<char> feas(nbs, 0);

  double best_pen = inf;
  double best_feas = inf;
  std::vector<int> best_labels;
  bool found_feasible = false;

  std::vector<double> traj;
  traj.reserve(cfg.max_steps);

  const int window = evo ? evo->convergence_window : 500;
  const bool ga_enabled = evo && evo->t2 > 0;
  bool converged_once = false;
  int conv_step = -1;
  int steps_done = 0;

  for (int step = 0; step < cfg.max_steps; ++step) {
    const double tau = temperature_at(sched, step);

    parallel_for(nbs, threads, [&](int b) {
      Rng rng(rng_key(cfg.seed, streams::kGumbel, (uint64_t)b, (uint64_t)step));
      kernels::sample_replica(theta.values.slab(b), n, k, tau, rng,
                              phat.slab(b), labels.row(b), scratch.slab(b));
      auto ev = obj.eval_replica(phat.slab(b), labels.row(b), grad.slab(b));
      hard_e[b] = ev.hard_energy;
      feas[b] = ev.feasible ? 1 : 0;
      kernels::backprop_replica(grad.slab(b), phat.slab(b), n, k, tau);
    });

    if (adam) ++adam_t;
    parallel_for(nbs, threads, [&](int b) {
      if (adam)
        kernels::adam_update(theta.values.slab(b), mom.slab(b), vel.slab(b),
                             grad.slab(b), m, cfg.learning_rate, 0.9, 0.999,
                             1e-8, adam_t);
      else
        kernels::sgd_update(theta.values.slab(b), grad.slab(b), m,
                            cfg.learning_rate);
    });

    // Fixed-order reduction: results independent of worker count.
    for (int b = 0; b < nbs; ++b) {
      if (hard_e[b] < fitness[b]) fitness[b] = hard_e[b];
      if (hard_e[b] < best_pen) best_pen = hard_e[b];
      if (feas[b] && hard_e[b] < best_feas) {
        best_feas = hard_e[b];
        best_labels.assign(labels.row(b), labels.row(b) + n);
        found_feasible = true;
      }
    }
    traj.push_back(best_pen);
    ++steps_done;

    if (evo && evo->t1 > 0 && (step + 1) % evo->t1 == 0 &&
        population_variance(fitness) > evo->variance_threshold) {
      auto plan = substitution_plan(fitness, evo->u_inverse);
      Rng rng(rng_key(cfg.seed, streams::kSubstitution, (uint64_t)step));
      for (auto [dst, src] : plan) {
        substitute_slab(theta.values.slab(dst), theta.values.slab(src), m,
                        evo->substitution, rng);
        if (evo->substitution == SubstitutionMode::reinit) {
          fitness[dst] = inf;  // fresh parameters, no earned fitness
          if (adam) {
            std::memset(mom.slab(dst), 0, m * sizeof(double));
            std::memset(vel.slab(dst), 0, m * sizeof(double));
          }
        } else {
          fitness[dst] = fitness[src];
          if (adam) {
            std::memcpy(mom.slab(dst), mom.slab(src), m * sizeof(double));
            std::memcpy(vel.slab(dst), vel.slab(src), m * sizeof(double));
          }
        }
      }
    }

    const double tol = (evo && evo->convergence_tol >= 0.0)
                           ? evo->convergence_tol
                           : default_convergence_tol(best_pen);
    bool conv = detect_convergence(traj, window, tol);
    if (conv && !converged_once) {
      converged_once = true;
      conv_step = step;
    }

    if (ga_enabled && converged_once && step > conv_step &&
        (step - conv_step) % evo->t2 == 0) {
      Rng rng(rng_key(cfg.seed, streams::kGaPhase, (uint64_t)step));
      auto ga = ga_phase(theta, fitness, *evo, rng);
      std::vector<double> remapped(nbs, inf);
      for (size_t i = 0; i < ga.elite_sources.size(); ++i)
        remapped[i] = fitness[ga.elite_sources[i]];
      fitness = std::move(remapped);
      if (adam) {
        std::memset(mom.data(), 0, mom.size() * sizeof(double));
        std::memset(vel.data(), 0, vel.size() * sizeof(double));
        adam_t = 0;
      }
    }

    // The GA keeps perturbing the population, so GA runs go the distance;
    // everything else stops once the best-ever stalls.
    if (conv && !ga_enabled) break;
  }

  RunResult r;
  r.trajectory = std::move(traj);
  r.steps_run = steps_done;
  r.seed = cfg.seed;
  if (found_feasible) {
    r.feasible = true;
    r.best_energy = best_feas;
    r.best_labels = std::move(best_labels);
    r.best_metric = obj.hard_energy(r.best_labels).derived_metric;
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return r;
}

}  // namespace

RunResult gso_run(const Objective& obj, const GsoConfig& cfg) {
  return run_engine(obj, cfg, nullptr);
}

RunResult evo_gso_run(const Objective& obj, const GsoConfig& cfg,
                      const EvoConfig& evo) {
  // With t1 = t2 = 0 no operator ever fires and this is step-for-step
  // identical to gso_run (the config still supplies the stopping rule).
  return run_engine(obj, cfg, &evo);
}

}  // namespace gsopt
