#include "gsopt/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "gsopt/rng.hpp"

namespace gsopt {

namespace {

// Shared best-ever bookkeeping for the single-trajectory baselines.
struct BestTracker {
  double best_pen = std::numeric_limits<double>::infinity();
  double best_feas = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  bool found = false;

  void offer(double energy, bool feasible, const std::vector<int>& labels) {
    if (energy < best_pen) best_pen = energy;
    if (feasible && energy < best_feas) {
      best_feas = energy;
      best_labels = labels;
      found = true;
    }
  }

  RunResult finish(const Objective& obj, std::vector<double> traj,
                   uint64_t seed, int steps,
                   std::chrono::steady_clock::time_point t0) const {
    RunResult r;
    r.trajectory = std::move(traj);
    r.steps_run = steps;
    r.seed = seed;
    if (found) {
      r.feasible = true;
      r.best_energy = best_feas;
      r.best_labels = best_labels;
      r.best_metric = obj.hard_energy(r.best_labels).derived_metric;
    }
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return r;
  }
};

int random_other_label(Rng& rng, int current, int k) {
  if (k == 2) return 1 - current;
  int v = (int)rng.below((uint64_t)(k - 1));
  return v >= current ? v + 1 : v;
}

}  // namespace

RunResult simulated_annealing(const Objective& obj, const SaConfig& cfg) {
  if (!(cfg.t_init >= cfg.t_final && cfg.t_final > 0.0))
    throw std::invalid_argument("sa: need t_init >= t_final > 0");
  if (cfg.sweeps < 1) throw std::invalid_argument("sa: sweeps >= 1");
  auto t0 = std::chrono::steady_clock::now();

  int n = obj.n_nodes();
  int k = obj.n_states();
  Rng rng(rng_key(cfg.seed, streams::kSa));
  std::vector<int> init(n);
  for (int& v : init) v = (int)rng.below((uint64_t)k);
  auto state = obj.local_state(std::move(init));

  BestTracker best;
  best.offer(state->energy(), state->violations() == 0, state->labels());

  double ratio = cfg.sweeps > 1
                     ? std::pow(cfg.t_final / cfg.t_init,
                                1.0 / (double)(cfg.sweeps - 1))
                     : 1.0;
  std::vector<double> traj;
  traj.reserve(cfg.sweeps);
  double temp = cfg.t_init;
  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    double inv_t = 1.0 / temp;
    for (int p = 0; p < n; ++p) {
      int site = (int)rng.below((uint64_t)n);
      int nl = random_other_label(rng, state->labels()[site], k);
      double d = state->delta(site, nl);
      if (d <= 0.0 || rng.uniform01() < std::exp(-d * inv_t)) {
        state->apply(site, nl);
        best.offer(state->energy(), state->violations() == 0, state->labels());
      }
    }
    traj.push_back(best.best_pen);
    temp *= ratio;
  }
  return best.finish(obj, std::move(traj), cfg.seed, cfg.sweeps, t0);
}

RunResult label_ga(const Objective& obj, const GaConfig& cfg) {
  if (cfg.population < 2) throw std::invalid_argument("ga: population >= 2");
  if (cfg.generations < 1) throw std::invalid_argument("ga: generations >= 1");
  auto t0 = std::chrono::steady_clock::now();

  int n = obj.n_nodes();
  int k = obj.n_states();
  int pop = cfg.population;
  Rng rng(rng_key(cfg.seed, streams::kLabelGa));

  std::vector<std::vector<int>> genomes(pop, std::vector<int>(n));
  std::vector<double> fit(pop);
  BestTracker best;
  for (int i = 0; i < pop; ++i) {
    for (int& v : genomes[i]) v = (int)rng.below((uint64_t)k);
    auto rep = obj.hard_energy(genomes[i]);
    fit[i] = rep.energy;
    best.offer(rep.energy, rep.feasible, genomes[i]);
  }

  int elites = std::min(pop, (int)std::ceil(cfg.elite_ratio * pop));
  std::vector<double> traj;
  traj.reserve(cfg.generations);
  std::vector<int> order(pop);
  std::vector<double> cum(pop);

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (fit[a] != fit[b]) return fit[a] < fit[b];
      return a < b;
    });
    double fmax = fit[order[pop - 1]];
    double fmin = fit[order[0]];
    double eps = 1e-12 + 1e-9 * (fmax - fmin);
    double total = 0.0;
    for (int i = 0; i < pop; ++i) {
      total += (fmax - fit[i]) + eps;
      cum[i] = total;
    }
    auto pick = [&]() {
      double u = rng.uniform01() * total;
      return (int)(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    };

    std::vector<std::vector<int>> next;
    next.reserve(pop);
    for (int i = 0; i < elites; ++i) next.push_back(genomes[order[i]]);
    while ((int)next.size() < pop) {
      const auto& p1 = genomes[pick()];
      const auto& p2 = genomes[pick()];
      std::vector<int> c1 = p1, c2 = p2;
      if (rng.uniform01() < cfg.crossover_rate && n >= 2) {
        int cut = 1 + (int)rng.below((uint64_t)(n - 1));
        for (int j = cut; j < n; ++j) std::swap(c1[j], c2[j]);
      }
      auto mutate = [&](std::vector<int>& g) {
        if (cfg.mutation_rate <= 0.0) return;
        for (int j = 0; j < n; ++j)
          if (rng.uniform01() < cfg.mutation_rate)
            g[j] = random_other_label(rng, g[j], k);
      };
      mutate(c1);
      next.push_back(std::move(c1));
      if ((int)next.size() < pop) {
        mutate(c2);
        next.push_back(std::move(c2));
      }
    }
    genomes = std::move(next);
    for (int i = 0; i < pop; ++i) {
      auto rep = obj.hard_energy(genomes[i]);
      fit[i] = rep.energy;
      best.offer(rep.energy, rep.feasible, genomes[i]);
    }
    traj.push_back(best.best_pen);
  }
  return best.finish(obj, std::move(traj), cfg.seed, cfg.generations, t0);
}

std::vector<int> greedy_mis(const Graph& g, GreedyOrder order, uint64_t seed) {
  std::vector<int> scan(g.n);
  std::iota(scan.begin(), scan.end(), 0);
  if (order == GreedyOrder::random) {
    Rng rng(rng_key(seed, streams::kGreedy));
    for (int i = g.n - 1; i > 0; --i)
      std::swap(scan[i], scan[(int)rng.below((uint64_t)(i + 1))]);
  }
  std::vector<char> taken(g.n, 0);
  std::vector<int> out;
  for (int u : scan) {
    bool ok = true;
    for (int v : g.neighbors(u))
      if (taken[v]) {
        ok = false;
        break;
      }
    if (ok) {
      taken[u] = 1;
      out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> md_greedy_mis(const Graph& g) {
  std::vector<int> deg = g.degree;
  std::vector<char> alive(g.n, 1);
  using Entry = std::pair<int, int>;  // (degree, id)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (int i = 0; i < g.n; ++i) heap.emplace(deg[i], i);

  std::vector<int> out;
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (!alive[u] || d != deg[u]) continue;  // stale entry
    out.push_back(u);
    alive[u] = 0;
    for (int v : g.neighbors(u)) {
      if (!alive[v]) continue;
      alive[v] = 0;
      for (int w : g.neighbors(v)) {
        if (!alive[w]) continue;
        --deg[w];
        heap.emplace(deg[w], w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gsopt
