#include "gsopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gsopt {

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::gso: return "gso";
    case SolverKind::evogso: return "evogso";
    case SolverKind::sa: return "sa";
    case SolverKind::ga: return "ga";
    case SolverKind::greedy: return "greedy";
    case SolverKind::md_greedy: return "md-greedy";
  }
  return "?";
}

Summary summarize(std::span<const double> values) {
  size_t n = values.size();
  if (n == 0) return {0.0, 0.0, true};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= (double)n;
  if (n == 1) return {mean, 0.0, true};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / (double)(n - 1));
  return {mean, sd / std::sqrt((double)n), false};
}

namespace {

const char* tf_kind_name(TestFunctionKind k) {
  switch (k) {
    case TestFunctionKind::griewank: return "griewank";
    case TestFunctionKind::rastrigin: return "rastrigin";
    case TestFunctionKind::sphere: return "sphere";
  }
  return "?";
}

void fmt(std::string& s, const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  s += buf;
}

std::string canonical_string(const ExperimentConfig& cfg) {
  std::string s;
  if (!cfg.graph_path.empty()) s += "graph=" + cfg.graph_path + ";";
  if (cfg.sk_n > 0) fmt(s, "sk=%d;", cfg.sk_n);
  if (cfg.tf) {
    fmt(s, "tf=%s:%d;tfcfg=%.17g:%d:%d:%d:%.17g;", tf_kind_name(cfg.tf->function.kind),
        cfg.tf->function.dim, cfg.tf->lr, cfg.tf->steps, cfg.tf->cycle,
        cfg.tf->population, cfg.tf->u_inverse);
  } else {
    fmt(s, "obj=%s:%d:%.17g;", to_string(cfg.objective.kind),
        cfg.objective.n_states, cfg.objective.alpha);
    s += std::string("solver=") + to_string(cfg.solver) + ";";
    auto add_gso = [&] {
      fmt(s, "gso=%d:%.17g:%d:%.17g:%.17g:%d:%d;", cfg.gso.n_replicas,
          cfg.gso.learning_rate, cfg.gso.max_steps, cfg.gso.schedule.tau_init,
          cfg.gso.schedule.tau_final, (int)cfg.gso.schedule.mode,
          (int)cfg.gso.optimizer);
    };
    switch (cfg.solver) {
      case SolverKind::gso:
        add_gso();
        // the stopping rule shapes plain GSO results too
        fmt(s, "stop=%d:%.17g;", cfg.evo.convergence_window,
            cfg.evo.convergence_tol);
        break;
      case SolverKind::evogso:
        add_gso();
        fmt(s, "evo=%d:%.17g:%d:%.17g:%d:%.17g:%.17g:%.17g:%d:%.17g;",
            cfg.evo.t1, cfg.evo.u_inverse, (int)cfg.evo.substitution,
            cfg.evo.variance_threshold, cfg.evo.t2, cfg.evo.mutation_rate,
            cfg.evo.elite_ratio, cfg.evo.crossover_rate,
            cfg.evo.convergence_window, cfg.evo.convergence_tol);
        break;
      case SolverKind::sa:
        fmt(s, "sa=%.17g:%.17g:%d;", cfg.sa.t_init, cfg.sa.t_final,
            cfg.sa.sweeps);
        break;
      case SolverKind::ga:
        fmt(s, "ga=%d:%.17g:%.17g:%.17g:%d;", cfg.ga.population,
            cfg.ga.crossover_rate, cfg.ga.mutation_rate, cfg.ga.elite_ratio,
            cfg.ga.generations);
        break;
      case SolverKind::greedy:
        fmt(s, "greedy=%d;", (int)cfg.greedy_order);
        break;
      case SolverKind::md_greedy:
        break;
    }
  }
  fmt(s, "instances=%d;seed=%llu", cfg.instances,
      (unsigned long long)cfg.seed);
  return s;
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<double> subsample_trajectory(const std::vector<double>& traj) {
  std::vector<double> out;
  if (traj.empty()) return out;
  for (size_t i = 0; i < traj.size(); i += 10) out.push_back(traj[i]);
  if ((traj.size() - 1) % 10 != 0) out.push_back(traj.back());
  return out;
}

int count_effective_states(const std::vector<int>& labels) {
  std::set<int> seen(labels.begin(), labels.end());
  return (int)seen.size();
}

bool metric_maximized(const ExperimentConfig& cfg) {
  if (cfg.tf) return false;
  return cfg.objective.kind == ObjectiveKind::modularity ||
         cfg.objective.kind == ObjectiveKind::mis;
}

void validate_sources(const ExperimentConfig& cfg) {
  int sources = (!cfg.graph_path.empty() ? 1 : 0) + (cfg.sk_n > 0 ? 1 : 0) +
                (cfg.tf.has_value() ? 1 : 0);
  if (sources != 1)
    throw std::invalid_argument(
        "experiment needs exactly one problem source (graph, sk or test "
        "function)");
  if (cfg.instances < 1) throw std::invalid_argument("instances >= 1");
  if (!cfg.sweep_param.empty() && cfg.sweep_values.empty())
    throw std::invalid_argument("sweep named but no values given");
}

InstanceRecord run_one(const ExperimentConfig& cfg, const Graph* graph,
                       int idx) {
  uint64_t run_seed = rng_key(cfg.seed, streams::kInstanceRun, (uint64_t)idx);

  std::unique_ptr<SkInstance> sk;
  std::unique_ptr<Objective> obj;
  if (cfg.sk_n > 0) {
    sk = std::make_unique<SkInstance>(generate_sk(
        cfg.sk_n, rng_key(cfg.seed, streams::kInstanceDraw, (uint64_t)idx)));
    obj = make_objective(cfg.objective, *sk);
  } else {
    obj = make_objective(cfg.objective, *graph);
  }

  RunResult rr;
  switch (cfg.solver) {
    case SolverKind::gso: {
      GsoConfig c = cfg.gso;
      c.seed = run_seed;
      EvoConfig plain = cfg.evo;  // keep the stopping rule, drop the operators
      plain.t1 = 0;
      plain.t2 = 0;
      rr = evo_gso_run(*obj, c, plain);
      break;
    }
    case SolverKind::evogso: {
      GsoConfig c = cfg.gso;
      c.seed = run_seed;
      rr = evo_gso_run(*obj, c, cfg.evo);
      break;
    }
    case SolverKind::sa: {
      SaConfig c = cfg.sa;
      c.seed = run_seed;
      rr = simulated_annealing(*obj, c);
      break;
    }
    case SolverKind::ga: {
      GaConfig c = cfg.ga;
      c.seed = run_seed;
      rr = label_ga(*obj, c);
      break;
    }
    case SolverKind::greedy:
    case SolverKind::md_greedy: {
      if (cfg.objective.kind != ObjectiveKind::mis &&
          cfg.objective.kind != ObjectiveKind::mvc)
        throw std::invalid_argument("greedy solvers apply to mis/mvc only");
      auto t0 = std::chrono::steady_clock::now();
      std::vector<int> set = cfg.solver == SolverKind::md_greedy
                                 ? md_greedy_mis(*graph)
                                 : greedy_mis(*graph, cfg.greedy_order,
                                              run_seed);
      if (cfg.objective.kind == ObjectiveKind::mvc)
        set = complement_set(*graph, set);
      std::vector<int> labels(graph->n, 0);
      for (int v : set) labels[v] = 1;
      auto rep = obj->hard_energy(labels);
      rr.best_labels = std::move(labels);
      rr.best_energy = rep.energy;
      rr.best_metric = rep.derived_metric;
      rr.feasible = rep.feasible;
      rr.trajectory = {rep.energy};
      rr.steps_run = 1;
      rr.seed = run_seed;
      rr.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      break;
    }
  }

  InstanceRecord rec;
  rec.index = idx;
  rec.run_seed = run_seed;
  rec.feasible = rr.feasible;
  rec.energy = rr.best_energy;
  rec.metric = rr.best_metric;
  rec.labels = std::move(rr.best_labels);
  rec.effective_states = count_effective_states(rec.labels);
  rec.trajectory = subsample_trajectory(rr.trajectory);
  rec.steps = rr.steps_run;
  rec.wall_seconds = rr.wall_seconds;
  return rec;
}

ReportRow aggregate(const ExperimentConfig& cfg, std::string label,
                    std::string digest, const std::string& sweep_param,
                    double sweep_value,
                    const std::vector<InstanceRecord>& records) {
  ReportRow row;
  row.digest = std::move(digest);
  row.label = std::move(label);
  row.sweep_param = sweep_param;
  row.sweep_value = sweep_value;
  row.instances = (int)records.size();
  double wall = 0.0;
  for (const auto& r : records) {
    wall += r.wall_seconds;
    if (r.feasible) {
      row.metrics.push_back(r.metric);
      ++row.feasible_count;
    }
  }
  row.mean_wall = records.empty() ? 0.0 : wall / (double)records.size();
  auto s = summarize(row.metrics);
  row.mean = s.mean;
  row.sem = s.sem;
  row.sem_flagged = s.flagged;
  if (!row.metrics.empty()) {
    bool maxing = metric_maximized(cfg);
    row.best = row.metrics.front();
    for (double v : row.metrics)
      if (maxing ? v > row.best : v < row.best) row.best = v;
  }
  return row;
}

std::string sanitize_label(const std::string& label) {
  std::string out = label;
  for (char& c : out)
    if (c == '/' || c == ' ' || c == '\\') c = '_';
  return out;
}

void run_instances(const ExperimentConfig& rowcfg, const Graph* graph,
                   std::vector<InstanceRecord>& records) {
  int n = rowcfg.instances;
  records.resize(n);
  int workers = std::clamp(rowcfg.workers, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) records[i] = run_one(rowcfg, graph, i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          records[i] = run_one(rowcfg, graph, i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

ExperimentResult run_tf_experiment(const ExperimentConfig& cfg) {
  const TfConfig& tf = *cfg.tf;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> outcomes;
  run_tf_trials(tf.function, cfg.instances, tf.lr, tf.steps, tf.cycle,
                tf.population, tf.u_inverse, cfg.seed, &outcomes);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();

  ExperimentResult res;
  std::string digest = config_digest(cfg, "", 0.0);
  for (const char* variant : {"gd", "restart", "hybrid"}) {
    ReportRow row;
    row.digest = digest;
    row.label = variant;
    row.instances = cfg.instances;
    for (const auto& o : outcomes) {
      if (o.variant != variant) continue;
      row.metrics.push_back(o.f);
      if (o.success) ++row.feasible_count;
    }
    auto s = summarize(row.metrics);
    row.mean = s.mean;
    row.sem = s.sem;
    row.sem_flagged = s.flagged;
    if (!row.metrics.empty())
      row.best = *std::min_element(row.metrics.begin(), row.metrics.end());
    row.mean_wall = wall / 3.0 / std::max(cfg.instances, 1);
    res.rows.push_back(std::move(row));
    res.records.emplace_back();  // trials.csv carries the per-trial data
  }
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    write_trials_csv((fs::path(cfg.out_dir) / "trials.csv").string(),
                     outcomes);
    write_outputs(cfg, res);
  }
  return res;
}

}  // namespace

std::string config_digest(const ExperimentConfig& cfg,
                          const std::string& sweep_param, double sweep_value) {
  ExperimentConfig c = cfg;
  if (!sweep_param.empty()) apply_sweep_value(c, sweep_param, sweep_value);
  c.sweep_param.clear();
  c.sweep_values.clear();
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx",
           (unsigned long long)fnv1a64(canonical_string(c)));
  return buf;
}

void apply_sweep_value(ExperimentConfig& cfg, const std::string& param,
                       double value) {
  auto as_int = [&](int lo) {
    int v = (int)std::llround(value);
    if (v < lo) throw std::invalid_argument("sweep value too small: " + param);
    return v;
  };
  if (param == "ncoms")
    cfg.objective.n_states = as_int(2);
  else if (param == "alpha")
    cfg.objective.alpha = value;
  else if (param == "batch")
    cfg.gso.n_replicas = as_int(1);
  else if (param == "lr")
    cfg.gso.learning_rate = value;
  else if (param == "steps")
    cfg.gso.max_steps = as_int(1);
  else if (param == "tau-init")
    cfg.gso.schedule.tau_init = value;
  else if (param == "tau-final")
    cfg.gso.schedule.tau_final = value;
  else if (param == "t1")
    cfg.evo.t1 = as_int(0);
  else if (param == "t2")
    cfg.evo.t2 = as_int(0);
  else if (param == "u-inverse")
    cfg.evo.u_inverse = value;
  else if (param == "mutation")
    cfg.evo.mutation_rate = value;
  else if (param == "elite")
    cfg.evo.elite_ratio = value;
  else if (param == "crossover")
    cfg.evo.crossover_rate = value;
  else if (param == "sweeps")
    cfg.sa.sweeps = as_int(1);
  else if (param == "generations")
    cfg.ga.generations = as_int(1);
  else if (param == "population")
    cfg.ga.population = as_int(2);
  else
    throw std::invalid_argument("unknown sweep parameter: " + param);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_sources(cfg);
  if (cfg.tf) return run_tf_experiment(cfg);

  Graph graph;
  const Graph* gp = nullptr;
  if (!cfg.graph_path.empty()) {
    EdgeListStats stats;
    graph = load_edge_list_file(cfg.graph_path, &stats);
    gp = &graph;
  }

  // Validate the sweep target before doing any work.
  if (!cfg.sweep_param.empty()) {
    ExperimentConfig probe = cfg;
    apply_sweep_value(probe, cfg.sweep_param, cfg.sweep_values.front());
  }

  ExperimentResult res;
  if (cfg.sweep_param.empty()) {
    std::vector<InstanceRecord> records;
    run_instances(cfg, gp, records);
    res.rows.push_back(aggregate(cfg, to_string(cfg.solver),
                                 config_digest(cfg, "", 0.0), "", 0.0,
                                 records));
    res.records.push_back(std::move(records));
  } else {
    for (double v : cfg.sweep_values) {
      ExperimentConfig rowcfg = cfg;
      apply_sweep_value(rowcfg, cfg.sweep_param, v);
      std::vector<InstanceRecord> records;
      run_instances(rowcfg, gp, records);
      char label[64];
      snprintf(label, sizeof label, "%s=%.10g", cfg.sweep_param.c_str(), v);
      res.rows.push_back(aggregate(rowcfg, label,
                                   config_digest(cfg, cfg.sweep_param, v),
                                   cfg.sweep_param, v, records));
      res.records.push_back(std::move(records));
    }
  }
  if (!cfg.out_dir.empty()) write_outputs(cfg, res);
  return res;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res) {
  fs::path out(cfg.out_dir);
  fs::create_directories(out);
  char buf[128];

  {
    std::ofstream agg(out / "aggregate.csv");
    if (!agg) throw std::runtime_error("cannot write aggregate.csv");
    agg << "digest,label,solver,objective,instances,feasible,mean,sem,"
           "sem_flagged,best,mean_wall_seconds\n";
    for (const auto& row : res.rows) {
      agg << row.digest << ',' << row.label << ','
          << (cfg.tf ? "tf" : to_string(cfg.solver)) << ','
          << (cfg.tf ? tf_kind_name(cfg.tf->function.kind)
                     : to_string(cfg.objective.kind))
          << ',' << row.instances << ',' << row.feasible_count << ',';
      snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%.10g,%.6g", row.mean, row.sem,
               row.sem_flagged ? 1 : 0, row.best, row.mean_wall);
      agg << buf << '\n';
    }
  }

  {
    std::ofstream tim(out / "timings.csv");
    tim << "label,index,wall_seconds\n";
    for (size_t r = 0; r < res.records.size(); ++r)
      for (const auto& rec : res.records[r]) {
        snprintf(buf, sizeof buf, "%.6g", rec.wall_seconds);
        tim << res.rows[r].label << ',' << rec.index << ',' << buf << '\n';
      }
  }

  for (size_t r = 0; r < res.records.size(); ++r) {
    if (res.records[r].empty()) continue;
    fs::path dir = out / "records";
    if (res.records.size() > 1) dir /= sanitize_label(res.rows[r].label);
    fs::create_directories(dir);
    for (const auto& rec : res.records[r]) {
      json j;
      j["digest"] = res.rows[r].digest;
      j["index"] = rec.index;
      j["seed"] = rec.run_seed;
      j["feasible"] = rec.feasible;
      if (rec.feasible)
        j["energy"] = rec.energy;
      else
        j["energy"] = nullptr;
      j["metric"] = rec.metric;
      j["effective_states"] = rec.effective_states;
      j["labels"] = rec.labels;
      j["trajectory"] = rec.trajectory;
      j["steps"] = rec.steps;
      snprintf(buf, sizeof buf, "instance_%04d.json", rec.index);
      std::ofstream f(dir / buf);
      if (!f) throw std::runtime_error("cannot write instance record");
      f << j.dump(1, '\t') << '\n';
    }
  }
}

std::string format_report(const ExperimentConfig& cfg,
                          const ExperimentResult& res) {
  std::string s;
  char buf[256];
  for (const auto& row : res.rows) {
    const char* metric_name =
        cfg.tf ? "f" : (cfg.objective.kind == ObjectiveKind::modularity
                            ? "Q"
                            : (cfg.objective.kind == ObjectiveKind::sk
                                   ? "E/N"
                                   : "size"));
    snprintf(buf, sizeof buf,
             "%-24s digest=%s n=%d feasible=%d mean_%s=%.6g sem=%.3g "
             "best=%.6g wall=%.3gs\n",
             row.label.c_str(), row.digest.c_str(), row.instances,
             row.feasible_count, metric_name, row.mean, row.sem, row.best,
             row.mean_wall);
    s += buf;
  }
  return s;
}

}  // namespace gsopt
