// Command-line front end: solve / bench / sweep run experiments through the
// harness, oracle brute-forces small instances for ground truth.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsopt/harness.hpp"
#include "gsopt/oracle.hpp"

using namespace gsopt;

namespace {

struct CliState {
  ExperimentConfig cfg;
  std::string function;  // test-function name; empty = combinatorial
  int dim = 2;
  int cycle = 1000;
  bool allow_large_sk = false;
};

// Was the flag given (CLI or config file) on the parsed subcommand?
bool seen(const CLI::App* sub, const std::string& name) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  return opt && opt->count() > 0;
}

const std::map<std::string, ObjectiveKind> kObjectiveNames{
    {"modularity", ObjectiveKind::modularity},
    {"sk", ObjectiveKind::sk},
    {"mis", ObjectiveKind::mis},
    {"mvc", ObjectiveKind::mvc}};

const std::map<std::string, SolverKind> kSolverNames{
    {"gso", SolverKind::gso},       {"evogso", SolverKind::evogso},
    {"sa", SolverKind::sa},         {"ga", SolverKind::ga},
    {"greedy", SolverKind::greedy}, {"md-greedy", SolverKind::md_greedy}};

const std::map<std::string, TemperatureSchedule::Mode> kTauModes{
    {"constant", TemperatureSchedule::Mode::constant},
    {"linear", TemperatureSchedule::Mode::linear},
    {"exponential", TemperatureSchedule::Mode::exponential}};

const std::map<std::string, OptimizerKind> kOptimizers{
    {"sgd", OptimizerKind::sgd}, {"adam", OptimizerKind::adam}};

const std::map<std::string, SubstitutionMode> kSubModes{
    {"best-copy", SubstitutionMode::best_copy},
    {"best-noise", SubstitutionMode::best_noise},
    {"reinit", SubstitutionMode::reinit}};

const std::map<std::string, GreedyOrder> kGreedyOrders{
    {"by-id", GreedyOrder::by_id}, {"random", GreedyOrder::random}};

const std::map<std::string, TestFunctionKind> kFunctions{
    {"griewank", TestFunctionKind::griewank},
    {"rastrigin", TestFunctionKind::rastrigin},
    {"sphere", TestFunctionKind::sphere}};

void add_common_options(CLI::App* app, CliState& st) {
  app->set_config("--config", "", "read options from an INI file");

  app->add_option("--graph", st.cfg.graph_path,
                  "edge-list file (one 'u v' pair per line)");
  app->add_option("--sk-n", st.cfg.sk_n,
                  "spin-glass size; fresh couplings per instance");
  app->add_flag("--allow-large-sk", st.allow_large_sk,
                "permit sk-n > 4096 (couplings get large)");
  app->add_option("--function", st.function,
                  "test function: griewank|rastrigin|sphere")
      ->check(CLI::IsMember({"griewank", "rastrigin", "sphere"}));
  app->add_option("--dim", st.dim, "test-function dimension")
      ->check(CLI::PositiveNumber);

  app->add_option("--objective", st.cfg.objective.kind, "objective")
      ->transform(CLI::CheckedTransformer(kObjectiveNames));
  app->add_option("--ncoms", st.cfg.objective.n_states,
                  "states per node (communities for modularity)")
      ->check(CLI::Range(2, 20));
  app->add_option("--alpha", st.cfg.objective.alpha,
                  "constraint penalty weight (mis/mvc)")
      ->check(CLI::PositiveNumber);

  app->add_option("--solver", st.cfg.solver, "solver")
      ->transform(CLI::CheckedTransformer(kSolverNames));

  app->add_option("--batch", st.cfg.gso.n_replicas,
                  "parallel replicas per run")
      ->check(CLI::PositiveNumber);
  app->add_option("--lr", st.cfg.gso.learning_rate, "learning rate")
      ->check(CLI::PositiveNumber);
  app->add_option("--steps", st.cfg.gso.max_steps, "max gradient steps")
      ->check(CLI::PositiveNumber);
  app->add_option("--tau-init", st.cfg.gso.schedule.tau_init,
                  "initial softmax temperature")
      ->check(CLI::PositiveNumber);
  app->add_option("--tau-final", st.cfg.gso.schedule.tau_final,
                  "final softmax temperature")
      ->check(CLI::PositiveNumber);
  app->add_option("--tau-mode", st.cfg.gso.schedule.mode,
                  "temperature schedule shape")
      ->transform(CLI::CheckedTransformer(kTauModes));
  app->add_option("--optimizer", st.cfg.gso.optimizer, "sgd or adam")
      ->transform(CLI::CheckedTransformer(kOptimizers));
  app->add_option("--threads", st.cfg.gso.n_threads,
                  "threads across replicas inside one run")
      ->check(CLI::PositiveNumber);

  app->add_option("--t1", st.cfg.evo.t1,
                  "substitution period in steps (0 disables)");
  app->add_option("--u-inverse", st.cfg.evo.u_inverse,
                  "fraction of population substituted per event")
      ->check(CLI::Range(0.0, 0.5));
  app->add_option("--substitution", st.cfg.evo.substitution,
                  "substitution mode")
      ->transform(CLI::CheckedTransformer(kSubModes));
  app->add_option("--variance-threshold", st.cfg.evo.variance_threshold,
                  "skip substitution below this fitness variance");
  app->add_option("--t2", st.cfg.evo.t2,
                  "crossover/mutation period after convergence (0 disables)");
  app->add_option("--mutation", st.cfg.evo.mutation_rate,
                  "per-entry mutation probability")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--elite", st.cfg.evo.elite_ratio, "elite fraction")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--crossover", st.cfg.evo.crossover_rate,
                  "crossover probability")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--window", st.cfg.evo.convergence_window,
                  "convergence window in steps")
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", st.cfg.evo.convergence_tol,
                  "convergence tolerance (<0 = auto-scale)");

  app->add_option("--t-init", st.cfg.sa.t_init, "annealing start temperature")
      ->check(CLI::PositiveNumber);
  app->add_option("--t-final", st.cfg.sa.t_final,
                  "annealing end temperature")
      ->check(CLI::PositiveNumber);
  app->add_option("--sweeps", st.cfg.sa.sweeps, "annealing sweeps")
      ->check(CLI::PositiveNumber);

  app->add_option("--population", st.cfg.ga.population,
                  "genetic-algorithm population")
      ->check(CLI::Range(2, 1 << 20));
  app->add_option("--generations", st.cfg.ga.generations,
                  "genetic-algorithm generations")
      ->check(CLI::PositiveNumber);
  app->add_option("--greedy-order", st.cfg.greedy_order,
                  "vertex order for plain greedy")
      ->transform(CLI::CheckedTransformer(kGreedyOrders));

  app->add_option("--cycle", st.cycle,
                  "test-function restart/evolution period")
      ->check(CLI::PositiveNumber);

  app->add_option("--instances", st.cfg.instances, "independent instances")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", st.cfg.seed, "master seed");
  app->add_option("--workers", st.cfg.workers,
                  "instance-level worker threads (never affects results)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", st.cfg.out_dir, "output directory");
}

// Fill per-problem defaults for anything left unset and reconcile the few
// flags shared between configs (GA baseline reuses the evo rates when given).
void finalize_config(CliState& st, const CLI::App* sub) {
  ExperimentConfig& cfg = st.cfg;

  if (sub->get_name() != "solve" && !seen(sub, "--instances"))
    cfg.instances = 10;

  if (!st.function.empty()) {
    TfConfig tf;
    tf.function.kind = kFunctions.at(st.function);
    tf.function.dim = st.dim;
    if (seen(sub, "--lr")) tf.lr = cfg.gso.learning_rate;
    if (seen(sub, "--steps")) tf.steps = cfg.gso.max_steps;
    if (seen(sub, "--cycle")) tf.cycle = st.cycle;
    if (seen(sub, "--batch")) tf.population = cfg.gso.n_replicas;
    if (seen(sub, "--u-inverse")) tf.u_inverse = cfg.evo.u_inverse;
    cfg.tf = tf;
    return;
  }

  if (!seen(sub, "--objective") && cfg.sk_n > 0)
    cfg.objective.kind = ObjectiveKind::sk;
  if (cfg.sk_n > 4096 && !st.allow_large_sk)
    throw CLI::ValidationError(
        "--sk-n", "sizes above 4096 need --allow-large-sk (couplings are "
                  "O(n^2) memory)");
  if (cfg.sk_n > 0 && cfg.objective.kind != ObjectiveKind::sk)
    throw CLI::ValidationError("--objective",
                               "--sk-n implies --objective sk");

  // Per-problem defaults for anything the user left unset.
  struct Defaults {
    int batch;
    double lr;
    int steps;
    double tau_i, tau_f;
    TemperatureSchedule::Mode mode;
  } d{};
  switch (cfg.objective.kind) {
    case ObjectiveKind::modularity:
      d = {256, 0.01, 10000, 0.5, 0.1, TemperatureSchedule::Mode::exponential};
      break;
    case ObjectiveKind::sk:
      // Constant temperature beats the annealed schedules here: the gradient
      // magnitudes themselves decide spins over time, and a hot start only
      // delays that. Tuned on held-out instances.
      d = {128, 2.0, 12000, 4.0, 4.0, TemperatureSchedule::Mode::constant};
      break;
    case ObjectiveKind::mis:
    case ObjectiveKind::mvc:
      d = {128, 0.01, 20000, 1.0, 1.0, TemperatureSchedule::Mode::constant};
      break;
  }
  if (!seen(sub, "--batch")) cfg.gso.n_replicas = d.batch;
  if (!seen(sub, "--lr")) cfg.gso.learning_rate = d.lr;
  if (!seen(sub, "--steps")) cfg.gso.max_steps = d.steps;
  if (!seen(sub, "--tau-init")) cfg.gso.schedule.tau_init = d.tau_i;
  if (!seen(sub, "--tau-final")) cfg.gso.schedule.tau_final = d.tau_f;
  if (!seen(sub, "--tau-mode")) cfg.gso.schedule.mode = d.mode;
  if (!seen(sub, "--optimizer"))
    cfg.gso.optimizer = cfg.objective.kind == ObjectiveKind::modularity
                            ? OptimizerKind::adam
                            : OptimizerKind::sgd;
  // Spin-glass annealing only pays off if it runs to the end; stalls in the
  // hot phase are routine, so don't let them stop the run.
  if (cfg.objective.kind == ObjectiveKind::sk && !seen(sub, "--window"))
    cfg.evo.convergence_window = cfg.gso.max_steps;

  if (seen(sub, "--crossover")) cfg.ga.crossover_rate = cfg.evo.crossover_rate;
  if (seen(sub, "--mutation")) cfg.ga.mutation_rate = cfg.evo.mutation_rate;
  if (seen(sub, "--elite")) cfg.ga.elite_ratio = cfg.evo.elite_ratio;
}

int run_and_report(CliState& st, const CLI::App* sub) {
  finalize_config(st, sub);
  ExperimentResult res = run_experiment(st.cfg);
  std::fputs(format_report(st.cfg, res).c_str(), stdout);
  if (!st.cfg.out_dir.empty())
    std::printf("outputs written to %s\n", st.cfg.out_dir.c_str());
  if (st.cfg.tf) return 0;
  for (const auto& row : res.rows)
    if (row.feasible_count > 0) return 0;
  std::fputs("no feasible solution found\n", stderr);
  return 2;
}

int run_oracle(CliState& st) {
  if (st.cfg.sk_n > 0 && st.cfg.graph_path.empty())
    st.cfg.objective.kind = ObjectiveKind::sk;
  std::unique_ptr<SkInstance> sk;
  Graph g;  // objectives keep a reference; must outlive them
  std::unique_ptr<Objective> obj;
  if (st.cfg.sk_n > 0) {
    sk = std::make_unique<SkInstance>(generate_sk(
        st.cfg.sk_n, rng_key(st.cfg.seed, streams::kInstanceDraw, 0)));
    obj = make_objective(st.cfg.objective, *sk);
  } else if (!st.cfg.graph_path.empty()) {
    g = load_edge_list_file(st.cfg.graph_path);
    obj = make_objective(st.cfg.objective, g);
  } else {
    throw CLI::ValidationError("oracle", "need --graph or --sk-n");
  }
  OracleResult r = brute_force_optimum(*obj);
  std::printf("optimum energy %.10g\n", r.best_energy);
  if (r.has_feasible) {
    auto rep = obj->hard_energy(r.best_feasible_labels);
    std::printf("feasible optimum %.10g (metric %.10g)\nlabels:",
                r.best_feasible_energy, rep.derived_metric);
    for (int v : r.best_feasible_labels) std::printf(" %d", v);
    std::printf("\n");
  } else {
    std::printf("no feasible assignment exists\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gumbel-softmax combinatorial optimization toolkit"};
  app.require_subcommand(1);

  CliState st;
  CLI::App* solve = app.add_subcommand("solve", "run one experiment");
  CLI::App* bench =
      app.add_subcommand("bench", "multi-instance benchmark with statistics");
  CLI::App* sweep =
      app.add_subcommand("sweep", "vary one parameter, same seeds per value");
  CLI::App* oracle =
      app.add_subcommand("oracle", "exhaustive optimum for small instances");

  add_common_options(solve, st);
  add_common_options(bench, st);
  add_common_options(sweep, st);

  sweep->add_option("--sweep-param", st.cfg.sweep_param,
                    "parameter to vary (e.g. ncoms, lr, u-inverse)")
      ->required();
  sweep->add_option("--sweep-values", st.cfg.sweep_values,
                    "values for the swept parameter")
      ->required()
      ->expected(1, 1000);

  oracle->add_option("--graph", st.cfg.graph_path, "edge-list file");
  oracle->add_option("--sk-n", st.cfg.sk_n, "spin-glass size")
      ->check(CLI::Range(2, 24));
  oracle->add_option("--objective", st.cfg.objective.kind, "objective")
      ->transform(CLI::CheckedTransformer(kObjectiveNames));
  oracle->add_option("--ncoms", st.cfg.objective.n_states, "states per node")
      ->check(CLI::Range(2, 20));
  oracle->add_option("--alpha", st.cfg.objective.alpha, "penalty weight");
  oracle->add_option("--seed", st.cfg.seed, "instance seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) return run_oracle(st);
    const CLI::App* sub = solve->parsed() ? solve
                          : bench->parsed() ? bench
                                            : sweep;
    return run_and_report(st, sub);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
