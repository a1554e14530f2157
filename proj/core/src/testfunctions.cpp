#include "gsopt/testfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace gsopt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double TestFunction::domain_halfwidth() const {
  switch (kind) {
    case TestFunctionKind::griewank: return 600.0;
    case TestFunctionKind::rastrigin: return 5.12;
    case TestFunctionKind::sphere: return 10.0;
  }
  return 0.0;
}

double TestFunction::evaluate(const std::vector<double>& x) const {
  if ((int)x.size() != dim) throw std::invalid_argument("tf: dim mismatch");
  switch (kind) {
    case TestFunctionKind::griewank: {
      double s = 0.0, p = 1.0;
      for (int i = 0; i < dim; ++i) {
        s += x[i] * x[i];
        p *= std::cos(x[i] / std::sqrt((double)(i + 1)));
      }
      return 1.0 + s / 4000.0 - p;
    }
    case TestFunctionKind::rastrigin: {
      double s = 10.0 * dim;
      for (int i = 0; i < dim; ++i)
        s += x[i] * x[i] - 10.0 * std::cos(kTwoPi * x[i]);
      return s;
    }
    case TestFunctionKind::sphere: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    }
  }
  return 0.0;
}

std::vector<double> TestFunction::gradient(const std::vector<double>& x) const {
  if ((int)x.size() != dim) throw std::invalid_argument("tf: dim mismatch");
  std::vector<double> g(dim);
  switch (kind) {
    case TestFunctionKind::griewank: {
      std::vector<double> c(dim);
      for (int i = 0; i < dim; ++i) c[i] = std::cos(x[i] / std::sqrt((double)(i + 1)));
      for (int i = 0; i < dim; ++i) {
        double others = 1.0;
        if (std::abs(c[i]) > 1e-12) {
          double prod = 1.0;
          for (int j = 0; j < dim; ++j) prod *= c[j];
          others = prod / c[i];
        } else {
          for (int j = 0; j < dim; ++j)
            if (j != i) others *= c[j];
        }
        double r = std::sqrt((double)(i + 1));
        g[i] = x[i] / 2000.0 + others * std::sin(x[i] / r) / r;
      }
      break;
    }
    case TestFunctionKind::rastrigin:
      for (int i = 0; i < dim; ++i)
        g[i] = 2.0 * x[i] + 10.0 * kTwoPi * std::sin(kTwoPi * x[i]);
      break;
    case TestFunctionKind::sphere:
      for (int i = 0; i < dim; ++i) g[i] = 2.0 * x[i];
      break;
  }
  return g;
}

namespace {

struct Tracker {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> bx;
  std::vector<double> trace;

  void offer(const std::vector<double>& x, double f) {
    if (f < best) {
      best = f;
      bx = x;
    }
  }
};

void gd_step(const TestFunction& f, std::vector<double>& x, double lr) {
  auto g = f.gradient(x);
  for (size_t i = 0; i < x.size(); ++i) x[i] -= lr * g[i];
}

std::vector<double> uniform_point(const TestFunction& f, Rng& rng) {
  double w = f.domain_halfwidth();
  std::vector<double> x(f.dim);
  for (double& v : x) v = rng.uniform(-w, w);
  return x;
}

}  // namespace

GdResult gd_minimize(const TestFunction& f, std::vector<double> x0, double lr,
                     int steps) {
  Tracker t;
  t.offer(x0, f.evaluate(x0));
  t.trace.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    gd_step(f, x0, lr);
    t.offer(x0, f.evaluate(x0));
    t.trace.push_back(t.best);
  }
  return {std::move(t.bx), t.best, std::move(t.trace)};
}

GdResult gd_restart(const TestFunction& f, double lr, int steps, int cycle,
                    Rng& rng) {
  if (cycle < 1) throw std::invalid_argument("gd_restart: cycle >= 1");
  Tracker t;
  t.trace.reserve(steps);
  std::vector<double> x;
  for (int s = 0; s < steps; ++s) {
    if (s % cycle == 0) {
      x = uniform_point(f, rng);
      t.offer(x, f.evaluate(x));
    }
    gd_step(f, x, lr);
    t.offer(x, f.evaluate(x));
    t.trace.push_back(t.best);
  }
  return {std::move(t.bx), t.best, std::move(t.trace)};
}

GdResult hybrid_gd_es(const TestFunction& f, int population, double lr,
                      int steps, int cycle, double u_inverse, Rng& rng) {
  if (population < 2) throw std::invalid_argument("hybrid: population >= 2");
  if (cycle < 1) throw std::invalid_argument("hybrid: cycle >= 1");
  double sigma = 0.1 * 2.0 * f.domain_halfwidth();

  std::vector<std::vector<double>> xs(population);
  std::vector<double> fs(population);
  Tracker t;
  t.trace.reserve(steps);
  for (int i = 0; i < population; ++i) {
    xs[i] = uniform_point(f, rng);
    fs[i] = f.evaluate(xs[i]);
    t.offer(xs[i], fs[i]);
  }

  int replace = std::clamp((int)std::floor(population * u_inverse), 0,
                           population / 2);
  for (int s = 0; s < steps; ++s) {
    if (s > 0 && s % cycle == 0 && replace > 0) {
      // Replace the currently-worst points with the currently-best one plus
      // exploration noise.
      std::vector<int> order(population);
      for (int i = 0; i < population; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (fs[a] != fs[b]) return fs[a] < fs[b];
        return a < b;
      });
      const std::vector<double> champ = xs[order[0]];
      for (int r = 0; r < replace; ++r) {
        int dst = order[population - 1 - r];
        for (int d = 0; d < f.dim; ++d)
          xs[dst][d] = champ[d] + sigma * rng.gaussian();
        fs[dst] = f.evaluate(xs[dst]);
        t.offer(xs[dst], fs[dst]);
      }
    }
    for (int i = 0; i < population; ++i) {
      gd_step(f, xs[i], lr);
      fs[i] = f.evaluate(xs[i]);
      t.offer(xs[i], fs[i]);
    }
    t.trace.push_back(t.best);
  }
  return {std::move(t.bx), t.best, std::move(t.trace)};
}

bool is_global_success(const TestFunction& f, const std::vector<double>& x,
                       double fval) {
  (void)f;
  if (fval >= 1e-4) return false;
  for (double v : x)
    if (std::abs(v) >= 1e-2) return false;
  return true;
}

TrialCounts run_tf_trials(const TestFunction& f, int trials, double lr,
                          int steps, int cycle, int population,
                          double u_inverse, uint64_t seed,
                          std::vector<TrialOutcome>* outcomes) {
  TrialCounts counts;
  for (int t = 0; t < trials; ++t) {
    uint64_t base = rng_key(seed, streams::kTestFn, (uint64_t)t);
    auto record = [&](const char* variant, const GdResult& r, int& counter) {
      bool ok = is_global_success(f, r.x, r.f);
      if (ok) ++counter;
      if (outcomes)
        outcomes->push_back({(uint64_t)t, variant, r.f, r.x, ok});
    };
    {
      Rng rng(rng_key(base, 1));
      auto r = gd_minimize(f, uniform_point(f, rng), lr, steps);
      record("gd", r, counts.gd);
    }
    {
      Rng rng(rng_key(base, 2));
      auto r = gd_restart(f, lr, steps, cycle, rng);
      record("restart", r, counts.restart);
    }
    {
      Rng rng(rng_key(base, 3));
      auto r = hybrid_gd_es(f, population, lr, steps, cycle, u_inverse, rng);
      record("hybrid", r, counts.hybrid);
    }
  }
  return counts;
}

void write_trials_csv(const std::string& path,
                      const std::vector<TrialOutcome>& outcomes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "seed,variant,f";
  size_t dim = outcomes.empty() ? 0 : outcomes.front().x.size();
  for (size_t d = 0; d < dim; ++d) out << ",x" << d;
  out << ",success\n";
  char buf[64];
  for (const auto& o : outcomes) {
    out << o.seed << ',' << o.variant << ',';
    snprintf(buf, sizeof buf, "%.10g", o.f);
    out << buf;
    for (double v : o.x) {
      snprintf(buf, sizeof buf, "%.10g", v);
      out << ',' << buf;
    }
    out << ',' << (o.success ? 1 : 0) << '\n';
  }
}

}  // namespace gsopt
