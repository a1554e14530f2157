#include "gsopt/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsopt {

ThetaPopulation ThetaPopulation::random_init(int n_replicas, int n_nodes,
                                             int n_states, uint64_t seed) {
  if (n_replicas < 1 || n_nodes < 1 || n_states < 2)
    throw std::runtime_error("theta init: bad shape");
  ThetaPopulation t{Cube<double>(n_replicas, n_nodes, n_states)};
  for (int b = 0; b < n_replicas; ++b) {
    Rng rng(rng_key(seed, streams::kThetaInit, (uint64_t)b));
    double* s = t.values.slab(b);
    size_t m = t.values.slab_size();
    for (size_t i = 0; i < m; ++i) s[i] = rng.gaussian();
  }
  return t;
}

double temperature_at(const TemperatureSchedule& s, int step) {
  if (s.tau_final <= 0.0 || s.tau_init < s.tau_final)
    throw std::runtime_error("temperature schedule: need tau_init >= tau_final > 0");
  if (s.mode == TemperatureSchedule::Mode::constant) return s.tau_init;
  int last = std::max(s.total_steps - 1, 1);
  double f = (double)std::clamp(step, 0, last) / (double)last;
  if (s.mode == TemperatureSchedule::Mode::linear)
    return s.tau_init + (s.tau_final - s.tau_init) * f;
  return s.tau_init * std::pow(s.tau_final / s.tau_init, f);
}

void probabilities(const Cube<double>& theta, Cube<double>& p_out) {
  if (!p_out.same_shape(theta))
    p_out = Cube<double>(theta.dim0(), theta.dim1(), theta.dim2());
  int k = theta.dim2();
  size_t rows = theta.size() / k;
  const double* in = theta.data();
  double* out = p_out.data();
  for (size_t r = 0; r < rows; ++r, in += k, out += k) {
    double mx = in[0];
    for (int j = 1; j < k; ++j) mx = std::max(mx, in[j]);
    double z = 0.0;
    for (int j = 0; j < k; ++j) {
      out[j] = std::exp(in[j] - mx);
      z += out[j];
    }
    double inv = 1.0 / z;
    for (int j = 0; j < k; ++j) out[j] *= inv;
  }
}

Cube<double> probabilities(const Cube<double>& theta) {
  Cube<double> p;
  probabilities(theta, p);
  return p;
}

void gumbel_noise(Cube<double>& g_out, Rng& rng) {
  double* g = g_out.data();
  for (size_t i = 0; i < g_out.size(); ++i) g[i] = rng.gumbel();
}

void gumbel_softmax_sample(const Cube<double>& p, const Cube<double>& g,
                           double tau, Cube<double>& phat_out) {
  if (!p.same_shape(g)) throw std::runtime_error("sample: p/g shape mismatch");
  if (!(tau > 0.0)) throw std::runtime_error("sample: tau must be positive");
  if (!phat_out.same_shape(p))
    phat_out = Cube<double>(p.dim0(), p.dim1(), p.dim2());
  int k = p.dim2();
  size_t rows = p.size() / k;
  const double* pp = p.data();
  const double* gg = g.data();
  double* out = phat_out.data();
  double inv_tau = 1.0 / tau;
  for (size_t r = 0; r < rows; ++r, pp += k, gg += k, out += k) {
    double mx = -1e300;
    for (int j = 0; j < k; ++j) {
      out[j] = (std::log(std::max(pp[j], 1e-12)) + gg[j]) * inv_tau;
      mx = std::max(mx, out[j]);
    }
    double z = 0.0;
    for (int j = 0; j < k; ++j) {
      out[j] = std::exp(out[j] - mx);
      z += out[j];
    }
    double inv = 1.0 / z;
    for (int j = 0; j < k; ++j) out[j] *= inv;
  }
}

Cube<double> gumbel_softmax_sample(const Cube<double>& p, const Cube<double>& g,
                                   double tau) {
  Cube<double> out;
  gumbel_softmax_sample(p, g, tau, out);
  return out;
}

void hard_decode(const Cube<double>& phat, Mat<int>& labels_out) {
  if (labels_out.rows() != phat.dim0() || labels_out.cols() != phat.dim1())
    labels_out = Mat<int>(phat.dim0(), phat.dim1());
  int k = phat.dim2();
  size_t rows = phat.size() / k;
  const double* in = phat.data();
  int* out = labels_out.data();
  for (size_t r = 0; r < rows; ++r, in += k) {
    int arg = 0;
    for (int j = 1; j < k; ++j)
      if (in[j] > in[arg]) arg = j;  // ties keep the lower index
    out[r] = arg;
  }
}

Mat<int> hard_decode(const Cube<double>& phat) {
  Mat<int> out;
  hard_decode(phat, out);
  return out;
}

void backprop_theta(const Cube<double>& dE_dphat, const Cube<double>& p,
                    const Cube<double>& g, double tau,
                    const Cube<double>& theta, Cube<double>& grad_out) {
  if (!dE_dphat.same_shape(p) || !p.same_shape(g) || !p.same_shape(theta))
    throw std::runtime_error("backprop: shape mismatch");
  if (!(tau > 0.0)) throw std::runtime_error("backprop: tau must be positive");
  if (!grad_out.same_shape(theta))
    grad_out = Cube<double>(theta.dim0(), theta.dim1(), theta.dim2());

  Cube<double> phat = gumbel_softmax_sample(p, g, tau);

  int k = p.dim2();
  size_t rows = p.size() / k;
  const double* dp = dE_dphat.data();
  const double* ph = phat.data();
  const double* pr = p.data();
  double* out = grad_out.data();
  double inv_tau = 1.0 / tau;
  for (size_t r = 0; r < rows; ++r, dp += k, ph += k, pr += k, out += k) {
    // dE/dz through the sampling softmax, scaled by 1/tau.
    double dot = 0.0;
    for (int j = 0; j < k; ++j) dot += dp[j] * ph[j];
    double zsum = 0.0;
    for (int j = 0; j < k; ++j) {
      out[j] = ph[j] * (dp[j] - dot) * inv_tau;
      zsum += out[j];
    }
    // Through log softmax(theta): Jacobian I - 1 p^T. The correction term
    // is identically zero because the dz row sums to zero; kept literal so
    // this op is the reference implementation.
    for (int j = 0; j < k; ++j) out[j] -= pr[j] * zsum;
  }
}

Cube<double> backprop_theta(const Cube<double>& dE_dphat, const Cube<double>& p,
                            const Cube<double>& g, double tau,
                            const Cube<double>& theta) {
  Cube<double> out;
  backprop_theta(dE_dphat, p, g, tau, theta, out);
  return out;
}

}  // namespace gsopt
