#include "kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gsopt::kernels {

namespace {

// One-uniform sampling of a two-state node. The difference of two Gumbels
// is Logistic(0,1), so p-hat_1 = sigmoid((clamp(th1-th0) + L)/tau) draws
// from exactly the same distribution as the generic two-Gumbel path; the
// clamp reproduces the 1e-12 probability floor of the unfused op.
void sample_binary(const double* __restrict theta, int n, double inv_tau,
                   Rng& rng, double* __restrict phat, int* __restrict labels,
                   double* __restrict scratch) {
  double* u = scratch;
  double* d = scratch + n;
  for (int i = 0; i < n; ++i) u[i] = rng.uniform01();
  for (int i = 0; i < n; ++i) {
    double gap = theta[2 * i + 1] - theta[2 * i];
    gap = std::clamp(gap, -kLogitCap, kLogitCap);
    d[i] = (gap + std::log(u[i] / (1.0 - u[i]))) * inv_tau;
  }
  for (int i = 0; i < n; ++i) {
    double p1 = 1.0 / (1.0 + std::exp(-d[i]));
    phat[2 * i] = 1.0 - p1;
    phat[2 * i + 1] = p1;
  }
  for (int i = 0; i < n; ++i) labels[i] = d[i] > 0.0 ? 1 : 0;
}

void sample_k(const double* __restrict theta, int n, int k, double inv_tau,
              Rng& rng, double* __restrict phat, int* __restrict labels) {
  for (int i = 0; i < n; ++i) {
    const double* th = theta + (size_t)i * k;
    double* out = phat + (size_t)i * k;
    double mx = th[0];
    for (int j = 1; j < k; ++j) mx = std::max(mx, th[j]);
    double z = 0.0;
    for (int j = 0; j < k; ++j) z += std::exp(th[j] - mx);
    double lse = mx + std::log(z);
    double zmax = -1e300;
    for (int j = 0; j < k; ++j) {
      double logp = std::max(th[j] - lse, -kLogitCap);
      double g = -std::log(-std::log(rng.uniform01()));
      out[j] = (logp + g) * inv_tau;
      zmax = std::max(zmax, out[j]);
    }
    double s = 0.0;
    int arg = 0;
    for (int j = 0; j < k; ++j) {
      out[j] = std::exp(out[j] - zmax);
      s += out[j];
      if (out[j] > out[arg]) arg = j;
    }
    double inv = 1.0 / s;
    for (int j = 0; j < k; ++j) out[j] *= inv;
    labels[i] = arg;
  }
}

}  // namespace

void sample_replica(const double* theta, int n, int k, double tau, Rng& rng,
                    double* phat, int* labels, double* scratch) {
  double inv_tau = 1.0 / tau;
  if (k == 2)
    sample_binary(theta, n, inv_tau, rng, phat, labels, scratch);
  else
    sample_k(theta, n, k, inv_tau, rng, phat, labels);
}

void backprop_replica(double* grad, const double* phat, int n, int k,
                      double tau) {
  double inv_tau = 1.0 / tau;
  if (k == 2) {
    // Collapses to a single antisymmetric component per node.
    for (int i = 0; i < n; ++i) {
      double p0 = phat[2 * i], p1 = phat[2 * i + 1];
      double g = p0 * p1 * (grad[2 * i + 1] - grad[2 * i]) * inv_tau;
      grad[2 * i] = -g;
      grad[2 * i + 1] = g;
    }
    return;
  }
  for (int i = 0; i < n; ++i) {
    double* gr = grad + (size_t)i * k;
    const double* ph = phat + (size_t)i * k;
    double dot = 0.0;
    for (int j = 0; j < k; ++j) dot += gr[j] * ph[j];
    for (int j = 0; j < k; ++j) gr[j] = ph[j] * (gr[j] - dot) * inv_tau;
  }
}

void sgd_update(double* theta, const double* grad, size_t m, double lr) {
  for (size_t i = 0; i < m; ++i) theta[i] -= lr * grad[i];
}

void adam_update(double* theta, double* mom, double* vel, const double* grad,
                 size_t m, double lr, double beta1, double beta2, double eps,
                 int t) {
  double bc1 = 1.0 - std::pow(beta1, t);
  double bc2 = 1.0 - std::pow(beta2, t);
  double step = lr / bc1;
  for (size_t i = 0; i < m; ++i) {
    double g = grad[i];
    mom[i] = beta1 * mom[i] + (1.0 - beta1) * g;
    vel[i] = beta2 * vel[i] + (1.0 - beta2) * g * g;
    theta[i] -= step * mom[i] / (std::sqrt(vel[i] / bc2) + eps);
  }
}

}  // namespace gsopt::kernels
