#pragma once

#include <cstdint>

#include "gsopt/rng.hpp"
#include "gsopt/tensor.hpp"

namespace gsopt {

// Logits for a population of mean-field distributions: one independent
// categorical per node, one parameter set per replica.
// Shape: n_replicas x n_nodes x n_states.
struct ThetaPopulation {
  Cube<double> values;

  int n_replicas() const { return values.dim0(); }
  int n_nodes() const { return values.dim1(); }
  int n_states() const { return values.dim2(); }

  // i.i.d. Normal(0,1) entries; per-replica streams keyed on
  // (seed, kThetaInit, replica) so the result is worker-count independent.
  static ThetaPopulation random_init(int n_replicas, int n_nodes, int n_states,
                                     uint64_t seed);
};

// Row-stochastic per-node state probabilities (relaxed assignment).
struct SoftAssignment {
  Cube<double> probs;
};

// Decoded integer labels, one row per replica.
struct HardAssignment {
  Mat<int> labels;
};

struct TemperatureSchedule {
  enum class Mode { constant, linear, exponential };
  double tau_init = 1.0;
  double tau_final = 1.0;
  int total_steps = 1;
  Mode mode = Mode::exponential;
};

// Schedule value at `step`; steps outside [0, total_steps) clamp to the
// endpoints. Exponential mode interpolates geometrically.
double temperature_at(const TemperatureSchedule& s, int step);

// Row-wise softmax over the state axis. For K=2 this is the sigmoid
// parameterization, written as softmax so every K shares one code path.
void probabilities(const Cube<double>& theta, Cube<double>& p_out);
Cube<double> probabilities(const Cube<double>& theta);
inline SoftAssignment probabilities(const ThetaPopulation& theta) {
  return {probabilities(theta.values)};
}

// Fills `g_out` with standard Gumbel(0,1) draws from `rng`.
void gumbel_noise(Cube<double>& g_out, Rng& rng);

// p-hat = softmax((log p + g)/tau) per row, with p floored at 1e-12 before
// the log and max-subtraction inside the softmax. Throws on tau <= 0.
void gumbel_softmax_sample(const Cube<double>& p, const Cube<double>& g,
                           double tau, Cube<double>& phat_out);
Cube<double> gumbel_softmax_sample(const Cube<double>& p, const Cube<double>& g,
                                   double tau);

// Per node: index of the maximum entry, ties toward the lower index.
void hard_decode(const Cube<double>& phat, Mat<int>& labels_out);
Mat<int> hard_decode(const Cube<double>& phat);

// Chain rule from dE/dp-hat back to the logits theta, through the sampling
// softmax (Jacobian at z = (log p + g)/tau, scaled by 1/tau) and through
// log softmax(theta) (Jacobian I - 1 p^T). `theta` is only consulted for its
// shape. Note the probability floor in the forward pass is treated as
// identity here; it only engages for |logit gaps| > 27.6 where the gradient
// has vanished anyway.
void backprop_theta(const Cube<double>& dE_dphat, const Cube<double>& p,
                    const Cube<double>& g, double tau,
                    const Cube<double>& theta, Cube<double>& grad_out);
Cube<double> backprop_theta(const Cube<double>& dE_dphat, const Cube<double>& p,
                            const Cube<double>& g, double tau,
                            const Cube<double>& theta);

}  // namespace gsopt
