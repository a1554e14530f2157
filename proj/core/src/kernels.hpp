#pragma once

#include <cstddef>

#include "gsopt/rng.hpp"

// Inner-loop kernels for the solver engine. kernels.cpp is compiled with
// -ffast-math so gcc can use vectorized libm; keep Inf/NaN sentinel logic
// and anything semantically sensitive to FP specials out of that TU.
namespace gsopt::kernels {

// -log(1e-12): the sampler's probability floor expressed as a cap on the
// log-probability gap. Matches the unfused ops to ~1e-12 absolute.
inline constexpr double kLogitCap = 27.631021115928547;

// Fused probabilities + Gumbel noise + tempered softmax + argmax decode for
// one replica slab (n nodes, k states). K=2 runs the logistic fast path
// (one uniform per node); general K draws K Gumbels per node in row-major
// order, matching gumbel_noise's layout. scratch: 2*n doubles.
void sample_replica(const double* theta, int n, int k, double tau, Rng& rng,
                    double* phat, int* labels, double* scratch);

// In place: grad holds dE/dphat on entry, dE/dtheta on exit.
void backprop_replica(double* grad, const double* phat, int n, int k,
                      double tau);

void sgd_update(double* theta, const double* grad, size_t m, double lr);

void adam_update(double* theta, double* mom, double* vel, const double* grad,
                 size_t m, double lr, double beta1, double beta2, double eps,
                 int t);

}  // namespace gsopt::kernels
