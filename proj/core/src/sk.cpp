#include "gsopt/sk.hpp"

#include <cmath>
#include <stdexcept>

#include "gsopt/rng.hpp"

namespace gsopt {

SkInstance generate_sk(int n, uint64_t seed) {
  if (n < 2) throw std::runtime_error("generate_sk: n must be at least 2");
  SkInstance sk;
  sk.n = n;
  sk.couplings.resize((size_t)n * (n - 1) / 2);
  double sigma = 1.0 / std::sqrt((double)n);
  Rng rng(rng_key(seed, streams::kSkCouplings));
  for (double& j : sk.couplings) j = sigma * rng.gaussian();
  return sk;
}

}  // namespace gsopt
