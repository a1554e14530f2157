#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace gsopt {

// Fully connected Ising instance with Gaussian couplings of variance 1/n.
// Upper triangle only, flat row-major: (i,j), i<j, lives at
// i*(2n-i-1)/2 + (j-i-1). Halves memory at n=8192 (~268 MB full vs ~134 MB).
struct SkInstance {
  int n = 0;
  std::vector<double> couplings;  // n*(n-1)/2 entries

  size_t index(int i, int j) const {
    assert(0 <= i && i < j && j < n);
    return (size_t)i * (2 * (size_t)n - i - 1) / 2 + (size_t)(j - i - 1);
  }

  // Symmetric access, any order; zero on the diagonal.
  double coupling(int i, int j) const {
    if (i == j) return 0.0;
    return i < j ? couplings[index(i, j)] : couplings[index(j, i)];
  }

  // Row segment (i, i+1..n-1), contiguous — the unit of the matvec sweeps.
  const double* row(int i) const {
    assert(0 <= i && i < n - 1);
    return couplings.data() + index(i, i + 1);
  }
  int row_len(int i) const { return n - 1 - i; }
};

// J_ij ~ Normal(0, 1/n) i.i.d. for i<j, deterministic per seed.
// Throws on n < 2.
SkInstance generate_sk(int n, uint64_t seed);

}  // namespace gsopt
