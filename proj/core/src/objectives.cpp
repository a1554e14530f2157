#include "gsopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace gsopt {

const char* to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::modularity: return "modularity";
    case ObjectiveKind::sk: return "sk";
    case ObjectiveKind::mis: return "mis";
    case ObjectiveKind::mvc: return "mvc";
  }
  return "?";
}

bool Objective::is_feasible(std::span<const int>) const {
  throw std::runtime_error("is_feasible: only defined for mis/mvc");
}

void Objective::check_labels(std::span<const int> labels) const {
  if ((int)labels.size() != n_nodes_)
    throw std::invalid_argument("labels: length mismatch");
  for (int v : labels)
    if (v < 0 || v >= spec_.n_states)
      throw std::invalid_argument("labels: value out of range for spec");
}

namespace {

// ---------------------------------------------------------------------------
// modularity (minimized as E = -Q)

class ModularityLocal final : public LocalMoveState {
 public:
  ModularityLocal(const Graph& g, int k, std::vector<int> labels, double energy)
      : g_(g), k_(k), labels_(std::move(labels)), energy_(energy) {
    dsum_.assign(k_, 0.0);
    for (int i = 0; i < g_.n; ++i) dsum_[labels_[i]] += g_.degree[i];
    two_m_ = 2.0 * (double)g_.edge_count();
  }

  double delta(int node, int new_label) const override {
    int a = labels_[node];
    if (a == new_label) return 0.0;
    double la = 0.0, lb = 0.0;  // links from node into old/new community
    for (int j : g_.neighbors(node)) {
      if (labels_[j] == a) la += 1.0;
      if (labels_[j] == new_label) lb += 1.0;
    }
    double ki = g_.degree[node];
    double dq = (lb - la) / (0.5 * two_m_) -
                2.0 * ki * (dsum_[new_label] - dsum_[a] + ki) / (two_m_ * two_m_);
    return -dq;  // energy is -Q
  }

  void apply(int node, int new_label) override {
    energy_ += delta(node, new_label);
    dsum_[labels_[node]] -= g_.degree[node];
    dsum_[new_label] += g_.degree[node];
    labels_[node] = new_label;
  }

  double energy() const override { return energy_; }
  long long violations() const override { return 0; }
  const std::vector<int>& labels() const override { return labels_; }

 private:
  const Graph& g_;
  int k_;
  std::vector<int> labels_;
  std::vector<double> dsum_;
  double two_m_;
  double energy_;
};

class ModularityObjective final : public Objective {
 public:
  ModularityObjective(ObjectiveSpec spec, const Graph& g)
      : Objective(spec, g.n), g_(g) {
    inv_two_m_ = 1.0 / (2.0 * (double)g_.edge_count());
  }

  EnergyReport hard_energy(std::span<const int> labels) const override {
    check_labels(labels);
    int k = spec_.n_states;
    std::vector<double> intra(k, 0.0), dsum(k, 0.0);
    for (auto [u, v] : g_.edges)
      if (labels[u] == labels[v]) intra[labels[u]] += 1.0;
    for (int i = 0; i < g_.n; ++i) dsum[labels[i]] += g_.degree[i];
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
      double frac = dsum[c] * inv_two_m_;
      q += 2.0 * intra[c] * inv_two_m_ - frac * frac;
    }
    return {-q, true, q};
  }

  double soft_energy(const double* phat) const override {
    int k = spec_.n_states;
    double edge_term = 0.0;
    for (auto [u, v] : g_.edges) {
      const double* pu = phat + (size_t)u * k;
      const double* pv = phat + (size_t)v * k;
      double d = 0.0;
      for (int c = 0; c < k; ++c) d += pu[c] * pv[c];
      edge_term += d;
    }
    double q = 2.0 * edge_term * inv_two_m_ - degree_norm(phat);
    return -q;
  }

  void soft_energy_grad(const double* phat, double* grad) const override {
    int k = spec_.n_states;
    std::vector<double> dvec(k, 0.0);
    degree_sums(phat, dvec.data());
    // grad = -(2/2m) (sum of neighbor rows - D * k_i/2m)
    for (int i = 0; i < g_.n; ++i) {
      double* gi = grad + (size_t)i * k;
      double ki = g_.degree[i];
      for (int c = 0; c < k; ++c) gi[c] = -2.0 * inv_two_m_ * (-dvec[c] * ki * inv_two_m_);
      for (int j : g_.neighbors(i)) {
        const double* pj = phat + (size_t)j * k;
        for (int c = 0; c < k; ++c) gi[c] -= 2.0 * inv_two_m_ * pj[c];
      }
    }
  }

  ReplicaEval eval_replica(const double* phat, const int* labels,
                           double* grad) const override {
    int k = spec_.n_states;
    std::vector<double> dvec(k, 0.0);
    degree_sums(phat, dvec.data());
    // Neighbor-sum sweep gives both the gradient and the soft edge term:
    // sum_i <p_i, S_i> = 2 * sum_{(u,v) in E} <p_u, p_v>.
    double edge2 = 0.0;
    std::vector<double> hard_intra(k, 0.0), hard_d(k, 0.0);
    for (int i = 0; i < g_.n; ++i) {
      double* gi = grad + (size_t)i * k;
      const double* pi = phat + (size_t)i * k;
      double ki = g_.degree[i];
      for (int c = 0; c < k; ++c) gi[c] = 0.0;
      for (int j : g_.neighbors(i)) {
        const double* pj = phat + (size_t)j * k;
        for (int c = 0; c < k; ++c) gi[c] += pj[c];
        if (labels[j] == labels[i]) hard_intra[labels[i]] += 0.5;
      }
      hard_d[labels[i]] += ki;
      for (int c = 0; c < k; ++c) {
        edge2 += pi[c] * gi[c];
        gi[c] = -2.0 * inv_two_m_ * (gi[c] - dvec[c] * ki * inv_two_m_);
      }
    }
    double q_soft = edge2 * inv_two_m_ - degree_norm_from(dvec.data());
    double q_hard = 0.0;
    for (int c = 0; c < k; ++c) {
      double frac = hard_d[c] * inv_two_m_;
      q_hard += 2.0 * hard_intra[c] * inv_two_m_ - frac * frac;
    }
    return {-q_soft, -q_hard, true};
  }

  std::unique_ptr<LocalMoveState> local_state(
      std::vector<int> labels) const override {
    double e = hard_energy(labels).energy;
    return std::make_unique<ModularityLocal>(g_, spec_.n_states,
                                             std::move(labels), e);
  }

 private:
  void degree_sums(const double* phat, double* dvec) const {
    int k = spec_.n_states;
    for (int i = 0; i < g_.n; ++i) {
      const double* pi = phat + (size_t)i * k;
      double ki = g_.degree[i];
      for (int c = 0; c < k; ++c) dvec[c] += ki * pi[c];
    }
  }
  double degree_norm_from(const double* dvec) const {
    double s = 0.0;
    for (int c = 0; c < spec_.n_states; ++c) {
      double f = dvec[c] * inv_two_m_;
      s += f * f;
    }
    return s;
  }
  double degree_norm(const double* phat) const {
    std::vector<double> dvec(spec_.n_states, 0.0);
    degree_sums(phat, dvec.data());
    return degree_norm_from(dvec.data());
  }

  const Graph& g_;
  double inv_two_m_;
};

// ---------------------------------------------------------------------------
// SK spin glass

class SkLocal final : public LocalMoveState {
 public:
  SkLocal(const SkInstance& sk, std::vector<int> labels)
      : sk_(sk), labels_(std::move(labels)) {
    int n = sk_.n;
    sigma_.resize(n);
    for (int i = 0; i < n; ++i) sigma_[i] = 2.0 * labels_[i] - 1.0;
    field_.assign(n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
      const double* r = sk_.row(i);
      int len = sk_.row_len(i);
      double acc = 0.0;
      double si = sigma_[i];
      for (int t = 0; t < len; ++t) {
        acc += r[t] * sigma_[i + 1 + t];
        field_[i + 1 + t] += r[t] * si;
      }
      field_[i] += acc;
    }
    energy_ = 0.0;
    for (int i = 0; i < n; ++i) energy_ -= 0.5 * sigma_[i] * field_[i];
  }

  double delta(int node, int new_label) const override {
    if (new_label == labels_[node]) return 0.0;
    return 2.0 * sigma_[node] * field_[node];
  }

  void apply(int node, int new_label) override {
    if (new_label == labels_[node]) return;
    energy_ += delta(node, new_label);
    double old = sigma_[node];
    labels_[node] = new_label;
    sigma_[node] = -old;
    // Column walk through the flat upper triangle: J(j, node) for j < node,
    // then the contiguous row for j > node.
    int n = sk_.n;
    size_t idx = (size_t)node - 1;  // index of (0, node)
    for (int j = 0; j < node; ++j) {
      field_[j] -= 2.0 * old * sk_.couplings[idx];
      idx += (size_t)(n - 2 - j);
    }
    if (node < n - 1) {
      const double* r = sk_.row(node);
      int len = sk_.row_len(node);
      for (int t = 0; t < len; ++t) field_[node + 1 + t] -= 2.0 * old * r[t];
    }
  }

  double energy() const override { return energy_; }
  long long violations() const override { return 0; }
  const std::vector<int>& labels() const override { return labels_; }

 private:
  const SkInstance& sk_;
  std::vector<int> labels_;
  std::vector<double> sigma_, field_;
  double energy_;
};

class SkObjective final : public Objective {
 public:
  SkObjective(ObjectiveSpec spec, const SkInstance& sk)
      : Objective(spec, sk.n), sk_(sk) {}

  EnergyReport hard_energy(std::span<const int> labels) const override {
    check_labels(labels);
    int n = sk_.n;
    std::vector<double> sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = 2.0 * labels[i] - 1.0;
    double e = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      const double* r = sk_.row(i);
      int len = sk_.row_len(i);
      double acc = 0.0;
      for (int t = 0; t < len; ++t) acc += r[t] * sigma[i + 1 + t];
      e -= sigma[i] * acc;
    }
    return {e, true, e / n};
  }

  double soft_energy(const double* phat) const override {
    int n = sk_.n;
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) m[i] = phat[2 * i + 1] - phat[2 * i];
    double e = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      const double* r = sk_.row(i);
      int len = sk_.row_len(i);
      double acc = 0.0;
      for (int t = 0; t < len; ++t) acc += r[t] * m[i + 1 + t];
      e -= m[i] * acc;
    }
    return e;
  }

  void soft_energy_grad(const double* phat, double* grad) const override {
    int n = sk_.n;
    std::vector<double> m(n), a(n, 0.0);
    for (int i = 0; i < n; ++i) m[i] = phat[2 * i + 1] - phat[2 * i];
    symmetric_matvec(m.data(), a.data());
    for (int i = 0; i < n; ++i) {
      grad[2 * i] = a[i];
      grad[2 * i + 1] = -a[i];
    }
  }

  ReplicaEval eval_replica(const double* phat, const int* labels,
                           double* grad) const override {
    int n = sk_.n;
    // Called once per replica per step, possibly from several workers at
    // once; thread-local scratch avoids per-call allocations.
    static thread_local std::vector<double> scratch;
    scratch.assign(4 * (size_t)n, 0.0);
    double* m = scratch.data();
    double* s = m + n;
    double* a = s + n;  // relaxed field: gradient + soft energy
    double* c = a + n;  // spin field: hard energy
    for (int i = 0; i < n; ++i) {
      m[i] = phat[2 * i + 1] - phat[2 * i];
      s[i] = 2.0 * labels[i] - 1.0;
    }
    sk_fields(m, s, a, c);
    double soft = 0.0, hard = 0.0;
    for (int i = 0; i < n; ++i) {
      soft -= 0.5 * m[i] * a[i];
      hard -= 0.5 * s[i] * c[i];
      grad[2 * i] = a[i];
      grad[2 * i + 1] = -a[i];
    }
    return {soft, hard, true};
  }

  std::unique_ptr<LocalMoveState> local_state(
      std::vector<int> labels) const override {
    check_labels(labels);
    return std::make_unique<SkLocal>(sk_, std::move(labels));
  }

 private:
  void symmetric_matvec(const double* x, double* out) const {
    int n = sk_.n;
    for (int i = 0; i < n - 1; ++i) {
      const double* r = sk_.row(i);
      int len = sk_.row_len(i);
      double acc = 0.0, xi = x[i];
      for (int t = 0; t < len; ++t) {
        acc += r[t] * x[i + 1 + t];
        out[i + 1 + t] += r[t] * xi;
      }
      out[i] += acc;
    }
  }

  // a += J m and c += J s in one sweep over the triangular couplings. The
  // AVX2 path walks four rows at a time so every load of m/s/a/c is shared
  // by four coupling streams; eight accumulators keep both fields going.
  void sk_fields(const double* m, const double* s, double* a, double* c) const {
    int n = sk_.n;
    int i0 = 0;
#if defined(__AVX2__) && defined(__FMA__)
    for (; i0 + 4 <= n; i0 += 4) {
      for (int b = 0; b < 4; ++b) {  // couplings inside the row block
        const double* r = sk_.row(i0 + b);
        for (int bb = b + 1; bb < 4; ++bb) {
          double J = r[bb - b - 1];
          int i = i0 + b, j = i0 + bb;
          a[i] += J * m[j];
          a[j] += J * m[i];
          c[i] += J * s[j];
          c[j] += J * s[i];
        }
      }
      int base = i0 + 4;
      if (base >= n) continue;
      const double* r0 = sk_.row(i0) + 3;
      const double* r1 = sk_.row(i0 + 1) + 2;
      const double* r2 = sk_.row(i0 + 2) + 1;
      const double* r3 = sk_.row(i0 + 3);
      int len = n - base;
      __m256d A0 = _mm256_setzero_pd(), A1 = A0, A2 = A0, A3 = A0;
      __m256d C0 = A0, C1 = A0, C2 = A0, C3 = A0;
      const __m256d M0 = _mm256_set1_pd(m[i0]);
      const __m256d M1 = _mm256_set1_pd(m[i0 + 1]);
      const __m256d M2 = _mm256_set1_pd(m[i0 + 2]);
      const __m256d M3 = _mm256_set1_pd(m[i0 + 3]);
      const __m256d S0 = _mm256_set1_pd(s[i0]);
      const __m256d S1 = _mm256_set1_pd(s[i0 + 1]);
      const __m256d S2 = _mm256_set1_pd(s[i0 + 2]);
      const __m256d S3 = _mm256_set1_pd(s[i0 + 3]);
      int t = 0;
      for (; t + 4 <= len; t += 4) {
        __m256d j0 = _mm256_loadu_pd(r0 + t);
        __m256d j1 = _mm256_loadu_pd(r1 + t);
        __m256d j2 = _mm256_loadu_pd(r2 + t);
        __m256d j3 = _mm256_loadu_pd(r3 + t);
        __m256d vm = _mm256_loadu_pd(m + base + t);
        __m256d vs = _mm256_loadu_pd(s + base + t);
        A0 = _mm256_fmadd_pd(j0, vm, A0);
        A1 = _mm256_fmadd_pd(j1, vm, A1);
        A2 = _mm256_fmadd_pd(j2, vm, A2);
        A3 = _mm256_fmadd_pd(j3, vm, A3);
        C0 = _mm256_fmadd_pd(j0, vs, C0);
        C1 = _mm256_fmadd_pd(j1, vs, C1);
        C2 = _mm256_fmadd_pd(j2, vs, C2);
        C3 = _mm256_fmadd_pd(j3, vs, C3);
        __m256d u0 = _mm256_fmadd_pd(j1, M1, _mm256_mul_pd(j0, M0));
        __m256d u1 = _mm256_fmadd_pd(j3, M3, _mm256_mul_pd(j2, M2));
        __m256d va = _mm256_loadu_pd(a + base + t);
        _mm256_storeu_pd(a + base + t,
                         _mm256_add_pd(va, _mm256_add_pd(u0, u1)));
        __m256d w0 = _mm256_fmadd_pd(j1, S1, _mm256_mul_pd(j0, S0));
        __m256d w1 = _mm256_fmadd_pd(j3, S3, _mm256_mul_pd(j2, S2));
        __m256d vc = _mm256_loadu_pd(c + base + t);
        _mm256_storeu_pd(c + base + t,
                         _mm256_add_pd(vc, _mm256_add_pd(w0, w1)));
      }
      alignas(32) double lane[4];
      _mm256_store_pd(lane, A0);
      a[i0] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, A1);
      a[i0 + 1] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, A2);
      a[i0 + 2] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, A3);
      a[i0 + 3] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, C0);
      c[i0] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, C1);
      c[i0 + 1] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, C2);
      c[i0 + 2] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      _mm256_store_pd(lane, C3);
      c[i0 + 3] += (lane[0] + lane[1]) + (lane[2] + lane[3]);
      for (; t < len; ++t) {
        int j = base + t;
        double j0 = r0[t], j1 = r1[t], j2 = r2[t], j3 = r3[t];
        a[i0] += j0 * m[j];
        a[i0 + 1] += j1 * m[j];
        a[i0 + 2] += j2 * m[j];
        a[i0 + 3] += j3 * m[j];
        c[i0] += j0 * s[j];
        c[i0 + 1] += j1 * s[j];
        c[i0 + 2] += j2 * s[j];
        c[i0 + 3] += j3 * s[j];
        a[j] += j0 * m[i0] + j1 * m[i0 + 1] + j2 * m[i0 + 2] + j3 * m[i0 + 3];
        c[j] += j0 * s[i0] + j1 * s[i0 + 1] + j2 * s[i0 + 2] + j3 * s[i0 + 3];
      }
    }
#endif
    for (int i = i0; i < n - 1; ++i) {  // leftover rows, and the whole
      const double* r = sk_.row(i);     // computation without AVX2
      int len = sk_.row_len(i);
      double accA = 0.0, accC = 0.0, mi = m[i], si = s[i];
      for (int t = 0; t < len; ++t) {
        double J = r[t];
        accA += J * m[i + 1 + t];
        accC += J * s[i + 1 + t];
        a[i + 1 + t] += J * mi;
        c[i + 1 + t] += J * si;
      }
      a[i] += accA;
      c[i] += accC;
    }
  }

  const SkInstance& sk_;
};

// ---------------------------------------------------------------------------
// MIS / MVC (Ising penalty form, label 1 = selected)

class MisMvcLocal final : public LocalMoveState {
 public:
  MisMvcLocal(const Graph& g, bool mis, double alpha, std::vector<int> labels)
      : g_(g), mis_(mis), alpha_(alpha), labels_(std::move(labels)) {
    cnt_.assign(g_.n, 0);
    for (int i = 0; i < g_.n; ++i)
      for (int j : g_.neighbors(i))
        cnt_[i] += mis_ ? labels_[j] : 1 - labels_[j];
    long long bad2 = 0;
    long long selected = 0;
    for (int i = 0; i < g_.n; ++i) {
      selected += labels_[i];
      bad2 += (long long)(mis_ ? labels_[i] : 1 - labels_[i]) * cnt_[i];
    }
    bad_ = bad2 / 2;
    selected_ = selected;
  }

  double delta(int node, int new_label) const override {
    int a = labels_[node];
    if (a == new_label) return 0.0;
    double d = new_label - a;
    if (mis_) return d * (alpha_ * cnt_[node] - 1.0);
    return d * (1.0 - alpha_ * cnt_[node]);
  }

  void apply(int node, int new_label) override {
    int a = labels_[node];
    if (a == new_label) return;
    int d = new_label - a;
    selected_ += d;
    bad_ += (long long)(mis_ ? d : -d) * cnt_[node];
    int dc = mis_ ? d : -d;
    for (int j : g_.neighbors(node)) cnt_[j] += dc;
    labels_[node] = new_label;
  }

  double energy() const override {
    double base = mis_ ? -(double)selected_ : (double)selected_;
    return base + alpha_ * (double)bad_;
  }
  long long violations() const override { return bad_; }
  const std::vector<int>& labels() const override { return labels_; }

 private:
  const Graph& g_;
  bool mis_;
  double alpha_;
  std::vector<int> labels_;
  std::vector<int> cnt_;  // selected (mis) / unselected (mvc) neighbor counts
  long long bad_ = 0;     // violated (mis) / uncovered (mvc) edges
  long long selected_ = 0;
};

class MisMvcObjective final : public Objective {
 public:
  MisMvcObjective(ObjectiveSpec spec, const Graph& g)
      : Objective(spec, g.n), g_(g), mis_(spec.kind == ObjectiveKind::mis) {}

  EnergyReport hard_energy(std::span<const int> labels) const override {
    check_labels(labels);
    long long selected = 0, bad = 0;
    for (int i = 0; i < g_.n; ++i) selected += labels[i];
    for (auto [u, v] : g_.edges) {
      if (mis_)
        bad += labels[u] & labels[v];
      else
        bad += (1 - labels[u]) & (1 - labels[v]);
    }
    double base = mis_ ? -(double)selected : (double)selected;
    return {base + spec_.alpha * (double)bad, bad == 0, (double)selected};
  }

  bool is_feasible(std::span<const int> labels) const override {
    check_labels(labels);
    for (auto [u, v] : g_.edges) {
      if (mis_ && labels[u] == 1 && labels[v] == 1) return false;
      if (!mis_ && labels[u] == 0 && labels[v] == 0) return false;
    }
    return true;
  }

  double soft_energy(const double* phat) const override {
    double lin = 0.0, pair = 0.0;
    for (int i = 0; i < g_.n; ++i) lin += phat[2 * i + 1];
    for (auto [u, v] : g_.edges) {
      double qu = phat[2 * u + 1], qv = phat[2 * v + 1];
      pair += mis_ ? qu * qv : (1.0 - qu) * (1.0 - qv);
    }
    return (mis_ ? -lin : lin) + spec_.alpha * pair;
  }

  void soft_energy_grad(const double* phat, double* grad) const override {
    for (int i = 0; i < g_.n; ++i) {
      double acc = 0.0;
      for (int j : g_.neighbors(i))
        acc += mis_ ? phat[2 * j + 1] : (1.0 - phat[2 * j + 1]);
      grad[2 * i] = 0.0;
      grad[2 * i + 1] =
          mis_ ? -1.0 + spec_.alpha * acc : 1.0 - spec_.alpha * acc;
    }
  }

  ReplicaEval eval_replica(const double* phat, const int* labels,
                           double* grad) const override {
    double lin = 0.0, pair2 = 0.0;
    long long selected = 0, bad2 = 0;
    double alpha = spec_.alpha;
    for (int i = 0; i < g_.n; ++i) {
      double qi = phat[2 * i + 1];
      int xi = labels[i];
      double acc = 0.0;
      int hc = 0;
      if (mis_) {
        for (int j : g_.neighbors(i)) {
          acc += phat[2 * j + 1];
          hc += labels[j];
        }
        pair2 += qi * acc;
        bad2 += (long long)xi * hc;
        grad[2 * i] = 0.0;
        grad[2 * i + 1] = -1.0 + alpha * acc;
      } else {
        for (int j : g_.neighbors(i)) {
          acc += 1.0 - phat[2 * j + 1];
          hc += 1 - labels[j];
        }
        pair2 += (1.0 - qi) * acc;
        bad2 += (long long)(1 - xi) * hc;
        grad[2 * i] = 0.0;
        grad[2 * i + 1] = 1.0 - alpha * acc;
      }
      lin += qi;
      selected += xi;
    }
    double soft = (mis_ ? -lin : lin) + alpha * 0.5 * pair2;
    double base = mis_ ? -(double)selected : (double)selected;
    double hard = base + alpha * 0.5 * (double)bad2;
    return {soft, hard, bad2 == 0};
  }

  std::unique_ptr<LocalMoveState> local_state(
      std::vector<int> labels) const override {
    check_labels(labels);
    return std::make_unique<MisMvcLocal>(g_, mis_, spec_.alpha,
                                         std::move(labels));
  }

 private:
  const Graph& g_;
  bool mis_;
};

}  // namespace

std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec,
                                          const Graph& g) {
  switch (spec.kind) {
    case ObjectiveKind::modularity:
      if (spec.n_states < 2 || spec.n_states > 20)
        throw std::invalid_argument("modularity: n_states must be in 2..20");
      return std::make_unique<ModularityObjective>(spec, g);
    case ObjectiveKind::mis:
    case ObjectiveKind::mvc:
      if (spec.n_states != 2)
        throw std::invalid_argument("mis/mvc: n_states must be 2");
      if (!(spec.alpha > 0.0))
        throw std::invalid_argument("mis/mvc: alpha must be positive");
      return std::make_unique<MisMvcObjective>(spec, g);
    case ObjectiveKind::sk:
      throw std::invalid_argument("sk objective needs an SkInstance");
  }
  throw std::invalid_argument("unknown objective kind");
}

std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec,
                                          const SkInstance& sk) {
  if (spec.kind != ObjectiveKind::sk)
    throw std::invalid_argument("graph objectives need a Graph");
  if (spec.n_states != 2)
    throw std::invalid_argument("sk: n_states must be 2");
  return std::make_unique<SkObjective>(spec, sk);
}

}  // namespace gsopt
