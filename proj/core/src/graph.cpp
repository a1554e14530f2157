#include "gsopt/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "gsopt/rng.hpp"

namespace gsopt {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> raw) {
  if (n < 1) throw std::runtime_error("graph needs at least one node");
  for (auto& [u, v] : raw) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::runtime_error("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::erase_if(raw, [](const auto& e) { return e.first == e.second; });
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  if (raw.empty()) throw std::runtime_error("graph has no edges");

  Graph g;
  g.n = n;
  g.edges = std::move(raw);
  g.degree.assign(n, 0);
  for (auto [u, v] : g.edges) {
    ++g.degree[u];
    ++g.degree[v];
  }
  g.adj_offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) g.adj_offsets[i + 1] = g.adj_offsets[i] + g.degree[i];
  g.adj.resize(g.adj_offsets[n]);
  std::vector<int> cursor(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
  for (auto [u, v] : g.edges) {
    g.adj[cursor[u]++] = v;
    g.adj[cursor[v]++] = u;
  }
  // Edges are sorted (u,v) pairs, so each row comes out sorted already for
  // the u side; the v side needs a pass.
  for (int i = 0; i < n; ++i)
    std::sort(g.adj.begin() + g.adj_offsets[i], g.adj.begin() + g.adj_offsets[i + 1]);
  return g;
}

namespace {

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Graph load_edge_list(std::istream& in, EdgeListStats* stats) {
  EdgeListStats local;
  std::unordered_map<long long, int> ids;
  std::vector<std::pair<int, int>> raw;
  std::string line;
  long long lineno = 0;

  auto intern = [&](long long ext) {
    auto [it, fresh] = ids.emplace(ext, (int)ids.size());
    (void)fresh;
    return it->second;
  };

  while (std::getline(in, line)) {
    ++lineno;
    ++local.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == '%') continue;

    std::istringstream ls(line);
    std::string ta, tb;
    if (!(ls >> ta >> tb))
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": expected two integer tokens");
    long long a, b;
    if (!parse_int(ta, a) || !parse_int(tb, b))
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": non-integer token");
    // Extra columns (weights, timestamps) are tolerated and ignored.
    int u = intern(a);
    int v = intern(b);
    if (u == v) {
      ++local.dropped_self_loops;
      continue;
    }
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw std::runtime_error("edge list contains no edges");

  // Count duplicates before from_edges silently dedups.
  {
    auto tmp = raw;
    for (auto& [u, v] : tmp)
      if (u > v) std::swap(u, v);
    std::sort(tmp.begin(), tmp.end());
    local.dropped_duplicates =
        (int)(tmp.size() - (std::unique(tmp.begin(), tmp.end()) - tmp.begin()));
  }

  Graph g = Graph::from_edges((int)ids.size(), std::move(raw));
  if (stats) *stats = local;
  return g;
}

Graph load_edge_list_file(const std::string& path, EdgeListStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return load_edge_list(in, stats);
}

std::vector<int> complement_set(const Graph& g, std::span<const int> s) {
  std::vector<char> in_set(g.n, 0);
  for (int v : s) {
    if (v < 0 || v >= g.n)
      throw std::runtime_error("complement_set: node id out of range");
    in_set[v] = 1;
  }
  std::vector<int> out;
  out.reserve(g.n - s.size());
  for (int v = 0; v < g.n; ++v)
    if (!in_set[v]) out.push_back(v);
  return out;
}

Graph random_gnp(int n, double p, uint64_t seed) {
  if (n < 2) throw std::runtime_error("random_gnp: n must be at least 2");
  if (p <= 0.0 || p > 1.0) throw std::runtime_error("random_gnp: p in (0,1]");
  Rng rng(rng_key(seed, streams::kGnp));
  std::vector<std::pair<int, int>> raw;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) raw.emplace_back(i, j);
  if (raw.empty()) raw.emplace_back(0, 1);  // keep the instance valid
  return Graph::from_edges(n, std::move(raw));
}

}  // namespace gsopt
