#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsopt {

// Simple undirected graph: canonical edge list (u < v, sorted, unique) plus
// CSR adjacency. Immutable after construction; safe to share across threads.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> adj_offsets;  // size n+1
  std::vector<int> adj;          // size 2|E|, each row sorted
  std::vector<int> degree;       // size n

  long long edge_count() const { return (long long)edges.size(); }

  std::span<const int> neighbors(int u) const {
    return {adj.data() + adj_offsets[u],
            (size_t)(adj_offsets[u + 1] - adj_offsets[u])};
  }

  // Normalizes (swaps to u<v, drops self-loops and duplicates) and builds
  // adjacency. Throws if n < 1, ids out of range, or no edges survive.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> raw);
};

struct EdgeListStats {
  long long lines = 0;
  int dropped_self_loops = 0;
  int dropped_duplicates = 0;
};

// Parses "u v" per line; '#'/'%' comments and blank lines skipped; CRLF ok.
// Ids may be arbitrary integers and are remapped to 0..n-1 by order of first
// appearance. Throws std::runtime_error with a line number on malformed
// tokens and on empty (edge-free) input.
Graph load_edge_list(std::istream& in, EdgeListStats* stats = nullptr);
Graph load_edge_list_file(const std::string& path, EdgeListStats* stats = nullptr);

// V \ s, returned sorted. Throws on out-of-range ids. Used to turn an
// independent set into a vertex cover and vice versa.
std::vector<int> complement_set(const Graph& g, std::span<const int> s);

// Erdos-Renyi G(n,p), deterministic per seed.
Graph random_gnp(int n, double p, uint64_t seed);

}  // namespace gsopt
