#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conperc/calculus.hpp"

namespace conperc {

// Undirected simple graph read from a two-column edge list. Node labels are
// arbitrary non-negative integers; internally they are compacted to dense
// indices. Self-loops and duplicate edges are dropped (counted).
class EdgeListGraph {
 public:
  static EdgeListGraph from_edges(
      const std::vector<std::pair<long, long>>& edges);

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  int degree(int idx) const { return int(adj_[idx].size()); }
  const std::vector<int>& neighbors(int idx) const { return adj_[idx]; }
  long label(int idx) const { return labels_[idx]; }
  int index_of(long label) const;  // throws std::out_of_range if unknown

  std::size_t self_loops_skipped = 0;
  std::size_t duplicates_skipped = 0;

 private:
  std::vector<std::vector<int>> adj_;  // each list sorted ascending
  std::vector<long> labels_;
  std::size_t edge_count_ = 0;
};

// Whitespace-separated integer pairs, one edge per line, '#' comments.
// Malformed lines raise std::runtime_error carrying the line number.
EdgeListGraph load_edge_list(const std::string& path);

// Edge-disjoint A-B paths with group labels: group 0 is the single shortest
// path, group 1 the second-level paths (3 of them in the standard protocol).
struct PathBundle {
  int a = -1, b = -1;
  std::vector<std::vector<int>> paths;  // node index sequences, A..B
  std::vector<int> group;               // group label per path

  std::vector<std::uint64_t> lengths() const;
  PathEnsemble ensemble() const;
  bool edge_disjoint() const;
};

// theta at which the ensemble crossing reaches `target`: unique by
// monotonicity, bisected on [0, pi/4] to 1e-12. Throws when the crossing at
// theta = pi/4 stays below target.
double ensemble_threshold(Calculus cal, const PathEnsemble& ensemble,
                          double target);

// Threshold of the group-0 path alone (the q -> infinity reference).
double shortest_only_threshold(Calculus cal, std::uint64_t shortest_length,
                               double target);

// Anomalous resilience factor A_x(q) = q (theta_inf - theta_th(q)).
double anomalous_resilience(Calculus cal, const PathEnsemble& detoured,
                            std::uint64_t shortest_length, double q,
                            double target);

// Flower path decomposition with every long arm stretched V -> qV:
// lengths U^{n-k} (qV)^k, binomial multiplicities.
PathEnsemble flower_detour_ensemble(int u, int v, int n, std::uint64_t q);

// Thermodynamic flower detour factors: exact thresholds of the (U, qV)
// flower, gap scaled by the full stretched factor qV (the arrangement under
// which the classical factor settles at ln(U/(U-1))/2 and the quantum one
// grows like sqrt(V q ln q / 8)).
struct FlowerDetourPoint {
  double q;
  double a_p;
  double a_c;
};
FlowerDetourPoint flower_detour_theory(int u, int v, double q);

struct DetourOptions {
  int min_degree = 7;
  int pair_count = 10;
  int samples = 20;          // rerouted subgraphs per (pair, q)
  double target = 0.99;
  int paths_per_bundle = 4;  // 1 shortest + 3 second-level
  std::uint64_t dfs_budget = 1000000;  // expansions per reroute attempt
  bool vertex_disjoint = false;        // also forbid shared interior nodes
};

// Random distinct pairs of nodes with degree >= min_degree for which a full
// bundle exists; deterministic under seed. May return fewer than requested
// (warning recorded by the caller).
std::vector<std::pair<int, int>> select_hub_pairs(const EdgeListGraph& g,
                                                  const DetourOptions& opts,
                                                  std::uint64_t seed);

// Greedy bundle: repeat { BFS shortest path over remaining edges (ties by
// smallest next node id); remove its edges }. Empty optional when fewer than
// the requested number of edge-disjoint paths exist.
std::optional<PathBundle> extract_bundle(const EdgeListGraph& g, int a, int b,
                                         const DetourOptions& opts = {});

// Keep the group-0 path; replace each group-1 path of length l by a fresh
// path of exact length q*l, edge-disjoint from everything already kept, found
// by randomized depth-first search with remaining-distance pruning under a
// step budget. Returns up to opts.samples bundles.
std::vector<PathBundle> reroute_bundle(const EdgeListGraph& g,
                                       const PathBundle& bundle, int q,
                                       std::uint64_t seed,
                                       const DetourOptions& opts = {});

struct ResiliencePoint {
  int q;
  Calculus cal;
  double theta_mean;
  double theta_stderr;
  double a_factor;
  int samples;
};

struct ResilienceCurve {
  std::vector<ResiliencePoint> points;
  std::vector<std::string> warnings;
};

// The full SI protocol: hub pairs, bundles, reroutes over q in
// [q_min, q_max], ensemble thresholds at `target` for both calculi, averaged
// into A_x(q). q values with zero reroute samples are omitted and flagged.
ResilienceCurve real_network_resilience(const EdgeListGraph& g, int q_min,
                                        int q_max, std::uint64_t seed,
                                        const DetourOptions& opts = {});

}  // namespace conperc
