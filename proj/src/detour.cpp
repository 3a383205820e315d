#include "conperc/detour.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "conperc/flower.hpp"
#include "conperc/weights.hpp"

namespace conperc {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

using EdgeSet = std::set<std::pair<int, int>>;

std::pair<int, int> ekey(int u, int v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

double weight_at_theta(Calculus cal, double theta) {
  return cal == Calculus::Classical ? theta_to_p(theta) : theta_to_c(theta);
}

// BFS shortest path avoiding `removed`; parents chosen in ascending neighbor
// order, so the result is reproducible. Empty when disconnected.
std::vector<int> bfs_path(const EdgeListGraph& g, int a, int b,
                          const EdgeSet& removed) {
  std::vector<int> parent(g.node_count(), -2);
  parent[a] = -1;
  std::deque<int> queue{a};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == b) break;
    for (int v : g.neighbors(u)) {
      if (parent[v] != -2) continue;
      if (!removed.empty() && removed.count(ekey(u, v))) continue;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  if (parent[b] == -2) return {};
  std::vector<int> path{b};
  while (parent[path.back()] >= 0) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> bfs_distances(const EdgeListGraph& g, int from) {
  std::vector<int> dist(g.node_count(), -1);
  dist[from] = 0;
  std::deque<int> queue{from};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// Randomized DFS for a simple path of exact length `target_len`, avoiding
// `removed` edges (and `blocked` nodes when vertex-disjoint mode is on).
// `dist` holds full-graph distances to b: an admissible pruning bound.
struct ExactPathSearch {
  const EdgeListGraph& g;
  int b;
  const EdgeSet& removed;
  const std::vector<char>& blocked;
  const std::vector<int>& dist;
  std::mt19937_64& rng;
  std::uint64_t budget;

  std::vector<int> path;
  std::vector<char> on_path;
  EdgeSet path_edges;

  bool dfs(int u, int remaining) {
    if (budget-- == 0) return false;
    if (remaining == 0) return u == b;
    if (dist[u] < 0 || dist[u] > remaining) return false;
    std::vector<int> nbrs;
    for (int v : g.neighbors(u)) {
      if (on_path[v] && v != b) continue;
      if (v == b && remaining != 1) continue;
      if (blocked[v] && v != b) continue;
      if (!removed.empty() && removed.count(ekey(u, v))) continue;
      if (path_edges.count(ekey(u, v))) continue;
      nbrs.push_back(v);
    }
    // Fisher-Yates with explicit draws: std::shuffle's permutation is
    // unspecified and would break seed reproducibility across libraries
    for (std::size_t i = nbrs.size(); i > 1; --i) {
      std::swap(nbrs[i - 1], nbrs[rng() % i]);
    }
    for (int v : nbrs) {
      path.push_back(v);
      on_path[v] = 1;
      path_edges.insert(ekey(u, v));
      if (dfs(v, remaining - 1)) return true;
      path_edges.erase(ekey(u, v));
      on_path[v] = 0;
      path.pop_back();
    }
    return false;
  }
};

std::optional<std::vector<int>> find_exact_path(
    const EdgeListGraph& g, int a, int b, int target_len,
    const EdgeSet& removed, const std::vector<char>& blocked,
    const std::vector<int>& dist_to_b, std::mt19937_64& rng,
    std::uint64_t budget) {
  ExactPathSearch search{g,       b,   removed, blocked,
                         dist_to_b, rng, budget,  {},
                         {},      {}};
  search.path.push_back(a);
  search.on_path.assign(g.node_count(), 0);
  search.on_path[a] = 1;
  if (search.dfs(a, target_len)) return search.path;
  return std::nullopt;
}

void add_path_edges(const std::vector<int>& path, EdgeSet& removed) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    removed.insert(ekey(path[i], path[i + 1]));
  }
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

double stderr_of_mean(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
}

}  // namespace

EdgeListGraph EdgeListGraph::from_edges(
    const std::vector<std::pair<long, long>>& edges) {
  EdgeListGraph g;
  std::map<long, int> index;
  std::set<std::pair<int, int>> seen;
  for (const auto& [lu, lv] : edges) {
    for (long l : {lu, lv}) {
      if (index.try_emplace(l, int(g.labels_.size())).second) {
        g.labels_.push_back(l);
        g.adj_.emplace_back();
      }
    }
    if (lu == lv) {
      ++g.self_loops_skipped;
      continue;
    }
    const int u = index[lu], v = index[lv];
    if (!seen.insert(ekey(u, v)).second) {
      ++g.duplicates_skipped;
      continue;
    }
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
  g.edge_count_ = seen.size();
  return g;
}

int EdgeListGraph::index_of(long label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return int(i);
  }
  throw std::out_of_range("EdgeListGraph: unknown node label " +
                          std::to_string(label));
}

EdgeListGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<std::pair<long, long>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long u, v;
    if (!(ls >> u)) continue;  // blank or comment-only line
    if (!(ls >> v)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two integers");
    }
    long extra;
    if (ls >> extra) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": trailing tokens after edge");
    }
    edges.emplace_back(u, v);
  }
  return EdgeListGraph::from_edges(edges);
}

std::vector<std::uint64_t> PathBundle::lengths() const {
  std::vector<std::uint64_t> out;
  for (const auto& p : paths) out.push_back(p.size() - 1);
  return out;
}

PathEnsemble PathBundle::ensemble() const {
  std::map<std::uint64_t, std::uint64_t> tally;
  for (const auto& p : paths) ++tally[p.size() - 1];
  PathEnsemble ens;
  for (const auto& [len, mult] : tally) ens.entries.push_back({len, mult});
  return ens;
}

bool PathBundle::edge_disjoint() const {
  EdgeSet seen;
  for (const auto& p : paths) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (!seen.insert(ekey(p[i], p[i + 1])).second) return false;
    }
  }
  return true;
}

double ensemble_threshold(Calculus cal, const PathEnsemble& ensemble,
                          double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw std::domain_error("ensemble_threshold: target must be in (0, 1)");
  }
  ensemble.validate();
  if (ensemble.entries.empty()) {
    throw std::domain_error("ensemble_threshold: empty ensemble");
  }
  const auto crossing = [&](double theta) {
    return ensemble_crossing(cal, ensemble, weight_at_theta(cal, theta));
  };
  if (crossing(kQuarterPi) < target) {
    throw std::runtime_error(
        "ensemble_threshold: target unreachable at theta = pi/4");
  }
  double lo = 0.0, hi = kQuarterPi;
  for (int i = 0; i < 64 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (crossing(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double shortest_only_threshold(Calculus cal, std::uint64_t shortest_length,
                               double target) {
  if (shortest_length == 0) {
    throw std::domain_error("shortest_only_threshold: length >= 1");
  }
  PathEnsemble ens;
  ens.entries.push_back({shortest_length, 1});
  return ensemble_threshold(cal, ens, target);
}

double anomalous_resilience(Calculus cal, const PathEnsemble& detoured,
                            std::uint64_t shortest_length, double q,
                            double target) {
  if (q < 1.0) throw std::domain_error("anomalous_resilience: q >= 1");
  const double theta_inf =
      shortest_only_threshold(cal, shortest_length, target);
  const double theta_q = ensemble_threshold(cal, detoured, target);
  return q * (theta_inf - theta_q);
}

PathEnsemble flower_detour_ensemble(int u, int v, int n, std::uint64_t q) {
  if (u < 1 || v < u || n < 0) {
    throw std::domain_error("flower_detour_ensemble: need 1 <= U <= V, n >= 0");
  }
  if (q < 1) throw std::domain_error("flower_detour_ensemble: q >= 1");
  PathEnsemble out;
  for (int k = 0; k <= n; ++k) {
    // U^{n-k} (qV)^k paths, binomial(n, k) of them (k long-arm choices)
    std::uint64_t len = 1;
    auto mul = [&](std::uint64_t f) {
      if (f != 0 && len > ~0ULL / f) {
        throw std::overflow_error(
            "flower_detour_ensemble: detoured length overflows 64 bits");
      }
      len *= f;
    };
    for (int i = 0; i < n - k; ++i) mul(std::uint64_t(u));
    for (int i = 0; i < k; ++i) {
      mul(std::uint64_t(v));
      mul(q);
    }
    std::uint64_t mult = 1;
    for (int i = 1; i <= k; ++i) {
      mult = mult * std::uint64_t(n - k + i) / std::uint64_t(i);
    }
    out.entries.push_back({len, mult});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) {
              return a.length != b.length ? a.length < b.length
                                          : a.multiplicity < b.multiplicity;
            });
  return out;
}

FlowerDetourPoint flower_detour_theory(int u, int v, double q) {
  if (q < 1.0) throw std::domain_error("flower_detour_theory: q >= 1");
  const double qv = q * v;
  const double sp = threshold_gap(Calculus::Classical, u, qv);
  const double sq = threshold_gap(Calculus::Quantum, u, qv);
  const double theta_p = p_to_theta(1.0 - sp / qv);
  const double theta_c = c_to_theta(1.0 - sq / qv);
  return {q, qv * (kQuarterPi - theta_p), qv * (kQuarterPi - theta_c)};
}

std::vector<std::pair<int, int>> select_hub_pairs(const EdgeListGraph& g,
                                                  const DetourOptions& opts,
                                                  std::uint64_t seed) {
  std::vector<int> hubs;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.degree(int(i)) >= opts.min_degree) hubs.push_back(int(i));
  }
  std::vector<std::pair<int, int>> out;
  if (hubs.size() < 2) return out;
  std::mt19937_64 rng(seed);
  std::set<std::pair<int, int>> tried;
  const std::size_t max_tries =
      std::min<std::size_t>(hubs.size() * hubs.size(),
                            200 * std::size_t(opts.pair_count));
  for (std::size_t t = 0;
       t < max_tries && out.size() < std::size_t(opts.pair_count); ++t) {
    const int a = hubs[rng() % hubs.size()];
    const int b = hubs[rng() % hubs.size()];
    if (a == b) continue;
    if (!tried.insert(ekey(a, b)).second) continue;
    if (extract_bundle(g, a, b, opts)) out.emplace_back(a, b);
  }
  return out;
}

std::optional<PathBundle> extract_bundle(const EdgeListGraph& g, int a, int b,
                                         const DetourOptions& opts) {
  if (a == b || a < 0 || b < 0 || std::size_t(a) >= g.node_count() ||
      std::size_t(b) >= g.node_count()) {
    throw std::domain_error("extract_bundle: bad terminals");
  }
  PathBundle bundle;
  bundle.a = a;
  bundle.b = b;
  EdgeSet removed;
  for (int i = 0; i < opts.paths_per_bundle; ++i) {
    std::vector<int> p = bfs_path(g, a, b, removed);
    if (p.empty()) return std::nullopt;
    add_path_edges(p, removed);
    bundle.paths.push_back(std::move(p));
    bundle.group.push_back(i == 0 ? 0 : 1);
  }
  return bundle;
}

std::vector<PathBundle> reroute_bundle(const EdgeListGraph& g,
                                       const PathBundle& bundle, int q,
                                       std::uint64_t seed,
                                       const DetourOptions& opts) {
  if (q < 1) throw std::domain_error("reroute_bundle: q >= 1");
  if (q == 1) return {bundle};
  std::vector<PathBundle> out;
  std::mt19937_64 rng(seed);
  const std::vector<int> dist_b = bfs_distances(g, bundle.b);
  EdgeSet kept;
  add_path_edges(bundle.paths[0], kept);
  for (int sample = 0; sample < opts.samples; ++sample) {
    PathBundle nb;
    nb.a = bundle.a;
    nb.b = bundle.b;
    nb.paths.push_back(bundle.paths[0]);
    nb.group.push_back(0);
    EdgeSet removed = kept;
    std::vector<char> blocked(g.node_count(), 0);
    if (opts.vertex_disjoint) {
      for (std::size_t i = 1; i + 1 < bundle.paths[0].size(); ++i) {
        blocked[bundle.paths[0][i]] = 1;
      }
    }
    bool ok = true;
    for (std::size_t i = 1; i < bundle.paths.size(); ++i) {
      const int target_len = q * int(bundle.paths[i].size() - 1);
      auto found = find_exact_path(g, bundle.a, bundle.b, target_len, removed,
                                   blocked, dist_b, rng, opts.dfs_budget);
      if (!found) {
        ok = false;
        break;
      }
      add_path_edges(*found, removed);
      if (opts.vertex_disjoint) {
        for (std::size_t j = 1; j + 1 < found->size(); ++j) {
          blocked[(*found)[j]] = 1;
        }
      }
      nb.paths.push_back(std::move(*found));
      nb.group.push_back(1);
    }
    if (ok) out.push_back(std::move(nb));
  }
  return out;
}

ResilienceCurve real_network_resilience(const EdgeListGraph& g, int q_min,
                                        int q_max, std::uint64_t seed,
                                        const DetourOptions& opts) {
  if (q_min < 1 || q_max < q_min) {
    throw std::domain_error("real_network_resilience: bad q range");
  }
  ResilienceCurve curve;
  std::mt19937_64 master(seed);
  const std::uint64_t pair_seed = master();
  auto pairs = select_hub_pairs(g, opts, pair_seed);
  if (pairs.empty()) {
    curve.warnings.push_back("no feasible hub pairs");
    return curve;
  }
  if (int(pairs.size()) < opts.pair_count) {
    curve.warnings.push_back("only " + std::to_string(pairs.size()) +
                             " feasible hub pairs found");
  }
  struct PairData {
    PathBundle bundle;
    double theta_inf[2];
  };
  std::vector<PairData> data;
  for (const auto& [a, b] : pairs) {
    PairData pd{*extract_bundle(g, a, b, opts), {0.0, 0.0}};
    const std::uint64_t l0 = pd.bundle.paths[0].size() - 1;
    pd.theta_inf[0] =
        shortest_only_threshold(Calculus::Classical, l0, opts.target);
    pd.theta_inf[1] =
        shortest_only_threshold(Calculus::Quantum, l0, opts.target);
    data.push_back(std::move(pd));
  }
  for (int q = q_min; q <= q_max; ++q) {
    std::vector<double> thetas[2], gaps[2];
    for (const auto& pd : data) {
      const std::uint64_t reroute_seed = master();
      const auto bundles = reroute_bundle(g, pd.bundle, q, reroute_seed, opts);
      for (const auto& nb : bundles) {
        const PathEnsemble ens = nb.ensemble();
        for (int c = 0; c < 2; ++c) {
          const Calculus cal =
              c == 0 ? Calculus::Classical : Calculus::Quantum;
          const double th = ensemble_threshold(cal, ens, opts.target);
          thetas[c].push_back(th);
          gaps[c].push_back(pd.theta_inf[c] - th);
        }
      }
    }
    if (thetas[0].empty()) {
      curve.warnings.push_back("q=" + std::to_string(q) +
                               ": no reroute samples found; point omitted");
      continue;
    }
    for (int c = 0; c < 2; ++c) {
      const Calculus cal = c == 0 ? Calculus::Classical : Calculus::Quantum;
      curve.points.push_back(ResiliencePoint{
          q, cal, mean(thetas[c]), stderr_of_mean(thetas[c]),
          double(q) * mean(gaps[c]), int(thetas[c].size())});
    }
  }
  return curve;
}

}  // namespace conperc
