#include "conperc/network.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace conperc {

namespace {

constexpr double kStarMeshTol = 1e-11;
constexpr double kStarMeshCheck = 1e-10;

struct PairKey {
  int u, v;
  bool operator<(const PairKey& o) const {
    return u != o.u ? u < o.u : v < o.v;
  }
};

PairKey key(int u, int v) { return u < v ? PairKey{u, v} : PairKey{v, u}; }

// Working form of a network during reduction: simple weighted edges, parallel
// duplicates merged on insert.
class WorkGraph {
 public:
  WorkGraph(Calculus cal) : cal_(cal) {}

  void add(int u, int v, double w) {
    if (u == v || w <= 0.0) return;  // self-loops and dead links drop out
    auto [it, fresh] = edges_.try_emplace(key(u, v), w);
    if (!fresh) it->second = para(cal_, it->second, w);
  }

  const std::map<PairKey, double>& edges() const { return edges_; }

  std::map<int, int> degrees() const {
    std::map<int, int> deg;
    for (const auto& [k, w] : edges_) {
      ++deg[k.u];
      ++deg[k.v];
    }
    return deg;
  }

  std::map<int, double> neighbors(int n) const {
    std::map<int, double> out;
    for (const auto& [k, w] : edges_) {
      if (k.u == n) out[k.v] = w;
      if (k.v == n) out[k.u] = w;
    }
    return out;
  }

  void erase_node(int n) {
    for (auto it = edges_.begin(); it != edges_.end();) {
      it = (it->first.u == n || it->first.v == n) ? edges_.erase(it) : ++it;
    }
  }

  double weight(int u, int v) const {
    auto it = edges_.find(key(u, v));
    return it == edges_.end() ? 0.0 : it->second;
  }

  Calculus cal() const { return cal_; }

 private:
  Calculus cal_;
  std::map<PairKey, double> edges_;
};

// Series/dangling simplification to a fixed point. Terminals are never
// removed.
void simplify(WorkGraph& g, int a, int b) {
  for (;;) {
    auto deg = g.degrees();
    int series_node = -1, dangling = -1;
    for (const auto& [n, d] : deg) {
      if (n == a || n == b) continue;
      if (d <= 1 && dangling < 0) dangling = n;
      if (d == 2 && series_node < 0) series_node = n;
    }
    if (dangling >= 0) {
      g.erase_node(dangling);
      continue;
    }
    if (series_node >= 0) {
      auto nb = g.neighbors(series_node);
      auto it = nb.begin();
      const auto [n1, w1] = *it++;
      const auto [n2, w2] = *it;
      g.erase_node(series_node);
      g.add(n1, n2, seri(g.cal(), w1, w2));
      continue;
    }
    return;
  }
}

MeshGraph cross_eliminate_once(Calculus cal, const MeshGraph& mesh,
                               const std::vector<int>& keep, int victim);

double cross_on_mesh(Calculus cal, MeshGraph mesh, int i, int j) {
  std::vector<int> nodes(mesh.size());
  for (int k = 0; k < mesh.size(); ++k) nodes[k] = k;
  while (nodes.size() > 2) {
    int victim = -1;
    for (int n : nodes) {
      if (n != i && n != j) {
        victim = n;
        break;
      }
    }
    std::vector<int> keep;
    for (int n : nodes) {
      if (n != victim) keep.push_back(n);
    }
    mesh = cross_eliminate_once(cal, mesh, keep, victim);
    // cross_eliminate_once relabels to 0..keep.size()-1 in keep order
    auto pos = [&](int n) {
      return int(std::find(keep.begin(), keep.end(), n) - keep.begin());
    };
    i = pos(i);
    j = pos(j);
    nodes.resize(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) nodes[k] = int(k);
  }
  return mesh.at(0, 1);
}

// One Comb step: star-mesh the sub-star rooted at `victim` and parallel-merge
// it into the complement. Nodes in `keep` are relabeled to 0..keep-1.
MeshGraph cross_eliminate_once(Calculus cal, const MeshGraph& mesh,
                               const std::vector<int>& keep, int victim) {
  const int m = int(keep.size());
  MeshGraph out(m);
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      out.at(p, q) = mesh.at(keep[p], keep[q]);
    }
  }
  // legs of the sub-star; zero legs contribute nothing
  std::vector<int> live;
  std::vector<double> legs;
  for (int p = 0; p < m; ++p) {
    const double w = mesh.at(victim, keep[p]);
    if (w > 0.0) {
      live.push_back(p);
      legs.push_back(w);
    }
  }
  if (live.size() < 2) return out;
  if (live.size() == 2) {
    const double w = seri(cal, legs[0], legs[1]);
    int p = live[0], q = live[1];
    out.at(p, q) = para(cal, out.at(p, q), w);
    return out;
  }
  MeshGraph sub = star_to_mesh(cal, StarGraph{legs});
  for (std::size_t x = 0; x < live.size(); ++x) {
    for (std::size_t y = x + 1; y < live.size(); ++y) {
      int p = live[x], q = live[y];
      out.at(p, q) = para(cal, out.at(p, q), sub.at(int(x), int(y)));
    }
  }
  return out;
}

}  // namespace

void TwoTerminalNetwork::add_edge(int u, int v, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::domain_error("edge weight out of [0, 1]");
  }
  edges.push_back(Edge{u, v, w});
}

MeshGraph::MeshGraph(int s) : s_(s), w_(std::size_t(s) * (s - 1) / 2, 0.0) {
  if (s < 2) throw std::domain_error("MeshGraph needs at least 2 nodes");
}

double& MeshGraph::at(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j || i < 0 || j >= s_) throw std::out_of_range("MeshGraph::at");
  return w_[std::size_t(i) * (2 * s_ - i - 1) / 2 + (j - i - 1)];
}

double MeshGraph::at(int i, int j) const {
  return const_cast<MeshGraph*>(this)->at(i, j);
}

MeshGraph star_to_mesh(Calculus cal, const StarGraph& star) {
  const int s = int(star.legs.size());
  if (s < 2) throw std::domain_error("star_to_mesh: need at least 2 legs");
  for (double l : star.legs) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw std::domain_error("star_to_mesh: leg weight out of [0, 1]");
    }
  }
  MeshGraph mesh(s);
  // dead legs force zero rows; solve only over the live legs
  std::vector<int> live;
  for (int i = 0; i < s; ++i) {
    if (star.legs[i] > 0.0) live.push_back(i);
  }
  const int m = int(live.size());
  if (m < 2) return mesh;
  if (m == 2) {
    mesh.at(live[0], live[1]) =
        seri(cal, star.legs[live[0]], star.legs[live[1]]);
    return mesh;
  }

  std::vector<std::pair<int, int>> pairs;
  std::vector<double> target;
  for (int x = 0; x < m; ++x) {
    for (int y = x + 1; y < m; ++y) {
      pairs.emplace_back(x, y);
      target.push_back(seri(cal, star.legs[live[x]], star.legs[live[y]]));
    }
  }
  auto residual = [&](const std::vector<double>& w) {
    MeshGraph cand(m);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      cand.at(pairs[k].first, pairs[k].second) = w[k];
    }
    std::vector<double> r(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      r[k] = cross_weight(cal, cand, pairs[k].first, pairs[k].second) -
             target[k];
    }
    return r;
  };
  BroydenOptions opts;
  opts.tol = kStarMeshTol;
  std::vector<double> x0 = target;
  std::vector<double> sol = broyden_solve(residual, x0, opts);
  std::vector<double> check = residual(sol);
  double worst = 0.0;
  for (double r : check) worst = std::max(worst, std::fabs(r));
  if (worst > kStarMeshCheck) {
    throw SolverError("star_to_mesh: residual " + std::to_string(worst),
                      worst);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    mesh.at(live[pairs[k].first], live[pairs[k].second]) = sol[k];
  }
  return mesh;
}

double cross_weight(Calculus cal, const MeshGraph& mesh, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= mesh.size() || j >= mesh.size()) {
    throw std::domain_error("cross_weight: bad terminal pair");
  }
  return cross_on_mesh(cal, mesh, i, j);
}

StarGraph mesh_to_star(Calculus cal, const TwoTerminalNetwork& subgraph,
                       const std::vector<int>& boundary) {
  const int k = int(boundary.size());
  if (k < 2) throw std::domain_error("mesh_to_star: need >= 2 boundary nodes");
  std::set<int> uniq(boundary.begin(), boundary.end());
  if (int(uniq.size()) != k) {
    throw std::domain_error("mesh_to_star: duplicate boundary node");
  }

  // pairwise cross weights of the subgraph
  std::map<std::pair<int, int>, double> cross;
  for (int x = 0; x < k; ++x) {
    for (int y = x + 1; y < k; ++y) {
      TwoTerminalNetwork net = subgraph;
      net.a = boundary[x];
      net.b = boundary[y];
      cross[{x, y}] = reduce_two_terminal(cal, net);
    }
  }

  StarGraph star;
  star.legs.assign(k, 0.0);
  bool all_zero = true, any_zero = false;
  for (const auto& [p, t] : cross) {
    if (t == 0.0) {
      any_zero = true;
    } else {
      all_zero = false;
    }
  }
  if (all_zero) return star;
  if (any_zero) {
    throw SolverError("mesh_to_star: mixed zero and nonzero cross weights",
                      1.0);
  }

  if (k == 2) {
    const double t = cross[{0, 1}];
    star.legs[0] = star.legs[1] = std::sqrt(t);
    return star;
  }

  // seri is multiplicative, so ln(leg_a) + ln(leg_b) = ln(t_ab) is linear;
  // solve by least squares (exact for k = 3).
  const int rows = k * (k - 1) / 2;
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(rows, k);
  Eigen::VectorXd rhs(rows);
  int r = 0;
  for (int x = 0; x < k; ++x) {
    for (int y = x + 1; y < k; ++y) {
      mat(r, x) = 1.0;
      mat(r, y) = 1.0;
      rhs(r) = std::log(cross[{x, y}]);
      ++r;
    }
  }
  Eigen::VectorXd ln_legs = mat.colPivHouseholderQr().solve(rhs);
  double worst = 0.0;
  for (int x = 0, rr = 0; x < k; ++x) {
    for (int y = x + 1; y < k; ++y, ++rr) {
      const double fitted = std::exp(ln_legs(x) + ln_legs(y));
      worst = std::max(worst, std::fabs(fitted - cross[{x, y}]));
    }
  }
  if (worst > kStarMeshCheck) {
    throw SolverError(
        "mesh_to_star: inconsistent boundary cross weights, residual " +
            std::to_string(worst),
        worst);
  }
  for (int x = 0; x < k; ++x) {
    star.legs[x] = std::min(1.0, std::exp(ln_legs(x)));
  }
  return star;
}

double reduce_two_terminal(Calculus cal, const TwoTerminalNetwork& net) {
  if (net.a == net.b) {
    throw std::domain_error("reduce_two_terminal: identical terminals");
  }
  WorkGraph g(cal);
  for (const auto& e : net.edges) {
    if (!(e.w >= 0.0 && e.w <= 1.0)) {
      throw std::domain_error("reduce_two_terminal: edge weight out of [0,1]");
    }
    g.add(e.u, e.v, e.w);
  }
  for (;;) {
    simplify(g, net.a, net.b);
    // pick the minimum-degree non-terminal (>= 3 after simplify)
    auto deg = g.degrees();
    int victim = -1, best = -1;
    for (const auto& [n, d] : deg) {
      if (n == net.a || n == net.b) continue;
      if (victim < 0 || d < best) {
        victim = n;
        best = d;
      }
    }
    if (victim < 0) break;
    auto nb = g.neighbors(victim);
    std::vector<int> ids;
    std::vector<double> legs;
    for (const auto& [n, w] : nb) {
      ids.push_back(n);
      legs.push_back(w);
    }
    g.erase_node(victim);
    try {
      MeshGraph mesh = star_to_mesh(cal, StarGraph{legs});
      for (std::size_t x = 0; x < ids.size(); ++x) {
        for (std::size_t y = x + 1; y < ids.size(); ++y) {
          g.add(ids[x], ids[y], mesh.at(int(x), int(y)));
        }
      }
    } catch (const SolverError& err) {
      throw SolverError("reduce_two_terminal: eliminating node " +
                            std::to_string(victim) + ": " + err.what(),
                        err.best_residual());
    }
  }
  return g.weight(net.a, net.b);
}

}  // namespace conperc
