#pragma once

#include <vector>

#include "conperc/broyden.hpp"
#include "conperc/calculus.hpp"

namespace conperc {

// Weighted undirected multigraph with two distinguished terminals. Node ids
// are arbitrary non-negative integers; parallel edges are allowed and merged
// during reduction.
struct TwoTerminalNetwork {
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  int a = 0;
  int b = 1;

  void add_edge(int u, int v, double w);
};

// Star with a root and s legs; only the leg weights matter.
struct StarGraph {
  std::vector<double> legs;
};

// Complete graph on s nodes, weights stored as the upper triangle (i < j).
class MeshGraph {
 public:
  explicit MeshGraph(int s);
  int size() const { return s_; }
  double& at(int i, int j);
  double at(int i, int j) const;

 private:
  int s_;
  std::vector<double> w_;
};

// Replace an (s+1)-node star by the equivalent s-node complete graph: the
// s(s-1)/2 mesh weights satisfy seri(leg_i, leg_j) = cross_weight(i, j)
// for every pair. s = 2 is a plain series merge; s >= 3 is solved with
// broyden_solve seeded at seri(leg_i, leg_j). Residuals are driven to
// <= 1e-10 or SolverError is thrown.
MeshGraph star_to_mesh(Calculus cal, const StarGraph& star);

// Net two-terminal weight between mesh nodes i and j, obtained by repeatedly
// star-meshing away the smallest non-terminal node and parallel-combining
// the result with the remaining edges, until only edge (i, j) is left.
double cross_weight(Calculus cal, const MeshGraph& mesh, int i, int j);

// Inverse direction: given a subgraph and designated boundary nodes, find
// star legs whose pairwise series equal the subgraph's pairwise two-terminal
// cross weights. Series is multiplicative in both calculi, so 3 boundary
// nodes have the closed form leg_a = sqrt(t_ab t_ac / t_bc); more than 3 are
// solved least-squares in log space and must agree to residual <= 1e-10.
StarGraph mesh_to_star(Calculus cal, const TwoTerminalNetwork& subgraph,
                       const std::vector<int>& boundary);

// Full two-terminal reduction: parallel merges, series merges of degree-2
// non-terminals, then star-mesh elimination of the minimum-degree
// non-terminal node (ties broken by smallest id), to a fixed point. Exact on
// series-parallel graphs; the star-mesh closure is an approximation
// elsewhere. Disconnected terminals give 0.
double reduce_two_terminal(Calculus cal, const TwoTerminalNetwork& net);

}  // namespace conperc
