#include <stdexcept>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "conperc/flower.hpp"
#include "conperc/network.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace conperc;
using conperc::testing::enumerate_classical_crossing;
using conperc::testing::flower_network;

namespace {
const Calculus kBoth[2] = {Calculus::Classical, Calculus::Quantum};
}

TEST_CASE("single edge and disconnected terminals") {
  TwoTerminalNetwork net;
  net.add_edge(0, 1, 0.37);
  CHECK(reduce_two_terminal(Calculus::Classical, net) ==
        doctest::Approx(0.37));
  TwoTerminalNetwork split;
  split.add_edge(0, 2, 0.5);
  split.add_edge(1, 3, 0.5);
  CHECK(reduce_two_terminal(Calculus::Quantum, split) == 0.0);
  TwoTerminalNetwork dead;
  dead.add_edge(0, 1, 0.0);
  CHECK(reduce_two_terminal(Calculus::Classical, dead) == 0.0);
}

TEST_CASE("star_to_mesh on dead and symmetric stars") {
  MeshGraph zero = star_to_mesh(Calculus::Classical, StarGraph{{0.0, 0.0, 0.0}});
  CHECK(zero.at(0, 1) == 0.0);
  CHECK(zero.at(0, 2) == 0.0);
  CHECK(zero.at(1, 2) == 0.0);

  for (Calculus cal : kBoth) {
    MeshGraph mesh = star_to_mesh(cal, StarGraph{{0.9, 0.9, 0.9}});
    CHECK(mesh.at(0, 1) == doctest::Approx(mesh.at(0, 2)).epsilon(1e-9));
    CHECK(mesh.at(0, 1) == doctest::Approx(mesh.at(1, 2)).epsilon(1e-9));
    // the defining equations: pairwise cross equals the series of the legs
    CHECK(cross_weight(cal, mesh, 0, 1) ==
          doctest::Approx(0.81).epsilon(1e-9));
  }
}

TEST_CASE("star_to_mesh residuals on asymmetric stars, both calculi") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.3, 0.97);
  for (int trial = 0; trial < 6; ++trial) {
    const Calculus cal = trial % 2 == 0 ? Calculus::Classical : Calculus::Quantum;
    const int s = 3 + trial % 2;  // 3- and 4-leaf stars
    StarGraph star;
    for (int i = 0; i < s; ++i) star.legs.push_back(unif(rng));
    MeshGraph mesh = star_to_mesh(cal, star);
    for (int i = 0; i < s; ++i) {
      for (int j = i + 1; j < s; ++j) {
        const double want = seri(cal, star.legs[i], star.legs[j]);
        CHECK(cross_weight(cal, mesh, i, j) ==
              doctest::Approx(want).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("cross_weight: 2-node mesh and the triangle oracle") {
  MeshGraph pair(2);
  pair.at(0, 1) = 0.42;
  CHECK(cross_weight(Calculus::Classical, pair, 0, 1) == 0.42);

  for (Calculus cal : kBoth) {
    MeshGraph tri(3);
    const double a = 0.8, b = 0.6, d = 0.3;
    tri.at(0, 2) = a;  // i-k
    tri.at(2, 1) = b;  // k-j
    tri.at(0, 1) = d;  // i-j
    const double want = para(cal, d, seri(cal, a, b));
    CHECK(cross_weight(cal, tri, 0, 1) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("cross_weight on K4 matches 2^6 enumeration (classical)") {
  MeshGraph k4(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) k4.at(i, j) = 0.5;
  }
  TwoTerminalNetwork net;
  net.a = 0;
  net.b = 1;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) net.add_edge(i, j, 0.5);
  }
  const double exact = enumerate_classical_crossing(net);
  const double got = cross_weight(Calculus::Classical, k4, 0, 1);
  // K4 is not series-parallel; the star-mesh closure is a few permil off
  CHECK(std::fabs(got / exact - 1.0) < 0.01);
}

TEST_CASE("reduction is exact on (U,V) flowers, n <= 3, U,V <= 3") {
  for (Calculus cal : kBoth) {
    for (int u = 1; u <= 3; ++u) {
      for (int v = std::max(u, 2); v <= 3; ++v) {
        for (int n = 0; n <= 3; ++n) {
          if (std::pow(double(u + v), n) > 300) continue;  // keep it quick
          for (double w : {0.35, 0.8}) {
            const TwoTerminalNetwork net = flower_network(u, v, n, w);
            const double got = reduce_two_terminal(cal, net);
            const double want = sponge_crossing(cal, u, v, n, w);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
          }
        }
      }
    }
  }
}

TEST_CASE("classical reduction equals enumeration on series-parallel graphs "
          "with up to 16 edges") {
  // generation-2 (2,2) flower: 16 edges
  for (double w : {0.3, 0.6180339887498949, 0.85}) {
    const TwoTerminalNetwork net = flower_network(2, 2, 2, w);
    CHECK(reduce_two_terminal(Calculus::Classical, net) ==
          doctest::Approx(enumerate_classical_crossing(net)).epsilon(1e-12));
  }
  // generation-1 (2,3) and (3,3) flowers with mixed weights
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.1, 0.95);
  for (int trial = 0; trial < 10; ++trial) {
    TwoTerminalNetwork net = flower_network(2, 3, 1, 0.5);
    for (auto& e : net.edges) e.w = unif(rng);
    CHECK(reduce_two_terminal(Calculus::Classical, net) ==
          doctest::Approx(enumerate_classical_crossing(net)).epsilon(1e-12));
  }
  // a series-parallel ladder built by nested compositions
  TwoTerminalNetwork ladder;
  ladder.add_edge(0, 2, 0.9);
  ladder.add_edge(2, 1, 0.8);
  ladder.add_edge(0, 3, 0.7);
  ladder.add_edge(3, 1, 0.6);
  ladder.add_edge(0, 1, 0.2);
  CHECK(reduce_two_terminal(Calculus::Classical, ladder) ==
        doctest::Approx(enumerate_classical_crossing(ladder)).epsilon(1e-12));
}

TEST_CASE("3x3 grid: star-mesh closure lands within 5% of enumeration") {
  // measured offsets: +3.9% at p=0.3, +3.6% at p=0.5, +0.1% at p=0.7
  for (double p : {0.3, 0.5, 0.7}) {
    TwoTerminalNetwork net;
    net.a = 0;
    net.b = 8;
    auto id = [](int r, int c) { return 3 * r + c; };
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (c + 1 < 3) net.add_edge(id(r, c), id(r, c + 1), p);
        if (r + 1 < 3) net.add_edge(id(r, c), id(r + 1, c), p);
      }
    }
    const double exact = enumerate_classical_crossing(net);
    const double got = reduce_two_terminal(Calculus::Classical, net);
    CHECK(std::fabs(got / exact - 1.0) < 0.05);
  }
}

TEST_CASE("elimination order independence: node relabeling does not change "
          "series-parallel results") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.2, 0.95);
  TwoTerminalNetwork net = flower_network(2, 3, 2, 0.5);
  for (auto& e : net.edges) e.w = unif(rng);
  for (Calculus cal : kBoth) {
    const double base = reduce_two_terminal(cal, net);
    // reverse all interior ids; terminals keep 0/1
    int max_id = 0;
    for (const auto& e : net.edges) max_id = std::max({max_id, e.u, e.v});
    auto remap = [&](int x) { return x <= 1 ? x : max_id + 2 - x; };
    TwoTerminalNetwork relabeled;
    for (const auto& e : net.edges) {
      relabeled.add_edge(remap(e.u), remap(e.v), e.w);
    }
    CHECK(reduce_two_terminal(cal, relabeled) ==
          doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("monotonicity: raising an edge weight never lowers the crossing") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  TwoTerminalNetwork net;
  net.a = 0;
  net.b = 8;
  auto id = [](int r, int c) { return 3 * r + c; };
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (c + 1 < 3) net.add_edge(id(r, c), id(r, c + 1), unif(rng));
      if (r + 1 < 3) net.add_edge(id(r, c), id(r + 1, c), unif(rng));
    }
  }
  for (Calculus cal : kBoth) {
    const double base = reduce_two_terminal(cal, net);
    for (std::size_t i = 0; i < net.edges.size(); i += 3) {
      TwoTerminalNetwork bumped = net;
      bumped.edges[i].w = std::min(1.0, bumped.edges[i].w + 0.05);
      CHECK(reduce_two_terminal(cal, bumped) >= base - 1e-9);
    }
  }
}

TEST_CASE("mesh_to_star: degenerate two-boundary case") {
  TwoTerminalNetwork path;
  path.add_edge(0, 2, 0.9);
  path.add_edge(2, 1, 0.8);
  const StarGraph star = mesh_to_star(Calculus::Classical, path, {0, 1});
  CHECK(seri(Calculus::Classical, star.legs[0], star.legs[1]) ==
        doctest::Approx(0.72).epsilon(1e-12));
}

TEST_CASE("mesh_to_star on the five-node cycle with three boundary nodes") {
  // cycle 1-3-4-2-5-1 with boundary {1, 2, 3}: the pairwise equations are
  //   seri(t1,t2) = para(seri(w15,w25), seri(w13,w34,w24))
  //   seri(t1,t3) = para(w13, seri(w15,w25,w24,w34))
  //   seri(t2,t3) = para(seri(w24,w34), seri(w13,w15,w25))
  const double w13 = 0.85, w15 = 0.9, w25 = 0.8, w24 = 0.75, w34 = 0.95;
  for (Calculus cal : kBoth) {
    TwoTerminalNetwork cyc;
    cyc.add_edge(1, 3, w13);
    cyc.add_edge(1, 5, w15);
    cyc.add_edge(5, 2, w25);
    cyc.add_edge(2, 4, w24);
    cyc.add_edge(4, 3, w34);
    const StarGraph star = mesh_to_star(cal, cyc, {1, 2, 3});
    const double t12 = para(cal, seri(cal, w15, w25),
                            seri(cal, std::vector<double>{w13, w34, w24}));
    const double t13 = para(
        cal, w13, seri(cal, std::vector<double>{w15, w25, w24, w34}));
    const double t23 = para(cal, seri(cal, w24, w34),
                            seri(cal, std::vector<double>{w13, w15, w25}));
    CHECK(seri(cal, star.legs[0], star.legs[1]) ==
          doctest::Approx(t12).epsilon(1e-10));
    CHECK(seri(cal, star.legs[0], star.legs[2]) ==
          doctest::Approx(t13).epsilon(1e-10));
    CHECK(seri(cal, star.legs[1], star.legs[2]) ==
          doctest::Approx(t23).epsilon(1e-10));
  }
}

TEST_CASE("mesh_to_star: symmetric three-boundary cycle has equal legs") {
  TwoTerminalNetwork cyc;
  cyc.add_edge(0, 1, 0.8);
  cyc.add_edge(1, 2, 0.8);
  cyc.add_edge(2, 0, 0.8);
  const StarGraph star = mesh_to_star(Calculus::Quantum, cyc, {0, 1, 2});
  CHECK(star.legs[0] == doctest::Approx(star.legs[1]).epsilon(1e-12));
  CHECK(star.legs[1] == doctest::Approx(star.legs[2]).epsilon(1e-12));
}

TEST_CASE("mesh_to_star rejects inconsistent overdetermined systems") {
  // K4 with one edge much heavier: four boundary nodes cannot be decoupled
  // into star legs
  TwoTerminalNetwork k4;
  k4.add_edge(0, 1, 0.95);
  k4.add_edge(0, 2, 0.2);
  k4.add_edge(0, 3, 0.2);
  k4.add_edge(1, 2, 0.2);
  k4.add_edge(1, 3, 0.2);
  k4.add_edge(2, 3, 0.95);
  CHECK_THROWS_AS(mesh_to_star(Calculus::Classical, k4, {0, 1, 2, 3}),
                  SolverError);
}

TEST_CASE("parallel multi-edges merge before reduction") {
  TwoTerminalNetwork net;
  net.add_edge(0, 1, 0.5);
  net.add_edge(0, 1, 0.5);
  CHECK(reduce_two_terminal(Calculus::Classical, net) ==
        doctest::Approx(0.75).epsilon(1e-15));
}
