#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <json.hpp>

#include "qteleroute/routing.hpp"

using namespace qtr;

namespace {

NodeInfo node_at(int id, double x, double y, int cap = 50) {
  NodeInfo n;
  n.id = id;
  n.x_km = x;
  n.y_km = y;
  n.memory_capacity = cap;
  return n;
}

EdgeInfo edge_between(const NetworkGraph& g, int u, int v, double weight,
                      double fidelity = 1.0) {
  EdgeInfo e;
  e.u = u;
  e.v = v;
  e.length_km = euclidean_km(g.nodes[u], g.nodes[v]);
  e.weight = weight;
  e.link_fidelity = fidelity;
  return e;
}

// Seeded Erdos-Renyi-style graph with uniform [1, 10] weights; positions only
// anchor the length invariant.
NetworkGraph random_graph(int n, double p, Rng& rng) {
  NetworkGraph g;
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(node_at(i, pos(rng), pos(rng)));
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> w(1.0, 10.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng) < p) g.edges.push_back(edge_between(g, i, j, w(rng)));
    }
  }
  return g;
}

// Exhaustive minimum over all simple paths, with partial-cost pruning (safe
// for nonnegative edge costs): every potentially optimal path is explored.
void all_paths_min(const NetworkGraph& g,
                   const std::vector<std::vector<std::pair<int, int>>>& adj,
                   const EdgeCostFn& cost, int u, int t, std::vector<char>& on,
                   double acc, double& best) {
  if (acc >= best) return;
  if (u == t) {
    best = acc;
    return;
  }
  on[u] = 1;
  for (auto [v, k] : adj[u]) {
    if (!on[v]) all_paths_min(g, adj, cost, v, t, on, acc + cost(g.edges[k]), best);
  }
  on[u] = 0;
}

double brute_force_cost(const NetworkGraph& g, int s, int t,
                        const EdgeCostFn& cost) {
  auto adj = adjacency(g);
  std::vector<char> on(g.nodes.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  all_paths_min(g, adj, cost, s, t, on, 0.0, best);
  return best;
}

bool graph_connected(const NetworkGraph& g) {
  if (g.nodes.empty()) return true;
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  auto adj = adjacency(g);
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [v, k] : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  for (char c : seen) {
    if (!c) return false;
  }
  return true;
}

std::map<std::string, double> exact_map(const WalkResult& r) {
  return std::map<std::string, double>(r.exact.begin(), r.exact.end());
}

double total_variation(const WalkResult& a, const WalkResult& b) {
  auto da = exact_map(a), db = exact_map(b);
  std::set<std::string> keys;
  for (auto& [k, v] : da) keys.insert(k);
  for (auto& [k, v] : db) keys.insert(k);
  double s = 0.0;
  for (const std::string& k : keys) {
    double pa = da.count(k) ? da[k] : 0.0;
    double pb = db.count(k) ? db[k] : 0.0;
    s += std::abs(pa - pb);
  }
  return s / 2.0;
}

}  // namespace

TEST_CASE("graph validation catches each broken invariant") {
  NetworkGraph g;
  g.nodes.push_back(node_at(0, 0, 0));
  g.nodes.push_back(node_at(1, 3, 4));
  g.edges.push_back(edge_between(g, 0, 1, 2.0, 0.9));
  CHECK_NOTHROW(validate_graph(g));
  CHECK(g.edges[0].length_km == doctest::Approx(5.0).epsilon(1e-12));

  NetworkGraph bad = g;
  bad.nodes[1].id = 7;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);

  bad = g;
  bad.edges[0].v = 0;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);

  bad = g;
  bad.edges.push_back(bad.edges[0]);
  std::swap(bad.edges[1].u, bad.edges[1].v);  // same pair, reversed
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);

  bad = g;
  bad.edges[0].length_km += 1e-6;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);

  bad = g;
  bad.edges[0].weight = 0.0;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);

  bad = g;
  bad.edges[0].link_fidelity = 0.0;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);
  bad.edges[0].link_fidelity = 1.0 + 1e-9;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);

  bad = g;
  bad.nodes[0].memory_in_use = 51;
  CHECK_THROWS_AS(validate_graph(bad), std::invalid_argument);
}

TEST_CASE("random topology generation: ranges, invariants, determinism") {
  WaxmanParams p;
  p.num_nodes = 50;
  p.width_km = 800.0;
  p.height_km = 600.0;
  p.delta = 0.9;
  p.epsilon = 0.3;

  Rng rng(5);
  NetworkGraph g = waxman_generate(p, rng);
  REQUIRE(g.nodes.size() == 50);
  CHECK(g.edges.size() > 0);
  CHECK_NOTHROW(validate_graph(g));
  for (const NodeInfo& n : g.nodes) {
    CHECK(n.x_km >= 0.0);
    CHECK(n.x_km <= 800.0);
    CHECK(n.y_km >= 0.0);
    CHECK(n.y_km <= 600.0);
    CHECK(n.memory_capacity == 50);
  }
  for (const EdgeInfo& e : g.edges) {
    CHECK(e.weight == e.length_km);  // fresh edges carry their length
    CHECK(e.link_fidelity == 1.0);
  }

  Rng rng2(5);
  NetworkGraph same = waxman_generate(p, rng2);
  CHECK(graph_json(same) == graph_json(g));
  Rng rng3(6);
  NetworkGraph other = waxman_generate(p, rng3);
  CHECK(graph_json(other) != graph_json(g));

  WaxmanParams bad = p;
  bad.num_nodes = 1;
  CHECK_THROWS_AS(waxman_generate(bad, rng), std::invalid_argument);
  bad = p;
  bad.delta = 0.0;
  CHECK_THROWS_AS(waxman_generate(bad, rng), std::invalid_argument);
  bad = p;
  bad.delta = 1.5;
  CHECK_THROWS_AS(waxman_generate(bad, rng), std::invalid_argument);
  bad = p;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(waxman_generate(bad, rng), std::invalid_argument);
}

TEST_CASE("edge frequencies on a fixed layout match the decay law (5-sigma)") {
  WaxmanParams p;
  p.num_nodes = 6;
  p.width_km = 1000.0;
  p.height_km = 1000.0;
  p.delta = 0.9;
  p.epsilon = 0.2;
  Rng layout_rng(42);
  const NetworkGraph base = waxman_nodes(p, layout_rng);
  const double L = max_pairwise_distance_km(base);
  REQUIRE(L > 0.0);

  const int trials = 10000;
  std::map<std::pair<int, int>, int> counts;
  Rng rng(999);
  for (int t = 0; t < trials; ++t) {
    NetworkGraph g = base;
    waxman_connect(g, p.delta, p.epsilon, rng);
    for (const EdgeInfo& e : g.edges) counts[{e.u, e.v}]++;
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const double l = euclidean_km(base.nodes[i], base.nodes[j]);
      const double prob = p.delta * std::exp(-l / (p.epsilon * L));
      const double freq = counts[{i, j}] / static_cast<double>(trials);
      const double sigma = std::sqrt(prob * (1.0 - prob) / trials);
      CHECK(std::abs(freq - prob) <= 5.0 * sigma);
    }
  }

  // Coincident nodes: zero distance means probability exactly delta.
  NetworkGraph twin;
  twin.nodes.push_back(node_at(0, 10.0, 10.0));
  twin.nodes.push_back(node_at(1, 10.0, 10.0));
  int hits = 0;
  Rng rng2(31);
  for (int t = 0; t < trials; ++t) {
    NetworkGraph g = twin;
    waxman_connect(g, 0.9, 0.2, rng2);
    hits += static_cast<int>(g.edges.size());
  }
  const double sigma0 = std::sqrt(0.9 * 0.1 / trials);
  CHECK(std::abs(hits / static_cast<double>(trials) - 0.9) <= 5.0 * sigma0);
}

TEST_CASE("continental-scale generation yields ~100 km adjacent edges") {
  WaxmanParams p;
  p.num_nodes = 200;
  p.width_km = 2000.0;
  p.height_km = 4000.0;
  p.delta = 0.90;
  p.epsilon = 0.01;
  double len_sum = 0.0;
  long long len_n = 0;
  for (int s = 0; s < 25; ++s) {
    Rng rng(1000 + s);
    NetworkGraph g = waxman_generate(p, rng);
    for (const EdgeInfo& e : g.edges) {
      len_sum += e.length_km;
      ++len_n;
    }
  }
  REQUIRE(len_n > 0);
  const double mean = len_sum / static_cast<double>(len_n);
  CHECK(mean >= 70.0);
  CHECK(mean <= 130.0);
}

TEST_CASE("multi-criteria edge cost: pinned examples and monotonicity") {
  McdmWeights dist_only{1.0, 0.0, 0.0};
  McdmWeights fid_only{0.0, 1.0, 0.0};
  McdmWeights half{0.5, 0.5, 0.0};

  EdgeCostView v;
  v.length_km = 250.0;
  v.length_norm_km = 250.0;
  v.link_fidelity = 1.0;
  v.free_memory_fraction = 1.0;
  CHECK(mcdm_cost(v, dist_only) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mcdm_cost(v, fid_only) == doctest::Approx(0.0).epsilon(1e-12));

  v.link_fidelity = 0.9;
  CHECK(mcdm_cost(v, half) == doctest::Approx(0.55).epsilon(1e-12));

  // Strictly increasing in length with any positive distance weight.
  McdmWeights mixed{0.4, 0.3, 0.3};
  v.free_memory_fraction = 0.5;
  double prev = -1.0;
  for (double len : {10.0, 50.0, 100.0, 200.0, 250.0}) {
    v.length_km = len;
    const double c = mcdm_cost(v, mixed);
    CHECK(c > prev);
    prev = c;
  }

  CHECK_THROWS_AS(mcdm_cost(v, McdmWeights{0.5, 0.4, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(mcdm_cost(v, McdmWeights{1.2, -0.2, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("graph-bound cost uses the longest edge and endpoint memory") {
  NetworkGraph g;
  g.nodes.push_back(node_at(0, 0, 0));
  g.nodes.push_back(node_at(1, 100, 0));
  g.nodes.push_back(node_at(2, 100, 75));
  g.edges.push_back(edge_between(g, 0, 1, 1.0, 0.8));  // length 100
  g.edges.push_back(edge_between(g, 1, 2, 1.0, 1.0));  // length 75
  g.nodes[0].memory_in_use = 10;                       // free fraction 0.8
  g.nodes[1].memory_in_use = 25;                       // free fraction 0.5

  auto cost = make_mcdm_cost(g, {0.5, 0.25, 0.25});
  // Edge 0-1: 0.5 * (100/100) + 0.25 * 0.2 + 0.25 * (1 - 0.5)
  CHECK(cost(g.edges[0]) == doctest::Approx(0.675).epsilon(1e-12));
  // Edge 1-2: 0.5 * 0.75 + 0 + 0.25 * 0.5
  CHECK(cost(g.edges[1]) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(make_mcdm_cost(g, {0.7, 0.0, 0.0}), std::invalid_argument);

  NetworkGraph empty;
  empty.nodes.push_back(node_at(0, 0, 0));
  CHECK(max_edge_length_km(empty) == 1.0);
}

TEST_CASE("shortest path: triangle example, endpoints, tie-break") {
  // Triangle where the two-hop route (1 + 1) beats the direct edge (3).
  NetworkGraph g;
  g.nodes.push_back(node_at(0, 0, 0));
  g.nodes.push_back(node_at(1, 1, 0));
  g.nodes.push_back(node_at(2, 2, 0));
  g.edges.push_back(edge_between(g, 0, 1, 1.0));
  g.edges.push_back(edge_between(g, 1, 2, 1.0));
  g.edges.push_back(edge_between(g, 0, 2, 3.0));

  auto path = dijkstra(g, 0, 2, weight_cost());
  REQUIRE(path.has_value());
  CHECK(path->nodes == std::vector<int>{0, 1, 2});
  CHECK(path->total_cost == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(path->hop_count == 2);

  auto self = dijkstra(g, 1, 1, weight_cost());
  REQUIRE(self.has_value());
  CHECK(self->nodes == std::vector<int>{1});
  CHECK(self->total_cost == 0.0);
  CHECK(self->hop_count == 0);

  // Unreachable: isolated node.
  NetworkGraph h = g;
  h.nodes.push_back(node_at(3, 5, 5));
  CHECK_FALSE(dijkstra(h, 0, 3, weight_cost()).has_value());

  // Equal-cost diamond resolves toward the smaller intermediate id.
  NetworkGraph d;
  d.nodes.push_back(node_at(0, 0, 0));
  d.nodes.push_back(node_at(1, 1, 0));
  d.nodes.push_back(node_at(2, 0, 1));
  d.nodes.push_back(node_at(3, 1, 1));
  d.edges.push_back(edge_between(d, 0, 1, 1.0));
  d.edges.push_back(edge_between(d, 0, 2, 1.0));
  d.edges.push_back(edge_between(d, 1, 3, 1.0));
  d.edges.push_back(edge_between(d, 2, 3, 1.0));
  auto tie = dijkstra(d, 0, 3, weight_cost());
  REQUIRE(tie.has_value());
  CHECK(tie->nodes == std::vector<int>{0, 1, 3});

  CHECK_THROWS_AS(dijkstra(g, 0, 99, weight_cost()), std::invalid_argument);
  auto negative = [](const EdgeInfo&) { return -1.0; };
  CHECK_THROWS_AS(dijkstra(g, 0, 2, negative), std::invalid_argument);
}

TEST_CASE("shortest path equals exhaustive enumeration on 1000 random graphs") {
  Rng rng(777);
  std::uniform_int_distribution<int> nn(2, 12);
  int reachable = 0, unreachable = 0;
  for (int s = 0; s < 1000; ++s) {
    const int n = nn(rng);
    NetworkGraph g = random_graph(n, 0.5, rng);
    auto cost = weight_cost();
    auto got = dijkstra(g, 0, n - 1, cost);
    const double want = brute_force_cost(g, 0, n - 1, cost);
    if (std::isinf(want)) {
      CHECK_FALSE(got.has_value());
      ++unreachable;
    } else {
      REQUIRE(got.has_value());
      CHECK(got->total_cost == doctest::Approx(want).epsilon(1e-9));
      // The reported cost must also equal the sum of its own edge costs.
      auto adj = adjacency(g);
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < got->nodes.size(); ++i) {
        bool found = false;
        for (auto [v, k] : adj[got->nodes[i]]) {
          if (v == got->nodes[i + 1]) {
            acc += cost(g.edges[k]);
            found = true;
            break;
          }
        }
        CHECK(found);
      }
      CHECK(std::abs(acc - got->total_cost) <= 1e-9);
      ++reachable;
    }
  }
  CHECK(reachable > 500);
  CHECK(unreachable > 10);
}

TEST_CASE("quantum minimum extraction: examples, guard, determinism") {
  Rng rng(2024);
  GroverStats stats;

  std::vector<std::pair<double, int>> frontier{{5.0, 0}, {2.0, 1}, {8.0, 2}};
  CHECK(dh_minimum_index(frontier, rng, stats) == 1);
  CHECK(stats.oracle_queries > 0);

  CHECK_THROWS_AS(dh_minimum_index({}, rng, stats), std::invalid_argument);

  GroverStats single_stats;
  CHECK(dh_minimum_index({{3.0, 7}}, rng, single_stats) == 0);
  CHECK(single_stats.oracle_queries == 0);

  // Guard: oversized frontiers are solved classically and recorded.
  std::vector<std::pair<double, int>> big;
  for (int i = 0; i < 1025; ++i) big.push_back({1000.0 - i, i});
  GroverStats guard_stats;
  CHECK(dh_minimum_index(big, rng, guard_stats) == 1024);
  CHECK(guard_stats.classical_fallbacks == 1);
  CHECK(guard_stats.oracle_queries == 0);

  // Correctness on random frontiers, including duplicate values where the
  // id breaks the tie.
  std::uniform_real_distribution<double> val(0.0, 10.0);
  std::uniform_int_distribution<int> size(2, 64);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = size(rng);
    std::vector<std::pair<double, int>> v;
    for (int i = 0; i < m; ++i) {
      v.push_back({rep % 3 == 0 ? std::floor(val(rng)) : val(rng), i});
    }
    GroverStats st;
    const std::size_t got = dh_minimum_index(v, rng, st);
    CHECK(got == static_cast<std::size_t>(
                     std::min_element(v.begin(), v.end()) - v.begin()));
  }

  // Determinism: same seed, same extraction transcript.
  Rng a(99), b(99);
  GroverStats sa, sb;
  std::vector<std::pair<double, int>> f2{{4.0, 0}, {1.0, 1}, {3.0, 2}, {2.0, 3}};
  CHECK(dh_minimum_index(f2, a, sa) == dh_minimum_index(f2, b, sb));
  CHECK(sa.oracle_queries == sb.oracle_queries);
  CHECK(sa.retries == sb.retries);
}

TEST_CASE("quantum minimum queries scale as c*sqrt(m)") {
  Rng rng(12345);
  std::uniform_real_distribution<double> val(0.0, 100.0);
  std::vector<std::pair<int, double>> rows;
  double sum_ym = 0.0, sum_m = 0.0;
  for (int m : {4, 16, 64, 256, 1024}) {
    const int reps = 12;
    long long total = 0;
    for (int r = 0; r < reps; ++r) {
      std::vector<std::pair<double, int>> v;
      for (int i = 0; i < m; ++i) v.push_back({val(rng), i});
      GroverStats st;
      const std::size_t got = dh_minimum_index(v, rng, st);
      CHECK(got == static_cast<std::size_t>(
                       std::min_element(v.begin(), v.end()) - v.begin()));
      total += st.oracle_queries;
    }
    const double mean_q = static_cast<double>(total) / reps;
    rows.push_back({m, mean_q});
    sum_ym += mean_q * std::sqrt(static_cast<double>(m));
    sum_m += m;
  }
  const double c = sum_ym / sum_m;
  CHECK(c >= 3.0);
  CHECK(c <= 8.0);
  for (auto [m, mean_q] : rows) {
    CHECK(mean_q <= 1.4 * c * std::sqrt(static_cast<double>(m)));
  }
}

TEST_CASE("quantum-assisted search matches the classical result, 500 graphs") {
  Rng rng(777);
  std::uniform_int_distribution<int> nn(2, 12);
  int agreements = 0;
  for (int s = 0; s < 500; ++s) {
    const int n = nn(rng);
    NetworkGraph g = random_graph(n, 0.5, rng);
    auto cost = weight_cost();
    auto classical = dijkstra(g, 0, n - 1, cost);
    auto [quantum, stats] = grover_min_dijkstra(g, 0, n - 1, cost, rng);
    REQUIRE(classical.has_value() == quantum.has_value());
    if (classical) {
      CHECK(classical->total_cost == quantum->total_cost);  // exact
      CHECK(classical->nodes == quantum->nodes);
      CHECK(stats.frontier_extractions > 0);
    }
    ++agreements;
  }
  CHECK(agreements == 500);
}

TEST_CASE("forward and backward searches agree on cost") {
  // Line graph: the backward path is the exact reverse.
  NetworkGraph line;
  line.nodes.push_back(node_at(0, 0, 0));
  line.nodes.push_back(node_at(1, 1, 0));
  line.nodes.push_back(node_at(2, 2, 0));
  line.edges.push_back(edge_between(line, 0, 1, 1.0));
  line.edges.push_back(edge_between(line, 1, 2, 1.0));
  Rng rng(4);
  auto bidi = find_paths_bidirectional(line, 0, 2, weight_cost(), rng);
  REQUIRE(bidi.has_value());
  CHECK(bidi->forward.nodes == std::vector<int>{0, 1, 2});
  CHECK(bidi->backward.nodes == std::vector<int>{2, 1, 0});
  CHECK(std::abs(bidi->forward.total_cost - bidi->backward.total_cost) <=
        1e-12);

  CHECK_THROWS_AS(find_paths_bidirectional(line, 1, 1, weight_cost(), rng),
                  std::invalid_argument);

  NetworkGraph split = line;
  split.nodes.push_back(node_at(3, 9, 9));
  CHECK_FALSE(
      find_paths_bidirectional(split, 0, 3, weight_cost(), rng).has_value());

  // Ten-node seeded demo in the connectivity-friendly regime.
  WaxmanParams p;
  p.num_nodes = 10;
  p.width_km = 1000.0;
  p.height_km = 1000.0;
  p.delta = 0.9;
  p.epsilon = 0.5;
  Rng gen(1);
  NetworkGraph demo = waxman_generate(p, gen);
  REQUIRE(graph_connected(demo));
  Rng search(1);
  auto cost = make_mcdm_cost(demo, {1.0, 0.0, 0.0});
  auto paths = find_paths_bidirectional(demo, 0, 9, cost, search);
  REQUIRE(paths.has_value());
  CHECK(std::abs(paths->forward.total_cost - paths->backward.total_cost) <=
        1e-12);
  CHECK(paths->forward.total_cost == doctest::Approx(0.478062).epsilon(1e-4));
  CHECK(paths->forward.nodes.front() == 0);
  CHECK(paths->forward.nodes.back() == 9);
  CHECK(paths->backward.nodes.front() == 9);
  CHECK(paths->backward.nodes.back() == 0);

  // Costs also agree on a random corpus whenever both directions exist.
  Rng crng(321);
  std::uniform_int_distribution<int> nn(3, 10);
  for (int s = 0; s < 50; ++s) {
    const int n = nn(crng);
    NetworkGraph g = random_graph(n, 0.6, crng);
    auto c = weight_cost();
    auto b = find_paths_bidirectional(g, 0, n - 1, c, crng);
    auto direct = dijkstra(g, 0, n - 1, c);
    REQUIRE(b.has_value() == direct.has_value());
    if (b) {
      CHECK(std::abs(b->forward.total_cost - b->backward.total_cost) <= 1e-12);
      CHECK(b->forward.total_cost == direct->total_cost);
    }
  }
}

TEST_CASE("walk circuits: construction, determinism, guards") {
  Path two;
  two.nodes = {10, 20};
  WalkCircuit c2 = build_walk_circuit(two, 1);
  CHECK(c2.num_qubits == 2);
  REQUIRE(c2.gates.size() == 2);
  CHECK(gate_name(c2.gates[0]) == "X[1]");
  CHECK(gate_name(c2.gates[1]) == "CNOT[1,2]");

  Rng rng(8);
  WalkResult r2 = run_walk(two, 1, 500, std::nullopt, rng);
  REQUIRE(r2.histogram.size() == 1);
  CHECK(r2.histogram.at("11") == 500);
  REQUIRE(r2.exact.size() == 1);
  CHECK(r2.exact[0].first == "11");
  CHECK(r2.exact[0].second == doctest::Approx(1.0).epsilon(1e-12));

  // |1> source walks to all-ones on longer paths too; zero steps stays put.
  for (int n : {3, 5, 8}) {
    Path p;
    for (int i = 0; i < n; ++i) p.nodes.push_back(i);
    WalkResult r = run_walk(p, 1, 200, std::nullopt, rng);
    REQUIRE(r.histogram.size() == 1);
    CHECK(r.histogram.begin()->first == std::string(n, '1'));
    CHECK(r.histogram.begin()->second == 200);
  }
  Path three;
  three.nodes = {0, 1, 2};
  WalkResult still = run_walk(three, 0, 100, std::nullopt, rng);
  REQUIRE(still.histogram.size() == 1);
  CHECK(still.histogram.at("100") == 100);

  // All-zero source: drop the X by preparing with an explicit circuit.
  StateVector zeros = new_register(3);
  for (int step = 0; step < 1; ++step) {
    for (int i = 1; i < 3; ++i) zeros = apply_gate(zeros, cnot(i, i + 1));
  }
  CHECK(std::abs(zeros.amplitudes[0] - Complex(1.0, 0.0)) <= 1e-12);

  Path too_long;
  for (int i = 0; i < 25; ++i) too_long.nodes.push_back(i);
  CHECK_THROWS_AS(build_walk_circuit(too_long, 1), GuardError);
  CHECK_THROWS_AS(run_walk(too_long, 1, 10, std::nullopt, rng), GuardError);
  CHECK_THROWS_AS(build_walk_circuit(two, -1), std::invalid_argument);
  CHECK_THROWS_AS(run_walk(two, 1, -5, std::nullopt, rng),
                  std::invalid_argument);

  Rng s1(77), s2(77);
  WalkResult a = run_walk(three, 1, 1000, ChannelKind::WBell5, s1);
  WalkResult b = run_walk(three, 1, 1000, ChannelKind::WBell5, s2);
  CHECK(a.histogram == b.histogram);
}

TEST_CASE("walk distributions by resource family on the 5-node path") {
  Path five;
  five.nodes = {0, 1, 2, 3, 4};
  Rng rng(3);

  WalkResult w = run_walk(five, 1, 0, ChannelKind::WBell5, rng);
  auto wm = exact_map(w);
  REQUIRE(wm.size() == 3);
  CHECK(wm.at("00000") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wm.at("10000") == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wm.at("11111") == doctest::Approx(0.25).epsilon(1e-12));

  WalkResult g = run_walk(five, 1, 0, ChannelKind::GHZBell5, rng);
  auto gm = exact_map(g);
  REQUIRE(gm.size() == 2);
  CHECK(gm.at("00000") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gm.at("10000") == doctest::Approx(0.5).epsilon(1e-12));

  WalkResult cl = run_walk(five, 1, 0, ChannelKind::ClusterBell6, rng);
  auto cm = exact_map(cl);
  REQUIRE(cm.size() == 4);
  for (const char* key : {"00000", "01111", "10000", "11111"}) {
    CHECK(cm.at(key) == doctest::Approx(0.25).epsilon(1e-12));
  }

  // Distinct resource families are distinguishable from the histograms alone.
  CHECK(total_variation(w, g) > 0.01);
  CHECK(total_variation(w, cl) > 0.01);
  CHECK(total_variation(g, cl) > 0.01);
  CHECK(total_variation(w, g) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(total_variation(w, cl) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(total_variation(g, cl) == doctest::Approx(0.50).epsilon(1e-9));
}

TEST_CASE("sampled histograms track exact probabilities within 5 sigma") {
  Rng rng(6021);
  const long long shots = 10000;
  for (int n : {3, 5, 8}) {
    Path p;
    for (int i = 0; i < n; ++i) p.nodes.push_back(i);
    WalkResult r = run_walk(p, 1, shots, ChannelKind::WBell5, rng);
    auto em = exact_map(r);
    long long total = 0;
    for (const auto& [key, count] : r.histogram) {
      REQUIRE(em.count(key) == 1);  // nothing outside the exact support
      total += count;
    }
    CHECK(total == shots);
    for (const auto& [key, prob] : em) {
      const double freq =
          (r.histogram.count(key) ? r.histogram.at(key) : 0) /
          static_cast<double>(shots);
      const double sigma = std::sqrt(prob * (1.0 - prob) / shots);
      CHECK(std::abs(freq - prob) <= 5.0 * sigma);
    }
  }
}

TEST_CASE("graph JSON and histogram CSV round-trip") {
  WaxmanParams p;
  p.num_nodes = 12;
  p.width_km = 500.0;
  p.height_km = 500.0;
  p.delta = 0.9;
  p.epsilon = 0.4;
  Rng rng(9);
  NetworkGraph g = waxman_generate(p, rng);
  g.edges[0].link_fidelity = 0.87;

  NetworkGraph back = graph_from_json(graph_json(g));
  REQUIRE(back.nodes.size() == g.nodes.size());
  REQUIRE(back.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(back.nodes[i].id == g.nodes[i].id);
    CHECK(back.nodes[i].x_km == g.nodes[i].x_km);
    CHECK(back.nodes[i].y_km == g.nodes[i].y_km);
    CHECK(back.nodes[i].memory_capacity == g.nodes[i].memory_capacity);
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(back.edges[i].u == g.edges[i].u);
    CHECK(back.edges[i].v == g.edges[i].v);
    CHECK(back.edges[i].weight == g.edges[i].weight);
    CHECK(back.edges[i].link_fidelity == g.edges[i].link_fidelity);
    CHECK(back.edges[i].length_km ==
          doctest::Approx(g.edges[i].length_km).epsilon(1e-12));
  }

  nlohmann::json broken = graph_json(g);
  broken["edges"][0]["u"] = 99;
  CHECK_THROWS_AS(graph_from_json(broken), std::invalid_argument);

  Path five;
  five.nodes = {0, 1, 2, 3, 4};
  Rng wrng(15);
  WalkResult r = run_walk(five, 1, 300, ChannelKind::GHZBell5, wrng);
  const std::string csv = histogram_csv(r);
  CHECK(csv.rfind("bitstring,count,exact\n", 0) == 0);
  // Parse it back and compare against the structures it came from.
  std::map<std::string, long long> counts;
  std::map<std::string, double> exact;
  std::size_t pos = csv.find('\n') + 1;
  long long total = 0;
  while (pos < csv.size()) {
    const std::size_t eol = csv.find('\n', pos);
    const std::string line = csv.substr(pos, eol - pos);
    const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
    const std::string key = line.substr(0, c1);
    counts[key] = std::stoll(line.substr(c1 + 1, c2 - c1 - 1));
    exact[key] = std::stod(line.substr(c2 + 1));
    total += counts[key];
    pos = eol + 1;
  }
  CHECK(total == 300);
  for (const auto& [key, count] : r.histogram) CHECK(counts.at(key) == count);
  for (const auto& [key, prob] : exact_map(r)) {
    CHECK(exact.at(key) == doctest::Approx(prob).epsilon(1e-9));
  }

  // Registers past the exact-enumeration cutoff still produce histograms.
  Path wide;
  for (int i = 0; i < 21; ++i) wide.nodes.push_back(i);
  Rng wrng2(16);
  WalkResult big = run_walk(wide, 1, 50, std::nullopt, wrng2);
  CHECK(big.exact.empty());
  CHECK(histogram_csv(big).rfind("bitstring,count\n", 0) == 0);
  CHECK(big.histogram.at(std::string(21, '1')) == 50);
}

TEST_CASE("route drawing marks forward red and backward green") {
  NetworkGraph g;
  g.nodes.push_back(node_at(0, 0, 0));
  g.nodes.push_back(node_at(1, 50, 20));
  g.nodes.push_back(node_at(2, 100, 0));
  g.edges.push_back(edge_between(g, 0, 1, 1.0));
  g.edges.push_back(edge_between(g, 1, 2, 1.0));
  Path fwd;
  fwd.nodes = {0, 1, 2};
  Path bwd;
  bwd.nodes = {2, 1, 0};
  const std::string svg = render_route_svg(g, &fwd, &bwd);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("#d62728") != std::string::npos);
  CHECK(svg.find("#2ca02c") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t circles = 0, from = 0;
  while ((from = svg.find("<circle", from)) != std::string::npos) {
    ++circles;
    from += 7;
  }
  CHECK(circles == g.nodes.size());
  // Baseline rendering without highlighted paths stays free of path colors.
  const std::string plain = render_route_svg(g, nullptr, nullptr);
  CHECK(plain.find("#d62728") == std::string::npos);
  CHECK(plain.find("#2ca02c") == std::string::npos);
}
