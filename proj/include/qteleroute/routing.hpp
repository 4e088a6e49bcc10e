#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qteleroute/channels.hpp"
#include "qteleroute/statevec.hpp"

namespace qtr {

// ---------------------------------------------------------------------------
// Graph model
// ---------------------------------------------------------------------------

struct NodeInfo {
  int id = 0;               // must equal the node's index in NetworkGraph::nodes
  double x_km = 0.0;        // position, kilometres
  double y_km = 0.0;
  int memory_capacity = 50; // quantum memory slots at this node
  int memory_in_use = 0;    // runtime occupancy (not serialized)
};

struct EdgeInfo {
  int u = 0;
  int v = 0;
  double length_km = 0.0;    // Euclidean distance between endpoints
  double weight = 1.0;       // routing weight, > 0
  double link_fidelity = 1.0; // in (0, 1]
};

struct NetworkGraph {
  std::vector<NodeInfo> nodes;
  std::vector<EdgeInfo> edges;
};

// Throws std::invalid_argument when the graph violates its invariants:
// ids are 0..n-1 in order, edges are simple/undirected with valid endpoints,
// lengths match node positions within 1e-9, weights positive, fidelities in
// (0, 1].
void validate_graph(const NetworkGraph& g);

// Adjacency as (neighbor node, edge index) lists, indexed by node id.
std::vector<std::vector<std::pair<int, int>>> adjacency(const NetworkGraph& g);

double euclidean_km(const NodeInfo& a, const NodeInfo& b);

// Largest distance between any two nodes (0 for < 2 nodes).
double max_pairwise_distance_km(const NetworkGraph& g);

// Largest edge length in the graph; 1.0 when the graph has no edges, so it is
// always usable as a normalizer.
double max_edge_length_km(const NetworkGraph& g);

// ---------------------------------------------------------------------------
// Waxman random topology
// ---------------------------------------------------------------------------

struct WaxmanParams {
  int num_nodes = 0;
  double width_km = 0.0;
  double height_km = 0.0;
  double delta = 0.0;   // in (0, 1]
  double epsilon = 0.0; // > 0
  int memory_capacity = 50;
};

// Places num_nodes uniformly at random on the rectangle; no edges.
NetworkGraph waxman_nodes(const WaxmanParams& p, Rng& rng);

// Samples edges on an existing layout: each unordered pair (i < j, in order)
// gets an edge with probability delta * exp(-l / (epsilon * L)), where l is
// the pair distance and L the maximum pairwise node distance. New edges get
// weight = length_km and link_fidelity = 1. Existing edges must be absent.
void waxman_connect(NetworkGraph& g, double delta, double epsilon, Rng& rng);

// waxman_nodes followed by waxman_connect. Throws on num_nodes < 2 or
// parameters outside their ranges. The result may be disconnected.
NetworkGraph waxman_generate(const WaxmanParams& p, Rng& rng);

// ---------------------------------------------------------------------------
// Edge costs
// ---------------------------------------------------------------------------

struct McdmWeights {
  double distance = 1.0;
  double fidelity = 0.0;
  double memory = 0.0;
};

// Everything mcdm_cost needs to score one edge.
struct EdgeCostView {
  double length_km = 0.0;
  double length_norm_km = 1.0;      // normalizer (largest edge length)
  double link_fidelity = 1.0;
  double free_memory_fraction = 1.0; // min over the two endpoint nodes
};

// cost = w_d * (length / length_norm) + w_f * (1 - link_fidelity)
//      + w_m * (1 - free_memory_fraction).
// Throws std::invalid_argument unless weights are nonnegative and sum to 1
// within 1e-12.
double mcdm_cost(const EdgeCostView& edge, const McdmWeights& w);

using EdgeCostFn = std::function<double(const EdgeInfo&)>;

// Binds mcdm_cost to a graph: captures the length normalizer and looks up
// endpoint memory occupancy per edge. Validates the weights immediately.
EdgeCostFn make_mcdm_cost(const NetworkGraph& g, const McdmWeights& w);

// Plain stored-weight cost.
EdgeCostFn weight_cost();

// ---------------------------------------------------------------------------
// Shortest paths
// ---------------------------------------------------------------------------

struct Path {
  std::vector<int> nodes; // s..t inclusive
  double total_cost = 0.0;
  int hop_count = 0;      // nodes.size() - 1
};

// Deterministic Dijkstra; ties broken toward the smaller node id. Returns
// nullopt when t is unreachable; s == t gives the single-node path of cost 0.
std::optional<Path> dijkstra(const NetworkGraph& g, int s, int t,
                             const EdgeCostFn& cost);

struct GroverStats {
  std::int64_t oracle_queries = 0;      // Grover iterations + sample checks
  std::int64_t frontier_extractions = 0;
  std::int64_t classical_fallbacks = 0; // guard trips or exhausted retries
  std::int64_t retries = 0;             // re-runs after a failed verification
};

// Frontier size above which minimum extraction falls back to a classical scan
// (simulating the search register would be too large).
inline constexpr std::size_t kGroverFrontierGuard = 1024;

// Duerr-Hoyer minimum finding over (value, id) pairs, simulated on the state
// vector: repeated Grover searches with the BBHT schedule against a moving
// threshold, candidate verified classically, at most 3 retries, then a
// recorded classical fallback. Always returns the index of the unique
// lexicographic minimum. Throws on an empty input.
std::size_t dh_minimum_index(const std::vector<std::pair<double, int>>& values,
                             Rng& rng, GroverStats& stats);

// Dijkstra with frontier extraction done by dh_minimum_index. The returned
// path and cost match the classical dijkstra exactly (same extraction order,
// same relaxations).
std::pair<std::optional<Path>, GroverStats> grover_min_dijkstra(
    const NetworkGraph& g, int s, int t, const EdgeCostFn& cost, Rng& rng);

struct BidiPaths {
  Path forward;
  Path backward;
  GroverStats forward_stats;
  GroverStats backward_stats;
};

// Runs grover_min_dijkstra s->t and t->s. Throws on s == t; returns nullopt
// when the endpoints are disconnected.
std::optional<BidiPaths> find_paths_bidirectional(const NetworkGraph& g, int s,
                                                  int t, const EdgeCostFn& cost,
                                                  Rng& rng);

// ---------------------------------------------------------------------------
// Path walks
// ---------------------------------------------------------------------------

struct WalkCircuit {
  int num_qubits = 0;
  std::vector<GateOp> gates;
};

// One qubit per path node (qubit i <-> i-th node). The default source
// preparation is X on qubit 1; each step appends CNOT(i, i+1) along the path.
// Throws GuardError when the path needs more than kMaxQubits qubits.
WalkCircuit build_walk_circuit(const Path& path, int max_steps);

// Source-end preparation acting on qubits 1 and 2, chosen by the entangled
// resource family feeding the walk.
std::vector<GateOp> walk_source_prep(ChannelKind kind);

struct WalkResult {
  Path path;
  int steps = 0;
  long long shots = 0;
  std::map<std::string, long long> histogram;
  // Exact Born probabilities (> 1e-12) when the register has <= 20 qubits.
  std::vector<std::pair<std::string, double>> exact;
};

// Builds the walk circuit (channel prep when given, X source otherwise),
// samples `shots` measurements, and attaches the exact distribution when
// cheap enough to enumerate.
WalkResult run_walk(const Path& path, int steps, long long shots,
                    std::optional<ChannelKind> channel, Rng& rng);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

// {"nodes":[{"id","x","y","mem"}],"edges":[{"u","v","weight","fidelity"}]};
// edge lengths are recomputed from positions on load.
nlohmann::ordered_json graph_json(const NetworkGraph& g);
NetworkGraph graph_from_json(const nlohmann::json& j);

nlohmann::ordered_json path_json(const Path& p);

// "bitstring,count" rows (sorted by bitstring); a third "exact" column is
// appended when the exact distribution is available.
std::string histogram_csv(const WalkResult& r);

// SVG of the graph; the forward path is drawn red, the backward path green.
std::string render_route_svg(const NetworkGraph& g, const Path* forward,
                             const Path* backward);

}  // namespace qtr
