#include "qteleroute/routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace qtr {

namespace {

constexpr double kLengthTol = 1e-9;
constexpr double kSimplexTol = 1e-12;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

std::string fmt_svg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

void check_node_id(const NetworkGraph& g, int id, const char* what) {
  if (id < 0 || static_cast<std::size_t>(id) >= g.nodes.size()) {
    throw std::invalid_argument(std::string(what) + " node id out of range: " +
                                std::to_string(id));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph model
// ---------------------------------------------------------------------------

double euclidean_km(const NodeInfo& a, const NodeInfo& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

void validate_graph(const NetworkGraph& g) {
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const NodeInfo& n = g.nodes[i];
    if (n.id != static_cast<int>(i)) {
      throw std::invalid_argument("node ids must be 0..n-1 in order");
    }
    if (n.memory_capacity < 0) {
      throw std::invalid_argument("negative memory capacity");
    }
    if (n.memory_in_use < 0 || n.memory_in_use > n.memory_capacity) {
      throw std::invalid_argument("memory_in_use outside [0, capacity]");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (const EdgeInfo& e : g.edges) {
    check_node_id(g, e.u, "edge");
    check_node_id(g, e.v, "edge");
    if (e.u == e.v) throw std::invalid_argument("self-loop edge");
    std::pair<int, int> key{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!seen.insert(key).second) {
      throw std::invalid_argument("duplicate edge");
    }
    double want = euclidean_km(g.nodes[e.u], g.nodes[e.v]);
    if (std::abs(e.length_km - want) > kLengthTol) {
      throw std::invalid_argument("edge length inconsistent with positions");
    }
    if (!(e.weight > 0.0)) throw std::invalid_argument("edge weight must be > 0");
    if (!(e.link_fidelity > 0.0) || e.link_fidelity > 1.0) {
      throw std::invalid_argument("link fidelity must be in (0, 1]");
    }
  }
}

std::vector<std::vector<std::pair<int, int>>> adjacency(const NetworkGraph& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.nodes.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const EdgeInfo& e = g.edges[k];
    adj[e.u].push_back({e.v, static_cast<int>(k)});
    adj[e.v].push_back({e.u, static_cast<int>(k)});
  }
  return adj;
}

double max_pairwise_distance_km(const NetworkGraph& g) {
  double best = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      best = std::max(best, euclidean_km(g.nodes[i], g.nodes[j]));
    }
  }
  return best;
}

double max_edge_length_km(const NetworkGraph& g) {
  double best = 0.0;
  for (const EdgeInfo& e : g.edges) best = std::max(best, e.length_km);
  return best > 0.0 ? best : 1.0;
}

// ---------------------------------------------------------------------------
// Waxman random topology
// ---------------------------------------------------------------------------

namespace {

void check_waxman_params(const WaxmanParams& p) {
  if (p.num_nodes < 2) throw std::invalid_argument("waxman needs >= 2 nodes");
  if (!(p.width_km > 0.0) || !(p.height_km > 0.0)) {
    throw std::invalid_argument("waxman area must be positive");
  }
  if (!(p.delta > 0.0) || p.delta > 1.0) {
    throw std::invalid_argument("waxman delta must be in (0, 1]");
  }
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("waxman epsilon must be > 0");
  if (p.memory_capacity < 0) throw std::invalid_argument("negative memory capacity");
}

}  // namespace

NetworkGraph waxman_nodes(const WaxmanParams& p, Rng& rng) {
  check_waxman_params(p);
  NetworkGraph g;
  g.nodes.reserve(p.num_nodes);
  std::uniform_real_distribution<double> ux(0.0, p.width_km);
  std::uniform_real_distribution<double> uy(0.0, p.height_km);
  for (int i = 0; i < p.num_nodes; ++i) {
    NodeInfo n;
    n.id = i;
    n.x_km = ux(rng);
    n.y_km = uy(rng);
    n.memory_capacity = p.memory_capacity;
    g.nodes.push_back(n);
  }
  return g;
}

void waxman_connect(NetworkGraph& g, double delta, double epsilon, Rng& rng) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("waxman delta must be in (0, 1]");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("waxman epsilon must be > 0");
  if (!g.edges.empty()) {
    throw std::invalid_argument("waxman_connect expects a graph without edges");
  }
  const double L = max_pairwise_distance_km(g);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      const double l = euclidean_km(g.nodes[i], g.nodes[j]);
      const double p = (l == 0.0) ? delta : delta * std::exp(-l / (epsilon * L));
      if (coin(rng) < p) {
        EdgeInfo e;
        e.u = static_cast<int>(i);
        e.v = static_cast<int>(j);
        e.length_km = l;
        e.weight = l;
        e.link_fidelity = 1.0;
        g.edges.push_back(e);
      }
    }
  }
}

NetworkGraph waxman_generate(const WaxmanParams& p, Rng& rng) {
  NetworkGraph g = waxman_nodes(p, rng);
  waxman_connect(g, p.delta, p.epsilon, rng);
  return g;
}

// ---------------------------------------------------------------------------
// Edge costs
// ---------------------------------------------------------------------------

namespace {

void check_mcdm_weights(const McdmWeights& w) {
  if (w.distance < 0.0 || w.fidelity < 0.0 || w.memory < 0.0) {
    throw std::invalid_argument("mcdm weights must be nonnegative");
  }
  if (std::abs(w.distance + w.fidelity + w.memory - 1.0) > kSimplexTol) {
    throw std::invalid_argument("mcdm weights must sum to 1");
  }
}

double free_memory_fraction(const NodeInfo& n) {
  if (n.memory_capacity <= 0) return 0.0;
  return static_cast<double>(n.memory_capacity - n.memory_in_use) /
         static_cast<double>(n.memory_capacity);
}

}  // namespace

double mcdm_cost(const EdgeCostView& edge, const McdmWeights& w) {
  check_mcdm_weights(w);
  if (!(edge.length_norm_km > 0.0)) {
    throw std::invalid_argument("length normalizer must be > 0");
  }
  return w.distance * (edge.length_km / edge.length_norm_km) +
         w.fidelity * (1.0 - edge.link_fidelity) +
         w.memory * (1.0 - edge.free_memory_fraction);
}

EdgeCostFn make_mcdm_cost(const NetworkGraph& g, const McdmWeights& w) {
  check_mcdm_weights(w);
  const double norm = max_edge_length_km(g);
  const NetworkGraph* graph = &g;
  return [graph, w, norm](const EdgeInfo& e) {
    EdgeCostView view;
    view.length_km = e.length_km;
    view.length_norm_km = norm;
    view.link_fidelity = e.link_fidelity;
    view.free_memory_fraction = std::min(free_memory_fraction(graph->nodes[e.u]),
                                         free_memory_fraction(graph->nodes[e.v]));
    return mcdm_cost(view, w);
  };
}

EdgeCostFn weight_cost() {
  return [](const EdgeInfo& e) { return e.weight; };
}

// ---------------------------------------------------------------------------
// Shortest paths (one core, two frontier extractors)
// ---------------------------------------------------------------------------

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t classical_min_index(const std::vector<std::pair<double, int>>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

using ExtractFn =
    std::function<std::size_t(const std::vector<std::pair<double, int>>&)>;

std::optional<Path> dijkstra_core(const NetworkGraph& g, int s, int t,
                                  const EdgeCostFn& cost,
                                  const ExtractFn& extract) {
  check_node_id(g, s, "source");
  check_node_id(g, t, "target");
  const std::size_t n = g.nodes.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1);
  std::vector<char> visited(n, 0);
  auto adj = adjacency(g);
  dist[s] = 0.0;
  while (true) {
    std::vector<std::pair<double, int>> frontier;
    for (std::size_t i = 0; i < n; ++i) {
      if (!visited[i] && dist[i] < kInf) {
        frontier.push_back({dist[i], static_cast<int>(i)});
      }
    }
    if (frontier.empty()) break;
    const int u = frontier[extract(frontier)].second;
    visited[u] = 1;
    if (u == t) break;
    for (auto [v, k] : adj[u]) {
      if (visited[v]) continue;
      const double c = cost(g.edges[k]);
      if (c < 0.0) throw std::invalid_argument("negative edge cost");
      if (dist[u] + c < dist[v]) {
        dist[v] = dist[u] + c;
        pred[v] = u;
      }
    }
  }
  if (dist[t] == kInf) return std::nullopt;
  Path p;
  for (int v = t; v != -1; v = pred[v]) p.nodes.push_back(v);
  std::reverse(p.nodes.begin(), p.nodes.end());
  p.total_cost = dist[t];
  p.hop_count = static_cast<int>(p.nodes.size()) - 1;
  return p;
}

}  // namespace

std::optional<Path> dijkstra(const NetworkGraph& g, int s, int t,
                             const EdgeCostFn& cost) {
  return dijkstra_core(g, s, t, cost, classical_min_index);
}

// ---------------------------------------------------------------------------
// Duerr-Hoyer minimum finding, simulated on the state-vector register
// ---------------------------------------------------------------------------

namespace {

// Phase oracle: flips the amplitude sign of every index whose (value, id)
// pair sorts strictly below the current threshold.
void apply_oracle(StateVector& sv,
                  const std::vector<std::pair<double, int>>& values,
                  const std::pair<double, int>& threshold) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < threshold) sv.amplitudes[i] = -sv.amplitudes[i];
  }
}

// Inversion about the mean: H^q, phase flip on everything but |0...0>, H^q
// (equal to the usual reflection up to a global phase).
void apply_diffusion(StateVector& sv) {
  for (int q = 1; q <= sv.num_qubits; ++q) sv = apply_gate(sv, h(q));
  for (Eigen::Index i = 1; i < sv.amplitudes.size(); ++i) {
    sv.amplitudes[i] = -sv.amplitudes[i];
  }
  for (int q = 1; q <= sv.num_qubits; ++q) sv = apply_gate(sv, h(q));
}

std::size_t sample_index(const StateVector& sv, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  double acc = 0.0;
  const Eigen::Index dim = sv.amplitudes.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    acc += std::norm(sv.amplitudes[i]);
    if (r < acc) return static_cast<std::size_t>(i);
  }
  return static_cast<std::size_t>(dim - 1);
}

}  // namespace

std::size_t dh_minimum_index(const std::vector<std::pair<double, int>>& values,
                             Rng& rng, GroverStats& stats) {
  if (values.empty()) throw std::invalid_argument("empty frontier");
  const std::size_t m = values.size();
  if (m == 1) return 0;
  const std::size_t truth = classical_min_index(values);
  if (m > kGroverFrontierGuard) {
    ++stats.classical_fallbacks;
    return truth;
  }
  int q = 0;
  while ((std::size_t{1} << q) < m) ++q;
  q = std::max(q, 1);
  const std::size_t dim = std::size_t{1} << q;
  const double sqrt_dim = std::sqrt(static_cast<double>(dim));
  const std::int64_t budget =
      static_cast<std::int64_t>(std::ceil(4.5 * sqrt_dim));
  const double lambda = 6.0 / 5.0;

  for (int attempt = 0; attempt < 4; ++attempt) {
    if (attempt > 0) ++stats.retries;
    std::size_t best =
        std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    double mpar = 1.0;
    std::int64_t used = 0;
    while (used < budget) {
      const int jmax = static_cast<int>(std::ceil(mpar));
      const int j = std::uniform_int_distribution<int>(0, jmax - 1)(rng);
      StateVector sv = new_register(q);
      for (int k = 1; k <= q; ++k) sv = apply_gate(sv, h(k));
      for (int it = 0; it < j; ++it) {
        apply_oracle(sv, values, values[best]);
        ++stats.oracle_queries;
        apply_diffusion(sv);
      }
      used += j + 1;
      const std::size_t i = sample_index(sv, rng);
      ++stats.oracle_queries;  // classical check of the measured candidate
      if (i < m && values[i] < values[best]) {
        best = i;
        mpar = 1.0;
      } else {
        mpar = std::min(lambda * mpar, sqrt_dim);
      }
    }
    if (best == truth) return best;
  }
  ++stats.classical_fallbacks;
  return truth;
}

std::pair<std::optional<Path>, GroverStats> grover_min_dijkstra(
    const NetworkGraph& g, int s, int t, const EdgeCostFn& cost, Rng& rng) {
  GroverStats stats;
  auto extract = [&rng, &stats](const std::vector<std::pair<double, int>>& v) {
    ++stats.frontier_extractions;
    return dh_minimum_index(v, rng, stats);
  };
  auto path = dijkstra_core(g, s, t, cost, extract);
  return {path, stats};
}

std::optional<BidiPaths> find_paths_bidirectional(const NetworkGraph& g, int s,
                                                  int t, const EdgeCostFn& cost,
                                                  Rng& rng) {
  if (s == t) throw std::invalid_argument("endpoints must differ");
  auto [fwd, fwd_stats] = grover_min_dijkstra(g, s, t, cost, rng);
  if (!fwd) return std::nullopt;
  auto [bwd, bwd_stats] = grover_min_dijkstra(g, t, s, cost, rng);
  if (!bwd) return std::nullopt;
  BidiPaths out;
  out.forward = *fwd;
  out.backward = *bwd;
  out.forward_stats = fwd_stats;
  out.backward_stats = bwd_stats;
  return out;
}

// ---------------------------------------------------------------------------
// Path walks
// ---------------------------------------------------------------------------

WalkCircuit build_walk_circuit(const Path& path, int max_steps) {
  const int n = static_cast<int>(path.nodes.size());
  if (n < 1) throw std::invalid_argument("empty path");
  if (n > kMaxQubits) {
    throw GuardError("walk needs " + std::to_string(n) + " qubits, limit " +
                     std::to_string(kMaxQubits));
  }
  if (max_steps < 0) throw std::invalid_argument("negative step count");
  WalkCircuit c;
  c.num_qubits = n;
  c.gates.push_back(x(1));
  for (int s = 0; s < max_steps; ++s) {
    for (int i = 1; i < n; ++i) c.gates.push_back(cnot(i, i + 1));
  }
  return c;
}

std::vector<GateOp> walk_source_prep(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Bell:
    case ChannelKind::GHZ3:
    case ChannelKind::GHZBell5:
      return {h(1), cnot(1, 2)};
    case ChannelKind::W3:
    case ChannelKind::Wn:
    case ChannelKind::WBell5:
      return {ry(M_PI / 2.0, 1), ch(1, 2)};
    case ChannelKind::ClusterN:
    case ChannelKind::ClusterBell6:
      // H on both qubits then CZ, with CZ spelled H(2) CNOT(1,2) H(2).
      return {h(1), h(2), h(2), cnot(1, 2), h(2)};
  }
  throw std::invalid_argument("unknown channel kind");
}

WalkResult run_walk(const Path& path, int steps, long long shots,
                    std::optional<ChannelKind> channel, Rng& rng) {
  const int n = static_cast<int>(path.nodes.size());
  if (n > kMaxQubits) {
    throw GuardError("walk needs " + std::to_string(n) + " qubits, limit " +
                     std::to_string(kMaxQubits));
  }
  if (channel && n < 2) {
    throw std::invalid_argument("channel preparation needs >= 2 path nodes");
  }
  if (shots < 0) throw std::invalid_argument("negative shot count");
  std::vector<GateOp> gates;
  if (channel) {
    gates = walk_source_prep(*channel);
  } else {
    WalkCircuit base = build_walk_circuit(path, 0);
    gates = base.gates;  // X source only
  }
  if (steps < 0) throw std::invalid_argument("negative step count");
  for (int s = 0; s < steps; ++s) {
    for (int i = 1; i < n; ++i) gates.push_back(cnot(i, i + 1));
  }
  StateVector sv = apply_circuit(new_register(n), gates);
  WalkResult r;
  r.path = path;
  r.steps = steps;
  r.shots = shots;
  if (shots > 0) r.histogram = sample_all(sv, shots, rng);
  if (n <= 20) {
    std::vector<double> p = probabilities(sv);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 1e-12) {
        r.exact.push_back({basis_label(static_cast<std::uint64_t>(i), n), p[i]});
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::ordered_json graph_json(const NetworkGraph& g) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const NodeInfo& n : g.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"x", n.x_km},
                          {"y", n.y_km},
                          {"mem", n.memory_capacity}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const EdgeInfo& e : g.edges) {
    j["edges"].push_back({{"u", e.u},
                          {"v", e.v},
                          {"weight", e.weight},
                          {"fidelity", e.link_fidelity}});
  }
  return j;
}

NetworkGraph graph_from_json(const nlohmann::json& j) {
  NetworkGraph g;
  for (const auto& nj : j.at("nodes")) {
    NodeInfo n;
    n.id = nj.at("id").get<int>();
    n.x_km = nj.at("x").get<double>();
    n.y_km = nj.at("y").get<double>();
    n.memory_capacity = nj.at("mem").get<int>();
    g.nodes.push_back(n);
  }
  for (const auto& ej : j.at("edges")) {
    EdgeInfo e;
    e.u = ej.at("u").get<int>();
    e.v = ej.at("v").get<int>();
    e.weight = ej.at("weight").get<double>();
    e.link_fidelity = ej.at("fidelity").get<double>();
    if (e.u < 0 || static_cast<std::size_t>(e.u) >= g.nodes.size() || e.v < 0 ||
        static_cast<std::size_t>(e.v) >= g.nodes.size()) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    e.length_km = euclidean_km(g.nodes[e.u], g.nodes[e.v]);
    g.edges.push_back(e);
  }
  validate_graph(g);
  return g;
}

nlohmann::ordered_json path_json(const Path& p) {
  nlohmann::ordered_json j;
  j["nodes"] = p.nodes;
  j["total_cost"] = p.total_cost;
  j["hop_count"] = p.hop_count;
  return j;
}

std::string histogram_csv(const WalkResult& r) {
  const bool with_exact = !r.exact.empty();
  std::map<std::string, double> exact(r.exact.begin(), r.exact.end());
  std::set<std::string> keys;
  for (const auto& [k, v] : r.histogram) keys.insert(k);
  for (const auto& [k, v] : exact) keys.insert(k);
  std::string out = with_exact ? "bitstring,count,exact\n" : "bitstring,count\n";
  for (const std::string& k : keys) {
    auto it = r.histogram.find(k);
    const std::int64_t count = it == r.histogram.end() ? 0 : it->second;
    out += k + "," + std::to_string(count);
    if (with_exact) {
      auto ex = exact.find(k);
      out += "," + fmt_g(ex == exact.end() ? 0.0 : ex->second);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace {

struct SvgMapper {
  double min_x = 0, min_y = 0, scale = 1;
  double width = 900, height = 600, margin = 45;

  explicit SvgMapper(const NetworkGraph& g) {
    double max_x = 1, max_y = 1;
    if (!g.nodes.empty()) {
      min_x = max_x = g.nodes[0].x_km;
      min_y = max_y = g.nodes[0].y_km;
      for (const NodeInfo& n : g.nodes) {
        min_x = std::min(min_x, n.x_km);
        max_x = std::max(max_x, n.x_km);
        min_y = std::min(min_y, n.y_km);
        max_y = std::max(max_y, n.y_km);
      }
    }
    const double span_x = std::max(max_x - min_x, 1e-9);
    const double span_y = std::max(max_y - min_y, 1e-9);
    scale = std::min((width - 2 * margin) / span_x,
                     (height - 2 * margin) / span_y);
  }
  double px(double x) const { return margin + (x - min_x) * scale; }
  // Flip y so larger coordinates render toward the top.
  double py(double y) const { return height - margin - (y - min_y) * scale; }
};

void svg_path_overlay(std::string& svg, const NetworkGraph& g,
                      const SvgMapper& map, const Path& p, const char* color,
                      double stroke_width, const char* dash) {
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    const NodeInfo& a = g.nodes[p.nodes[i]];
    const NodeInfo& b = g.nodes[p.nodes[i + 1]];
    svg += "  <line x1=\"" + fmt_svg(map.px(a.x_km)) + "\" y1=\"" +
           fmt_svg(map.py(a.y_km)) + "\" x2=\"" + fmt_svg(map.px(b.x_km)) +
           "\" y2=\"" + fmt_svg(map.py(b.y_km)) + "\" stroke=\"" + color +
           "\" stroke-width=\"" + fmt_svg(stroke_width) +
           "\" stroke-linecap=\"round\" opacity=\"0.9\"";
    if (dash) svg += std::string(" stroke-dasharray=\"") + dash + "\"";
    svg += "/>\n";
  }
}

}  // namespace

std::string render_route_svg(const NetworkGraph& g, const Path* forward,
                             const Path* backward) {
  SvgMapper map(g);
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"600\" "
      "viewBox=\"0 0 900 600\">\n"
      "  <rect width=\"900\" height=\"600\" fill=\"#ffffff\"/>\n";
  for (const EdgeInfo& e : g.edges) {
    const NodeInfo& a = g.nodes[e.u];
    const NodeInfo& b = g.nodes[e.v];
    svg += "  <line x1=\"" + fmt_svg(map.px(a.x_km)) + "\" y1=\"" +
           fmt_svg(map.py(a.y_km)) + "\" x2=\"" + fmt_svg(map.px(b.x_km)) +
           "\" y2=\"" + fmt_svg(map.py(b.y_km)) +
           "\" stroke=\"#b0b0b0\" stroke-width=\"1\"/>\n";
  }
  if (forward) svg_path_overlay(svg, g, map, *forward, "#d62728", 4.0, nullptr);
  if (backward) svg_path_overlay(svg, g, map, *backward, "#2ca02c", 2.5, "7 5");
  for (const NodeInfo& n : g.nodes) {
    svg += "  <circle cx=\"" + fmt_svg(map.px(n.x_km)) + "\" cy=\"" +
           fmt_svg(map.py(n.y_km)) +
           "\" r=\"6\" fill=\"#1f77b4\" stroke=\"#ffffff\" "
           "stroke-width=\"1.5\"/>\n";
    svg += "  <text x=\"" + fmt_svg(map.px(n.x_km) + 8) + "\" y=\"" +
           fmt_svg(map.py(n.y_km) - 8) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333333\">" +
           std::to_string(n.id) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace qtr
