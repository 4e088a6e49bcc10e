#include "qteleroute/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

namespace qtr {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::string sim_mode_name(SimMode m) {
  return m == SimMode::Unidirectional ? "unidirectional" : "bidirectional";
}

SimMode parse_sim_mode(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "unidirectional" || s == "uni") return SimMode::Unidirectional;
  if (s == "bidirectional" || s == "bi") return SimMode::Bidirectional;
  throw std::invalid_argument("unknown mode: " + name);
}

ChannelMemoryCost channel_memory_cost(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Bell:
      return {1, 1};
    case ChannelKind::GHZ3:
    case ChannelKind::W3:
      return {1, 2};
    case ChannelKind::WBell5:
    case ChannelKind::GHZBell5:
      return {2, 3};
    case ChannelKind::ClusterBell6:
      return {2, 4};
    case ChannelKind::Wn:
    case ChannelKind::ClusterN:
      break;
  }
  throw std::invalid_argument(
      "unsupported resource kind for network simulation: " +
      channel_name(kind));
}

void validate_sim_config(const SimConfig& cfg) {
  if (cfg.topology_params.has_value() == cfg.topology_graph.has_value()) {
    throw std::invalid_argument(
        "config needs exactly one topology source (parameters or graph)");
  }
  if (cfg.num_sd_pairs < 1) throw std::invalid_argument("num_sd_pairs must be >= 1");
  if (!(cfg.send_rate > 0.0)) throw std::invalid_argument("send_rate must be > 0");
  if (cfg.classical_delay < 0.0) {
    throw std::invalid_argument("classical_delay must be >= 0");
  }
  if (cfg.memory_per_node < 1) {
    throw std::invalid_argument("memory_per_node must be >= 1");
  }
  if (cfg.drop_rate < 0.0 || cfg.drop_rate > 1.0) {
    throw std::invalid_argument("drop_rate must be in [0, 1]");
  }
  if (cfg.swap_success < 0.0 || cfg.swap_success > 1.0) {
    throw std::invalid_argument("swap_success must be in [0, 1]");
  }
  if (!(cfg.init_link_fidelity > 0.25) || cfg.init_link_fidelity > 1.0) {
    throw std::invalid_argument(
        "init_link_fidelity must be in (0.25, 1] (Werner fidelity floor)");
  }
  if (!(cfg.sim_duration > 0.0)) {
    throw std::invalid_argument("sim_duration must be > 0");
  }
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  channel_memory_cost(cfg.channel);  // rejects unsupported kinds
  if (cfg.topology_params) {
    const WaxmanParams& p = *cfg.topology_params;
    if (p.num_nodes < 2) throw std::invalid_argument("num_nodes must be >= 2");
    if (!(p.delta > 0.0) || p.delta > 1.0) {
      throw std::invalid_argument("delta must be in (0, 1]");
    }
    if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(p.width_km > 0.0) || !(p.height_km > 0.0)) {
      throw std::invalid_argument("area dimensions must be > 0");
    }
  }
}

double swap_fidelity(double w1, double w2) {
  if (!(w1 > 0.0) || w1 > 1.0 || !(w2 > 0.0) || w2 > 1.0) {
    throw std::invalid_argument("Werner parameters must be in (0, 1]");
  }
  return fidelity_from_werner(w1 * w2);
}

RouteFn default_route_fn() {
  return [](const NetworkGraph& g, int s, int t) {
    return dijkstra(g, s, t, weight_cost());
  };
}

// ---------------------------------------------------------------------------
// Event loop
// ---------------------------------------------------------------------------

namespace {

struct Release {
  double time = 0.0;
  long long seq = 0;
  int node = 0;
  int count = 0;
  bool operator>(const Release& o) const {
    if (time != o.time) return time > o.time;
    return seq > o.seq;
  }
};

struct ActiveRoute {
  int s = 0;
  int t = 0;
  int hops = 0;
  std::vector<int> edge_idx;
  std::vector<LinkPair> waiting;  // banked end-to-end pairs (bidirectional)
};

constexpr double kTimeTol = 1e-9;

}  // namespace

RunMetrics run_simulation(const SimConfig& cfg, const RouteFn& route_fn) {
  validate_sim_config(cfg);
  Rng rng(cfg.seed);

  NetworkGraph graph;
  if (cfg.topology_params) {
    WaxmanParams p = *cfg.topology_params;
    p.memory_capacity = cfg.memory_per_node;
    graph = waxman_generate(p, rng);
  } else {
    graph = *cfg.topology_graph;
    validate_graph(graph);
  }
  const int n = static_cast<int>(graph.nodes.size());
  if (n < 2) throw std::invalid_argument("topology needs >= 2 nodes");

  // Sample S-D pairs and resolve their routes.
  std::map<std::pair<int, int>, int> edge_of;
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const EdgeInfo& e = graph.edges[k];
    edge_of[{std::min(e.u, e.v), std::max(e.u, e.v)}] = static_cast<int>(k);
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<ActiveRoute> routes;
  for (int i = 0; i < cfg.num_sd_pairs; ++i) {
    int s = pick(rng);
    int t = pick(rng);
    while (t == s) t = pick(rng);
    auto path = route_fn(graph, s, t);
    if (!path) continue;
    ActiveRoute r;
    r.s = s;
    r.t = t;
    r.hops = path->hop_count;
    for (std::size_t j = 0; j + 1 < path->nodes.size(); ++j) {
      int a = path->nodes[j], b = path->nodes[j + 1];
      r.edge_idx.push_back(edge_of.at({std::min(a, b), std::max(a, b)}));
    }
    routes.push_back(std::move(r));
  }

  RunMetrics m;
  if (routes.empty()) return m;  // all zeros, reachable = false
  m.reachable = true;

  std::set<int> route_edge_set;
  for (const ActiveRoute& r : routes) {
    route_edge_set.insert(r.edge_idx.begin(), r.edge_idx.end());
  }
  const std::vector<int> route_edges(route_edge_set.begin(),
                                     route_edge_set.end());

  const ChannelMemoryCost mem_cost = channel_memory_cost(cfg.channel);
  const double w0 = werner_from_fidelity(cfg.init_link_fidelity);
  const long long slots = std::llround(cfg.sim_duration * cfg.send_rate);
  const double dt = 1.0 / cfg.send_rate;

  std::vector<int> persistent(n, 0);  // endpoint holds across slots
  std::vector<int> transient(n, 0);   // live link pairs within the slot
  std::vector<char> live(graph.edges.size(), 0);
  std::priority_queue<Release, std::vector<Release>, std::greater<Release>>
      releases;
  long long seq = 0;

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  RunCounters& c = m.counters;
  double fidelity_sum = 0.0;
  long long hops_sum = 0;

  auto capacity = [&](int node) { return graph.nodes[node].memory_capacity; };

  for (long long slot = 0; slot < slots; ++slot) {
    const double t = static_cast<double>(slot) * dt;

    while (!releases.empty() && releases.top().time <= t + kTimeTol) {
      persistent[releases.top().node] -= releases.top().count;
      releases.pop();
    }

    // Link-level generation, one attempt per route edge.
    for (int e : route_edges) {
      ++c.generated;
      if (coin(rng) < cfg.drop_rate) {
        ++c.loss;
        continue;
      }
      const int u = graph.edges[e].u, v = graph.edges[e].v;
      if (persistent[u] + transient[u] + 1 > capacity(u) ||
          persistent[v] + transient[v] + 1 > capacity(v)) {
        ++c.blocked;
        continue;
      }
      live[e] = 1;
      ++transient[u];
      ++transient[v];
    }

    // End-to-end assembly; rotating priority keeps shared edges fair.
    const int nr = static_cast<int>(routes.size());
    for (int j = 0; j < nr; ++j) {
      ActiveRoute& r = routes[(slot + j) % nr];
      bool complete = true;
      for (int e : r.edge_idx) {
        if (!live[e]) {
          complete = false;
          break;
        }
      }
      if (!complete) continue;
      const int k = r.hops;
      // The endpoint link pair's transient slot converts into the persistent
      // hold, hence the -1 on each side.
      if (persistent[r.s] + transient[r.s] - 1 + mem_cost.source >
              capacity(r.s) ||
          persistent[r.t] + transient[r.t] - 1 + mem_cost.destination >
              capacity(r.t)) {
        continue;  // cannot pin the delivery; pairs expire at slot end
      }
      for (int e : r.edge_idx) {
        live[e] = 0;
        --transient[graph.edges[e].u];
        --transient[graph.edges[e].v];
      }
      bool swaps_ok = true;
      for (int sidx = 0; sidx < k - 1; ++sidx) {
        if (coin(rng) >= cfg.swap_success) {
          swaps_ok = false;
          break;
        }
      }
      if (!swaps_ok) {
        c.swap_failed += k;
        continue;
      }
      const double w = std::pow(w0, k);
      persistent[r.s] += mem_cost.source;
      persistent[r.t] += mem_cost.destination;
      m.slot_acquisitions += mem_cost.source + mem_cost.destination;
      const double t_complete = t + cfg.classical_delay * k;

      if (cfg.mode == SimMode::Unidirectional) {
        if (t_complete <= cfg.sim_duration + kTimeTol) {
          ++m.deliveries;
          fidelity_sum += fidelity_from_werner(w);
          hops_sum += k;
          c.used += k;
          releases.push({t_complete, seq++, r.s, mem_cost.source});
          releases.push({t_complete, seq++, r.t, mem_cost.destination});
        } else {
          c.in_memory += k;  // corrections outlast the simulation window
        }
      } else {
        r.waiting.push_back({{r.s, r.t}, w, t});
        if (r.waiting.size() == 2) {
          const double w1 = r.waiting[0].werner_w;
          const double w2 = r.waiting[1].werner_w;
          r.waiting.clear();
          if (t_complete <= cfg.sim_duration + kTimeTol) {
            ++m.deliveries;  // one completed exchange
            fidelity_sum +=
                0.5 * (fidelity_from_werner(w1) + fidelity_from_werner(w2));
            hops_sum += k;
            c.used += 2 * k;
            releases.push({t_complete, seq++, r.s, 2 * mem_cost.source});
            releases.push({t_complete, seq++, r.t, 2 * mem_cost.destination});
          } else {
            c.in_memory += 2 * k;
          }
        }
      }
    }

    // Unclaimed pairs do not survive the slot.
    for (int e : route_edges) {
      if (live[e]) {
        ++c.expired;
        live[e] = 0;
        --transient[graph.edges[e].u];
        --transient[graph.edges[e].v];
      }
    }
  }

  for (const ActiveRoute& r : routes) {
    c.in_memory += static_cast<long long>(r.waiting.size()) * r.hops;
  }
  c.dropped = c.loss + c.expired + c.swap_failed;

  m.throughput = static_cast<double>(m.deliveries) / cfg.sim_duration;
  m.end_to_end_fidelity =
      m.deliveries > 0 ? fidelity_sum / static_cast<double>(m.deliveries) : 0.0;
  m.mean_hops = m.deliveries > 0
                    ? static_cast<double>(hops_sum) /
                          static_cast<double>(m.deliveries)
                    : 0.0;
  const long long stored = c.generated - c.loss - c.blocked;
  m.memory_utilization =
      stored > 0 ? static_cast<double>(c.used) / static_cast<double>(stored)
                 : 0.0;
  return m;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

namespace {

MetricStat stat_of(const std::vector<double>& xs) {
  MetricStat s;
  const std::size_t n = xs.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    s.ci_half_width = 1.96 * sd / std::sqrt(static_cast<double>(n));
  }
  return s;
}

}  // namespace

SimMetrics aggregate_runs(const SimConfig& cfg, const RouteFn& route_fn) {
  validate_sim_config(cfg);
  SimMetrics agg;
  std::vector<double> tp, fid, util;
  double hops_sum = 0.0;
  long long hops_n = 0;
  for (int i = 0; i < cfg.runs; ++i) {
    SimConfig one = cfg;
    one.seed = cfg.seed + static_cast<std::uint64_t>(i);
    RunMetrics r = run_simulation(one, route_fn);
    tp.push_back(r.throughput);
    fid.push_back(r.end_to_end_fidelity);
    util.push_back(r.memory_utilization);
    if (r.deliveries > 0) {
      hops_sum += r.mean_hops;
      ++hops_n;
    }
    agg.all_reachable = agg.all_reachable && r.reachable;
    agg.per_run.push_back(std::move(r));
  }
  agg.throughput = stat_of(tp);
  agg.end_to_end_fidelity = stat_of(fid);
  agg.memory_utilization = stat_of(util);
  agg.mean_hops = hops_n > 0 ? hops_sum / static_cast<double>(hops_n) : 0.0;
  return agg;
}

std::vector<SweepRow> sweep_nodes(const SimConfig& cfg,
                                  const std::vector<int>& node_counts,
                                  const RouteFn& route_fn) {
  if (node_counts.empty()) {
    throw std::invalid_argument("node_counts must be non-empty");
  }
  if (!cfg.topology_params) {
    throw std::invalid_argument("sweep_nodes needs Waxman topology parameters");
  }
  std::vector<SweepRow> rows;
  std::size_t idx = 0;
  for (int count : node_counts) {
    for (SimMode mode : {SimMode::Unidirectional, SimMode::Bidirectional}) {
      SimConfig one = cfg;
      one.topology_params->num_nodes = count;
      one.mode = mode;
      one.seed = cfg.seed + static_cast<std::uint64_t>(idx) * 1000003ULL;
      SweepRow row;
      row.node_count = count;
      row.mode = mode;
      row.seed = one.seed;
      row.metrics = aggregate_runs(one, route_fn);
      rows.push_back(std::move(row));
      ++idx;
    }
  }
  return rows;
}

std::string metrics_csv(const std::vector<SweepRow>& rows, ChannelKind channel,
                        int runs) {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
  };
  std::string out =
      "node_count,mode,channel,runs,throughput_mean,throughput_ci,"
      "fidelity_mean,fidelity_ci,memutil_mean,memutil_ci,seed\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.node_count) + "," + sim_mode_name(r.mode) + "," +
           channel_name(channel) + "," + std::to_string(runs) + "," +
           fmt(r.metrics.throughput.mean) + "," +
           fmt(r.metrics.throughput.ci_half_width) + "," +
           fmt(r.metrics.end_to_end_fidelity.mean) + "," +
           fmt(r.metrics.end_to_end_fidelity.ci_half_width) + "," +
           fmt(r.metrics.memory_utilization.mean) + "," +
           fmt(r.metrics.memory_utilization.ci_half_width) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace qtr
