#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qteleroute/channels.hpp"
#include "qteleroute/routing.hpp"
#include "qteleroute/statevec.hpp"

namespace qtr {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class SimMode { Unidirectional, Bidirectional };

std::string sim_mode_name(SimMode m);
SimMode parse_sim_mode(const std::string& name);  // "unidirectional"/"uni"/...

struct SimConfig {
  // Exactly one topology source: Waxman parameters or an explicit graph.
  std::optional<WaxmanParams> topology_params;
  std::optional<NetworkGraph> topology_graph;
  int num_sd_pairs = 10;
  double send_rate = 1000.0;      // link generation attempts per second per edge
  double classical_delay = 0.05;  // seconds per hop of correction latency
  int memory_per_node = 50;
  double drop_rate = 0.03;
  double swap_success = 0.98;
  double init_link_fidelity = 0.95;  // Werner fidelity per fresh link, > 0.25
  double sim_duration = 1.0;         // seconds
  SimMode mode = SimMode::Unidirectional;
  ChannelKind channel = ChannelKind::WBell5;
  int runs = 1;
  std::uint64_t seed = 1;
};

// Throws std::invalid_argument with a description of the offending field.
void validate_sim_config(const SimConfig& cfg);

// Werner-parameter composition across one swap; returns the fidelity
// (3*w1*w2 + 1)/4. Throws unless both parameters lie in (0, 1].
double swap_fidelity(double w1, double w2);

inline double werner_from_fidelity(double f) { return (4.0 * f - 1.0) / 3.0; }
inline double fidelity_from_werner(double w) { return (3.0 * w + 1.0) / 4.0; }

// Memory slots one end-to-end delivery pins at the route endpoints, by
// entangled-resource kind: qubits held on the source side and the
// destination side.
struct ChannelMemoryCost {
  int source = 1;
  int destination = 1;
};
ChannelMemoryCost channel_memory_cost(ChannelKind kind);

// One entangled resource waiting in memory: the endpoints it spans, its
// Werner parameter (fidelity (3w+1)/4 stays above the 1/4 floor), and when
// it was created.
struct LinkPair {
  std::pair<int, int> edge;
  double werner_w = 1.0;
  double created_at = 0.0;
};

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// Link-pair bookkeeping, exact by construction:
//   generated = dropped + blocked + used + in_memory
// where dropped folds together channel loss, end-of-slot expiry, and pairs
// consumed by failed swap chains (the fine-grained fields).
struct RunCounters {
  long long generated = 0;
  long long dropped = 0;  // = loss + expired + swap_failed
  long long blocked = 0;
  long long used = 0;       // link pairs consumed by counted deliveries
  long long in_memory = 0;  // still held when the clock ran out
  long long loss = 0;
  long long expired = 0;
  long long swap_failed = 0;
};

struct RunMetrics {
  double throughput = 0.0;          // deliveries per second
  double end_to_end_fidelity = 0.0; // mean F over deliveries (0 when none)
  double memory_utilization = 0.0;  // used / successfully stored, in [0,1]
  double mean_hops = 0.0;           // mean route length over deliveries
  bool reachable = false;           // at least one S-D pair had a route
  long long deliveries = 0;
  long long slot_acquisitions = 0;  // endpoint memory slots pinned
  RunCounters counters;
};

struct MetricStat {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 95% normal-approximation half width
};

struct SimMetrics {
  std::vector<RunMetrics> per_run;
  MetricStat throughput;
  MetricStat end_to_end_fidelity;
  MetricStat memory_utilization;
  double mean_hops = 0.0;  // mean of per-run means (runs with deliveries)
  bool all_reachable = true;
};

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

using RouteFn =
    std::function<std::optional<Path>(const NetworkGraph&, int, int)>;

// Classical shortest path on stored edge weights.
RouteFn default_route_fn();

// One seeded run. Slot-aligned event loop at send_rate: per slot each edge on
// an active route attempts one pair generation (Bernoulli loss, memory
// blocking), routes whose edges all hold a live pair swap at intermediate
// nodes (Bernoulli per swap), successes become end-to-end pairs that pin
// endpoint memory until corrections complete after classical_delay per hop.
// Bidirectional mode banks the first end-to-end pair until a partner arrives,
// delivering exchanges that consume two pairs. Leftover link pairs expire at
// slot end.
RunMetrics run_simulation(const SimConfig& cfg, const RouteFn& route_fn);

// run_simulation with seeds seed+0 .. seed+runs-1, plus mean/CI aggregation.
SimMetrics aggregate_runs(const SimConfig& cfg, const RouteFn& route_fn);

struct SweepRow {
  int node_count = 0;
  SimMode mode = SimMode::Unidirectional;
  SimMetrics metrics;
  std::uint64_t seed = 0;
};

// aggregate_runs per (node count, mode). The config must use Waxman topology
// parameters; num_nodes is overridden per row.
std::vector<SweepRow> sweep_nodes(const SimConfig& cfg,
                                  const std::vector<int>& node_counts,
                                  const RouteFn& route_fn);

// node_count,mode,channel,runs,throughput_mean,throughput_ci,fidelity_mean,
// fidelity_ci,memutil_mean,memutil_ci,seed
std::string metrics_csv(const std::vector<SweepRow>& rows, ChannelKind channel,
                        int runs);

}  // namespace qtr
