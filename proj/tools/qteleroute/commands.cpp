#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qteleroute/channels.hpp"
#include "qteleroute/config.hpp"
#include "qteleroute/netsim.hpp"
#include "qteleroute/protocol.hpp"
#include "qteleroute/report.hpp"
#include "qteleroute/routing.hpp"
#include "qteleroute/statevec.hpp"

namespace qtr::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Writes an artifact and reports it by base name only, so stdout does not
// depend on where the output directory lives.
void write_artifact(const std::string& dir, const std::string& name,
                    const std::string& content) {
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
  std::cout << "wrote " << name << "\n";
}

nlohmann::ordered_json stats_json(const GroverStats& s) {
  return {{"oracle_queries", s.oracle_queries},
          {"frontier_extractions", s.frontier_extractions},
          {"classical_fallbacks", s.classical_fallbacks},
          {"retries", s.retries}};
}

bool same_path(const Path& a, const Path& b) {
  return a.nodes == b.nodes && std::abs(a.total_cost - b.total_cost) <= 1e-12;
}

nlohmann::ordered_json direction_report(const char* name, const Path& found,
                                        const GroverStats& stats,
                                        const std::optional<Path>& classical) {
  nlohmann::ordered_json j;
  j["direction"] = name;
  j["nodes"] = found.nodes;
  j["total_cost"] = found.total_cost;
  j["hop_count"] = found.hop_count;
  j["matches_classical_dijkstra"] = classical && same_path(found, *classical);
  j["minimum_finding"] = stats_json(stats);
  return j;
}

}  // namespace

std::string resolve_out_dir(const std::string& out_flag) {
  std::string dir = out_flag;
  if (const char* env = std::getenv("QTELEROUTE_OUT");
      env != nullptr && *env != '\0') {
    dir = env;
  }
  if (dir.empty()) throw std::invalid_argument("output directory is empty");
  fs::create_directories(dir);
  return dir;
}

int cmd_protocol(const ProtocolArgs& a) {
  if (a.trials < 1) {
    throw std::invalid_argument("--trials must be >= 1");
  }
  const ChannelKind kind = parse_channel(a.channel);
  const bool two_way = kind == ChannelKind::WBell5 ||
                       kind == ChannelKind::GHZBell5 ||
                       kind == ChannelKind::ClusterBell6;
  const std::string dir = resolve_out_dir(a.out);

  const CorrectionTable table = derive_correction_table(kind);
  Rng rng(a.seed);
  std::vector<TeleportResult> results;
  results.reserve(static_cast<size_t>(a.trials));
  for (int t = 0; t < a.trials; ++t) {
    results.push_back(two_way
                          ? run_bqt(kind, a.theta_a, a.theta_b, table, rng)
                          : run_uqt(kind, a.theta_a, table, rng));
  }

  std::ostringstream csv;
  csv << trace_csv_header() << "\n";
  for (const auto& r : results) csv << trace_csv_row(r, a.seed) << "\n";
  write_artifact(dir, "protocol_summary.csv", csv.str());
  write_artifact(dir, "protocol_trace.json", trace_json(results.front()));

  int successes = 0;
  double min_fab = 1.0, min_fba = 1.0;
  for (const auto& r : results) {
    if (r.success) ++successes;
    min_fab = std::min(min_fab, r.trace.fidelity_a_to_b);
    min_fba = std::min(min_fba, r.trace.fidelity_b_to_a);
  }
  std::cout << "channel=" << channel_name(kind)
            << " direction=" << (two_way ? "two-way" : "one-way")
            << " trials=" << a.trials << " successes=" << successes
            << " min_f_ab=" << fmt6(min_fab) << " min_f_ba=" << fmt6(min_fba)
            << "\n";
  return successes == a.trials ? 0 : 1;
}

int cmd_channel(const ChannelArgs& a) {
  const ChannelKind kind = parse_channel(a.channel);
  const std::string dir = resolve_out_dir(a.out);
  const ChannelState cs = make_channel(kind);
  const ChannelVerification ver = verify_channel(kind);

  nlohmann::ordered_json j;
  j["channel"] = channel_name(kind);
  j["num_qubits"] = cs.state.num_qubits;
  j["holders"] = cs.holder_map;
  j["verification"] = {{"max_amplitude_error", ver.max_amplitude_error},
                       {"circuit_fidelity", ver.circuit_fidelity}};
  j["state"] = nlohmann::json::parse(state_json(cs.state));
  write_artifact(dir, "channel_state.json", j.dump(2));

  std::cout << "channel=" << channel_name(kind)
            << " qubits=" << cs.state.num_qubits
            << " circuit_fidelity=" << fmt6(ver.circuit_fidelity) << "\n";
  return 0;
}

int cmd_route(const RouteArgs& a) {
  const std::string dir = resolve_out_dir(a.out);
  Rng rng(a.seed);

  NetworkGraph g;
  if (!a.graph_file.empty()) {
    std::ifstream in(a.graph_file);
    if (!in) {
      throw std::runtime_error("cannot open graph file: " + a.graph_file);
    }
    nlohmann::json j;
    in >> j;
    g = graph_from_json(j);
  } else {
    if (a.nodes < 2) throw std::invalid_argument("--nodes must be >= 2");
    WaxmanParams p;
    p.num_nodes = a.nodes;
    p.width_km = 1000.0;
    p.height_km = 1000.0;
    p.delta = 0.9;
    p.epsilon = 0.5;
    g = waxman_generate(p, rng);
  }

  const int n = static_cast<int>(g.nodes.size());
  const int s = a.source;
  const int t = a.target < 0 ? n - 1 : a.target;
  if (s < 0 || s >= n || t < 0 || t >= n) {
    throw std::invalid_argument("--source/--target out of range for " +
                                std::to_string(n) + " nodes");
  }

  McdmWeights w;
  w.distance = a.w_distance;
  w.fidelity = a.w_fidelity;
  w.memory = a.w_memory;
  const EdgeCostFn cost = make_mcdm_cost(g, w);

  nlohmann::ordered_json report;
  report["source"] = s;
  report["target"] = t;
  report["num_nodes"] = n;
  report["num_edges"] = g.edges.size();
  report["cost_weights"] = {{"distance", w.distance},
                            {"fidelity", w.fidelity},
                            {"memory", w.memory}};

  if (s == t) {
    Path p;
    p.nodes = {s};
    p.total_cost = 0.0;
    p.hop_count = 0;
    report["reachable"] = true;
    report["note"] = "source equals target; trivial single-node path";
    write_artifact(dir, "path_forward.json", path_json(p).dump(2));
    write_artifact(dir, "path_backward.json", path_json(p).dump(2));
    write_artifact(dir, "route_graph.svg", render_route_svg(g, &p, &p));
    write_artifact(dir, "grover_report.json", report.dump(2));
    std::cout << "route " << s << " -> " << t
              << ": single-node path, cost=0\n";
    return 0;
  }

  const auto bidi = find_paths_bidirectional(g, s, t, cost, rng);
  if (!bidi) {
    report["reachable"] = false;
    write_artifact(dir, "route_graph.svg",
                   render_route_svg(g, nullptr, nullptr));
    write_artifact(dir, "grover_report.json", report.dump(2));
    std::cerr << "no route between " << s << " and " << t << "\n";
    return 3;
  }

  const auto classical_fwd = dijkstra(g, s, t, cost);
  const auto classical_bwd = dijkstra(g, t, s, cost);
  report["reachable"] = true;
  report["forward"] = direction_report("forward", bidi->forward,
                                       bidi->forward_stats, classical_fwd);
  report["backward"] = direction_report("backward", bidi->backward,
                                        bidi->backward_stats, classical_bwd);

  write_artifact(dir, "path_forward.json", path_json(bidi->forward).dump(2));
  write_artifact(dir, "path_backward.json", path_json(bidi->backward).dump(2));
  write_artifact(dir, "route_graph.svg",
                 render_route_svg(g, &bidi->forward, &bidi->backward));
  write_artifact(dir, "grover_report.json", report.dump(2));

  std::cout << "route " << s << " -> " << t
            << ": cost=" << fmt6(bidi->forward.total_cost)
            << " hops=" << bidi->forward.hop_count << " (back cost="
            << fmt6(bidi->backward.total_cost)
            << ", oracle queries fwd=" << bidi->forward_stats.oracle_queries
            << " bwd=" << bidi->backward_stats.oracle_queries << ")\n";
  return 0;
}

int cmd_walk(const WalkArgs& a) {
  if (a.length < 1) throw std::invalid_argument("--length must be >= 1");
  if (a.steps < 0) throw std::invalid_argument("--steps must be >= 0");
  if (a.shots < 1) throw std::invalid_argument("--shots must be >= 1");
  const std::string dir = resolve_out_dir(a.out);

  std::optional<ChannelKind> kind;
  if (!a.channel.empty()) kind = parse_channel(a.channel);

  Path p;
  p.nodes.resize(static_cast<size_t>(a.length));
  std::iota(p.nodes.begin(), p.nodes.end(), 0);
  p.hop_count = a.length - 1;
  p.total_cost = static_cast<double>(a.length - 1);

  Rng rng(a.seed);
  const WalkResult r = run_walk(p, a.steps, a.shots, kind, rng);

  write_artifact(dir, "walk_histogram.csv", histogram_csv(r));

  // Bars over the union of sampled and exact outcomes, sorted by bitstring.
  std::map<std::string, HistogramBar> bars_by_label;
  for (const auto& [label, count] : r.histogram) {
    bars_by_label[label].label = label;
    bars_by_label[label].count = count;
  }
  for (const auto& [label, prob] : r.exact) {
    bars_by_label[label].label = label;
    bars_by_label[label].exact = prob;
  }
  std::vector<HistogramBar> bars;
  bars.reserve(bars_by_label.size());
  for (auto& [label, bar] : bars_by_label) bars.push_back(bar);
  const std::string title =
      "Entanglement walk outcomes (" + std::to_string(a.length) +
      " nodes, " + std::to_string(a.steps) + " step" +
      (a.steps == 1 ? "" : "s") + ", source " +
      (kind ? channel_name(*kind) : std::string("|1>")) + ")";
  write_artifact(dir, "walk_histogram.svg",
                 render_histogram_svg(title, bars, r.shots));

  std::cout << "walk nodes=" << a.length << " steps=" << a.steps
            << " shots=" << r.shots << " outcomes=" << r.histogram.size()
            << " exact_available=" << (r.exact.empty() ? "no" : "yes") << "\n";
  return 0;
}

int cmd_simulate(const SimulateArgs& a) {
  if (a.config_file.empty()) throw std::invalid_argument("--config is required");
  SweepConfig sc = load_sweep_config(a.config_file);
  if (!a.mode.empty()) sc.mode_filter = parse_mode_filter(a.mode);
  if (a.seed_given) sc.base.seed = a.seed;
  const std::string dir = resolve_out_dir(a.out);

  std::vector<SweepRow> rows =
      sweep_nodes(sc.base, sc.node_counts, default_route_fn());
  if (sc.mode_filter != ModeFilter::Both) {
    const SimMode keep = sc.mode_filter == ModeFilter::UnidirectionalOnly
                             ? SimMode::Unidirectional
                             : SimMode::Bidirectional;
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [&](const SweepRow& r) { return r.mode != keep; }),
               rows.end());
  }

  write_artifact(dir, "metrics.csv",
                 metrics_csv(rows, sc.base.channel, sc.base.runs));

  const auto series_for = [&](auto metric_of) {
    std::vector<LineSeries> series;
    LineSeries uni{"unidirectional", "#1f77b4", {}};
    LineSeries bi{"bidirectional", "#ff7f0e", {}};
    for (const SweepRow& r : rows) {
      auto& dst = r.mode == SimMode::Unidirectional ? uni : bi;
      dst.points.emplace_back(static_cast<double>(r.node_count),
                              metric_of(r.metrics));
    }
    if (!uni.points.empty()) series.push_back(std::move(uni));
    if (!bi.points.empty()) series.push_back(std::move(bi));
    return series;
  };

  write_artifact(
      dir, "throughput.svg",
      render_line_chart_svg(
          "End-to-end throughput vs network size", "nodes",
          "delivered pairs per second",
          series_for([](const SimMetrics& m) { return m.throughput.mean; })));
  write_artifact(
      dir, "fidelity.svg",
      render_line_chart_svg(
          "End-to-end fidelity vs network size", "nodes", "fidelity",
          series_for(
              [](const SimMetrics& m) { return m.end_to_end_fidelity.mean; })));
  write_artifact(
      dir, "memory_utilization.svg",
      render_line_chart_svg(
          "Memory utilization vs network size", "nodes",
          "useful fraction of stored pairs",
          series_for(
              [](const SimMetrics& m) { return m.memory_utilization.mean; })));

  for (const SweepRow& r : rows) {
    std::cout << "nodes=" << r.node_count << " mode=" << sim_mode_name(r.mode)
              << " throughput=" << fmt6(r.metrics.throughput.mean)
              << " fidelity=" << fmt6(r.metrics.end_to_end_fidelity.mean)
              << " memutil=" << fmt6(r.metrics.memory_utilization.mean)
              << " reachable=" << (r.metrics.all_reachable ? "yes" : "no")
              << "\n";
  }
  return 0;
}

}  // namespace qtr::cli
