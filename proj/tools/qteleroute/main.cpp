// qteleroute: teleportation protocols, entanglement routing, and network
// simulation from one binary. See README.md for the command reference.

#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qteleroute/statevec.hpp"

namespace {

// Maps library exceptions onto the documented exit codes: guard trips are 4,
// everything else that escapes a command is a usage/configuration error (2).
int guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const qtr::GuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qteleroute: quantum teleportation protocols, entanglement-aware "
      "routing, and network simulation"};
  app.require_subcommand(1);

  qtr::cli::ProtocolArgs pa;
  auto* protocol = app.add_subcommand(
      "protocol", "Run a teleportation protocol and report fidelities");
  protocol->add_option("--channel", pa.channel,
                       "Entanglement channel (bell, wbell5, ghzbell5, "
                       "clusterbell6; short aliases accepted)");
  protocol->add_option("--theta-a", pa.theta_a,
                       "Preparation angle for the A -> B payload (radians)");
  protocol->add_option("--theta-b", pa.theta_b,
                       "Preparation angle for the B -> A payload (radians)");
  protocol->add_option("--trials", pa.trials, "Number of independent runs");
  protocol->add_option("--seed", pa.seed, "RNG seed");
  protocol->add_option("--out", pa.out, "Output directory");

  qtr::cli::ChannelArgs ca;
  auto* channel = app.add_subcommand(
      "channel", "Inspect an entanglement channel's state and holders");
  channel->add_option("--channel", ca.channel, "Channel name");
  channel->add_option("--out", ca.out, "Output directory");

  qtr::cli::RouteArgs ra;
  auto* route = app.add_subcommand(
      "route", "Find forward and backward routes through a network");
  route->add_option("--nodes", ra.nodes,
                    "Node count for the generated demo topology");
  route->add_option("--graph", ra.graph_file,
                    "Load the topology from a JSON file instead");
  route->add_option("--source", ra.source, "Source node id");
  route->add_option("--target", ra.target,
                    "Target node id (default: last node)");
  route->add_option("--wd", ra.w_distance, "Cost weight: normalized distance");
  route->add_option("--wf", ra.w_fidelity, "Cost weight: fidelity deficit");
  route->add_option("--wm", ra.w_memory, "Cost weight: memory pressure");
  route->add_option("--seed", ra.seed, "RNG seed");
  route->add_option("--out", ra.out, "Output directory");

  qtr::cli::WalkArgs wa;
  auto* walk = app.add_subcommand(
      "walk", "Propagate entanglement along a path and sample outcomes");
  walk->add_option("--length", wa.length, "Number of nodes on the path");
  walk->add_option("--steps", wa.steps, "Propagation steps to apply");
  walk->add_option("--shots", wa.shots, "Measurement samples (>= 1)");
  walk->add_option("--channel", wa.channel,
                   "Source entanglement family (default: plain |1> source)");
  walk->add_option("--seed", wa.seed, "RNG seed");
  walk->add_option("--out", wa.out, "Output directory");

  qtr::cli::SimulateArgs sa;
  auto* simulate = app.add_subcommand(
      "simulate", "Sweep network sizes with the repeater-chain simulator");
  auto* cfg_opt = simulate->add_option("--config", sa.config_file,
                                       "Config file (key = value lines)");
  cfg_opt->required();
  simulate->add_option("--mode", sa.mode,
                       "Override the config mode filter (uni, bi, both)");
  auto* seed_opt =
      simulate->add_option("--seed", sa.seed, "Override the config seed");
  simulate->add_option("--out", sa.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (protocol->parsed()) return guarded([&] { return cmd_protocol(pa); });
  if (channel->parsed()) return guarded([&] { return cmd_channel(ca); });
  if (route->parsed()) return guarded([&] { return cmd_route(ra); });
  if (walk->parsed()) return guarded([&] { return cmd_walk(wa); });
  if (simulate->parsed()) {
    sa.seed_given = seed_opt->count() > 0;
    return guarded([&] { return cmd_simulate(sa); });
  }
  std::cerr << "error: no command given\n";
  return 2;
}
