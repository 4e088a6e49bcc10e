#pragma once

// Command implementations behind the qteleroute CLI. Each cmd_* function
// receives fully parsed arguments, writes its artifacts into the resolved
// output directory, prints a short deterministic summary to stdout, and
// returns the process exit code:
//   0  success
//   1  protocol run completed but at least one trial failed
//   2  usage or configuration error (bad flag value, bad config file)
//   3  requested route does not exist
//   4  resource guard tripped (register too large to simulate)
// Exceptions thrown by the library map onto 2/3/4 in main().

#include <cstdint>
#include <string>

namespace qtr::cli {

// Resolves the output directory: the QTELEROUTE_OUT environment variable, when
// set and non-empty, overrides the --out flag. Creates the directory.
std::string resolve_out_dir(const std::string& out_flag);

struct ProtocolArgs {
  std::string out = "out";
  std::uint64_t seed = 1;
  std::string channel = "wbell5";
  double theta_a = 0.0;
  double theta_b = 0.0;
  int trials = 1;
};
int cmd_protocol(const ProtocolArgs& a);

struct ChannelArgs {
  std::string out = "out";
  std::string channel = "wbell5";
};
int cmd_channel(const ChannelArgs& a);

struct RouteArgs {
  std::string out = "out";
  std::uint64_t seed = 1;
  int nodes = 10;
  std::string graph_file;  // overrides generated topology when non-empty
  int source = 0;
  int target = -1;  // -1: last node
  double w_distance = 1.0;
  double w_fidelity = 0.0;
  double w_memory = 0.0;
};
int cmd_route(const RouteArgs& a);

struct WalkArgs {
  std::string out = "out";
  std::uint64_t seed = 1;
  int length = 5;
  int steps = 1;
  long long shots = 1000;
  std::string channel;  // empty: plain |1> source on the first wire
};
int cmd_walk(const WalkArgs& a);

struct SimulateArgs {
  std::string out = "out";
  std::uint64_t seed = 1;
  bool seed_given = false;  // --seed overrides the config seed only when set
  std::string config_file;
  std::string mode;  // empty: keep the config's mode filter
};
int cmd_simulate(const SimulateArgs& a);

}  // namespace qtr::cli
