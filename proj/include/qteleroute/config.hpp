#pragma once

// Flat key=value configuration files for the network-simulation sweep.
//
// Format: one `key = value` pair per line; `#` starts a comment (full line or
// trailing); blank lines are ignored.  The key set is a closed schema —
// unknown keys are collected and rejected by name, as are missing required
// keys, so a typo in a config file fails loudly instead of silently running
// with defaults.
//
// Schema (defaults in parentheses; keys marked * are required):
//   node_counts*        comma-separated node counts to sweep, e.g. 20,50,100
//   area_width_km*      Waxman placement area width
//   area_height_km*     Waxman placement area height
//   delta*              Waxman edge-probability scale, in (0, 1]
//   epsilon*            Waxman decay parameter, in (0, 1]
//   num_sd_pairs        source-destination pairs per run (10)
//   send_rate           generation attempts per second per edge (1000)
//   classical_delay     per-hop classical signalling delay, seconds (0.05)
//   memory_per_node     memory slots per node (50)
//   drop_rate           per-attempt link loss probability (0.03)
//   swap_success        entanglement-swap success probability (0.98)
//   init_link_fidelity  fidelity of a freshly generated link (0.95)
//   sim_duration        simulated seconds per run (1.0)
//   mode                uni | bi | both (both)
//   channel             teleportation channel preset (wbell5)
//   runs                independent runs per sweep point (100)
//   seed                base RNG seed (1)

#include <map>
#include <string>
#include <vector>

#include "qteleroute/netsim.hpp"

namespace qtr {

// Which simulation modes a sweep should report.
enum class ModeFilter { Both, UnidirectionalOnly, BidirectionalOnly };

std::string mode_filter_name(ModeFilter f);

// Accepts "uni"/"unidirectional", "bi"/"bidirectional", "both"
// (case-insensitive). Throws std::invalid_argument on anything else.
ModeFilter parse_mode_filter(const std::string& value);

struct SweepConfig {
  std::vector<int> node_counts;
  SimConfig base;  // topology_params carries area/delta/epsilon; num_nodes is
                   // overwritten per sweep point
  ModeFilter mode_filter = ModeFilter::Both;
};

// Splits config text into key/value pairs.  Throws std::invalid_argument on
// malformed lines (no '=') or duplicate keys.
std::map<std::string, std::string> parse_key_values(const std::string& text);

// Interprets parsed pairs against the schema above.  Throws
// std::invalid_argument naming every unknown key, every missing required key,
// or the first malformed value.  The resulting SimConfig has already passed
// simulation-config validation for the first sweep point.
SweepConfig sweep_config_from_pairs(
    const std::map<std::string, std::string>& pairs);

// Reads and parses a config file.  Throws std::invalid_argument (bad content)
// or std::runtime_error (unreadable file).
SweepConfig load_sweep_config(const std::string& path);

}  // namespace qtr
