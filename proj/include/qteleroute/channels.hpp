#pragma once

#include <map>
#include <string>
#include <vector>

#include "qteleroute/statevec.hpp"

namespace qtr {

// Multi-qubit entanglement resources shared between the two parties.
//
// Composite kinds lay out their factors with the first factor on the
// high-order qubits: WBell5 is the three-qubit W state on qubits 1..3
// followed by a Bell pair on qubits 4..5, GHZBell5 is GHZ on 1..3 and Bell
// on 4..5, and ClusterBell6 is the four-qubit cluster resource on 1..4 and
// Bell on 5..6.
enum class ChannelKind {
  Bell,
  GHZ3,
  W3,
  Wn,       // generalized three-qubit W family, see make_wn
  ClusterN, // n-qubit cluster resource, even n
  WBell5,
  GHZBell5,
  ClusterBell6,
};

std::string channel_name(ChannelKind kind);

// Parse "bell", "ghz3", "w3", "wbell5", "ghzbell5", "clusterbell6"
// (case-insensitive; the short aliases "ghz", "w", "wbell", "ghzbell" and
// "clusterbell" also work). Throws std::invalid_argument on anything else.
ChannelKind parse_channel(const std::string& name);

struct ChannelState {
  ChannelKind kind;
  StateVector state;
  // party name -> 1-based qubit indices held by that party
  std::map<std::string, std::vector<int>> holder_map;
};

// Analytic channel construction (amplitudes written directly).
// Supported kinds: Bell, GHZ3, W3, WBell5, GHZBell5, ClusterBell6.
ChannelState make_channel(ChannelKind kind);

// Generalized W state
//   (|100> + sqrt(n) e^{i beta} |010> + sqrt(n+1) e^{i eta} |001>)
//     / sqrt(2 + 2n)
// n >= 0 real; throws std::invalid_argument for negative n.
StateVector make_wn(double n, double beta, double eta);

// n-qubit cluster-class resource used by the six-qubit channel: a product
// of n/2 Bell pairs on qubit pairs (1,2), (3,4), ... Even n >= 2 only.
StateVector make_cluster(int n);

// Gate sequence that prepares the same state as make_channel from |0...0>.
// Supported kinds: Bell, GHZ3, W3, WBell5, GHZBell5, ClusterBell6.
std::vector<GateOp> circuit_prepare(ChannelKind kind);

struct ChannelVerification {
  double max_amplitude_error; // analytic state vs explicit amplitude table
  double circuit_fidelity;    // |<analytic|circuit>|^2
};

// Compare the analytic construction against its own amplitude table and
// against the state produced by circuit_prepare.
ChannelVerification verify_channel(ChannelKind kind);

} // namespace qtr
