#include "qteleroute/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qteleroute/channels.hpp"

namespace qtr {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': expected a number, got '" + value + "'");
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config key '" + key +
                                "': expected a number, got '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': expected an integer, got '" + value + "'");
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config key '" + key +
                                "': expected an integer, got '" + value + "'");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw std::invalid_argument("config key '" + key +
                                  "': empty entry in list '" + value + "'");
    }
    out.push_back(static_cast<int>(parse_int(key, item)));
  }
  if (out.empty()) {
    throw std::invalid_argument("config key '" + key + "': empty list");
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "node_counts",    "area_width_km",  "area_height_km",
      "delta",          "epsilon",        "num_sd_pairs",
      "send_rate",      "classical_delay", "memory_per_node",
      "drop_rate",      "swap_success",   "init_link_fidelity",
      "sim_duration",   "mode",           "channel",
      "runs",           "seed"};
  return keys;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys = {
      "node_counts", "area_width_km", "area_height_km", "delta", "epsilon"};
  return keys;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

std::string mode_filter_name(ModeFilter f) {
  switch (f) {
    case ModeFilter::Both: return "both";
    case ModeFilter::UnidirectionalOnly: return "uni";
    case ModeFilter::BidirectionalOnly: return "bi";
  }
  throw std::invalid_argument("mode_filter_name: unknown filter");
}

ModeFilter parse_mode_filter(const std::string& value) {
  std::string s = value;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "both") return ModeFilter::Both;
  if (s == "uni" || s == "unidirectional")
    return ModeFilter::UnidirectionalOnly;
  if (s == "bi" || s == "bidirectional") return ModeFilter::BidirectionalOnly;
  throw std::invalid_argument(
      "config key 'mode': expected uni, bi, or both, got '" + value + "'");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> pairs;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value, got '" + line +
                                  "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    }
    if (pairs.count(key) > 0) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    }
    pairs[key] = value;
  }
  return pairs;
}

SweepConfig sweep_config_from_pairs(
    const std::map<std::string, std::string>& pairs) {
  std::vector<std::string> unknown;
  for (const auto& [key, value] : pairs) {
    (void)value;
    if (known_keys().count(key) == 0) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    throw std::invalid_argument("unknown config keys: " + join(unknown));
  }
  std::vector<std::string> missing;
  for (const auto& key : required_keys()) {
    if (pairs.count(key) == 0) missing.push_back(key);
  }
  if (!missing.empty()) {
    throw std::invalid_argument("missing required config keys: " +
                                join(missing));
  }

  const auto get = [&](const char* key) -> const std::string& {
    return pairs.at(key);
  };
  const auto has = [&](const char* key) { return pairs.count(key) > 0; };

  SweepConfig cfg;
  cfg.node_counts = parse_int_list("node_counts", get("node_counts"));

  WaxmanParams wp;
  wp.num_nodes = cfg.node_counts.front();
  wp.width_km = parse_double("area_width_km", get("area_width_km"));
  wp.height_km = parse_double("area_height_km", get("area_height_km"));
  wp.delta = parse_double("delta", get("delta"));
  wp.epsilon = parse_double("epsilon", get("epsilon"));

  SimConfig& sim = cfg.base;
  if (has("num_sd_pairs"))
    sim.num_sd_pairs = static_cast<int>(
        parse_int("num_sd_pairs", get("num_sd_pairs")));
  if (has("send_rate"))
    sim.send_rate = parse_double("send_rate", get("send_rate"));
  if (has("classical_delay"))
    sim.classical_delay =
        parse_double("classical_delay", get("classical_delay"));
  if (has("memory_per_node"))
    sim.memory_per_node = static_cast<int>(
        parse_int("memory_per_node", get("memory_per_node")));
  if (has("drop_rate"))
    sim.drop_rate = parse_double("drop_rate", get("drop_rate"));
  if (has("swap_success"))
    sim.swap_success = parse_double("swap_success", get("swap_success"));
  if (has("init_link_fidelity"))
    sim.init_link_fidelity =
        parse_double("init_link_fidelity", get("init_link_fidelity"));
  if (has("sim_duration"))
    sim.sim_duration = parse_double("sim_duration", get("sim_duration"));
  if (has("mode")) cfg.mode_filter = parse_mode_filter(get("mode"));
  if (has("channel")) sim.channel = parse_channel(get("channel"));
  if (has("runs"))
    sim.runs = static_cast<int>(parse_int("runs", get("runs")));
  if (has("seed"))
    sim.seed = static_cast<std::uint64_t>(parse_int("seed", get("seed")));

  wp.memory_capacity = sim.memory_per_node;
  sim.topology_params = wp;
  sim.topology_graph.reset();

  for (int c : cfg.node_counts) {
    if (c < 2) {
      throw std::invalid_argument(
          "config key 'node_counts': counts must be >= 2, got " +
          std::to_string(c));
    }
  }
  validate_sim_config(sim);  // range checks on the numeric fields
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return sweep_config_from_pairs(parse_key_values(buf.str()));
}

}  // namespace qtr
