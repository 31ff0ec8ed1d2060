#ifndef FOGGYEDGE_CONFIG_HPP
#define FOGGYEDGE_CONFIG_HPP

#include "foggyedge/compute.hpp"
#include "foggyedge/engine.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foggyedge {

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what)
    : std::runtime_error(what) {}
};

enum class Mode : std::uint8_t { FoggyEdge, EdgeOnly, CloudOnly };

std::string modeName(Mode m);
Mode parseMode(const std::string& s); // throws ConfigError

struct ServiceConfig {
  std::string name;
  std::uint64_t demand = 0;
  double duration_s = 0;
  std::uint64_t code_kb = 0;
  bool is_protected = false;
  double freshness_s = 1.0;
};

/** @brief Full scenario description. Field defaults are the pinned desk-scale
 * scenario used by the acceptance checks; a config file overrides them with
 * `section.key = value` lines.
 */
struct ScenarioConfig {
  // sim
  Mode mode = Mode::FoggyEdge;
  std::uint64_t seed = 42;
  double duration_s = 120.0;
  double warmup_frac = 0.10;
  double rate_per_sec = 1.0; // aggregate request rate across all consumers
  int consumers = 10;
  double consumer_speed_min_mps = 10.0;
  double consumer_speed_max_mps = 20.0;

  // region served by the deployment
  std::string country = "Korea";
  std::string city = "Seoul";
  std::string district = "Itaewon";

  // topology: straight road with wrap-around; edges evenly spaced so their
  // ad-hoc discs tile the road with no coverage gaps
  double road_length_m = 900.0;
  int edge_count = 3;
  double first_edge_x_m = 150.0;
  double edge_spacing_m = 300.0;
  double lot_x_m = 620.0;

  // links
  double adhoc_latency_s = 0.002;
  std::uint64_t adhoc_bandwidth_Bps = 6'000'000;
  double adhoc_range_m = 150.0;
  double wired_latency_s = 0.005;
  std::uint64_t wired_bandwidth_Bps = 100'000'000;
  double cloud_latency_s = 0.250;
  std::uint64_t cloud_bandwidth_Bps = 100'000'000;

  // compute
  std::uint64_t edge_resources = 700;
  double edge_speed = 1.0;
  std::uint64_t fog_vehicle_resources = 400;
  double fog_speed = 0.8;
  int fog_vehicles = 6;
  int lot_capacity = 8;
  double parking_min_s = 200.0;
  double parking_max_s = 400.0;
  std::uint64_t cloud_resources = 100'000;
  double cloud_speed = 4.0;
  std::size_t queue_capacity = 64;
  double queue_wait_cap_s = 2.0; // receiving-edge queue admission bound

  // forwarder
  double pit_lifetime_s = 4.0;
  double rpit_lifetime_s = 2.0;
  std::size_t cs_capacity = 256;
  double vec_fib_expiry_s = 2.0;
  int edge_load_threshold = 0;
  std::uint8_t hop_budget = 32;

  // access
  std::size_t batch_limit = 64;
  std::string bootstrap_file; // empty: registry generated from the consumer fleet

  // catalog (defaulted in defaultServices())
  std::vector<ServiceConfig> services;

  // per-edge overrides for crafted scenarios (tests); empty = use globals
  std::vector<std::uint64_t> edge_resources_override;        // size 0 or edge_count
  std::vector<std::vector<std::string>> edge_codes_override; // size 0 or edge_count

  ScenarioConfig() { services = defaultServices(); }

  static std::vector<ServiceConfig> defaultServices();

  Tick durationTicks() const { return secondsToTicks(duration_s); }
  Tick warmupTicks() const { return secondsToTicks(duration_s * warmup_frac); }

  Catalog buildCatalog() const;

  /// Throws ConfigError when fields are inconsistent or out of range.
  void validate() const;
};

/// Parse `section.key = value` text ('#' comments, blank lines ignored).
/// Unknown keys and malformed values raise ConfigError with the line number.
ScenarioConfig parseConfig(const std::string& text);
ScenarioConfig parseConfigFile(const std::string& path);

} // namespace foggyedge

#endif // FOGGYEDGE_CONFIG_HPP
