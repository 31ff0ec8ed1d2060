#include "foggyedge/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace foggyedge {

std::string modeName(Mode m)
{
  switch (m) {
    case Mode::FoggyEdge: return "foggyedge";
    case Mode::EdgeOnly: return "edgeonly";
    case Mode::CloudOnly: return "cloudonly";
  }
  return "?";
}

Mode parseMode(const std::string& s)
{
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "foggyedge" || lower == "foggy")
    return Mode::FoggyEdge;
  if (lower == "edgeonly" || lower == "edge")
    return Mode::EdgeOnly;
  if (lower == "cloudonly" || lower == "cloud")
    return Mode::CloudOnly;
  throw ConfigError("unknown mode: " + s);
}

std::vector<ServiceConfig> ScenarioConfig::defaultServices()
{
  return {
    {"traffic_status", 50, 0.05, 20, false, 1.0},
    {"road_hazard", 100, 0.10, 50, false, 1.0},
    {"parking_info", 200, 0.18, 100, false, 1.0},
    {"media_transcode", 350, 0.30, 250, true, 1.0},
    {"route_planning", 500, 0.45, 400, true, 1.0},
  };
}

Catalog ScenarioConfig::buildCatalog() const
{
  Catalog cat;
  for (const ServiceConfig& s : services) {
    MicroserviceSpec spec;
    spec.microservice = s.name;
    spec.demand = s.demand;
    spec.base_duration = secondsToTicks(s.duration_s);
    spec.code_size = s.code_kb * 1024;
    spec.is_protected = s.is_protected;
    spec.freshness = secondsToTicks(s.freshness_s);
    cat.add(spec);
  }
  return cat;
}

void ScenarioConfig::validate() const
{
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (duration_s <= 0)
    fail("sim.duration_s must be positive");
  if (warmup_frac < 0 || warmup_frac >= 1)
    fail("sim.warmup_frac must be in [0, 1)");
  if (rate_per_sec <= 0)
    fail("sim.rate_per_sec must be positive");
  if (consumers < 1)
    fail("sim.consumers must be at least 1");
  if (consumer_speed_min_mps <= 0 || consumer_speed_max_mps < consumer_speed_min_mps)
    fail("consumer speed range is invalid");
  if (road_length_m <= 0)
    fail("topology.road_length_m must be positive");
  if (edge_count < 1)
    fail("topology.edge_count must be at least 1");
  if (adhoc_range_m <= 0)
    fail("link.adhoc_range_m must be positive");
  if (edge_speed <= 0 || fog_speed <= 0 || cloud_speed <= 0)
    fail("speed factors must be positive");
  if (fog_vehicles < 0 || lot_capacity < 0)
    fail("fog sizes must be non-negative");
  if (fog_vehicles > 0 && lot_capacity == 0)
    fail("compute.lot_capacity must be positive when fog vehicles exist");
  if (parking_max_s < parking_min_s || parking_min_s < 0)
    fail("parking time range is invalid");
  if (services.empty())
    fail("catalog has no services");
  for (const ServiceConfig& s : services) {
    if (s.name.empty() || s.demand == 0 || s.duration_s <= 0)
      fail("catalog entry " + s.name + " is incomplete");
    if (s.freshness_s <= 0)
      fail("catalog entry " + s.name + " needs positive freshness");
  }
  if (pit_lifetime_s <= 0 || rpit_lifetime_s <= 0 || vec_fib_expiry_s <= 0)
    fail("table lifetimes must be positive");
  if (batch_limit == 0)
    fail("access.batch_limit must be positive");
  if (!edge_resources_override.empty() &&
      edge_resources_override.size() != static_cast<std::size_t>(edge_count))
    fail("edge_resources_override must list every edge");
  if (!edge_codes_override.empty() &&
      edge_codes_override.size() != static_cast<std::size_t>(edge_count))
    fail("edge_codes_override must list every edge");
  // Each speed factor must be exactly representable (fromDouble throws otherwise).
  SpeedFactor::fromDouble(edge_speed);
  SpeedFactor::fromDouble(fog_speed);
  SpeedFactor::fromDouble(cloud_speed);
}

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

std::string trimmed(const std::string& s)
{
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void lineError(const Line& l, const std::string& msg)
{
  throw ConfigError("line " + std::to_string(l.number) + ": " + msg + " (" + l.key + ")");
}

double parseDouble(const Line& l)
{
  try {
    std::size_t pos = 0;
    double v = std::stod(l.value, &pos);
    if (pos != l.value.size())
      lineError(l, "trailing characters after number");
    return v;
  }
  catch (const std::invalid_argument&) {
    lineError(l, "expected a number, got '" + l.value + "'");
  }
  catch (const std::out_of_range&) {
    lineError(l, "number out of range");
  }
}

std::uint64_t parseU64(const Line& l)
{
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(l.value, &pos);
    if (pos != l.value.size())
      lineError(l, "trailing characters after integer");
    return v;
  }
  catch (const std::invalid_argument&) {
    lineError(l, "expected an integer, got '" + l.value + "'");
  }
  catch (const std::out_of_range&) {
    lineError(l, "integer out of range");
  }
}

bool parseBool(const Line& l)
{
  if (l.value == "true" || l.value == "1" || l.value == "yes")
    return true;
  if (l.value == "false" || l.value == "0" || l.value == "no")
    return false;
  lineError(l, "expected a boolean, got '" + l.value + "'");
}

} // namespace

ScenarioConfig parseConfig(const std::string& text)
{
  ScenarioConfig cfg;
  std::map<int, ServiceConfig> svc; // collected catalog.svcN.* entries
  bool catalogSeen = false;

  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trimmed(line);
    if (line.empty())
      continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    Line l{number, trimmed(line.substr(0, eq)), trimmed(line.substr(eq + 1))};
    if (l.key.empty())
      throw ConfigError("line " + std::to_string(number) + ": empty key");

    const std::string& k = l.key;
    if (k == "sim.mode")
      cfg.mode = parseMode(l.value);
    else if (k == "sim.seed")
      cfg.seed = parseU64(l);
    else if (k == "sim.duration_s")
      cfg.duration_s = parseDouble(l);
    else if (k == "sim.warmup_frac")
      cfg.warmup_frac = parseDouble(l);
    else if (k == "sim.rate_per_sec")
      cfg.rate_per_sec = parseDouble(l);
    else if (k == "sim.consumers")
      cfg.consumers = static_cast<int>(parseU64(l));
    else if (k == "sim.consumer_speed_min_mps")
      cfg.consumer_speed_min_mps = parseDouble(l);
    else if (k == "sim.consumer_speed_max_mps")
      cfg.consumer_speed_max_mps = parseDouble(l);
    else if (k == "region.country")
      cfg.country = l.value;
    else if (k == "region.city")
      cfg.city = l.value;
    else if (k == "region.district")
      cfg.district = l.value;
    else if (k == "topology.road_length_m")
      cfg.road_length_m = parseDouble(l);
    else if (k == "topology.edge_count")
      cfg.edge_count = static_cast<int>(parseU64(l));
    else if (k == "topology.first_edge_x_m")
      cfg.first_edge_x_m = parseDouble(l);
    else if (k == "topology.edge_spacing_m")
      cfg.edge_spacing_m = parseDouble(l);
    else if (k == "topology.lot_x_m")
      cfg.lot_x_m = parseDouble(l);
    else if (k == "link.adhoc_latency_s")
      cfg.adhoc_latency_s = parseDouble(l);
    else if (k == "link.adhoc_bandwidth_Bps")
      cfg.adhoc_bandwidth_Bps = parseU64(l);
    else if (k == "link.adhoc_range_m")
      cfg.adhoc_range_m = parseDouble(l);
    else if (k == "link.wired_latency_s")
      cfg.wired_latency_s = parseDouble(l);
    else if (k == "link.wired_bandwidth_Bps")
      cfg.wired_bandwidth_Bps = parseU64(l);
    else if (k == "link.cloud_latency_s")
      cfg.cloud_latency_s = parseDouble(l);
    else if (k == "link.cloud_bandwidth_Bps")
      cfg.cloud_bandwidth_Bps = parseU64(l);
    else if (k == "compute.edge_resources")
      cfg.edge_resources = parseU64(l);
    else if (k == "compute.edge_speed")
      cfg.edge_speed = parseDouble(l);
    else if (k == "compute.fog_vehicle_resources")
      cfg.fog_vehicle_resources = parseU64(l);
    else if (k == "compute.fog_speed")
      cfg.fog_speed = parseDouble(l);
    else if (k == "compute.fog_vehicles")
      cfg.fog_vehicles = static_cast<int>(parseU64(l));
    else if (k == "compute.lot_capacity")
      cfg.lot_capacity = static_cast<int>(parseU64(l));
    else if (k == "compute.parking_min_s")
      cfg.parking_min_s = parseDouble(l);
    else if (k == "compute.parking_max_s")
      cfg.parking_max_s = parseDouble(l);
    else if (k == "compute.cloud_resources")
      cfg.cloud_resources = parseU64(l);
    else if (k == "compute.cloud_speed")
      cfg.cloud_speed = parseDouble(l);
    else if (k == "compute.queue_capacity")
      cfg.queue_capacity = parseU64(l);
    else if (k == "compute.queue_wait_cap_s")
      cfg.queue_wait_cap_s = parseDouble(l);
    else if (k == "forwarder.pit_lifetime_s")
      cfg.pit_lifetime_s = parseDouble(l);
    else if (k == "forwarder.rpit_lifetime_s")
      cfg.rpit_lifetime_s = parseDouble(l);
    else if (k == "forwarder.cs_capacity")
      cfg.cs_capacity = parseU64(l);
    else if (k == "forwarder.vec_fib_expiry_s")
      cfg.vec_fib_expiry_s = parseDouble(l);
    else if (k == "forwarder.edge_load_threshold")
      cfg.edge_load_threshold = static_cast<int>(parseU64(l));
    else if (k == "forwarder.hop_budget")
      cfg.hop_budget = static_cast<std::uint8_t>(parseU64(l));
    else if (k == "access.batch_limit")
      cfg.batch_limit = parseU64(l);
    else if (k == "access.bootstrap_file")
      cfg.bootstrap_file = l.value;
    else if (k.rfind("catalog.svc", 0) == 0) {
      std::size_t dot = k.find('.', 11);
      if (dot == std::string::npos)
        lineError(l, "catalog keys look like catalog.svcN.field");
      int idx = 0;
      try {
        idx = std::stoi(k.substr(11, dot - 11));
      }
      catch (const std::exception&) {
        lineError(l, "bad catalog service index");
      }
      std::string field = k.substr(dot + 1);
      catalogSeen = true;
      ServiceConfig& s = svc[idx];
      if (field == "name")
        s.name = l.value;
      else if (field == "demand")
        s.demand = parseU64(l);
      else if (field == "duration_s")
        s.duration_s = parseDouble(l);
      else if (field == "code_kb")
        s.code_kb = parseU64(l);
      else if (field == "protected")
        s.is_protected = parseBool(l);
      else if (field == "freshness_s")
        s.freshness_s = parseDouble(l);
      else
        lineError(l, "unknown catalog field");
    }
    else
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + k + "'");
  }

  if (catalogSeen) {
    cfg.services.clear();
    for (const auto& [idx, s] : svc)
      cfg.services.push_back(s);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parseConfigFile(const std::string& path)
{
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parseConfig(ss.str());
}

} // namespace foggyedge
