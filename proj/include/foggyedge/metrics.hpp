#ifndef FOGGYEDGE_METRICS_HPP
#define FOGGYEDGE_METRICS_HPP

#include "foggyedge/config.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace foggyedge {

/** @brief Lifecycle of one consumer request. */
struct RequestRecord {
  std::uint64_t id = 0;
  std::string name;        // canonical request name (unique per request)
  std::uint32_t consumer = 0;
  std::string service;
  Tick created_at = 0;
  std::optional<Tick> satisfied_at;
  std::optional<int> offload_case;   // 1..4, tier that produced the result
  std::optional<std::string> drop_reason;
  std::optional<std::uint32_t> first_edge; // edge that first handled the request

  bool resolved() const { return satisfied_at.has_value() || drop_reason.has_value(); }
  Tick csd() const { return *satisfied_at - created_at; }
};

/** @brief Computation-satisfaction-delay statistics over post-warmup requests. */
struct CsdStats {
  std::uint64_t considered = 0; // post-warmup requests
  std::uint64_t satisfied = 0;
  double satisfaction_rate = 0.0;
  std::optional<double> mean_s;
  std::optional<double> p50_s;
  std::optional<double> p95_s; // nearest-rank percentile
};

/// Stats over records with created_at >= warmup_end. With zero satisfied
/// requests the delay fields are absent and the rate is 0.
CsdStats computeCsd(std::span<const RequestRecord> records, Tick warmup_end);

/** @brief One simulated cell (mode, rate) boiled down for tables. */
struct RunSummary {
  Mode mode = Mode::FoggyEdge;
  double rate_per_sec = 0;
  std::uint64_t seed = 0;
  std::uint64_t generated = 0; // post-warmup
  std::uint64_t satisfied = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight_at_end = 0;
  CsdStats stats;
  std::array<std::uint64_t, 4> case_counts{}; // satisfied requests by offload case
  std::map<std::string, std::uint64_t> drops_by_reason;
};

RunSummary summarize(Mode mode, double rate, std::uint64_t seed,
                     std::span<const RequestRecord> records, Tick warmup_end);

/// CSV with a fixed header; absent statistics serialize as empty cells.
std::string summaryCsvHeader();
std::string summaryCsvRow(const RunSummary& s);
std::string summariesToCsv(std::span<const RunSummary> rows);

/// Inverse of summariesToCsv (round-trip tested); throws ConfigError on bad input.
std::vector<RunSummary> parseSummaryCsv(const std::string& text);

} // namespace foggyedge

#endif // FOGGYEDGE_METRICS_HPP
