#ifndef FOGGYEDGE_TRACE_HPP
#define FOGGYEDGE_TRACE_HPP

#include "foggyedge/packet.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace foggyedge {

/// Sentinel for "no ad-hoc addressee" in trace records.
constexpr std::uint32_t NO_LINK_DST = 0xFFFFFFFF;

enum class TraceKind : std::uint8_t {
  Send = 1,     // node put the packet on a face
  Recv = 2,     // node accepted the packet from a face
  Drop = 3,     // forwarder dropped it (reason in aux)
  Decision = 4, // offload decision: aux = case number 1..4
};

struct TraceRecord {
  TraceKind kind = TraceKind::Send;
  Tick time = 0;
  std::uint32_t node = 0;
  std::uint32_t face = 0;
  std::uint32_t link_dst = NO_LINK_DST;
  std::uint8_t aux = 0;                  // drop reason or decision case
  std::vector<std::uint8_t> packet;      // encoded packet (empty for Decision)
  std::string note;                      // decision: request name

  bool operator==(const TraceRecord&) const = default;
};

/** @brief Append-only binary trace of every transmission, reception, drop, and
 * offload decision. The byte stream is a pure function of the scenario, so two
 * runs with the same seed produce identical files.
 */
class TraceWriter {
public:
  void record(const TraceRecord& r);

  const std::vector<std::uint8_t>& bytes() const { return m_buf; }
  std::size_t recordCount() const { return m_count; }

  void writeFile(const std::string& path) const;

private:
  std::vector<std::uint8_t> m_buf;
  std::size_t m_count = 0;
};

/// Parse a trace byte stream; throws DecodeError on malformed input.
std::vector<TraceRecord> readTrace(std::span<const std::uint8_t> bytes);
std::vector<TraceRecord> readTraceFile(const std::string& path);

/// One-line rendering used by trace-diff and debugging.
std::string describeRecord(const TraceRecord& r);

/// Index of the first differing record, or nullopt if the traces are identical.
std::optional<std::size_t> firstDivergence(const std::vector<TraceRecord>& a,
                                           const std::vector<TraceRecord>& b);

} // namespace foggyedge

#endif // FOGGYEDGE_TRACE_HPP
