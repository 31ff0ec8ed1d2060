#ifndef FOGGYEDGE_PACKET_HPP
#define FOGGYEDGE_PACKET_HPP

#include "foggyedge/name.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace foggyedge {

using Tick = std::int64_t; // 1 tick = 1 microsecond of simulated time

/** @brief Parking-admission hint carried by fog-bound Interests. */
struct AdmissionInfo {
  Tick estimated_parking_ticks = 0;
  std::uint64_t available_resources = 0;

  bool operator==(const AdmissionInfo&) const = default;
};

/** @brief One access-rights record: HMAC digest -> microservice name, with creation time. */
struct HmmRecord {
  std::string hmac;              // lowercase hex digest
  std::string microservice_name; // canonical name without params
  Tick created_at = 0;

  bool operator==(const HmmRecord&) const = default;
};

enum class PayloadKind : std::uint8_t {
  ComputedResult = 1,
  MicroserviceCode = 2,
  HmmBatch = 3,
  SlotAssignment = 4,
  HandoverTarget = 5,
};

struct ComputedResult {
  std::uint32_t producer_node = 0;

  bool operator==(const ComputedResult&) const = default;
};

struct MicroserviceCode {
  std::string microservice;
  std::uint64_t code_size_bytes = 0;

  bool operator==(const MicroserviceCode&) const = default;
};

struct HmmBatch {
  std::vector<HmmRecord> records;
  Tick batch_max_time = 0;

  bool operator==(const HmmBatch&) const = default;
};

struct SlotAssignment {
  std::string vin;
  bool accepted = false;
  std::uint32_t slot = 0;

  bool operator==(const SlotAssignment&) const = default;
};

/** @brief Handover directive plus serialized instance state for a departing fog vehicle. */
struct HandoverTarget {
  std::string from_vin;
  std::string target_vin;     // empty -> instance escalates to the cloud
  std::string microservice;
  std::string request_name;   // canonical request name the instance serves
  std::uint64_t remaining_work = 0; // reference-speed work ticks left
  bool adhoc_response = false;
  std::uint64_t state_bytes = 0;    // transferred alongside the packet on the wire

  bool operator==(const HandoverTarget&) const = default;
};

using Payload =
  std::variant<ComputedResult, MicroserviceCode, HmmBatch, SlotAssignment, HandoverTarget>;

/** @brief Interest packet: a name plus the FoggyEdge extension fields. */
struct Interest {
  FeName name;
  std::uint64_t nonce = 0;
  std::optional<std::string> access_rights;     // HMAC digest, lowercase hex
  bool offloading = false;                      // bypasses duplicate suppression
  bool adhoc_response = false;                  // result should return over the air
  bool microservice_availability = false;       // originating edge holds the code
  std::optional<Tick> last_sync_time;           // HMM-sync Interests only
  std::optional<AdmissionInfo> admission_info;  // parking admission only
  std::uint8_t hop_budget = 32;

  bool operator==(const Interest&) const = default;
};

/** @brief Data packet: name, typed payload, and reverse-path control flags. */
struct Data {
  FeName name;
  PayloadKind kind = PayloadKind::ComputedResult;
  Payload payload = ComputedResult{};
  bool adhoc_response = false;
  bool microservice_fetch = false;   // travels the R-PIT (swapped) path
  bool more_access_rights = false;   // HMM sync: another batch is pending

  bool operator==(const Data&) const = default;
};

using Packet = std::variant<Interest, Data>;

class DecodeError : public std::runtime_error {
public:
  explicit DecodeError(const std::string& what)
    : std::runtime_error(what) {}
};

/// TLV-encode (type: 1 byte, length: 2 bytes big-endian). Field order is fixed, so
/// encoding is deterministic and decode(encode(p)) == p holds for every packet.
std::vector<std::uint8_t> encode(const Interest& i);
std::vector<std::uint8_t> encode(const Data& d);
std::vector<std::uint8_t> encode(const Packet& p);

/// Decode one packet; throws DecodeError on malformed, truncated, or unknown input.
Packet decode(std::span<const std::uint8_t> wire);

/// Key for duplicate suppression: (canonical name, nonce).
std::pair<std::string, std::uint64_t> duplicateKey(const Interest& i);

/// Bytes occupying the link: encoded size plus bulk payload bytes that are modeled
/// but not literally serialized (microservice code bodies, handover instance state).
std::uint64_t wireSize(const Packet& p);

bool isInterest(const Packet& p);
const FeName& packetName(const Packet& p);

/// One-line human-readable rendering (trace-diff output, table dumps).
std::string describePacket(const Packet& p);

} // namespace foggyedge

#endif // FOGGYEDGE_PACKET_HPP
