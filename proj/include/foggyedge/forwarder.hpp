#ifndef FOGGYEDGE_FORWARDER_HPP
#define FOGGYEDGE_FORWARDER_HPP

#include "foggyedge/packet.hpp"

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace foggyedge {

using FaceId = std::uint32_t;

/// Pseudo-face for packets injected by (or delivered to) the node's own role logic.
constexpr FaceId APP_FACE = 0xFFFFFFFF;

struct FibEntry {
  std::vector<std::string> prefix; // region components, <= 3
  std::vector<FaceId> faces;
};

/** @brief Longest-region-prefix forwarding table. */
class Fib {
public:
  void add(std::vector<std::string> prefix, std::vector<FaceId> faces);

  /// Entry with the longest matching region prefix; nullptr when nothing matches.
  const FibEntry* lookup(const FeName& name) const;

  const std::vector<FibEntry>& entries() const { return m_entries; }

private:
  std::vector<FibEntry> m_entries;
};

struct PitEntry {
  FeName name;
  std::set<FaceId> incoming;
  std::set<FaceId> outgoing;
  std::set<std::uint64_t> nonces;
  Tick created_at = 0;
  Tick expiry = 0;
  bool adhoc_response = false;
};

/** @brief Pending Interest Table keyed by canonical name. */
class Pit {
public:
  PitEntry* find(const std::string& canonical);
  const PitEntry* find(const std::string& canonical) const;
  PitEntry& insert(const FeName& name, Tick now, Tick lifetime);
  void erase(const std::string& canonical);

  /// Remove entries with expiry <= now; returns how many were purged.
  std::size_t purgeExpired(Tick now);

  std::size_t size() const { return m_entries.size(); }
  const std::map<std::string, PitEntry>& entries() const { return m_entries; }

private:
  std::map<std::string, PitEntry> m_entries;
};

/// Reverse-PIT maneuver: swap an entry's incoming and outgoing face sets and
/// extend its expiry, so a Data packet can travel "backwards" along the path the
/// Interest took. Swapping twice restores the original sets.
void rpitSwap(PitEntry& e, Tick now, Tick rpit_lifetime);

struct CsEntry {
  Data data;
  Tick inserted_at = 0;
  Tick expires_at = 0;
};

/** @brief Exact-match content store with LRU eviction and per-entry freshness. */
class Cs {
public:
  explicit Cs(std::size_t capacity = 256)
    : m_capacity(capacity) {}

  /// Fresh entry for this exact name, refreshing its LRU position; stale entries
  /// are dropped on the way. nullptr on miss.
  const CsEntry* find(const std::string& canonical, Tick now);

  void insert(const FeName& name, const Data& d, Tick now, Tick freshness);

  std::size_t size() const { return m_map.size(); }
  std::vector<std::string> names() const;

private:
  std::size_t m_capacity;
  std::list<std::string> m_lru; // front = most recent
  std::map<std::string, std::pair<CsEntry, std::list<std::string>::iterator>> m_map;
};

enum class DropReason : std::uint8_t {
  Duplicate,
  NoRoute,
  NoPitMatch,
  HopExhausted,
};

struct ForwarderCounters {
  std::uint64_t interests_in = 0;
  std::uint64_t data_in = 0;
  std::uint64_t cs_hits = 0;
  std::uint64_t pit_aggregated = 0;
  std::uint64_t drops_duplicate = 0;
  std::uint64_t drops_no_route = 0;
  std::uint64_t drops_unsolicited = 0;
  std::uint64_t drops_hop_exhausted = 0;
  std::uint64_t pit_expired = 0;
};

/** @brief What the local role wants done with an Interest that survived CS/PIT. */
struct StrategyDecision {
  enum Kind {
    UseFib,          // forward along the FIB
    Faces,           // forward to the listed faces
    Consume,         // role took it; PIT entry stays pending for a local answer
    ConsumeErase,    // role took it and will answer out of band; drop the entry
    DropSilent,      // overheard traffic that is not for this node
  };
  Kind kind = UseFib;
  std::vector<FaceId> faces;
  std::optional<std::uint32_t> link_dst; // ad-hoc unicast addressee, if any

  static StrategyDecision useFib() { return {}; }
  static StrategyDecision toFaces(std::vector<FaceId> f, std::optional<std::uint32_t> dst = {})
  {
    return {Faces, std::move(f), dst};
  }
  static StrategyDecision consume() { return {Consume, {}, {}}; }
  static StrategyDecision consumeErase() { return {ConsumeErase, {}, {}}; }
  static StrategyDecision dropSilent() { return {DropSilent, {}, {}}; }
};

/** @brief Side effects the pipelines ask the host node to perform. */
struct FwdAction {
  enum Kind { SendInterest, SendData, DeliverData, Drop } kind;
  FaceId face = 0;                       // send target or drop's arrival face
  std::optional<std::uint32_t> link_dst; // ad-hoc unicast addressee
  Interest interest;                     // SendInterest
  Data data;                             // SendData / DeliverData
  DropReason reason = DropReason::Duplicate;
};

/** @brief NDN forwarding state machine of one node.
 *
 * The pipelines are pure with respect to the network: they mutate the tables and
 * return the list of sends/deliveries/drops for the host to execute. Role logic
 * is injected as callbacks, mirroring the strategy-choice step of a forwarding
 * daemon.
 */
class Forwarder {
public:
  /// Role decision point for an Interest that passed CS and duplicate checks.
  using InterestStrategy =
    std::function<StrategyDecision(FaceId in, const Interest&, PitEntry&)>;
  /// Role peek at every arriving Data before PIT processing; true = consumed.
  using DataInterceptor = std::function<bool(FaceId in, const Data&)>;
  /// Role claim on a microservice_fetch Data after the R-PIT swap; true = this
  /// node holds the code and will answer.
  using FetchClaim = std::function<bool(FaceId in, const Data&, PitEntry&)>;

  Fib fib;
  Pit pit;
  Cs cs;
  ForwarderCounters counters;

  Tick pit_lifetime = 4 * 1'000'000;
  Tick rpit_lifetime = 2 * 1'000'000;

  InterestStrategy strategy;        // default: UseFib
  DataInterceptor data_interceptor; // default: none
  FetchClaim fetch_claim;           // default: none

  std::vector<FwdAction> onInterest(FaceId in, const Interest& i, Tick now);
  std::vector<FwdAction> onData(FaceId in, const Data& d, Tick now);

  /// Result freshness when inserting into the CS (set per scenario from the catalog).
  std::function<Tick(const FeName&)> result_freshness;
};

} // namespace foggyedge

#endif // FOGGYEDGE_FORWARDER_HPP
