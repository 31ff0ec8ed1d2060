#ifndef FOGGYEDGE_SIM_HPP
#define FOGGYEDGE_SIM_HPP

#include "foggyedge/access.hpp"
#include "foggyedge/config.hpp"
#include "foggyedge/engine.hpp"
#include "foggyedge/forwarder.hpp"
#include "foggyedge/metrics.hpp"
#include "foggyedge/trace.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace foggyedge {

class Simulation;

/// Sentinel node id (e.g. vfgId() in modes without a fog cluster).
inline constexpr std::uint32_t NO_NODE = 0xFFFFFFFFu;

enum class NodeKind : std::uint8_t { Consumer, Edge, Bridge, FogGateway, FogVehicle, Cloud };

std::string nodeKindName(NodeKind k);

struct FaceInfo {
  bool adhoc = false;
  LinkParams link;
  std::uint32_t peer_node = 0; // wired faces only
  FaceId peer_face = 0;
};

/** @brief Per-node behavior hooks; one concrete role per NodeKind. */
class Role {
public:
  virtual ~Role() = default;
  virtual void onStart(Simulation&) {}
  virtual StrategyDecision onInterest(Simulation&, FaceId, const Interest&, PitEntry&)
  {
    return StrategyDecision::useFib();
  }
  /// Peek at arriving Data before PIT processing; true = consumed here.
  virtual bool onDataIntercept(Simulation&, FaceId, const Data&) { return false; }
  /// Claim a microservice_fetch Data after the R-PIT swap (code holder).
  virtual bool onFetchClaim(Simulation&, FaceId, const Data&, PitEntry&) { return false; }
  /// Data delivered to this node's application face.
  virtual void onAppData(Simulation&, const Data&) {}
  /// End-of-run residue check; throw InvariantViolation on leaked state.
  virtual void onFinish(Simulation&) {}
  /// Role-specific tables for dumpTables() (VEC-FIB, VF-RAT, queues, ...).
  virtual void dumpExtra(std::string&) const {}
};

struct Node {
  std::uint32_t id = 0;
  NodeKind kind = NodeKind::Consumer;
  std::string label;
  Forwarder fwd;
  std::vector<FaceInfo> faces;
  double static_x = 0;
  bool mobile = false;
  VehicleKinematics kin;
  bool radio_active = true;
  std::optional<std::uint32_t> adhoc_default_dst; // implicit addressee of ad-hoc sends
  NodeResources res;
  std::set<std::string> code_store; // microservices whose code this host holds
  std::unique_ptr<Role> role;

  /// Position on the road at time t, wrapped to [0, road_length).
  double positionAt(Tick t, double road_length) const;
};

/// Per-request work ledger entry: proves exact work conservation across
/// handovers. Keyed by the request's canonical name (unique per request).
struct WorkLedgerEntry {
  Tick base_work = 0;
  Tick accounted = 0;
  bool completed = false;
};

/** @brief One deterministic scenario run: builds the topology from the config,
 * executes the event loop, and exposes records, trace, and tables afterwards.
 */
class Simulation {
public:
  explicit Simulation(const ScenarioConfig& cfg);
  ~Simulation();

  /// Run to completion: request generation stops at duration, then the event
  /// queue drains (executions finish, timers fire). Throws InvariantViolation
  /// if end-of-run conservation or table checks fail.
  void run();

  const ScenarioConfig& config() const { return m_cfg; }
  const Catalog& catalog() const { return m_catalog; }
  const std::vector<RequestRecord>& records() const { return m_records; }
  const TraceWriter& trace() const { return m_trace; }
  const std::map<std::string, WorkLedgerEntry>& workLedger() const { return m_workLedger; }

  RunSummary summary() const;
  std::string dumpTables() const;
  std::string reportText() const;

  // --- node access (tests, tools) ---
  std::size_t nodeCount() const { return m_nodes.size(); }
  Node& node(std::uint32_t id) { return *m_nodes[id]; }
  const Node& node(std::uint32_t id) const { return *m_nodes[id]; }
  const std::vector<std::uint32_t>& consumerIds() const { return m_consumers; }
  const std::vector<std::uint32_t>& edgeIds() const { return m_edges; }
  std::uint32_t bridgeId() const { return m_bridge; }
  std::uint32_t vfgId() const { return m_vfg; }
  std::uint32_t cloudId() const { return m_cloud; }
  const std::vector<std::uint32_t>& fogVehicleIds() const { return m_fogVehicles; }

  // --- internals shared with roles ---
  EventQueue& queue() { return m_queue; }
  RngStreams& rng() { return m_rng; }
  Tick now() const { return m_queue.now(); }
  Tick durationEnd() const { return m_cfg.durationTicks(); }

  /// Transmit on a face: wired delivery to the peer, or ad-hoc broadcast to all
  /// radio-active nodes in range (MAC-filtered by link_dst at the receiver).
  void transmit(Node& src, FaceId f, const Packet& pkt,
                std::optional<std::uint32_t> link_dst = std::nullopt);

  /// Run a packet through a node's forwarder and execute the resulting actions.
  void receive(Node& dst, FaceId in, const Packet& pkt);

  /// Inject a packet from the node's own role (application face).
  void injectInterest(Node& src, const Interest& i);
  void injectData(Node& src, const Data& d);

  void traceDecision(const Node& n, int offload_case, const std::string& name, FaceId f);

  // request bookkeeping
  RequestRecord& newRecord(const FeName& name, std::uint32_t consumer, const std::string& svc);
  RequestRecord* findRecord(const std::string& canonical);
  void markDropped(const std::string& canonical, const std::string& reason);

  // work ledger (keyed by canonical request name)
  std::uint64_t newInstanceId() { return m_nextInstance++; }
  void ledgerOpen(const std::string& name, Tick base_work);
  void ledgerAccount(const std::string& name, Tick work, bool completes);

  std::uint32_t nodeOfVin(const std::string& vin) const;
  const std::string& vinOf(std::uint32_t node) const;

  FeName regionName(const std::string& microservice, std::vector<std::string> params = {}) const;

  bool requestStopped() const { return now() >= durationEnd(); }

private:
  void buildTopology();
  void buildAccessRegistry();
  void scheduleStart();
  void scheduleSweep(Tick at);
  void endOfRunChecks();
  /// `source` is the packet the actions refer to (encoded into Drop records).
  void executeActions(Node& n, std::vector<FwdAction>&& actions, const Packet* source);

  ScenarioConfig m_cfg;
  Catalog m_catalog;
  EventQueue m_queue;
  RngStreams m_rng;
  TraceWriter m_trace;

  std::vector<std::unique_ptr<Node>> m_nodes;
  std::vector<std::uint32_t> m_consumers;
  std::vector<std::uint32_t> m_edges;
  std::uint32_t m_bridge = NO_NODE;
  std::uint32_t m_vfg = NO_NODE;
  std::uint32_t m_cloud = NO_NODE;
  std::vector<std::uint32_t> m_fogVehicles;

  std::vector<RequestRecord> m_records;
  std::map<std::string, std::size_t> m_recordIndex;
  std::map<std::string, WorkLedgerEntry> m_workLedger;
  std::map<std::string, std::uint32_t> m_vinToNode;
  std::map<std::uint32_t, std::string> m_nodeToVin;
  std::uint64_t m_nextInstance = 1;
  bool m_ran = false;

  friend class ConsumerRole;
  friend class EdgeRole;
  friend class BridgeRole;
  friend class FogGatewayRole;
  friend class FogVehicleRole;
  friend class CloudRole;
};

} // namespace foggyedge

#endif // FOGGYEDGE_SIM_HPP
