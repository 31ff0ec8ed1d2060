#include "foggyedge/sim.hpp"

#include "foggyedge/fog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace foggyedge {

namespace {

constexpr Tick SWEEP_PERIOD = 500'000; // PIT expiry sweep cadence: 0.5 s

double wrapPos(double x, double L)
{
  double p = std::fmod(x, L);
  if (p < 0)
    p += L;
  return p;
}

/// Shortest distance between two positions on the circular road.
double wrapDistance(double a, double b, double L)
{
  double d = std::fabs(a - b);
  d = std::fmod(d, L);
  return std::min(d, L - d);
}

/// Parse "c12" / "v3" / ... -> 12 / 3; nullopt on anything else.
std::optional<std::uint32_t> parseTaggedId(const std::string& p, char tag)
{
  if (p.size() < 2 || p[0] != tag)
    return std::nullopt;
  std::uint64_t v = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    char c = p[k];
    if (c < '0' || c > '9')
      return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > 0xFFFFFFFFull)
      return std::nullopt;
  }
  return static_cast<std::uint32_t>(v);
}

std::string fmt2(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

} // namespace

std::string nodeKindName(NodeKind k)
{
  switch (k) {
    case NodeKind::Consumer: return "consumer";
    case NodeKind::Edge: return "edge";
    case NodeKind::Bridge: return "bridge";
    case NodeKind::FogGateway: return "fog-gateway";
    case NodeKind::FogVehicle: return "fog-vehicle";
    case NodeKind::Cloud: return "cloud";
  }
  return "?";
}

double Node::positionAt(Tick t, double road_length) const
{
  if (!mobile)
    return static_x;
  return wrapPos(kin.positionAt(t), road_length);
}

// ---------------------------------------------------------------------------
// Consumer
// ---------------------------------------------------------------------------

class ConsumerRole final : public Role {
public:
  ConsumerRole(Simulation* sim, std::uint32_t node, std::string vin)
    : m_sim(sim), m_node(node), m_vin(std::move(vin))
  {
  }

  void onStart(Simulation& sim) override
  {
    for (const MicroserviceSpec& s : sim.catalog().specs())
      if (s.is_protected)
        m_digests[s.microservice] = computeHmac(m_vin, sim.regionName(s.microservice));
    scheduleNext(sim);
  }

  StrategyDecision onInterest(Simulation&, FaceId in, const Interest&, PitEntry&) override
  {
    if (in == APP_FACE)
      return StrategyDecision::useFib();
    return StrategyDecision::dropSilent(); // overheard traffic of other cells
  }

  bool onDataIntercept(Simulation& sim, FaceId in, const Data& d) override
  {
    if (in == APP_FACE)
      return false;
    if (d.kind != PayloadKind::ComputedResult)
      return true; // parking-lot chatter heard near the lot
    return sim.node(m_node).fwd.pit.find(d.name.canonical()) == nullptr;
  }

  void onAppData(Simulation& sim, const Data& d) override
  {
    if (d.kind != PayloadKind::ComputedResult)
      return;
    RequestRecord* rec = sim.findRecord(d.name.canonical());
    if (rec == nullptr || rec->resolved())
      return;
    rec->satisfied_at = sim.now();
    rec->offload_case = classify(sim, std::get<ComputedResult>(d.payload).producer_node, *rec);
  }

private:
  static int classify(Simulation& sim, std::uint32_t producer, const RequestRecord& rec)
  {
    if (producer >= sim.nodeCount())
      return 4;
    switch (sim.node(producer).kind) {
      case NodeKind::Edge:
        return (rec.first_edge && *rec.first_edge == producer) ? 1 : 2;
      case NodeKind::FogVehicle: return 3;
      case NodeKind::Cloud: return 4;
      default: return 4;
    }
  }

  void scheduleNext(Simulation& sim)
  {
    const ScenarioConfig& cfg = sim.config();
    double rate = cfg.rate_per_sec / std::max(1, cfg.consumers);
    Tick at = sim.now() + secondsToTicks(expIntervalSeconds(sim.rng().request_times, rate));
    if (at < sim.durationEnd())
      sim.queue().schedule(at, EventKind::RequestGeneration, m_node, [this] { generate(); });
  }

  void generate()
  {
    Simulation& sim = *m_sim;
    Node& self = sim.node(m_node);
    const ScenarioConfig& cfg = sim.config();
    const auto& specs = sim.catalog().specs();
    const MicroserviceSpec& svc = specs[uniformIndex(sim.rng().service_choice, specs.size())];
    FeName nm = sim.regionName(
      svc.microservice, {"c" + std::to_string(m_node), "q" + std::to_string(m_seq++)});
    sim.newRecord(nm, m_node, svc.microservice);

    double pos = self.positionAt(sim.now(), cfg.road_length_m);
    bool covered = false;
    for (std::uint32_t e : sim.edgeIds())
      covered = covered ||
        wrapDistance(pos, sim.node(e).static_x, cfg.road_length_m) <= cfg.adhoc_range_m;
    if (!covered) {
      sim.markDropped(nm.canonical(), "no_coverage");
    }
    else {
      Interest i;
      i.name = nm;
      i.nonce = sim.rng().nonces();
      i.hop_budget = cfg.hop_budget;
      if (svc.is_protected)
        i.access_rights = m_digests[svc.microservice];
      sim.injectInterest(self, i);
    }
    scheduleNext(sim);
  }

  Simulation* m_sim;
  std::uint32_t m_node;
  std::string m_vin;
  std::map<std::string, std::string> m_digests; // microservice -> HMAC digest
  std::uint64_t m_seq = 0;
};

// ---------------------------------------------------------------------------
// Edge
// ---------------------------------------------------------------------------

class EdgeRole final : public Role {
public:
  static constexpr FaceId ADHOC = 0;
  static constexpr FaceId BRIDGE = 1;

  EdgeRole(Simulation* sim, std::uint32_t node, int index)
    : m_sim(sim), m_node(node), m_index(index)
  {
  }

  StrategyDecision onInterest(Simulation& sim, FaceId in, const Interest& i, PitEntry&) override
  {
    if (in == APP_FACE) {
      // our own re-expressed offloads go to the bridge; sync Interests use the FIB
      if (i.offloading)
        return StrategyDecision::toFaces({BRIDGE});
      return StrategyDecision::useFib();
    }
    const MicroserviceSpec* svc = sim.catalog().find(i.name.microservice);
    if (svc == nullptr)
      return StrategyDecision::dropSilent(); // lot control traffic heard over the air
    if (i.offloading) {
      if (in != BRIDGE)
        return StrategyDecision::dropSilent();
      return onOffloaded(sim, i, svc);
    }
    if (in != ADHOC)
      return StrategyDecision::dropSilent();

    // A consumer request entering the system: this is its first edge.
    RequestRecord* rec = sim.findRecord(i.name.canonical());
    if (rec != nullptr && !rec->first_edge)
      rec->first_edge = m_node;
    if (sim.config().mode == Mode::CloudOnly) {
      // pure forwarding: remember the kinematics so delivery can self-heal
      if (auto kin = consumerKin(sim, i))
        m_routeKin[i.name.canonical()] = *kin;
      return StrategyDecision::useFib();
    }
    if (svc->is_protected && verify(m_store, i) == Verdict::Deny) {
      // unknown digest: block until the access store has synced with the cloud
      m_blocked.push_back(Blocked{i, consumerKin(sim, i)});
      if (!m_syncInFlight)
        startSync(sim);
      return StrategyDecision::consume();
    }
    decide(sim, i, svc, consumerKin(sim, i));
    return StrategyDecision::consume();
  }

  bool onDataIntercept(Simulation& sim, FaceId in, const Data& d) override
  {
    if (in == APP_FACE)
      return false;
    if (d.kind == PayloadKind::SlotAssignment || d.kind == PayloadKind::HandoverTarget)
      return true; // parking-lot chatter (edges near the lot overhear it)
    if (d.kind != PayloadKind::ComputedResult)
      return false;
    const std::string name = d.name.canonical();
    Node& self = sim.node(m_node);
    if (in == ADHOC)
      return self.fwd.pit.find(name) == nullptr; // another cell's radio
    if (d.adhoc_response) {
      // redirected result for a consumer that crossed into our cell: cache it
      // and put it on the air (erasing any ghost entry left by a bounce)
      self.fwd.cs.insert(d.name, d, sim.now(), freshnessOf(sim, d.name));
      self.fwd.pit.erase(name);
      sim.transmit(self, ADHOC, Packet{d});
      return true;
    }
    // Unflagged result heading back to our radio: if the measured kinematics
    // say the consumer has already left this cell, send a flagged copy through
    // the backhaul for the next edge to re-emit.
    auto it = m_routeKin.find(name);
    if (it != m_routeKin.end()) {
      VehicleKinematics kin = it->second;
      m_routeKin.erase(it);
      double pos = wrapPos(kin.positionAt(sim.now()), sim.config().road_length_m);
      if (wrapDistance(pos, self.static_x, sim.config().road_length_m) >
          sim.config().adhoc_range_m) {
        Data copy = d;
        copy.adhoc_response = true;
        sim.transmit(self, BRIDGE, Packet{copy});
      }
    }
    return false; // the PIT still broadcasts locally and purges the entry
  }

  bool onFetchClaim(Simulation& sim, FaceId, const Data& d, PitEntry&) override
  {
    if (d.kind != PayloadKind::MicroserviceCode)
      return false;
    const auto& mc = std::get<MicroserviceCode>(d.payload);
    Node& self = sim.node(m_node);
    if (self.code_store.count(mc.microservice) == 0)
      return false;
    const MicroserviceSpec* svc = sim.catalog().find(mc.microservice);
    if (svc == nullptr)
      return false;
    Data code;
    code.name = d.name;
    code.kind = PayloadKind::MicroserviceCode;
    code.payload = MicroserviceCode{mc.microservice, svc->code_size};
    sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node,
                         [this, code] { m_sim->injectData(m_sim->node(m_node), code); });
    return true;
  }

  void onAppData(Simulation& sim, const Data& d) override
  {
    if (d.kind == PayloadKind::MicroserviceCode && !d.microservice_fetch) {
      auto it = m_awaitingCode.find(d.name.canonical());
      if (it == m_awaitingCode.end())
        return;
      Interest i = it->second;
      m_awaitingCode.erase(it);
      const MicroserviceSpec* svc = sim.catalog().find(i.name.microservice);
      if (svc == nullptr)
        return;
      sim.node(m_node).code_store.insert(svc->microservice);
      resumeAfterCode(sim, i, svc);
      return;
    }
    if (d.kind == PayloadKind::HmmBatch) {
      const auto& hb = std::get<HmmBatch>(d.payload);
      applyBatch(m_store, SyncBatch{hb.records, hb.batch_max_time, d.more_access_rights});
      if (d.more_access_rights) {
        scheduleSyncRound(sim);
      }
      else {
        m_syncInFlight = false;
        resolveBlocked(sim);
      }
    }
  }

  void onFinish(Simulation& sim) override
  {
    if (!m_queue.empty() || m_queuedWork != 0)
      throw InvariantViolation(sim.node(m_node).label + ": admission queue not drained");
    if (m_running != 0)
      throw InvariantViolation(sim.node(m_node).label + ": executions still running");
    if (!m_awaitingCode.empty())
      throw InvariantViolation(sim.node(m_node).label + ": code fetches still pending");
    if (!m_blocked.empty() || m_syncInFlight)
      throw InvariantViolation(sim.node(m_node).label + ": access sync still pending");
    if (!m_routeKin.empty())
      throw InvariantViolation(sim.node(m_node).label + ": undelivered tracked requests");
  }

  void dumpExtra(std::string& out) const override
  {
    out += "  edge: running=" + std::to_string(m_running) +
           " queued=" + std::to_string(m_queue.size()) +
           " access_records=" + std::to_string(m_store.size()) +
           " last_sync=" + std::to_string(m_store.last_sync_time) +
           " denied=" + std::to_string(m_denied) +
           " code_unavailable=" + std::to_string(m_codeUnavailable) + "\n";
  }

  const AccessStore& accessStore() const { return m_store; }
  std::uint64_t deniedCount() const { return m_denied; }
  std::uint64_t syncRounds() const { return m_syncRound; }

private:
  struct Queued {
    Interest interest;
    const MicroserviceSpec* spec;
    std::optional<VehicleKinematics> kin;
    Tick enqueued_at;
  };
  struct Blocked {
    Interest interest;
    std::optional<VehicleKinematics> kin;
  };

  Tick freshnessOf(Simulation& sim, const FeName& nm) const
  {
    const MicroserviceSpec* s = sim.catalog().find(nm.microservice);
    return s ? s->freshness : 0;
  }

  /// Kinematics of the requesting consumer, read from the roadside as the
  /// request passes (the request carries the consumer id as its first param).
  std::optional<VehicleKinematics> consumerKin(Simulation& sim, const Interest& i) const
  {
    if (i.name.params.empty())
      return std::nullopt;
    auto id = parseTaggedId(i.name.params[0], 'c');
    if (!id || *id >= sim.nodeCount())
      return std::nullopt;
    const Node& c = sim.node(*id);
    if (!c.mobile)
      return std::nullopt;
    return c.kin;
  }

  /// Seconds until the consumer leaves this edge's radio disc (wrap-aware).
  double remainingRangeSeconds(Simulation& sim, const VehicleKinematics& kin) const
  {
    const ScenarioConfig& cfg = sim.config();
    double L = cfg.road_length_m;
    double rel = wrapPos(kin.positionAt(sim.now()), L) - sim.node(m_node).static_x;
    if (rel > L / 2)
      rel -= L;
    if (rel < -L / 2)
      rel += L;
    double v = kin.speed_mps * kin.direction;
    if (v == 0.0)
      return std::numeric_limits<double>::infinity();
    double r = cfg.adhoc_range_m;
    return v > 0 ? (r - rel) / v : (-r - rel) / v;
  }

  /// Deterministic lower bound on the response time of any serving tier. If a
  /// consumer's remaining time in range is below this, no response can reach it
  /// here, so the result must be delivered in the next cell.
  Tick rminTicks(Simulation& sim, const MicroserviceSpec& svc) const
  {
    const ScenarioConfig& cfg = sim.config();
    Tick adhocLat = secondsToTicks(cfg.adhoc_latency_s);
    Tick wired2 = 2 * secondsToTicks(cfg.wired_latency_s);
    Tick local = execTicks(svc.base_duration, SpeedFactor::fromDouble(cfg.edge_speed)) + adhocLat;
    Tick viaEdge = wired2 + local;
    Tick viaFog = wired2 + 2 * adhocLat +
                  execTicks(svc.base_duration, SpeedFactor::fromDouble(cfg.fog_speed)) + adhocLat;
    Tick viaCloud = 2 * secondsToTicks(cfg.cloud_latency_s) +
                    execTicks(svc.base_duration, SpeedFactor::fromDouble(cfg.cloud_speed)) +
                    adhocLat;
    return std::min(std::min(local, viaEdge), std::min(viaFog, viaCloud));
  }

  double queueBoundSeconds(Simulation& sim) const
  {
    const ScenarioConfig& cfg = sim.config();
    // never promise work the pending entry would not survive
    return std::min(cfg.queue_wait_cap_s, ticksToSeconds(sim.node(m_node).fwd.pit_lifetime) - 0.5);
  }

  /// First-edge placement: run here, queue (edge-only), or offload.
  void decide(Simulation& sim, const Interest& i, const MicroserviceSpec* svc,
              std::optional<VehicleKinematics> kin)
  {
    Node& self = sim.node(m_node);
    const std::string name = i.name.canonical();
    if (admit(self.res, *svc)) {
      sim.traceDecision(self, 1, name, ADHOC);
      if (kin)
        m_routeKin[name] = *kin;
      startExecAdmitted(sim, i, svc);
      return;
    }
    if (sim.config().mode == Mode::EdgeOnly && svc->demand <= self.res.initial) {
      Tick exec = execDuration(*svc, self.res);
      double wait_s = ticksToSeconds(m_queuedWork + exec);
      double bound = queueBoundSeconds(sim);
      if (kin)
        bound = std::min(bound, remainingRangeSeconds(sim, *kin));
      if (m_queue.size() < sim.config().queue_capacity && wait_s <= bound) {
        sim.traceDecision(self, 1, name, ADHOC);
        if (kin)
          m_routeKin[name] = *kin;
        m_queue.push_back(Queued{i, svc, kin, sim.now()});
        m_queuedWork += exec;
        return;
      }
    }
    scheduleOffload(sim, i, svc, kin);
  }

  void scheduleOffload(Simulation& sim, const Interest& i, const MicroserviceSpec* svc,
                       std::optional<VehicleKinematics> kin)
  {
    Node& self = sim.node(m_node);
    Interest off = i;
    off.offloading = true;
    off.access_rights.reset(); // verified here; downstream trusts the edge
    off.microservice_availability = self.code_store.count(svc->microservice) > 0;
    off.adhoc_response = false;
    if (kin) {
      double remaining = remainingRangeSeconds(sim, *kin);
      off.adhoc_response = remaining < ticksToSeconds(rminTicks(sim, *svc));
    }
    if (!off.adhoc_response && kin) {
      // result expected back through us; track for the delivery self-heal
      m_routeKin[i.name.canonical()] = *kin;
    }
    sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node,
                         [this, off] { m_sim->injectInterest(m_sim->node(m_node), off); });
  }

  /// An offloaded request arriving from the bridge.
  StrategyDecision onOffloaded(Simulation& sim, const Interest& i, const MicroserviceSpec* svc)
  {
    Node& self = sim.node(m_node);
    if (self.code_store.count(svc->microservice) == 0) {
      if (i.microservice_availability) {
        // the code exists at the originating edge: pull it over the pending path
        m_awaitingCode[i.name.canonical()] = i;
        Data fetch;
        fetch.name = i.name;
        fetch.kind = PayloadKind::MicroserviceCode;
        fetch.payload = MicroserviceCode{svc->microservice, 0};
        fetch.microservice_fetch = true;
        sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node,
                             [this, fetch] { m_sim->injectData(m_sim->node(m_node), fetch); });
        return StrategyDecision::consume();
      }
      ++m_codeUnavailable;
      return StrategyDecision::toFaces({BRIDGE}); // nobody here can run it: onward
    }
    if (admit(self.res, *svc)) {
      startExecAdmitted(sim, i, svc);
      return StrategyDecision::consume();
    }
    Tick exec = execDuration(*svc, self.res);
    double wait_s = ticksToSeconds(m_queuedWork + exec);
    if (svc->demand <= self.res.initial && m_queue.size() < sim.config().queue_capacity &&
        wait_s <= queueBoundSeconds(sim)) {
      m_queue.push_back(Queued{i, svc, std::nullopt, sim.now()});
      m_queuedWork += exec;
      return StrategyDecision::consume();
    }
    return StrategyDecision::toFaces({BRIDGE}); // bounce: bridge picks fog or cloud
  }

  void resumeAfterCode(Simulation& sim, const Interest& i, const MicroserviceSpec* svc)
  {
    Node& self = sim.node(m_node);
    if (admit(self.res, *svc)) {
      startExecAdmitted(sim, i, svc);
      return;
    }
    Tick exec = execDuration(*svc, self.res);
    double wait_s = ticksToSeconds(m_queuedWork + exec);
    if (svc->demand <= self.res.initial && m_queue.size() < sim.config().queue_capacity &&
        wait_s <= queueBoundSeconds(sim)) {
      m_queue.push_back(Queued{i, svc, std::nullopt, sim.now()});
      m_queuedWork += exec;
      return;
    }
    // got the code but no capacity after all: push onward through the bridge
    if (PitEntry* e = self.fwd.pit.find(i.name.canonical()))
      e->outgoing.insert(BRIDGE);
    Interest fwd = i;
    if (fwd.hop_budget > 0)
      fwd.hop_budget = static_cast<std::uint8_t>(fwd.hop_budget - 1);
    sim.transmit(self, BRIDGE, Packet{fwd});
  }

  void startExecAdmitted(Simulation& sim, const Interest& i, const MicroserviceSpec* svc)
  {
    Node& self = sim.node(m_node);
    sim.ledgerOpen(i.name.canonical(), svc->base_duration);
    ++m_running;
    Tick dur = execDuration(*svc, self.res);
    sim.queue().schedule(sim.now() + dur, EventKind::ExecComplete, m_node,
                         [this, i, svc] { completeExec(i, svc); });
  }

  void completeExec(const Interest& i, const MicroserviceSpec* svc)
  {
    Simulation& sim = *m_sim;
    Node& self = sim.node(m_node);
    release(self.res, *svc);
    --m_running;
    sim.ledgerAccount(i.name.canonical(), svc->base_duration, true);
    emitResult(sim, i.name, svc);
    drainQueue(sim);
  }

  void emitResult(Simulation& sim, const FeName& nm, const MicroserviceSpec* svc)
  {
    Node& self = sim.node(m_node);
    const std::string name = nm.canonical();
    Data d;
    d.name = nm;
    d.kind = PayloadKind::ComputedResult;
    d.payload = ComputedResult{m_node};

    PitEntry* e = self.fwd.pit.find(name);
    bool flagged = e != nullptr && e->adhoc_response;

    auto itk = m_routeKin.find(name);
    if (itk != m_routeKin.end()) {
      // executed at the consumer's first edge: broadcast here, and if the exact
      // kinematics say it crossed the boundary meanwhile, send a flagged copy
      // for the next edge to re-emit
      VehicleKinematics kin = itk->second;
      m_routeKin.erase(itk);
      d.adhoc_response = flagged;
      sim.injectData(self, d);
      double pos = wrapPos(kin.positionAt(sim.now()), sim.config().road_length_m);
      if (wrapDistance(pos, self.static_x, sim.config().road_length_m) >
          sim.config().adhoc_range_m) {
        Data copy = d;
        copy.adhoc_response = true;
        sim.transmit(self, BRIDGE, Packet{copy});
      }
      return;
    }
    if (flagged) {
      // offloaded to us and flagged at the source: the consumer is in our cell
      // now, so answer over our own radio instead of the incoming face
      d.adhoc_response = true;
      self.fwd.cs.insert(nm, d, sim.now(), svc->freshness);
      self.fwd.pit.erase(name);
      sim.transmit(self, ADHOC, Packet{d});
      return;
    }
    sim.injectData(self, d); // reverse path toward the first edge
  }

  void drainQueue(Simulation& sim)
  {
    Node& self = sim.node(m_node);
    while (!m_queue.empty()) {
      Queued& head = m_queue.front();
      if (!admit(self.res, *head.spec))
        break;
      m_queuedWork -= execDuration(*head.spec, self.res);
      Queued item = std::move(head);
      m_queue.pop_front();
      startExecAdmitted(sim, item.interest, item.spec);
    }
  }

  void startSync(Simulation& sim)
  {
    m_syncInFlight = true;
    scheduleSyncRound(sim);
  }

  void scheduleSyncRound(Simulation& sim)
  {
    ++m_syncRound;
    sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node, [this] {
      Simulation& s = *m_sim;
      Interest i;
      i.name = s.regionName(
        "__as_sync", {"e" + std::to_string(m_node), "r" + std::to_string(m_syncRound)});
      i.nonce = s.rng().nonces();
      i.last_sync_time = m_store.last_sync_time;
      i.hop_budget = s.config().hop_budget;
      s.injectInterest(s.node(m_node), i);
    });
  }

  void resolveBlocked(Simulation& sim)
  {
    Node& self = sim.node(m_node);
    std::vector<Blocked> blocked = std::move(m_blocked);
    m_blocked.clear();
    for (Blocked& b : blocked) {
      const std::string name = b.interest.name.canonical();
      const MicroserviceSpec* svc = sim.catalog().find(b.interest.name.microservice);
      if (svc == nullptr)
        continue;
      if (verify(m_store, b.interest) == Verdict::Deny) {
        ++m_denied;
        sim.markDropped(name, "access_denied");
        self.fwd.pit.erase(name);
        continue;
      }
      decide(sim, b.interest, svc, b.kin);
    }
  }

  Simulation* m_sim;
  std::uint32_t m_node;
  int m_index;

  AccessStore m_store;
  std::deque<Queued> m_queue;
  Tick m_queuedWork = 0;
  std::uint64_t m_running = 0;
  std::map<std::string, VehicleKinematics> m_routeKin; // requests we must deliver
  std::map<std::string, Interest> m_awaitingCode;
  std::vector<Blocked> m_blocked;
  bool m_syncInFlight = false;
  std::uint64_t m_syncRound = 0;
  std::uint64_t m_denied = 0;
  std::uint64_t m_codeUnavailable = 0;
};

// ---------------------------------------------------------------------------
// Bridge
// ---------------------------------------------------------------------------

class BridgeRole final : public Role {
public:
  BridgeRole(Simulation* sim, std::uint32_t node, std::uint32_t edgeCount, FaceId cloudFace,
             std::vector<FaceId> fogFaces)
    : m_sim(sim)
    , m_node(node)
    , m_edgeCount(edgeCount)
    , m_cloudFace(cloudFace)
    , m_fogFaces(std::move(fogFaces))
  {
    for (FaceId f : m_fogFaces)
      m_fogOutstanding[f]; // materialize entries so selection sees every cluster
  }

  StrategyDecision onInterest(Simulation& sim, FaceId in, const Interest& i, PitEntry&) override
  {
    if (in == APP_FACE || !i.offloading)
      return StrategyDecision::useFib(); // plain traffic goes straight to the cloud
    purgeVec(sim.now());
    Node& self = sim.node(m_node);
    const std::string name = i.name.canonical();

    if (m_vec.count(name) != 0) {
      // the edge tier bounced this request back
      if (!m_fogFaces.empty() && i.microservice_availability)
        return toFog(sim, name);
      sim.traceDecision(self, 4, name, m_cloudFace);
      return StrategyDecision::toFaces({m_cloudFace});
    }
    if (in >= m_edgeCount)
      return StrategyDecision::dropSilent(); // offloads only enter from edges

    FaceId nf = (in + 1) % m_edgeCount;
    std::size_t load = 0;
    for (const auto& [n2, ve] : m_vec)
      if (ve.next_edge == nf)
        ++load;
    if (load <= static_cast<std::size_t>(sim.config().edge_load_threshold)) {
      m_vec[name] = VecEntry{nf, sim.now() + secondsToTicks(sim.config().vec_fib_expiry_s)};
      sim.traceDecision(self, 2, name, nf);
      return StrategyDecision::toFaces({nf});
    }
    if (!m_fogFaces.empty() && i.microservice_availability)
      return toFog(sim, name);
    ++m_noFog;
    sim.traceDecision(self, 4, name, m_cloudFace);
    return StrategyDecision::toFaces({m_cloudFace});
  }

  bool onDataIntercept(Simulation& sim, FaceId in, const Data& d) override
  {
    if (in == APP_FACE || d.kind != PayloadKind::ComputedResult)
      return false;
    const std::string name = d.name.canonical();
    auto fo = m_fogOutstanding.find(in);
    if (fo != m_fogOutstanding.end())
      fo->second.erase(name);
    m_vec.erase(name);
    if (!d.adhoc_response)
      return false;
    // flagged: the consumer moved one cell forward; reroute to that edge's radio
    Node& self = sim.node(m_node);
    std::optional<FaceId> origin;
    if (PitEntry* e = self.fwd.pit.find(name)) {
      for (FaceId f : e->incoming)
        if (f < m_edgeCount) {
          origin = f;
          break;
        }
      if (origin)
        self.fwd.pit.erase(name);
    }
    else if (in < m_edgeCount) {
      origin = in; // a redirect copy sent by the origin edge itself
    }
    if (!origin)
      return false;
    self.fwd.cs.insert(d.name, d, sim.now(), freshnessOf(sim, d.name));
    sim.transmit(self, (*origin + 1) % m_edgeCount, Packet{d});
    return true;
  }

  void onFinish(Simulation& sim) override
  {
    purgeVec(sim.now());
    if (!m_vec.empty())
      throw InvariantViolation("bridge: VEC-FIB entries leaked");
    for (const auto& [f, names] : m_fogOutstanding)
      if (!names.empty())
        throw InvariantViolation("bridge: outstanding fog requests leaked");
  }

  void dumpExtra(std::string& out) const override
  {
    out += "  bridge: vec_entries=" + std::to_string(m_vec.size()) +
           " vec_expired=" + std::to_string(m_vecExpired) +
           " no_fog_available=" + std::to_string(m_noFog) + "\n";
    for (const auto& [name, ve] : m_vec)
      out += "    vec " + name + " -> face " + std::to_string(ve.next_edge) + " expires " +
             std::to_string(ve.expires) + "\n";
    for (const auto& [f, names] : m_fogOutstanding)
      out += "    fog face " + std::to_string(f) + " outstanding=" + std::to_string(names.size()) +
             "\n";
  }

private:
  struct VecEntry {
    FaceId next_edge;
    Tick expires;
  };

  Tick freshnessOf(Simulation& sim, const FeName& nm) const
  {
    const MicroserviceSpec* s = sim.catalog().find(nm.microservice);
    return s ? s->freshness : 0;
  }

  StrategyDecision toFog(Simulation& sim, const std::string& name)
  {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> st;
    for (const auto& [f, names] : m_fogOutstanding)
      st.emplace_back(f, names.size());
    FaceId f = selectFogFace(st);
    m_fogOutstanding[f].insert(name);
    sim.traceDecision(sim.node(m_node), 3, name, f);
    return StrategyDecision::toFaces({f});
  }

  void purgeVec(Tick now)
  {
    for (auto it = m_vec.begin(); it != m_vec.end();) {
      if (it->second.expires <= now) {
        it = m_vec.erase(it);
        ++m_vecExpired;
      }
      else {
        ++it;
      }
    }
  }

  Simulation* m_sim;
  std::uint32_t m_node;
  std::uint32_t m_edgeCount;
  FaceId m_cloudFace;
  std::vector<FaceId> m_fogFaces;
  std::map<std::string, VecEntry> m_vec;             // VEC-FIB: offloads at the edge tier
  std::map<FaceId, std::set<std::string>> m_fogOutstanding; // VFC-FIB load view
  std::uint64_t m_vecExpired = 0;
  std::uint64_t m_noFog = 0;
};

// ---------------------------------------------------------------------------
// Fog gateway
// ---------------------------------------------------------------------------

class FogGatewayRole final : public Role {
public:
  static constexpr FaceId BRIDGE = 0;
  static constexpr FaceId CLOUD = 1;
  static constexpr FaceId ADHOC = 2;

  FogGatewayRole(Simulation* sim, std::uint32_t node, const ScenarioConfig& cfg)
    : m_sim(sim)
    , m_node(node)
    , m_rat(static_cast<std::uint32_t>(cfg.lot_capacity))
    , m_speed(SpeedFactor::fromDouble(cfg.fog_speed))
  {
  }

  StrategyDecision onInterest(Simulation& sim, FaceId in, const Interest& i, PitEntry& e) override
  {
    if (in == APP_FACE)
      return StrategyDecision::useFib();
    const std::string& micro = i.name.microservice;
    if (micro == "__park") {
      if (in != ADHOC || !i.admission_info)
        return StrategyDecision::dropSilent();
      handlePark(sim, i);
      return StrategyDecision::consume();
    }
    if (micro == "__depart") {
      if (in != ADHOC)
        return StrategyDecision::dropSilent();
      handleDepart(sim, i);
      return StrategyDecision::consume();
    }
    if (i.offloading && in == BRIDGE && sim.catalog().find(micro) != nullptr)
      return dispatch(sim, i, e);
    return StrategyDecision::dropSilent();
  }

  bool onDataIntercept(Simulation& sim, FaceId in, const Data& d) override
  {
    if (in == APP_FACE)
      return false;
    const std::string name = d.name.canonical();
    if (d.kind == PayloadKind::ComputedResult) {
      if (in == ADHOC) {
        auto it = m_dispatched.find(name);
        if (it != m_dispatched.end()) {
          m_rat.release(it->second.slot, name, it->second.demand);
          m_dispatched.erase(it);
        }
      }
      return false; // the PIT forwards it toward the bridge
    }
    if (d.kind == PayloadKind::HandoverTarget) {
      if (in != ADHOC)
        return true;
      const auto& h = std::get<HandoverTarget>(d.payload);
      if (h.target_vin.empty() && h.remaining_work > 0) {
        // instance state from a departing vehicle with no lot target: relay it
        // to the cloud over our uplink
        Data relay = d;
        sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node, [this, relay] {
          m_sim->transmit(m_sim->node(m_node), CLOUD, Packet{relay});
        });
      }
      return true; // directives, acks and transfers are lot-local chatter
    }
    if (d.kind == PayloadKind::SlotAssignment)
      return true;
    return false;
  }

  void onFinish(Simulation&) override
  {
    if (!m_dispatched.empty())
      throw InvariantViolation("fog gateway: dispatched requests never resolved");
    m_rat.checkConsistent();
    for (const auto& [slot, ent] : m_rat.slots())
      if (ent.available != ent.initial)
        throw InvariantViolation("fog gateway: slot " + std::to_string(slot) +
                                 " resources not restored");
  }

  void dumpExtra(std::string& out) const override
  {
    out += "  vf-rat: slots=" + std::to_string(m_rat.size()) + "/" +
           std::to_string(m_rat.capacity()) + " dispatches=" + std::to_string(m_dispatches) +
           " handovers=" + std::to_string(m_handovers) +
           " overflow_to_cloud=" + std::to_string(m_overflow) +
           " lot_full=" + std::to_string(m_lotFull) + "\n";
    for (const auto& [slot, e] : m_rat.slots())
      out += "    slot " + std::to_string(slot) + " vin=" + e.vin +
             " avail=" + std::to_string(e.available) + "/" + std::to_string(e.initial) +
             " departs=" + std::to_string(e.est_departure) +
             (e.departing ? " departing" : "") +
             " running=" + std::to_string(e.running.size()) + "\n";
  }

  const VfRat& rat() const { return m_rat; }
  std::uint64_t dispatchCount() const { return m_dispatches; }
  std::uint64_t handoverCount() const { return m_handovers; }

private:
  struct Disp {
    std::uint32_t slot = 0;
    std::uint64_t demand = 0;
    std::string micro;
    Tick est_completion = 0;
  };

  void handlePark(Simulation& sim, const Interest& i)
  {
    if (i.name.params.empty())
      return;
    auto vid = parseTaggedId(i.name.params[0], 'v');
    if (!vid || *vid >= sim.nodeCount())
      return;
    const std::string& vin = sim.vinOf(*vid);
    auto slot = m_rat.admit(vin, *vid, i.admission_info->available_resources,
                            sim.now() + i.admission_info->estimated_parking_ticks);
    if (!slot)
      ++m_lotFull;
    m_rat.checkConsistent();
    Data d;
    d.name = i.name;
    d.kind = PayloadKind::SlotAssignment;
    d.payload = SlotAssignment{vin, slot.has_value(), slot.value_or(0)};
    sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node,
                         [this, d] { m_sim->injectData(m_sim->node(m_node), d); });
  }

  StrategyDecision dispatch(Simulation& sim, const Interest& i, PitEntry&)
  {
    Node& self = sim.node(m_node);
    const MicroserviceSpec* svc = sim.catalog().find(i.name.microservice);
    const std::string name = i.name.canonical();
    Tick exec = execTicks(svc->base_duration, m_speed);
    auto slot = pickDispatchSlot(m_rat, svc->demand, sim.now(), exec);
    if (!slot) {
      ++m_overflow;
      sim.traceDecision(self, 4, name, CLOUD);
      return StrategyDecision::toFaces({CLOUD});
    }
    m_rat.reserve(*slot, name, svc->demand);
    const VfRatEntry& ent = *m_rat.find(*slot);
    Tick flight = transferTicks(self.faces[ADHOC].link, wireSize(Packet{i}));
    m_dispatched[name] = Disp{*slot, svc->demand, svc->microservice, sim.now() + flight + exec};
    ++m_dispatches;
    sim.traceDecision(self, 3, name, ADHOC);
    return StrategyDecision::toFaces({ADHOC}, ent.node);
  }

  void handleDepart(Simulation& sim, const Interest& i)
  {
    if (i.name.params.empty())
      return;
    auto vid = parseTaggedId(i.name.params[0], 'v');
    if (!vid)
      return;
    const std::string& vin = sim.vinOf(*vid);

    std::vector<HandoverTarget> directives;
    VfRatEntry* ent = m_rat.findByVin(vin);
    if (ent != nullptr) {
      ent->departing = true;
      const std::uint32_t s = ent->slot;
      for (auto& [name, disp] : m_dispatched) {
        if (disp.slot != s)
          continue;
        if (disp.est_completion <= sim.now())
          continue; // its result is already out (or crossing us in flight)
        Tick remaining_exec = disp.est_completion - sim.now();
        HandoverTarget h;
        h.from_vin = vin;
        h.microservice = disp.micro;
        h.request_name = name;
        auto tgt = pickHandoverSlot(m_rat, s, disp.demand, sim.now(), remaining_exec);
        if (tgt) {
          m_rat.move(s, *tgt, name, disp.demand);
          h.target_vin = m_rat.find(*tgt)->vin;
          disp.slot = *tgt;
          // flight slack keeps chained departures conservative
          disp.est_completion = sim.now() + remaining_exec + secondsToTicks(0.05);
        }
        else {
          m_rat.release(s, name, disp.demand); // escalates to the cloud
        }
        ++m_handovers;
        directives.push_back(std::move(h));
      }
      for (const HandoverTarget& h : directives)
        if (h.target_vin.empty())
          m_dispatched.erase(h.request_name);
      m_rat.checkConsistent();
      // the slot row disappears once the vehicle passes the ticket zone
      sim.queue().schedule(sim.now() + secondsToTicks(0.05), EventKind::TimerExpiry, m_node,
                           [this, s] { m_rat.erase(s); });
    }

    for (const HandoverTarget& h : directives) {
      Data dd;
      dd.name = sim.regionName("__handover", {"v" + std::to_string(*vid)});
      dd.kind = PayloadKind::HandoverTarget;
      dd.payload = h;
      sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node, [this, dd] {
        m_sim->transmit(m_sim->node(m_node), ADHOC, Packet{dd});
      });
    }
    // release ack: the vehicle may leave after handling this many directives
    HandoverTarget ack;
    ack.from_vin = vin;
    ack.remaining_work = directives.size();
    Data da;
    da.name = i.name;
    da.kind = PayloadKind::HandoverTarget;
    da.payload = ack;
    sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node,
                         [this, da] { m_sim->injectData(m_sim->node(m_node), da); });
  }

  Simulation* m_sim;
  std::uint32_t m_node;
  VfRat m_rat;
  SpeedFactor m_speed;
  std::map<std::string, Disp> m_dispatched;
  std::uint64_t m_lotFull = 0;
  std::uint64_t m_overflow = 0;
  std::uint64_t m_dispatches = 0;
  std::uint64_t m_handovers = 0;
};

// ---------------------------------------------------------------------------
// Fog vehicle
// ---------------------------------------------------------------------------

class FogVehicleRole final : public Role {
public:
  static constexpr FaceId ADHOC = 0;

  FogVehicleRole(Simulation* sim, std::uint32_t node, std::string vin, int index)
    : m_sim(sim), m_node(node), m_vin(std::move(vin)), m_index(index)
  {
  }

  void onStart(Simulation& sim) override
  {
    const ScenarioConfig& cfg = sim.config();
    m_speed = sim.node(m_node).res.speed;
    m_estimateTicks =
      secondsToTicks(uniformDouble(sim.rng().parking, cfg.parking_min_s, cfg.parking_max_s));
    // drivers are not oracles: the stay they announce at the ticket zone may
    // overshoot the real one, which is what makes departure handover matter
    double factor = uniformDouble(sim.rng().parking, 0.7, 1.1);
    m_parkingTicks = std::max<Tick>(secondsToTicks(1.0),
                                    static_cast<Tick>(static_cast<double>(m_estimateTicks) * factor));
    Tick at = secondsToTicks(0.05) * (m_index + 1); // staggered arrivals at the lot
    sim.queue().schedule(at, EventKind::RequestGeneration, m_node, [this] { sendPark(); });
  }

  StrategyDecision onInterest(Simulation& sim, FaceId in, const Interest& i, PitEntry& e) override
  {
    if (in == APP_FACE)
      return StrategyDecision::toFaces({ADHOC}, sim.vfgId());
    if (!i.offloading)
      return StrategyDecision::dropSilent();
    const MicroserviceSpec* svc = sim.catalog().find(i.name.microservice);
    if (svc == nullptr || !m_parked)
      return StrategyDecision::dropSilent();
    startRun(sim, e.adhoc_response, i.name, svc, svc->base_duration);
    return StrategyDecision::consume();
  }

  bool onDataIntercept(Simulation& sim, FaceId in, const Data& d) override
  {
    if (in == APP_FACE)
      return false;
    if (d.kind == PayloadKind::SlotAssignment)
      return std::get<SlotAssignment>(d.payload).vin != m_vin;
    if (d.kind == PayloadKind::HandoverTarget) {
      handleHandover(sim, d);
      return true;
    }
    return sim.node(m_node).fwd.pit.find(d.name.canonical()) == nullptr;
  }

  void onAppData(Simulation& sim, const Data& d) override
  {
    if (d.kind != PayloadKind::SlotAssignment)
      return;
    const auto& sa = std::get<SlotAssignment>(d.payload);
    if (sa.vin != m_vin || !sa.accepted)
      return; // rejected: stay out of the lot
    m_parked = true;
    m_slot = sa.slot;
    sim.queue().schedule(sim.now() + m_parkingTicks, EventKind::TimerExpiry, m_node,
                         [this] { sendDepart(); });
  }

  void onFinish(Simulation& sim) override
  {
    if (!m_running.empty())
      throw InvariantViolation(sim.node(m_node).label + ": instances still running");
  }

  void dumpExtra(std::string& out) const override
  {
    out += "  fog-vehicle: vin=" + m_vin + (m_parked ? " parked" : " idle") +
           (m_departing ? " departing" : "") + " running=" + std::to_string(m_running.size()) +
           "\n";
  }

  const std::string& vin() const { return m_vin; }
  bool parked() const { return m_parked; }

private:
  struct Run {
    Instance inst;
    FeName fname;
    const MicroserviceSpec* spec;
    std::uint64_t token;
  };

  void sendPark()
  {
    Simulation& sim = *m_sim;
    Node& self = sim.node(m_node);
    Interest p;
    p.name = sim.regionName("__park", {"v" + std::to_string(m_node)});
    p.nonce = sim.rng().nonces();
    p.hop_budget = sim.config().hop_budget;
    p.admission_info = AdmissionInfo{m_estimateTicks, self.res.initial};
    sim.injectInterest(self, p);
  }

  void sendDepart()
  {
    Simulation& sim = *m_sim;
    if (sim.requestStopped())
      return; // the lot dissolves quietly once the run is over
    m_departing = true;
    Node& self = sim.node(m_node);
    Interest dp;
    dp.name = sim.regionName("__depart", {"v" + std::to_string(m_node)});
    dp.nonce = sim.rng().nonces();
    dp.hop_budget = sim.config().hop_budget;
    sim.injectInterest(self, dp);
  }

  void startRun(Simulation& sim, bool flagged, const FeName& nm, const MicroserviceSpec* svc,
                Tick remaining)
  {
    Node& self = sim.node(m_node);
    if (!admit(self.res, *svc))
      throw InvariantViolation(self.label + ": admission out of sync with the VF-RAT");
    const std::string name = nm.canonical();
    sim.ledgerOpen(name, svc->base_duration);
    Run r;
    r.fname = nm;
    r.spec = svc;
    r.token = ++m_tokenSeq;
    r.inst = Instance{sim.newInstanceId(), svc->microservice, name,
                      svc->base_duration, remaining, sim.now(), flagged};
    m_running[name] = r;
    Tick dur = execTicks(remaining, m_speed);
    sim.queue().schedule(sim.now() + dur, EventKind::ExecComplete, m_node,
                         [this, name, token = r.token] { completeRun(name, token); });
  }

  void completeRun(const std::string& name, std::uint64_t token)
  {
    auto it = m_running.find(name);
    if (it == m_running.end() || it->second.token != token)
      return; // suspended and handed over meanwhile
    Simulation& sim = *m_sim;
    Node& self = sim.node(m_node);
    Run r = std::move(it->second);
    m_running.erase(it);
    release(self.res, *r.spec);
    sim.ledgerAccount(name, r.inst.remaining_work, true);
    Data d;
    d.name = r.fname;
    d.kind = PayloadKind::ComputedResult;
    d.payload = ComputedResult{m_node};
    d.adhoc_response = r.inst.adhoc_response;
    if (self.fwd.pit.find(name) != nullptr)
      sim.injectData(self, d); // dispatched here: answer along the pending path
    else
      sim.transmit(self, ADHOC, Packet{d}); // resumed after handover: straight to the gateway
    maybeDriveOff(sim);
  }

  void handleHandover(Simulation& sim, const Data& d)
  {
    const auto& h = std::get<HandoverTarget>(d.payload);
    if (h.from_vin == m_vin && h.request_name.empty()) {
      // release ack: carries the number of directives addressed to us
      m_ackSeen = true;
      m_expected = h.remaining_work;
      maybeDriveOff(sim);
      return;
    }
    if (h.from_vin == m_vin) {
      ++m_handled;
      auto it = m_running.find(h.request_name);
      if (it != m_running.end()) {
        Node& self = sim.node(m_node);
        Run r = std::move(it->second);
        m_running.erase(it);
        Tick before = r.inst.remaining_work;
        suspendInstance(r.inst, sim.now(), m_speed);
        release(self.res, *r.spec);
        sim.ledgerAccount(h.request_name, before - r.inst.remaining_work, false);

        HandoverTarget t;
        t.from_vin = m_vin;
        t.target_vin = h.target_vin;
        t.microservice = r.spec->microservice;
        t.request_name = h.request_name;
        t.remaining_work = static_cast<std::uint64_t>(r.inst.remaining_work);
        t.adhoc_response = r.inst.adhoc_response;
        t.state_bytes = r.spec->code_size + 4096;
        Data dd;
        dd.name = r.fname;
        dd.kind = PayloadKind::HandoverTarget;
        dd.payload = t;
        std::uint32_t dst = h.target_vin.empty() ? sim.vfgId() : sim.nodeOfVin(h.target_vin);
        sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node, [this, dd, dst] {
          m_sim->transmit(m_sim->node(m_node), ADHOC, Packet{dd}, dst);
        });
        self.fwd.pit.erase(h.request_name); // no result will come from this host
      }
      maybeDriveOff(sim);
      return;
    }
    if (h.target_vin == m_vin && h.remaining_work > 0) {
      // serialized instance state arriving from a departing neighbor
      const MicroserviceSpec* svc = sim.catalog().find(h.microservice);
      if (svc == nullptr)
        return;
      startRun(sim, h.adhoc_response, d.name, svc, static_cast<Tick>(h.remaining_work));
      return;
    }
    // directives binding other vehicles: not ours
  }

  void maybeDriveOff(Simulation& sim)
  {
    if (m_departing && m_ackSeen && m_handled >= m_expected && m_running.empty()) {
      Node& self = sim.node(m_node);
      self.radio_active = false; // out of the lot, off the air
      m_parked = false;
    }
  }

  Simulation* m_sim;
  std::uint32_t m_node;
  std::string m_vin;
  int m_index;
  SpeedFactor m_speed;
  bool m_parked = false;
  bool m_departing = false;
  bool m_ackSeen = false;
  std::uint64_t m_expected = 0;
  std::uint64_t m_handled = 0;
  std::uint32_t m_slot = 0;
  Tick m_parkingTicks = 0;
  Tick m_estimateTicks = 0;
  std::uint64_t m_tokenSeq = 0;
  std::map<std::string, Run> m_running;
};

// ---------------------------------------------------------------------------
// Cloud
// ---------------------------------------------------------------------------

class CloudRole final : public Role {
public:
  CloudRole(Simulation* sim, std::uint32_t node, const ScenarioConfig& cfg)
    : m_sim(sim), m_node(node), m_speed(SpeedFactor::fromDouble(cfg.cloud_speed))
  {
  }

  StrategyDecision onInterest(Simulation& sim, FaceId in, const Interest& i, PitEntry&) override
  {
    if (in == APP_FACE)
      return StrategyDecision::useFib();
    if (i.name.microservice == "__as_sync") {
      Tick since = i.last_sync_time.value_or(0);
      SyncBatch b = syncStep(m_registry, since, sim.config().batch_limit);
      Data d;
      d.name = i.name;
      d.kind = PayloadKind::HmmBatch;
      d.payload = HmmBatch{b.records, b.batch_max_time};
      d.more_access_rights = b.more;
      ++m_syncReplies;
      sim.queue().schedule(sim.now(), EventKind::TimerExpiry, m_node,
                           [this, d] { m_sim->injectData(m_sim->node(m_node), d); });
      return StrategyDecision::consume();
    }
    const MicroserviceSpec* svc = sim.catalog().find(i.name.microservice);
    if (svc == nullptr)
      return StrategyDecision::dropSilent();
    const std::string name = i.name.canonical();
    if (svc->is_protected && i.access_rights && verify(m_registry, i) == Verdict::Deny) {
      sim.markDropped(name, "access_denied");
      return StrategyDecision::consumeErase();
    }
    Node& self = sim.node(m_node);
    if (admit(self.res, *svc)) {
      begin(sim, Pending{i.name, svc, svc->base_duration, std::nullopt, std::nullopt});
      return StrategyDecision::consume();
    }
    if (svc->demand <= self.res.initial && m_queue.size() < sim.config().queue_capacity) {
      m_queue.push_back(Pending{i.name, svc, svc->base_duration, std::nullopt, std::nullopt});
      return StrategyDecision::consume();
    }
    sim.markDropped(name, "cloud_overflow");
    return StrategyDecision::consumeErase();
  }

  bool onDataIntercept(Simulation& sim, FaceId in, const Data& d) override
  {
    if (in == APP_FACE)
      return false;
    if (d.kind == PayloadKind::HandoverTarget) {
      const auto& h = std::get<HandoverTarget>(d.payload);
      if (h.remaining_work == 0)
        return true;
      const MicroserviceSpec* svc = sim.catalog().find(h.microservice);
      if (svc == nullptr)
        return true;
      Pending p{d.name, svc, static_cast<Tick>(h.remaining_work), h.adhoc_response, in};
      Node& self = sim.node(m_node);
      if (admit(self.res, *svc))
        begin(sim, p);
      else if (svc->demand <= self.res.initial)
        m_queue.push_back(std::move(p));
      else
        sim.markDropped(d.name.canonical(), "cloud_overflow");
      return true;
    }
    if (d.kind == PayloadKind::ComputedResult)
      return sim.node(m_node).fwd.pit.find(d.name.canonical()) == nullptr;
    return false;
  }

  void onFinish(Simulation& sim) override
  {
    if (!m_queue.empty() || m_running != 0)
      throw InvariantViolation(sim.node(m_node).label + ": executions or queue not drained");
  }

  void dumpExtra(std::string& out) const override
  {
    out += "  cloud: running=" + std::to_string(m_running) +
           " queued=" + std::to_string(m_queue.size()) +
           " registry_records=" + std::to_string(m_registry.size()) +
           " sync_replies=" + std::to_string(m_syncReplies) + "\n";
  }

  AccessStore& registry() { return m_registry; }

private:
  struct Pending {
    FeName name;
    const MicroserviceSpec* svc;
    Tick remaining;
    std::optional<bool> flag;       // known for handed-over instances
    std::optional<FaceId> reply_face; // set when there is no pending entry to follow
  };

  void begin(Simulation& sim, Pending p) // resources already admitted
  {
    sim.ledgerOpen(p.name.canonical(), p.svc->base_duration);
    ++m_running;
    Tick dur = execTicks(p.remaining, m_speed);
    sim.queue().schedule(sim.now() + dur, EventKind::ExecComplete, m_node,
                         [this, p] { complete(p); });
  }

  void complete(const Pending& p)
  {
    Simulation& sim = *m_sim;
    Node& self = sim.node(m_node);
    release(self.res, *p.svc);
    --m_running;
    sim.ledgerAccount(p.name.canonical(), p.remaining, true);
    Data d;
    d.name = p.name;
    d.kind = PayloadKind::ComputedResult;
    d.payload = ComputedResult{m_node};
    if (p.reply_face) {
      d.adhoc_response = p.flag.value_or(false);
      sim.transmit(self, *p.reply_face, Packet{d});
    }
    else {
      PitEntry* e = self.fwd.pit.find(p.name.canonical());
      d.adhoc_response = e != nullptr && e->adhoc_response;
      sim.injectData(self, d);
    }
    drain(sim);
  }

  void drain(Simulation& sim)
  {
    Node& self = sim.node(m_node);
    while (!m_queue.empty()) {
      Pending& head = m_queue.front();
      if (!admit(self.res, *head.svc))
        break;
      Pending p = std::move(head);
      m_queue.pop_front();
      begin(sim, p);
    }
  }

  Simulation* m_sim;
  std::uint32_t m_node;
  SpeedFactor m_speed;
  AccessStore m_registry;
  std::deque<Pending> m_queue;
  std::uint64_t m_running = 0;
  std::uint64_t m_syncReplies = 0;
};

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

Simulation::Simulation(const ScenarioConfig& cfg)
  : m_cfg(cfg), m_rng(cfg.seed)
{
  m_cfg.validate();
  m_catalog = m_cfg.buildCatalog();
  buildTopology();
  buildAccessRegistry();
}

Simulation::~Simulation() = default;

FeName Simulation::regionName(const std::string& microservice,
                              std::vector<std::string> params) const
{
  return FeName{m_cfg.country, m_cfg.city, m_cfg.district, microservice, std::move(params)};
}

void Simulation::buildTopology()
{
  const ScenarioConfig& cfg = m_cfg;
  LinkParams adhoc{secondsToTicks(cfg.adhoc_latency_s), cfg.adhoc_bandwidth_Bps,
                   cfg.adhoc_range_m};
  LinkParams wired{secondsToTicks(cfg.wired_latency_s), cfg.wired_bandwidth_Bps, 0};
  LinkParams cloudL{secondsToTicks(cfg.cloud_latency_s), cfg.cloud_bandwidth_Bps, 0};
  std::vector<std::string> region{cfg.country, cfg.city, cfg.district};
  const bool fog = cfg.mode == Mode::FoggyEdge && cfg.fog_vehicles > 0;
  const std::uint32_t E = static_cast<std::uint32_t>(cfg.edge_count);

  auto addNode = [&](NodeKind k, const std::string& label) -> Node& {
    auto n = std::make_unique<Node>();
    n->id = static_cast<std::uint32_t>(m_nodes.size());
    n->kind = k;
    n->label = label;
    n->fwd.pit_lifetime = secondsToTicks(cfg.pit_lifetime_s);
    n->fwd.rpit_lifetime = secondsToTicks(cfg.rpit_lifetime_s);
    n->fwd.cs = Cs(cfg.cs_capacity);
    m_nodes.push_back(std::move(n));
    return *m_nodes.back();
  };

  for (int c = 0; c < cfg.consumers; ++c) {
    Node& n = addNode(NodeKind::Consumer, "consumer" + std::to_string(c));
    n.mobile = true;
    n.kin.position_m = uniformDouble(m_rng.mobility, 0.0, cfg.road_length_m);
    n.kin.speed_mps =
      uniformDouble(m_rng.mobility, cfg.consumer_speed_min_mps, cfg.consumer_speed_max_mps);
    n.kin.direction = 1;
    n.kin.as_of = 0;
    std::string vin = randomVin(m_rng.vins);
    m_vinToNode[vin] = n.id;
    m_nodeToVin[n.id] = vin;
    m_consumers.push_back(n.id);
    n.role = std::make_unique<ConsumerRole>(this, n.id, vin);
  }
  for (std::uint32_t i = 0; i < E; ++i) {
    Node& n = addNode(NodeKind::Edge, "edge" + std::to_string(i));
    n.static_x = cfg.first_edge_x_m + static_cast<double>(i) * cfg.edge_spacing_m;
    std::uint64_t res =
      cfg.edge_resources_override.empty() ? cfg.edge_resources : cfg.edge_resources_override[i];
    n.res.initial = n.res.available = res;
    n.res.speed = SpeedFactor::fromDouble(cfg.edge_speed);
    if (cfg.edge_codes_override.empty()) {
      for (const MicroserviceSpec& s : m_catalog.specs())
        n.code_store.insert(s.microservice);
    }
    else {
      for (const std::string& name : cfg.edge_codes_override[i])
        n.code_store.insert(name);
    }
    m_edges.push_back(n.id);
    n.role = std::make_unique<EdgeRole>(this, n.id, static_cast<int>(i));
  }
  {
    Node& n = addNode(NodeKind::Bridge, "bridge");
    m_bridge = n.id;
  }
  if (fog) {
    Node& n = addNode(NodeKind::FogGateway, "fog-gateway");
    n.static_x = cfg.lot_x_m;
    m_vfg = n.id;
    n.role = std::make_unique<FogGatewayRole>(this, n.id, cfg);
    for (int v = 0; v < cfg.fog_vehicles; ++v) {
      Node& fv = addNode(NodeKind::FogVehicle, "fog-vehicle" + std::to_string(v));
      fv.static_x = cfg.lot_x_m;
      fv.res.initial = fv.res.available = cfg.fog_vehicle_resources;
      fv.res.speed = SpeedFactor::fromDouble(cfg.fog_speed);
      for (const MicroserviceSpec& s : m_catalog.specs())
        fv.code_store.insert(s.microservice);
      std::string vin = randomVin(m_rng.vins);
      m_vinToNode[vin] = fv.id;
      m_nodeToVin[fv.id] = vin;
      fv.adhoc_default_dst = m_vfg;
      m_fogVehicles.push_back(fv.id);
      fv.role = std::make_unique<FogVehicleRole>(this, fv.id, vin, v);
    }
  }
  {
    Node& n = addNode(NodeKind::Cloud, "cloud");
    n.res.initial = n.res.available = cfg.cloud_resources;
    n.res.speed = SpeedFactor::fromDouble(cfg.cloud_speed);
    for (const MicroserviceSpec& s : m_catalog.specs())
      n.code_store.insert(s.microservice);
    m_cloud = n.id;
    n.role = std::make_unique<CloudRole>(this, n.id, cfg);
  }

  // --- faces (indices are part of each role's contract) ---
  for (std::uint32_t cid : m_consumers) {
    Node& n = node(cid);
    n.faces.push_back(FaceInfo{true, adhoc, 0, 0});
    n.fwd.fib.add(region, {0});
  }
  for (std::uint32_t i = 0; i < E; ++i) {
    Node& n = node(m_edges[i]);
    n.faces.push_back(FaceInfo{true, adhoc, 0, 0});            // 0: radio
    n.faces.push_back(FaceInfo{false, wired, m_bridge, i});    // 1: backhaul
    n.fwd.fib.add(region, {EdgeRole::BRIDGE});
  }
  {
    Node& b = node(m_bridge);
    for (std::uint32_t i = 0; i < E; ++i)
      b.faces.push_back(FaceInfo{false, wired, m_edges[i], EdgeRole::BRIDGE}); // 0..E-1
    const FaceId cloudFace = E;
    b.faces.push_back(FaceInfo{false, cloudL, m_cloud, 0}); // E: cloud uplink
    std::vector<FaceId> fogFaces;
    if (fog) {
      b.faces.push_back(FaceInfo{false, wired, m_vfg, FogGatewayRole::BRIDGE}); // E+1
      fogFaces.push_back(E + 1);
    }
    b.fwd.fib.add(region, {cloudFace});
    b.role = std::make_unique<BridgeRole>(this, m_bridge, E, cloudFace, fogFaces);
  }
  if (fog) {
    Node& g = node(m_vfg);
    g.faces.push_back(FaceInfo{false, wired, m_bridge, E + 1}); // 0: bridge
    g.faces.push_back(FaceInfo{false, cloudL, m_cloud, 1});     // 1: cloud uplink
    g.faces.push_back(FaceInfo{true, adhoc, 0, 0});             // 2: lot radio
    g.fwd.fib.add(region, {FogGatewayRole::CLOUD});
    for (std::uint32_t vid : m_fogVehicles) {
      Node& v = node(vid);
      v.faces.push_back(FaceInfo{true, adhoc, 0, 0});
      v.fwd.fib.add(region, {0});
    }
  }
  {
    Node& c = node(m_cloud);
    c.faces.push_back(FaceInfo{false, cloudL, m_bridge, E}); // 0: bridge
    if (fog)
      c.faces.push_back(FaceInfo{false, cloudL, m_vfg, FogGatewayRole::CLOUD}); // 1: gateway
  }

  // --- forwarder hooks ---
  for (auto& np : m_nodes) {
    Node* n = np.get();
    n->fwd.strategy = [this, n](FaceId in, const Interest& i, PitEntry& e) {
      return n->role ? n->role->onInterest(*this, in, i, e) : StrategyDecision::useFib();
    };
    n->fwd.data_interceptor = [this, n](FaceId in, const Data& d) {
      return n->role ? n->role->onDataIntercept(*this, in, d) : false;
    };
    n->fwd.fetch_claim = [this, n](FaceId in, const Data& d, PitEntry& e) {
      return n->role ? n->role->onFetchClaim(*this, in, d, e) : false;
    };
    n->fwd.result_freshness = [this](const FeName& nm) -> Tick {
      const MicroserviceSpec* s = m_catalog.find(nm.microservice);
      return s ? s->freshness : 0;
    };
    if (!n->role)
      n->role = std::make_unique<Role>();
  }
}

void Simulation::buildAccessRegistry()
{
  auto* cloud = static_cast<CloudRole*>(node(m_cloud).role.get());
  if (!m_cfg.bootstrap_file.empty()) {
    std::ifstream f(m_cfg.bootstrap_file);
    if (!f)
      throw ConfigError("cannot open bootstrap file: " + m_cfg.bootstrap_file);
    std::string line;
    std::size_t ln = 0;
    while (std::getline(f, line)) {
      ++ln;
      if (line.empty() || line[0] == '#')
        continue;
      std::istringstream iss(line);
      std::string hmac, name;
      Tick created = 0;
      if (!(iss >> hmac >> name >> created))
        throw ConfigError("bootstrap line " + std::to_string(ln) + ": expected <hmac> <name> <ticks>");
      cloud->registry().insert(HmmRecord{hmac, name, created});
    }
    return;
  }
  Tick t = 0;
  for (std::uint32_t cid : m_consumers) {
    const std::string& vin = m_nodeToVin.at(cid);
    for (const MicroserviceSpec& s : m_catalog.specs()) {
      if (!s.is_protected)
        continue;
      FeName nm = regionName(s.microservice);
      cloud->registry().insert(HmmRecord{computeHmac(vin, nm), nm.canonicalWithoutParams(), ++t});
    }
  }
}

void Simulation::scheduleStart()
{
  for (auto& n : m_nodes)
    n->role->onStart(*this);
  scheduleSweep(SWEEP_PERIOD);
}

void Simulation::scheduleSweep(Tick at)
{
  m_queue.schedule(at, EventKind::TimerExpiry, 0xFFFFFFFEu, [this] {
    for (auto& np : m_nodes)
      np->fwd.counters.pit_expired += np->fwd.pit.purgeExpired(now());
    Tick tail = secondsToTicks(m_cfg.pit_lifetime_s * 2 + 10.0);
    Tick next = now() + SWEEP_PERIOD;
    if (next <= durationEnd() + tail)
      scheduleSweep(next);
  });
}

void Simulation::run()
{
  if (m_ran)
    throw InvariantViolation("Simulation::run called twice");
  m_ran = true;
  scheduleStart();
  while (m_queue.runOne()) {
  }
  endOfRunChecks();
}

void Simulation::endOfRunChecks()
{
  for (auto& np : m_nodes) {
    Node& n = *np;
    if (n.res.available != n.res.initial)
      throw InvariantViolation(n.label + ": compute resources not restored (" +
                               std::to_string(n.res.available) + "/" +
                               std::to_string(n.res.initial) + ")");
    n.fwd.counters.pit_expired += n.fwd.pit.purgeExpired(now());
    if (n.fwd.pit.size() != 0)
      throw InvariantViolation(n.label + ": PIT entries leaked");
    n.role->onFinish(*this);
  }
  for (const auto& [name, e] : m_workLedger) {
    if (!e.completed)
      throw InvariantViolation("execution never completed: " + name);
    if (e.accounted != e.base_work)
      throw InvariantViolation("work conservation broken for " + name + ": accounted " +
                               std::to_string(e.accounted) + " of " +
                               std::to_string(e.base_work));
  }
}

void Simulation::transmit(Node& src, FaceId f, const Packet& pkt,
                          std::optional<std::uint32_t> link_dst)
{
  const FaceInfo& face = src.faces.at(f);
  if (face.adhoc && !link_dst)
    link_dst = src.adhoc_default_dst;

  TraceRecord tr;
  tr.kind = TraceKind::Send;
  tr.time = now();
  tr.node = src.id;
  tr.face = f;
  tr.link_dst = link_dst.value_or(NO_LINK_DST);
  tr.packet = encode(pkt);
  m_trace.record(tr);

  Tick flight = transferTicks(face.link, wireSize(pkt));
  if (!face.adhoc) {
    std::uint32_t peer = face.peer_node;
    FaceId pf = face.peer_face;
    m_queue.schedule(now() + flight, EventKind::PacketArrival, peer,
                     [this, peer, pf, pkt] { receive(*m_nodes[peer], pf, pkt); });
    return;
  }
  double pos = src.positionAt(now(), m_cfg.road_length_m);
  for (auto& np : m_nodes) {
    Node& dst = *np;
    if (dst.id == src.id || !dst.radio_active)
      continue;
    if (link_dst && *link_dst != dst.id)
      continue; // link-layer addressee filter
    std::optional<FaceId> df;
    for (std::size_t k = 0; k < dst.faces.size(); ++k)
      if (dst.faces[k].adhoc) {
        df = static_cast<FaceId>(k);
        break;
      }
    if (!df)
      continue;
    double dpos = dst.positionAt(now(), m_cfg.road_length_m);
    if (wrapDistance(pos, dpos, m_cfg.road_length_m) > face.link.range_m)
      continue;
    std::uint32_t did = dst.id;
    FaceId f2 = *df;
    m_queue.schedule(now() + flight, EventKind::PacketArrival, did, [this, did, f2, pkt] {
      Node& d = *m_nodes[did];
      if (!d.radio_active)
        return; // drove away while the frame was in the air
      receive(d, f2, pkt);
    });
  }
}

void Simulation::receive(Node& dst, FaceId in, const Packet& pkt)
{
  TraceRecord tr;
  tr.kind = TraceKind::Recv;
  tr.time = now();
  tr.node = dst.id;
  tr.face = in;
  tr.packet = encode(pkt);
  m_trace.record(tr);

  if (std::holds_alternative<Interest>(pkt))
    executeActions(dst, dst.fwd.onInterest(in, std::get<Interest>(pkt), now()), &pkt);
  else
    executeActions(dst, dst.fwd.onData(in, std::get<Data>(pkt), now()), &pkt);
}

void Simulation::injectInterest(Node& src, const Interest& i)
{
  Packet p{i};
  executeActions(src, src.fwd.onInterest(APP_FACE, i, now()), &p);
}

void Simulation::injectData(Node& src, const Data& d)
{
  Packet p{d};
  executeActions(src, src.fwd.onData(APP_FACE, d, now()), &p);
}

void Simulation::executeActions(Node& n, std::vector<FwdAction>&& actions, const Packet* source)
{
  for (FwdAction& a : actions) {
    switch (a.kind) {
      case FwdAction::SendInterest:
        transmit(n, a.face, Packet{a.interest}, a.link_dst);
        break;
      case FwdAction::SendData:
        transmit(n, a.face, Packet{a.data}, a.link_dst);
        break;
      case FwdAction::DeliverData:
        n.role->onAppData(*this, a.data);
        break;
      case FwdAction::Drop: {
        TraceRecord tr;
        tr.kind = TraceKind::Drop;
        tr.time = now();
        tr.node = n.id;
        tr.face = a.face;
        tr.aux = static_cast<std::uint8_t>(a.reason);
        if (source != nullptr)
          tr.packet = encode(*source);
        m_trace.record(tr);
        break;
      }
    }
  }
}

void Simulation::traceDecision(const Node& n, int offload_case, const std::string& name, FaceId f)
{
  TraceRecord tr;
  tr.kind = TraceKind::Decision;
  tr.time = now();
  tr.node = n.id;
  tr.face = f;
  tr.aux = static_cast<std::uint8_t>(offload_case);
  tr.note = name;
  m_trace.record(tr);
}

RequestRecord& Simulation::newRecord(const FeName& name, std::uint32_t consumer,
                                     const std::string& svc)
{
  const std::string canonical = name.canonical();
  auto it = m_recordIndex.find(canonical);
  if (it != m_recordIndex.end())
    return m_records[it->second];
  RequestRecord r;
  r.id = m_records.size() + 1;
  r.name = canonical;
  r.consumer = consumer;
  r.service = svc;
  r.created_at = now();
  m_recordIndex[canonical] = m_records.size();
  m_records.push_back(std::move(r));
  return m_records.back();
}

RequestRecord* Simulation::findRecord(const std::string& canonical)
{
  auto it = m_recordIndex.find(canonical);
  return it == m_recordIndex.end() ? nullptr : &m_records[it->second];
}

void Simulation::markDropped(const std::string& canonical, const std::string& reason)
{
  RequestRecord* rec = findRecord(canonical);
  if (rec != nullptr && !rec->resolved())
    rec->drop_reason = reason;
}

void Simulation::ledgerOpen(const std::string& name, Tick base_work)
{
  m_workLedger.emplace(name, WorkLedgerEntry{base_work, 0, false});
}

void Simulation::ledgerAccount(const std::string& name, Tick work, bool completes)
{
  WorkLedgerEntry& e = m_workLedger[name];
  e.accounted += work;
  if (completes)
    e.completed = true;
}

std::uint32_t Simulation::nodeOfVin(const std::string& vin) const
{
  auto it = m_vinToNode.find(vin);
  if (it == m_vinToNode.end())
    throw InvariantViolation("unknown VIN: " + vin);
  return it->second;
}

const std::string& Simulation::vinOf(std::uint32_t node) const
{
  auto it = m_nodeToVin.find(node);
  if (it == m_nodeToVin.end())
    throw InvariantViolation("node " + std::to_string(node) + " has no VIN");
  return it->second;
}

RunSummary Simulation::summary() const
{
  return summarize(m_cfg.mode, m_cfg.rate_per_sec, m_cfg.seed, m_records, m_cfg.warmupTicks());
}

std::string Simulation::dumpTables() const
{
  std::string out;
  for (const auto& np : m_nodes) {
    const Node& n = *np;
    out += n.label + " (" + nodeKindName(n.kind) + ", id=" + std::to_string(n.id) + ")";
    if (!n.mobile)
      out += " x=" + fmt2(n.static_x);
    if (n.res.initial > 0)
      out += " res=" + std::to_string(n.res.available) + "/" + std::to_string(n.res.initial);
    out += "\n";
    const ForwarderCounters& c = n.fwd.counters;
    out += "  counters: interests_in=" + std::to_string(c.interests_in) +
           " data_in=" + std::to_string(c.data_in) + " cs_hits=" + std::to_string(c.cs_hits) +
           " aggregated=" + std::to_string(c.pit_aggregated) +
           " dup_drops=" + std::to_string(c.drops_duplicate) +
           " no_route=" + std::to_string(c.drops_no_route) +
           " unsolicited=" + std::to_string(c.drops_unsolicited) +
           " hop_exhausted=" + std::to_string(c.drops_hop_exhausted) +
           " pit_expired=" + std::to_string(c.pit_expired) + "\n";
    for (const FibEntry& fe : n.fwd.fib.entries()) {
      out += "  fib:";
      for (const std::string& p : fe.prefix)
        out += " " + p;
      out += " ->";
      for (FaceId f : fe.faces)
        out += " " + std::to_string(f);
      out += "\n";
    }
    for (const auto& [name, pe] : n.fwd.pit.entries()) {
      out += "  pit: " + name + " in={";
      for (FaceId f : pe.incoming)
        out += (f == APP_FACE ? std::string("app") : std::to_string(f)) + ",";
      out += "} out={";
      for (FaceId f : pe.outgoing)
        out += (f == APP_FACE ? std::string("app") : std::to_string(f)) + ",";
      out += "} nonces=" + std::to_string(pe.nonces.size()) +
             " expiry=" + std::to_string(pe.expiry) +
             (pe.adhoc_response ? " adhoc_response" : "") + "\n";
    }
    for (const std::string& name : n.fwd.cs.names())
      out += "  cs: " + name + "\n";
    n.role->dumpExtra(out);
  }
  return out;
}

std::string Simulation::reportText() const
{
  RunSummary s = summary();
  std::string out;
  out += "mode=" + modeName(s.mode) + " rate=" + fmt2(s.rate_per_sec) +
         " seed=" + std::to_string(s.seed) + " duration=" + fmt2(m_cfg.duration_s) + "s\n";
  out += "post-warmup requests: generated=" + std::to_string(s.generated) +
         " satisfied=" + std::to_string(s.satisfied) + " dropped=" + std::to_string(s.dropped) +
         " in_flight=" + std::to_string(s.in_flight_at_end) + "\n";
  out += "satisfaction_rate=" + fmt2(100.0 * s.stats.satisfaction_rate) + "%\n";
  if (s.stats.mean_s) {
    out += "csd_seconds: mean=" + fmt2(*s.stats.mean_s) + " p50=" + fmt2(*s.stats.p50_s) +
           " p95=" + fmt2(*s.stats.p95_s) + "\n";
  }
  out += "cases: first_edge=" + std::to_string(s.case_counts[0]) +
         " next_edge=" + std::to_string(s.case_counts[1]) +
         " fog=" + std::to_string(s.case_counts[2]) +
         " cloud=" + std::to_string(s.case_counts[3]) + "\n";
  if (!s.drops_by_reason.empty()) {
    out += "drops:";
    for (const auto& [r, cnt] : s.drops_by_reason)
      out += " " + r + "=" + std::to_string(cnt);
    out += "\n";
  }
  out += "trace_records=" + std::to_string(m_trace.recordCount()) + "\n";
  return out;
}

} // namespace foggyedge
