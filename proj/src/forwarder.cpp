#include "foggyedge/forwarder.hpp"

#include "foggyedge/engine.hpp"

#include <algorithm>

namespace foggyedge {

void Fib::add(std::vector<std::string> prefix, std::vector<FaceId> faces)
{
  m_entries.push_back(FibEntry{std::move(prefix), std::move(faces)});
}

const FibEntry* Fib::lookup(const FeName& name) const
{
  const FibEntry* best = nullptr;
  std::size_t bestLen = 0;
  for (const FibEntry& e : m_entries) {
    std::size_t len = regionPrefixMatch(name, e.prefix);
    if (len != e.prefix.size())
      continue; // partial prefix match does not count
    if (best == nullptr || len > bestLen) {
      best = &e;
      bestLen = len;
    }
  }
  return best;
}

PitEntry* Pit::find(const std::string& canonical)
{
  auto it = m_entries.find(canonical);
  return it == m_entries.end() ? nullptr : &it->second;
}

const PitEntry* Pit::find(const std::string& canonical) const
{
  auto it = m_entries.find(canonical);
  return it == m_entries.end() ? nullptr : &it->second;
}

PitEntry& Pit::insert(const FeName& name, Tick now, Tick lifetime)
{
  PitEntry& e = m_entries[name.canonical()];
  e.name = name;
  e.created_at = now;
  e.expiry = now + lifetime;
  return e;
}

void Pit::erase(const std::string& canonical)
{
  m_entries.erase(canonical);
}

std::size_t Pit::purgeExpired(Tick now)
{
  std::size_t purged = 0;
  for (auto it = m_entries.begin(); it != m_entries.end();) {
    if (it->second.expiry <= now) {
      it = m_entries.erase(it);
      ++purged;
    }
    else {
      ++it;
    }
  }
  return purged;
}

void rpitSwap(PitEntry& e, Tick now, Tick rpit_lifetime)
{
  std::swap(e.incoming, e.outgoing);
  e.expiry = std::max(e.expiry, now + rpit_lifetime);
}

const CsEntry* Cs::find(const std::string& canonical, Tick now)
{
  auto it = m_map.find(canonical);
  if (it == m_map.end())
    return nullptr;
  if (it->second.first.expires_at <= now) {
    m_lru.erase(it->second.second);
    m_map.erase(it);
    return nullptr;
  }
  // refresh LRU position
  m_lru.erase(it->second.second);
  m_lru.push_front(canonical);
  it->second.second = m_lru.begin();
  return &it->second.first;
}

void Cs::insert(const FeName& name, const Data& d, Tick now, Tick freshness)
{
  if (m_capacity == 0)
    return;
  std::string canonical = name.canonical();
  auto it = m_map.find(canonical);
  if (it != m_map.end()) {
    m_lru.erase(it->second.second);
    m_map.erase(it);
  }
  while (m_map.size() >= m_capacity) {
    m_map.erase(m_lru.back());
    m_lru.pop_back();
  }
  m_lru.push_front(canonical);
  m_map.emplace(canonical, std::make_pair(CsEntry{d, now, now + freshness}, m_lru.begin()));
}

std::vector<std::string> Cs::names() const
{
  std::vector<std::string> out;
  for (const auto& [name, entry] : m_map)
    out.push_back(name);
  return out;
}

namespace {

FwdAction sendInterestAction(FaceId face, std::optional<std::uint32_t> dst, Interest i)
{
  FwdAction a;
  a.kind = FwdAction::SendInterest;
  a.face = face;
  a.link_dst = dst;
  a.interest = std::move(i);
  return a;
}

FwdAction sendDataAction(FaceId face, Data d)
{
  FwdAction a;
  a.kind = FwdAction::SendData;
  a.face = face;
  a.data = std::move(d);
  return a;
}

FwdAction deliverAction(Data d)
{
  FwdAction a;
  a.kind = FwdAction::DeliverData;
  a.face = APP_FACE;
  a.data = std::move(d);
  return a;
}

FwdAction dropAction(FaceId face, DropReason r)
{
  FwdAction a;
  a.kind = FwdAction::Drop;
  a.face = face;
  a.reason = r;
  return a;
}

} // namespace

std::vector<FwdAction> Forwarder::onInterest(FaceId in, const Interest& i, Tick now)
{
  ++counters.interests_in;
  std::vector<FwdAction> out;

  if (i.hop_budget == 0) {
    ++counters.drops_hop_exhausted;
    out.push_back(dropAction(in, DropReason::HopExhausted));
    return out;
  }

  std::string canonical = i.name.canonical();

  // CS
  if (const CsEntry* hit = cs.find(canonical, now)) {
    ++counters.cs_hits;
    out.push_back(in == APP_FACE ? deliverAction(hit->data) : sendDataAction(in, hit->data));
    return out;
  }

  // PIT
  PitEntry* entry = pit.find(canonical);
  bool fresh = false;
  if (entry != nullptr) {
    if (entry->nonces.count(i.nonce) != 0 && !i.offloading) {
      ++counters.drops_duplicate;
      out.push_back(dropAction(in, DropReason::Duplicate));
      return out;
    }
    entry->nonces.insert(i.nonce);
    entry->adhoc_response = entry->adhoc_response || i.adhoc_response;
    if (!i.offloading) {
      // aggregate: record the new downstream, do not forward again
      entry->incoming.insert(in);
      entry->expiry = std::max(entry->expiry, now + pit_lifetime);
      ++counters.pit_aggregated;
      return out;
    }
    // offloading bypass: the role re-routes the pending request; the arrival
    // face is a forwarding maneuver, not a new consumer of the data
  }
  else {
    entry = &pit.insert(i.name, now, pit_lifetime);
    entry->incoming.insert(in);
    entry->nonces.insert(i.nonce);
    entry->adhoc_response = i.adhoc_response;
    fresh = true;
  }

  StrategyDecision decision = strategy ? strategy(in, i, *entry) : StrategyDecision::useFib();

  std::vector<FaceId> faces;
  std::optional<std::uint32_t> dst;
  switch (decision.kind) {
    case StrategyDecision::UseFib: {
      const FibEntry* fe = fib.lookup(i.name);
      if (fe != nullptr)
        for (FaceId f : fe->faces)
          if (f != in)
            faces.push_back(f);
      if (faces.empty()) {
        ++counters.drops_no_route;
        if (fresh)
          pit.erase(canonical);
        out.push_back(dropAction(in, DropReason::NoRoute));
        return out;
      }
      break;
    }
    case StrategyDecision::Faces:
      faces = decision.faces;
      dst = decision.link_dst;
      break;
    case StrategyDecision::Consume:
      return out;
    case StrategyDecision::ConsumeErase:
      pit.erase(canonical);
      return out;
    case StrategyDecision::DropSilent:
      if (fresh)
        pit.erase(canonical);
      return out;
  }

  Interest fwd = i;
  fwd.hop_budget = static_cast<std::uint8_t>(i.hop_budget - 1);
  for (FaceId f : faces) {
    entry->outgoing.insert(f);
    out.push_back(sendInterestAction(f, dst, fwd));
  }
  return out;
}

std::vector<FwdAction> Forwarder::onData(FaceId in, const Data& d, Tick now)
{
  ++counters.data_in;
  std::vector<FwdAction> out;
  std::string canonical = d.name.canonical();

  if (d.microservice_fetch) {
    // Reverse-PIT traversal: the packet follows pending entries back toward the
    // node that still holds the microservice code, swapping each entry so the
    // code can retrace the same path.
    PitEntry* entry = pit.find(canonical);
    if (entry == nullptr) {
      ++counters.drops_unsolicited;
      out.push_back(dropAction(in, DropReason::NoPitMatch));
      return out;
    }
    rpitSwap(*entry, now, rpit_lifetime);
    entry->incoming.insert(in); // remember who is waiting for the code
    if (fetch_claim && fetch_claim(in, d, *entry))
      return out;
    for (FaceId f : entry->outgoing)
      if (f != in)
        out.push_back(f == APP_FACE ? deliverAction(d) : sendDataAction(f, d));
    return out;
  }

  if (data_interceptor && data_interceptor(in, d))
    return out;

  PitEntry* entry = pit.find(canonical);
  if (entry == nullptr) {
    ++counters.drops_unsolicited;
    out.push_back(dropAction(in, DropReason::NoPitMatch));
    return out;
  }

  if (d.kind == PayloadKind::MicroserviceCode) {
    // Code travelling back along a swapped path: satisfy the waiting side but
    // keep the entry alive (re-swapped) for the eventual computed result.
    for (FaceId f : entry->incoming)
      if (f != in)
        out.push_back(f == APP_FACE ? deliverAction(d) : sendDataAction(f, d));
    rpitSwap(*entry, now, rpit_lifetime);
    return out;
  }

  if (d.kind == PayloadKind::ComputedResult) {
    Tick freshness = result_freshness ? result_freshness(d.name) : TICKS_PER_SEC;
    cs.insert(d.name, d, now, freshness);
  }

  std::vector<FaceId> faces(entry->incoming.begin(), entry->incoming.end());
  pit.erase(canonical);
  for (FaceId f : faces) {
    if (f == in)
      continue;
    out.push_back(f == APP_FACE ? deliverAction(d) : sendDataAction(f, d));
  }
  return out;
}

} // namespace foggyedge
