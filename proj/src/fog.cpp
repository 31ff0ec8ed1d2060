#include "foggyedge/fog.hpp"

#include <stdexcept>

namespace foggyedge {

std::optional<std::uint32_t> VfRat::admit(const std::string& vin, std::uint32_t node,
                                          std::uint64_t resources, Tick est_departure) {
  if (full()) return std::nullopt;
  std::uint32_t slot = 0;
  while (m_slots.count(slot) != 0) ++slot;
  VfRatEntry e;
  e.vin = vin;
  e.node = node;
  e.slot = slot;
  e.initial = resources;
  e.available = resources;
  e.est_departure = est_departure;
  m_slots.emplace(slot, std::move(e));
  return slot;
}

VfRatEntry* VfRat::find(std::uint32_t slot) {
  auto it = m_slots.find(slot);
  return it == m_slots.end() ? nullptr : &it->second;
}

const VfRatEntry* VfRat::find(std::uint32_t slot) const {
  auto it = m_slots.find(slot);
  return it == m_slots.end() ? nullptr : &it->second;
}

VfRatEntry* VfRat::findByVin(const std::string& vin) {
  for (auto& [slot, e] : m_slots) {
    if (e.vin == vin) return &e;
  }
  return nullptr;
}

void VfRat::reserve(std::uint32_t slot, const std::string& name, std::uint64_t demand) {
  VfRatEntry* e = find(slot);
  if (e == nullptr) throw InvariantViolation("vfrat reserve on unknown slot");
  if (e->available < demand) throw InvariantViolation("vfrat reserve exceeds availability");
  e->available -= demand;
  e->running.insert(name);
}

void VfRat::release(std::uint32_t slot, const std::string& name, std::uint64_t demand) {
  VfRatEntry* e = find(slot);
  if (e == nullptr) return;  // slot already retired at the ticket zone
  if (e->running.erase(name) == 0) return;  // reservation already moved away
  e->available += demand;
  if (e->available > e->initial) throw InvariantViolation("vfrat release over initial");
}

void VfRat::move(std::uint32_t from, std::uint32_t to, const std::string& name,
                 std::uint64_t demand) {
  release(from, name, demand);
  reserve(to, name, demand);
}

void VfRat::erase(std::uint32_t slot) { m_slots.erase(slot); }

void VfRat::checkConsistent() const {
  for (const auto& [slot, e] : m_slots) {
    if (e.available > e.initial) throw InvariantViolation("vfrat availability over initial");
    if (e.slot != slot) throw InvariantViolation("vfrat slot key mismatch");
  }
}

namespace {

bool eligible(const VfRatEntry& e, std::uint64_t demand, Tick now, Tick exec_ticks) {
  if (e.departing) return false;
  if (e.available < demand) return false;
  return e.est_departure - now >= exec_ticks;
}

// Strict "a is preferred over b" under the dispatch/handover policy.
bool preferred(const VfRatEntry& a, const VfRatEntry& b) {
  if (a.est_departure != b.est_departure) return a.est_departure > b.est_departure;
  if (a.available != b.available) return a.available > b.available;
  return a.slot < b.slot;
}

}  // namespace

std::optional<std::uint32_t> pickDispatchSlot(const VfRat& rat, std::uint64_t demand,
                                              Tick now, Tick exec_ticks) {
  const VfRatEntry* best = nullptr;
  for (const auto& [slot, e] : rat.slots()) {
    if (!eligible(e, demand, now, exec_ticks)) continue;
    if (best == nullptr || preferred(e, *best)) best = &e;
  }
  if (best == nullptr) return std::nullopt;
  return best->slot;
}

std::optional<std::uint32_t> pickHandoverSlot(const VfRat& rat, std::uint32_t exclude,
                                              std::uint64_t demand, Tick now,
                                              Tick remaining_exec_ticks) {
  const VfRatEntry* best = nullptr;
  for (const auto& [slot, e] : rat.slots()) {
    if (slot == exclude) continue;
    if (!eligible(e, demand, now, remaining_exec_ticks)) continue;
    if (best == nullptr || preferred(e, *best)) best = &e;
  }
  if (best == nullptr) return std::nullopt;
  return best->slot;
}

std::uint32_t selectFogFace(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& outstanding) {
  if (outstanding.empty()) throw std::invalid_argument("selectFogFace: no fog faces");
  std::uint32_t best_face = outstanding.front().first;
  std::uint64_t best_count = outstanding.front().second;
  for (const auto& [face, count] : outstanding) {
    if (count < best_count || (count == best_count && face < best_face)) {
      best_face = face;
      best_count = count;
    }
  }
  return best_face;
}

}  // namespace foggyedge
