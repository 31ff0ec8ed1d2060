#pragma once
// Parked-vehicle fog tables: the resource-allocation table kept by the fog
// gateway, plus the pure selection policies used for dispatch and handover.
// Kept free of simulator state so the policies can be unit-tested directly.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foggyedge/compute.hpp"
#include "foggyedge/engine.hpp"

namespace foggyedge {

// One parked vehicle as seen by the gateway.
struct VfRatEntry {
  std::string vin;
  std::uint32_t node = 0;          // simulator node id of the vehicle
  std::uint32_t slot = 0;          // parking slot, unique while parked
  std::uint64_t initial = 0;       // advertised resource units
  std::uint64_t available = 0;     // units not currently reserved
  Tick est_departure = 0;          // absolute tick the vehicle plans to leave
  bool departing = false;          // departure announced; no new work
  std::set<std::string> running;   // request names currently reserved here
};

// Resource-allocation table: slot -> entry.  Mutations keep the invariant
// available <= initial; violations raise InvariantViolation immediately.
class VfRat {
 public:
  explicit VfRat(std::uint32_t capacity) : m_capacity(capacity) {}

  std::uint32_t capacity() const { return m_capacity; }
  std::size_t size() const { return m_slots.size(); }
  bool full() const { return m_slots.size() >= m_capacity; }

  // Admit a vehicle into the lowest free slot; nullopt when the lot is full.
  std::optional<std::uint32_t> admit(const std::string& vin, std::uint32_t node,
                                     std::uint64_t resources, Tick est_departure);

  VfRatEntry* find(std::uint32_t slot);
  const VfRatEntry* find(std::uint32_t slot) const;
  VfRatEntry* findByVin(const std::string& vin);

  void reserve(std::uint32_t slot, const std::string& name, std::uint64_t demand);
  void release(std::uint32_t slot, const std::string& name, std::uint64_t demand);
  // Move a reservation between slots (handover bookkeeping).
  void move(std::uint32_t from, std::uint32_t to, const std::string& name,
            std::uint64_t demand);
  void erase(std::uint32_t slot);

  const std::map<std::uint32_t, VfRatEntry>& slots() const { return m_slots; }

  // Throws InvariantViolation if any entry over-releases or over-reserves.
  void checkConsistent() const;

 private:
  std::uint32_t m_capacity;
  std::map<std::uint32_t, VfRatEntry> m_slots;
};

// Pick the slot to run a new instance on.  Eligibility: not departing,
// available >= demand, and the vehicle stays parked for the whole execution
// (est_departure - now >= exec_ticks).  Preference order: latest departure,
// then most available resources, then lowest slot.  nullopt when nobody fits.
std::optional<std::uint32_t> pickDispatchSlot(const VfRat& rat, std::uint64_t demand,
                                              Tick now, Tick exec_ticks);

// Same policy for rehoming a suspended instance off a departing vehicle;
// `exclude` is the departing slot itself.
std::optional<std::uint32_t> pickHandoverSlot(const VfRat& rat, std::uint32_t exclude,
                                              std::uint64_t demand, Tick now,
                                              Tick remaining_exec_ticks);

// Bridge-side choice among fog clusters: fewest outstanding requests wins,
// ties broken by the lowest face id.  `outstanding` must be non-empty.
std::uint32_t selectFogFace(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& outstanding);

}  // namespace foggyedge
