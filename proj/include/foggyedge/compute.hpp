#ifndef FOGGYEDGE_COMPUTE_HPP
#define FOGGYEDGE_COMPUTE_HPP

#include "foggyedge/packet.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace foggyedge {

class DoubleReleaseError : public std::runtime_error {
public:
  explicit DoubleReleaseError(const std::string& what)
    : std::runtime_error(what) {}
};

/** @brief Host speed as an exact rational (ticks of work per tick of wall time).
 *
 * Keeping the factor rational makes execution times and partial-work splits
 * integer-exact, so an instance handed between hosts performs exactly its base
 * amount of work no matter where the handover lands.
 */
struct SpeedFactor {
  std::uint32_t num = 1;
  std::uint32_t den = 1;

  static SpeedFactor fromDouble(double f);
  double value() const { return static_cast<double>(num) / den; }

  bool operator==(const SpeedFactor&) const = default;
};

/// Wall ticks needed to perform `work` reference ticks at speed `f` (ceiling).
Tick execTicks(Tick work, SpeedFactor f);

/// Reference work completed after `elapsed` wall ticks at speed `f` (floor).
Tick workDone(Tick elapsed, SpeedFactor f);

struct MicroserviceSpec {
  std::string microservice;    // name component, e.g. "traffic_status"
  std::uint64_t demand = 0;    // resource units occupied while running
  Tick base_duration = 0;      // execution time at reference speed, in ticks
  std::uint64_t code_size = 0; // bytes transferred on a code fetch
  bool is_protected = false;   // requires access verification at the edge
  Tick freshness = 0;          // content-store lifetime of its results

  bool operator==(const MicroserviceSpec&) const = default;
};

class Catalog {
public:
  void add(const MicroserviceSpec& s);
  const MicroserviceSpec* find(const std::string& microservice) const;
  const std::vector<MicroserviceSpec>& specs() const { return m_specs; }

private:
  std::vector<MicroserviceSpec> m_specs;
};

/** @brief Resource pool of one compute host. */
struct NodeResources {
  std::uint64_t initial = 0;
  std::uint64_t available = 0;
  SpeedFactor speed;

  double capacityPct() const
  {
    return initial == 0 ? 0.0 : 100.0 * static_cast<double>(available) / static_cast<double>(initial);
  }
};

/// Occupy s.demand units if available; returns false (rejection) otherwise.
bool admit(NodeResources& r, const MicroserviceSpec& s);

/// Return s.demand units; throws DoubleReleaseError if that would exceed initial.
void release(NodeResources& r, const MicroserviceSpec& s);

/// Wall-clock execution duration of s on r (= execTicks of the base duration).
Tick execDuration(const MicroserviceSpec& s, const NodeResources& r);

/** @brief One running (or suspended) microservice execution. */
struct Instance {
  std::uint64_t id = 0;
  std::string microservice;
  std::string request_name;     // canonical request it serves
  Tick base_work = 0;           // total reference work
  Tick remaining_work = 0;      // reference work still to do
  Tick started_at = 0;          // when the current host (re)started it
  bool adhoc_response = false;
};

/// Work performed since started_at, subtracted from remaining_work. Used when an
/// execution is suspended mid-flight (fog handover). Exact: resuming elsewhere
/// and finishing always sums to base_work. A suspended instance keeps at least
/// one tick of remaining work, so a handover transfer is never empty.
void suspendInstance(Instance& inst, Tick now, SpeedFactor hostSpeed);

/// Wall ticks the instance needs on a host of speed f to finish.
Tick remainingExecTicks(const Instance& inst, SpeedFactor f);

} // namespace foggyedge

#endif // FOGGYEDGE_COMPUTE_HPP
