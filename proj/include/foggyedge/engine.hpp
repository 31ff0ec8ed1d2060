#ifndef FOGGYEDGE_ENGINE_HPP
#define FOGGYEDGE_ENGINE_HPP

#include "foggyedge/packet.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace foggyedge {

constexpr Tick TICKS_PER_SEC = 1'000'000;

inline Tick secondsToTicks(double s)
{
  return static_cast<Tick>(std::llround(s * TICKS_PER_SEC));
}

inline double ticksToSeconds(Tick t)
{
  return static_cast<double>(t) / TICKS_PER_SEC;
}

class TimeTravelError : public std::runtime_error {
public:
  explicit TimeTravelError(const std::string& what)
    : std::runtime_error(what) {}
};

class InvariantViolation : public std::runtime_error {
public:
  explicit InvariantViolation(const std::string& what)
    : std::runtime_error(what) {}
};

enum class EventKind : std::uint8_t {
  PacketArrival,
  ExecComplete,
  TimerExpiry,
  MobilityUpdate,
  RequestGeneration,
};

/** @brief Deterministic discrete-event queue.
 *
 * Events fire in (time, seq) order; seq is the global insertion counter, so
 * same-tick events run exactly in the order they were scheduled. Scheduling
 * into the past throws TimeTravelError.
 */
class EventQueue {
public:
  using Handler = std::function<void()>;

  std::uint64_t schedule(Tick at, EventKind kind, std::uint32_t target, Handler fn);

  /// Pop and run the next event; returns false when the queue is empty.
  bool runOne();

  bool empty() const { return m_heap.empty(); }
  Tick now() const { return m_now; }
  Tick nextTime() const;
  std::size_t scheduledCount() const { return m_scheduled; }

private:
  struct Entry {
    Tick time;
    std::uint64_t seq;
    EventKind kind;
    std::uint32_t target;
    Handler fn;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const
    {
      if (a.time != b.time)
        return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> m_heap;
  Tick m_now = 0;
  std::uint64_t m_nextSeq = 0;
  std::size_t m_scheduled = 0;
};

/** @brief Point-to-point or broadcast link parameters. */
struct LinkParams {
  Tick latency = 0;                 // propagation + processing, ticks
  std::uint64_t bandwidth_Bps = 1;  // bytes per second
  double range_m = 0;               // reception radius (ad-hoc links only)
};

/// Ticks from transmit to delivery: latency + transmit time, where the transmit
/// time is ceil(bytes * TICKS_PER_SEC / bandwidth) -- integer exact.
Tick transferTicks(const LinkParams& link, std::uint64_t bytes);

/** @brief Straight-road kinematic state, linearly extrapolated from as_of. */
struct VehicleKinematics {
  double position_m = 0;
  double speed_mps = 0;
  int direction = 1; // +1 toward increasing x
  Tick as_of = 0;

  double positionAt(Tick t) const
  {
    return position_m + speed_mps * direction * ticksToSeconds(t - as_of);
  }
};

/// Seconds until the vehicle leaves the disc of `radius_m` around `center_m`,
/// evaluated at `now`. Infinity when stationary. Precondition: currently inside.
double timeInRangeSeconds(const VehicleKinematics& kin, double center_m, double radius_m, Tick now);

/// splitmix64seed mixer used to derive independent sub-streams from one seed.
std::uint64_t splitmix64(std::uint64_t x);

/** @brief Named RNG sub-streams, all derived from the scenario seed.
 *
 * Each consumer of randomness draws from its own stream, so adding a metric or
 * reordering unrelated lookups can never perturb the generated traffic.
 */
struct RngStreams {
  explicit RngStreams(std::uint64_t seed);

  std::mt19937_64 request_times;
  std::mt19937_64 service_choice;
  std::mt19937_64 vins;
  std::mt19937_64 nonces;
  std::mt19937_64 mobility;
  std::mt19937_64 parking;
};

/// Exponential inter-arrival interval in seconds, via inverse CDF on one raw
/// 64-bit draw (bit-portable across platforms, unlike std::exponential_distribution).
double expIntervalSeconds(std::mt19937_64& rng, double rate_per_sec);

/// Uniform double in [lo, hi) from one raw draw.
double uniformDouble(std::mt19937_64& rng, double lo, double hi);

/// Uniform integer in [0, n).
std::uint64_t uniformIndex(std::mt19937_64& rng, std::uint64_t n);

/// Random VIN: 17 chars, uppercase alphanumeric excluding I, O, Q.
std::string randomVin(std::mt19937_64& rng);

} // namespace foggyedge

#endif // FOGGYEDGE_ENGINE_HPP
