#include "foggyedge/engine.hpp"

#include <cmath>

namespace foggyedge {

std::uint64_t EventQueue::schedule(Tick at, EventKind kind, std::uint32_t target, Handler fn)
{
  if (at < m_now)
    throw TimeTravelError("event scheduled at " + std::to_string(at) + " before now " +
                          std::to_string(m_now));
  std::uint64_t seq = m_nextSeq++;
  m_heap.push(Entry{at, seq, kind, target, std::move(fn)});
  ++m_scheduled;
  return seq;
}

bool EventQueue::runOne()
{
  if (m_heap.empty())
    return false;
  Entry e = m_heap.top();
  m_heap.pop();
  m_now = e.time;
  e.fn();
  return true;
}

Tick EventQueue::nextTime() const
{
  if (m_heap.empty())
    return std::numeric_limits<Tick>::max();
  return m_heap.top().time;
}

Tick transferTicks(const LinkParams& link, std::uint64_t bytes)
{
  std::uint64_t bw = link.bandwidth_Bps == 0 ? 1 : link.bandwidth_Bps;
  unsigned __int128 t = (static_cast<unsigned __int128>(bytes) * TICKS_PER_SEC + bw - 1) / bw;
  return link.latency + static_cast<Tick>(t);
}

double timeInRangeSeconds(const VehicleKinematics& kin, double center_m, double radius_m, Tick now)
{
  double rel = kin.positionAt(now) - center_m;
  double v = kin.speed_mps * kin.direction;
  if (v == 0.0)
    return std::numeric_limits<double>::infinity();
  // Exit happens at the boundary in the direction of travel.
  double exitAt = v > 0 ? radius_m : -radius_m;
  return (exitAt - rel) / v;
}

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStreams::RngStreams(std::uint64_t seed)
  : request_times(splitmix64(seed ^ 0x72657175ULL))
  , service_choice(splitmix64(seed ^ 0x73657276ULL))
  , vins(splitmix64(seed ^ 0x76696e73ULL))
  , nonces(splitmix64(seed ^ 0x6e6f6e63ULL))
  , mobility(splitmix64(seed ^ 0x6d6f6269ULL))
  , parking(splitmix64(seed ^ 0x7061726bULL))
{
}

double expIntervalSeconds(std::mt19937_64& rng, double rate_per_sec)
{
  // 53 uniform bits -> u in [0, 1); inverse CDF of Exp(rate).
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return -std::log1p(-u) / rate_per_sec;
}

double uniformDouble(std::mt19937_64& rng, double lo, double hi)
{
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::uint64_t uniformIndex(std::mt19937_64& rng, std::uint64_t n)
{
  // Rejection sampling keeps the choice unbiased for any n.
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::string randomVin(std::mt19937_64& rng)
{
  static constexpr char ALPHABET[] = "0123456789ABCDEFGHJKLMNPRSTUVWXYZ"; // no I, O, Q
  static constexpr std::uint64_t N = sizeof(ALPHABET) - 1;
  std::string vin(17, '0');
  for (char& c : vin)
    c = ALPHABET[uniformIndex(rng, N)];
  return vin;
}

} // namespace foggyedge
