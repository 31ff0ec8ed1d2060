#include "foggyedge/compute.hpp"

#include <cmath>
#include <numeric>

namespace foggyedge {

SpeedFactor SpeedFactor::fromDouble(double f)
{
  if (!(f > 0.0) || f > 1e6)
    throw std::invalid_argument("speed factor out of range");
  // Decimal factors up to 6 fractional digits become exact rationals.
  std::uint64_t den = 1;
  double scaled = f;
  for (int i = 0; i < 6 && std::abs(scaled - std::round(scaled)) > 1e-9; ++i) {
    scaled *= 10.0;
    den *= 10;
  }
  std::uint64_t num = static_cast<std::uint64_t>(std::llround(scaled));
  if (num == 0)
    throw std::invalid_argument("speed factor too small");
  std::uint64_t g = std::gcd(num, den);
  return SpeedFactor{static_cast<std::uint32_t>(num / g), static_cast<std::uint32_t>(den / g)};
}

Tick execTicks(Tick work, SpeedFactor f)
{
  if (work <= 0)
    return 0;
  unsigned __int128 w = static_cast<unsigned __int128>(work);
  unsigned __int128 t = (w * f.den + f.num - 1) / f.num;
  return static_cast<Tick>(t);
}

Tick workDone(Tick elapsed, SpeedFactor f)
{
  if (elapsed <= 0)
    return 0;
  unsigned __int128 e = static_cast<unsigned __int128>(elapsed);
  return static_cast<Tick>(e * f.num / f.den);
}

void Catalog::add(const MicroserviceSpec& s)
{
  m_specs.push_back(s);
}

const MicroserviceSpec* Catalog::find(const std::string& microservice) const
{
  for (const MicroserviceSpec& s : m_specs)
    if (s.microservice == microservice)
      return &s;
  return nullptr;
}

bool admit(NodeResources& r, const MicroserviceSpec& s)
{
  if (r.available < s.demand)
    return false;
  r.available -= s.demand;
  return true;
}

void release(NodeResources& r, const MicroserviceSpec& s)
{
  if (r.available + s.demand > r.initial)
    throw DoubleReleaseError("release of " + s.microservice + " exceeds initial capacity");
  r.available += s.demand;
}

Tick execDuration(const MicroserviceSpec& s, const NodeResources& r)
{
  return execTicks(s.base_duration, r.speed);
}

void suspendInstance(Instance& inst, Tick now, SpeedFactor hostSpeed)
{
  Tick done = workDone(now - inst.started_at, hostSpeed);
  // a suspended instance always keeps at least one tick of work: completion is
  // the completion event's business, and every transfer carries nonzero work
  if (done > inst.remaining_work - 1)
    done = inst.remaining_work - 1;
  if (done < 0)
    done = 0;
  inst.remaining_work -= done;
}

Tick remainingExecTicks(const Instance& inst, SpeedFactor f)
{
  return execTicks(inst.remaining_work, f);
}

} // namespace foggyedge
