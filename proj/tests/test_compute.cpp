#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foggyedge/compute.hpp"

#include <random>
#include <vector>

using namespace foggyedge;

TEST_CASE("SpeedFactor::fromDouble yields exact small rationals")
{
  CHECK(SpeedFactor::fromDouble(1.0) == SpeedFactor{1, 1});
  CHECK(SpeedFactor::fromDouble(0.8) == SpeedFactor{4, 5});
  CHECK(SpeedFactor::fromDouble(4.0) == SpeedFactor{4, 1});
  CHECK(SpeedFactor::fromDouble(2.5) == SpeedFactor{5, 2});
  CHECK(SpeedFactor::fromDouble(0.5) == SpeedFactor{1, 2});
  CHECK(SpeedFactor::fromDouble(1.25) == SpeedFactor{5, 4});
}

TEST_CASE("execTicks is the ceiling, workDone the floor")
{
  SpeedFactor slow{4, 5}; // 0.8x: 5 wall ticks per 4 work ticks
  CHECK(execTicks(4, slow) == 5);
  CHECK(execTicks(1, slow) == 2);  // ceil(5/4)
  CHECK(execTicks(0, slow) == 0);
  CHECK(workDone(5, slow) == 4);
  CHECK(workDone(4, slow) == 3);   // floor(16/5)
  CHECK(workDone(0, slow) == 0);

  SpeedFactor fast{4, 1}; // 4x
  CHECK(execTicks(8, fast) == 2);
  CHECK(execTicks(9, fast) == 3);  // ceil(9/4)
  CHECK(workDone(2, fast) == 8);
  CHECK(workDone(3, fast) == 12);
}

TEST_CASE("property: a run of execTicks always completes the work")
{
  std::mt19937_64 rng(31);
  for (int i = 0; i < 5000; ++i) {
    Tick work = static_cast<Tick>(1 + rng() % 10000000);
    SpeedFactor f{static_cast<std::uint32_t>(1 + rng() % 16),
                  static_cast<std::uint32_t>(1 + rng() % 16)};
    Tick wall = execTicks(work, f);
    CHECK(workDone(wall, f) >= work);         // finished by then...
    if (wall > 0)
      CHECK(workDone(wall - 1, f) < work);    // ...and not a tick earlier
  }
}

TEST_CASE("catalog finds by microservice component")
{
  Catalog c;
  c.add(MicroserviceSpec{"alpha", 100, 50000, 1024, false, 1000000});
  c.add(MicroserviceSpec{"beta", 200, 80000, 2048, true, 1000000});
  REQUIRE(c.find("beta") != nullptr);
  CHECK(c.find("beta")->demand == 200);
  CHECK(c.find("gamma") == nullptr);
  CHECK(c.specs().size() == 2);
}

TEST_CASE("admit and release conserve the pool")
{
  NodeResources r{600, 600, SpeedFactor{1, 1}};
  MicroserviceSpec big{"big", 500, 1000, 0, false, 0};
  MicroserviceSpec small{"small", 200, 1000, 0, false, 0};

  CHECK(admit(r, big));
  CHECK(r.available == 100);
  CHECK(!admit(r, small)); // 200 > 100: rejected, pool untouched
  CHECK(r.available == 100);
  release(r, big);
  CHECK(r.available == 600);
  CHECK(admit(r, small));
  release(r, small);
  CHECK(r.available == r.initial);
}

TEST_CASE("release beyond initial throws")
{
  NodeResources r{600, 600, SpeedFactor{1, 1}};
  MicroserviceSpec s{"s", 100, 1000, 0, false, 0};
  CHECK_THROWS_AS(release(r, s), DoubleReleaseError);
}

TEST_CASE("property: interleaved admits and releases restore the pool")
{
  // catalog mirroring the default scenario's demand spread
  std::vector<MicroserviceSpec> specs{
    {"a", 50, 1000, 0, false, 0},  {"b", 100, 1000, 0, false, 0},
    {"c", 200, 1000, 0, false, 0}, {"d", 350, 1000, 0, false, 0},
    {"e", 500, 1000, 0, false, 0},
  };
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    NodeResources r{700, 700, SpeedFactor{1, 1}};
    std::vector<const MicroserviceSpec*> held;
    for (int step = 0; step < 100; ++step) {
      if (held.empty() || rng() % 2 == 0) {
        const MicroserviceSpec& s = specs[rng() % specs.size()];
        if (admit(r, s))
          held.push_back(&s);
      }
      else {
        std::size_t k = rng() % held.size();
        release(r, *held[k]);
        held.erase(held.begin() + static_cast<std::ptrdiff_t>(k));
      }
      CHECK(r.available <= r.initial);
    }
    for (const MicroserviceSpec* s : held)
      release(r, *s);
    CHECK(r.available == r.initial);
  }
}

TEST_CASE("execDuration uses the host speed")
{
  MicroserviceSpec s{"s", 100, 300000, 0, false, 0};
  NodeResources edge{600, 600, SpeedFactor{1, 1}};
  NodeResources fog{400, 400, SpeedFactor{4, 5}};
  NodeResources cloud{100000, 100000, SpeedFactor{4, 1}};
  CHECK(execDuration(s, edge) == 300000);
  CHECK(execDuration(s, fog) == 375000);  // 300000 * 5/4
  CHECK(execDuration(s, cloud) == 75000); // 300000 / 4
}

TEST_CASE("suspend mid-run conserves work exactly")
{
  Instance inst;
  inst.base_work = 1000000;
  inst.remaining_work = 1000000;
  inst.started_at = 5000;
  SpeedFactor f{4, 5};

  suspendInstance(inst, 5000 + 500000, f); // 0.5 s at 0.8x -> 400000 work done
  CHECK(inst.remaining_work == 600000);

  // resume on a faster host and suspend again
  inst.started_at = 2000000;
  suspendInstance(inst, 2000000 + 100000, SpeedFactor{4, 1}); // 400000 more
  CHECK(inst.remaining_work == 200000);

  CHECK(remainingExecTicks(inst, SpeedFactor{1, 1}) == 200000);
  CHECK(remainingExecTicks(inst, SpeedFactor{4, 5}) == 250000);
}

TEST_CASE("suspend always leaves at least one tick of work")
{
  Instance inst;
  inst.base_work = 100;
  inst.remaining_work = 100;
  inst.started_at = 0;
  // suspend exactly at (or even past) the completion boundary
  suspendInstance(inst, 100, SpeedFactor{1, 1});
  CHECK(inst.remaining_work == 1);
  Instance inst2;
  inst2.base_work = 100;
  inst2.remaining_work = 100;
  inst2.started_at = 0;
  suspendInstance(inst2, 10000, SpeedFactor{1, 1});
  CHECK(inst2.remaining_work == 1);
}

TEST_CASE("property: random handover chains sum to exactly the base work")
{
  std::mt19937_64 rng(41);
  std::vector<SpeedFactor> speeds{{1, 1}, {4, 5}, {4, 1}, {5, 2}, {2, 3}};
  for (int trial = 0; trial < 2000; ++trial) {
    Tick base = static_cast<Tick>(1 + rng() % 5000000);
    Instance inst;
    inst.base_work = base;
    inst.remaining_work = base;
    Tick accounted = 0;
    Tick now = static_cast<Tick>(rng() % 1000);

    int hops = static_cast<int>(1 + rng() % 5);
    for (int h = 0; h < hops; ++h) {
      SpeedFactor f = speeds[rng() % speeds.size()];
      inst.started_at = now;
      Tick full = remainingExecTicks(inst, f);
      if (h == hops - 1 || full <= 1) {
        // run to completion
        now += full;
        accounted += inst.remaining_work;
        inst.remaining_work = 0;
        break;
      }
      Tick slice = static_cast<Tick>(1 + rng() % static_cast<std::uint64_t>(full));
      Tick before = inst.remaining_work;
      suspendInstance(inst, now + slice, f);
      now += slice + static_cast<Tick>(rng() % 100000); // transfer delay
      accounted += before - inst.remaining_work;
      CHECK(inst.remaining_work >= 1);
    }
    if (inst.remaining_work > 0) { // loop exhausted hops without completing
      accounted += inst.remaining_work;
      inst.remaining_work = 0;
    }
    CHECK(accounted == base);
  }
}
