#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foggyedge/engine.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

using namespace foggyedge;

TEST_CASE("events run in (time, seq) order with seq breaking ties")
{
  EventQueue q;
  std::vector<int> order;
  q.schedule(100, EventKind::TimerExpiry, 0, [&] { order.push_back(2); });
  q.schedule(50, EventKind::TimerExpiry, 0, [&] { order.push_back(1); });
  q.schedule(100, EventKind::TimerExpiry, 0, [&] { order.push_back(3); }); // same tick, later seq
  q.schedule(200, EventKind::TimerExpiry, 0, [&] { order.push_back(4); });
  while (q.runOne()) {
  }
  CHECK(order == std::vector<int>{1, 2, 3, 4});
  CHECK(q.now() == 200);
  CHECK(q.scheduledCount() == 4);
}

TEST_CASE("scheduling at the current time runs before the clock advances")
{
  EventQueue q;
  std::vector<std::string> order;
  q.schedule(100, EventKind::TimerExpiry, 0, [&] {
    order.push_back("a");
    q.schedule(100, EventKind::TimerExpiry, 0, [&] { order.push_back("a-follow"); });
  });
  q.schedule(150, EventKind::TimerExpiry, 0, [&] { order.push_back("b"); });
  while (q.runOne()) {
  }
  CHECK(order == std::vector<std::string>{"a", "a-follow", "b"});
}

TEST_CASE("scheduling into the past throws TimeTravelError")
{
  EventQueue q;
  bool threw = false;
  q.schedule(100, EventKind::TimerExpiry, 0, [&] {
    try {
      q.schedule(99, EventKind::TimerExpiry, 0, [] {});
    }
    catch (const TimeTravelError&) {
      threw = true;
    }
  });
  while (q.runOne()) {
  }
  CHECK(threw);
}

TEST_CASE("tick conversion")
{
  CHECK(TICKS_PER_SEC == 1'000'000);
  CHECK(secondsToTicks(1.0) == 1'000'000);
  CHECK(secondsToTicks(0.002) == 2'000);
  CHECK(secondsToTicks(0.0000005) == 1); // rounds, not truncates
  CHECK(ticksToSeconds(250'000) == doctest::Approx(0.25));
}

TEST_CASE("transferTicks = latency + ceil(bytes/bandwidth)")
{
  LinkParams adhoc{2000, 6'000'000, 150.0}; // 2 ms, 6 MB/s
  CHECK(transferTicks(adhoc, 0) == 2000);
  CHECK(transferTicks(adhoc, 6) == 2001);
  CHECK(transferTicks(adhoc, 1) == 2001);        // partial byte-time rounds up
  CHECK(transferTicks(adhoc, 6'000'000) == 1'002'000);
  CHECK(transferTicks(adhoc, 300) == 2050);

  LinkParams wired{5000, 100'000'000, 0.0};
  CHECK(transferTicks(wired, 100) == 5001);
  CHECK(transferTicks(wired, 1'000'000) == 15000);
}

TEST_CASE("kinematics extrapolate linearly")
{
  VehicleKinematics k{100.0, 15.0, 1, 2'000'000};
  CHECK(k.positionAt(2'000'000) == doctest::Approx(100.0));
  CHECK(k.positionAt(4'000'000) == doctest::Approx(130.0));
  VehicleKinematics back{100.0, 15.0, -1, 2'000'000};
  CHECK(back.positionAt(4'000'000) == doctest::Approx(70.0));
}

TEST_CASE("timeInRangeSeconds oracle")
{
  // Hand-computed: vehicle 50 m before the center moving toward it at 10 m/s,
  // radius 100 m -> it exits at relative +100 m, i.e. (50 + 100) / 10 = 15 s.
  VehicleKinematics k{250.0, 10.0, 1, 0};
  CHECK(timeInRangeSeconds(k, 300.0, 100.0, 0) == doctest::Approx(15.0));

  // moving away from the center: exit at (100 - 50) / 10 = 5 s
  VehicleKinematics away{250.0, 10.0, -1, 0};
  CHECK(timeInRangeSeconds(away, 300.0, 100.0, 0) == doctest::Approx(5.0));

  // stationary inside: never leaves
  VehicleKinematics still{250.0, 0.0, 1, 0};
  CHECK(std::isinf(timeInRangeSeconds(still, 300.0, 100.0, 0)));

  // evaluated later: the position has already advanced
  VehicleKinematics later{250.0, 10.0, 1, 0};
  CHECK(timeInRangeSeconds(later, 300.0, 100.0, 1'000'000) == doctest::Approx(14.0));
}

TEST_CASE("splitmix64 known vector")
{
  // Reference value of the standard splitmix64 mixer for input 0.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("rng sub-streams are independent of one another")
{
  RngStreams a(42);
  RngStreams b(42);
  // draining one stream must not perturb another
  for (int i = 0; i < 100; ++i)
    (void)a.request_times();
  CHECK(a.mobility() == b.mobility());
  CHECK(a.vins() == b.vins());

  RngStreams c(43);
  CHECK(c.request_times() != RngStreams(42).request_times());
}

TEST_CASE("expIntervalSeconds is deterministic with sane statistics")
{
  std::mt19937_64 r1(7), r2(7);
  for (int i = 0; i < 50; ++i)
    CHECK(expIntervalSeconds(r1, 2.0) == expIntervalSeconds(r2, 2.0));

  std::mt19937_64 rng(11);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double v = expIntervalSeconds(rng, 2.0);
    CHECK(v >= 0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02)); // mean 1/rate
}

TEST_CASE("uniformDouble and uniformIndex stay in bounds")
{
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10000; ++i) {
    double v = uniformDouble(rng, 10.0, 20.0);
    CHECK(v >= 10.0);
    CHECK(v < 20.0);
    std::uint64_t k = uniformIndex(rng, 5);
    CHECK(k < 5);
  }
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i)
    seen.insert(uniformIndex(rng, 5));
  CHECK(seen.size() == 5); // all buckets reachable
}

TEST_CASE("randomVin emits valid VINs and varies")
{
  std::mt19937_64 rng(17);
  std::set<std::string> vins;
  for (int i = 0; i < 200; ++i) {
    std::string v = randomVin(rng);
    REQUIRE(v.size() == 17);
    for (char c : v) {
      bool ok = (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z');
      CHECK(ok);
      CHECK(c != 'I');
      CHECK(c != 'O');
      CHECK(c != 'Q');
    }
    vins.insert(v);
  }
  CHECK(vins.size() == 200);
}
