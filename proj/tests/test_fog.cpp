// Unit tests for the fog-cluster tables and policies: the gateway's
// resource-allocation table (slot admission, reservations, handover moves)
// and the pure selection functions for dispatch, handover, and bridge-side
// fog-cluster choice.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "foggyedge/engine.hpp"
#include "foggyedge/fog.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace foggyedge;

namespace {

// Admit with defaults that keep single-policy tests focused on one dimension.
std::uint32_t mustAdmit(VfRat& rat, const std::string& vin, std::uint64_t resources,
                        Tick est_departure, std::uint32_t node = 1)
{
  auto slot = rat.admit(vin, node, resources, est_departure);
  REQUIRE(slot.has_value());
  return *slot;
}

} // namespace

// ---------------------------------------------------------------------------
// Admission
// ---------------------------------------------------------------------------

TEST_CASE("admit assigns the lowest free slot and initializes the entry")
{
  VfRat rat(4);
  CHECK(mustAdmit(rat, "VINA", 500, 1000, 11) == 0);
  CHECK(mustAdmit(rat, "VINB", 600, 2000, 12) == 1);
  CHECK(mustAdmit(rat, "VINC", 700, 3000, 13) == 2);

  const VfRatEntry* e = rat.find(1);
  REQUIRE(e != nullptr);
  CHECK(e->vin == "VINB");
  CHECK(e->node == 12);
  CHECK(e->slot == 1);
  CHECK(e->initial == 600);
  CHECK(e->available == 600); // nothing reserved yet
  CHECK(e->est_departure == 2000);
  CHECK_FALSE(e->departing);
  CHECK(e->running.empty());
}

TEST_CASE("admit reuses a vacated slot before opening a higher one")
{
  VfRat rat(4);
  mustAdmit(rat, "A", 100, 1);
  mustAdmit(rat, "B", 100, 1);
  mustAdmit(rat, "C", 100, 1);
  rat.erase(1);
  CHECK(rat.size() == 2);
  CHECK(mustAdmit(rat, "D", 100, 1) == 1); // the gap, not slot 3
  CHECK(mustAdmit(rat, "E", 100, 1) == 3);
}

TEST_CASE("admit refuses when the lot is full")
{
  VfRat rat(2);
  mustAdmit(rat, "A", 100, 1);
  mustAdmit(rat, "B", 100, 1);
  CHECK(rat.full());
  CHECK_FALSE(rat.admit("C", 3, 100, 1).has_value());
  CHECK(rat.size() == 2);
}

TEST_CASE("findByVin locates the entry, find returns nullptr on unknown slot")
{
  VfRat rat(4);
  mustAdmit(rat, "AAA", 100, 1);
  mustAdmit(rat, "BBB", 100, 1);
  REQUIRE(rat.findByVin("BBB") != nullptr);
  CHECK(rat.findByVin("BBB")->slot == 1);
  CHECK(rat.findByVin("ZZZ") == nullptr);
  CHECK(rat.find(99) == nullptr);
}

// ---------------------------------------------------------------------------
// Reservations
// ---------------------------------------------------------------------------

TEST_CASE("reserve and release keep the availability ledger balanced")
{
  VfRat rat(2);
  std::uint32_t s = mustAdmit(rat, "A", 500, 1000);

  rat.reserve(s, "req1", 200);
  rat.reserve(s, "req2", 100);
  CHECK(rat.find(s)->available == 200);
  CHECK(rat.find(s)->running == std::set<std::string>{"req1", "req2"});

  rat.release(s, "req1", 200);
  CHECK(rat.find(s)->available == 400);
  CHECK(rat.find(s)->running == std::set<std::string>{"req2"});

  rat.release(s, "req2", 100);
  CHECK(rat.find(s)->available == 500);
  rat.checkConsistent();
}

TEST_CASE("reserve rejects over-commitment and unknown slots")
{
  VfRat rat(2);
  std::uint32_t s = mustAdmit(rat, "A", 100, 1000);
  CHECK_THROWS_AS(rat.reserve(s, "big", 101), InvariantViolation);
  CHECK_THROWS_AS(rat.reserve(77, "x", 1), InvariantViolation);
  CHECK(rat.find(s)->available == 100); // failed reserve left no trace
}

TEST_CASE("release tolerates a retired slot and an already-moved reservation")
{
  VfRat rat(2);
  std::uint32_t s = mustAdmit(rat, "A", 500, 1000);
  rat.reserve(s, "req1", 200);

  // Result lands after the vehicle drove off: the slot is gone, nothing to do.
  rat.erase(s);
  CHECK_NOTHROW(rat.release(s, "req1", 200));

  // A reservation that was handed over already left this slot: releasing a
  // name that is not running here must not inflate availability.
  std::uint32_t t = mustAdmit(rat, "B", 300, 1000);
  CHECK_NOTHROW(rat.release(t, "ghost", 250));
  CHECK(rat.find(t)->available == 300);
}

TEST_CASE("release that would exceed the advertised resources throws")
{
  VfRat rat(2);
  std::uint32_t s = mustAdmit(rat, "A", 500, 1000);
  rat.reserve(s, "req1", 100);
  CHECK_THROWS_AS(rat.release(s, "req1", 200), InvariantViolation);
}

TEST_CASE("move transfers a reservation between slots")
{
  VfRat rat(4);
  std::uint32_t from = mustAdmit(rat, "A", 500, 1000);
  std::uint32_t to = mustAdmit(rat, "B", 400, 2000);
  rat.reserve(from, "req1", 150);

  rat.move(from, to, "req1", 150);
  CHECK(rat.find(from)->available == 500);
  CHECK(rat.find(from)->running.empty());
  CHECK(rat.find(to)->available == 250);
  CHECK(rat.find(to)->running == std::set<std::string>{"req1"});
  rat.checkConsistent();
}

TEST_CASE("checkConsistent flags a corrupted entry")
{
  VfRat rat(2);
  std::uint32_t s = mustAdmit(rat, "A", 100, 1000);
  rat.checkConsistent(); // healthy table passes
  rat.find(s)->available = 101;
  CHECK_THROWS_AS(rat.checkConsistent(), InvariantViolation);
}

// ---------------------------------------------------------------------------
// Dispatch policy
// ---------------------------------------------------------------------------

TEST_CASE("pickDispatchSlot prefers the vehicle parked the longest")
{
  // Two vehicles can both host the instance; the one staying until 3600s is
  // the safer host than the one leaving at 600s.
  VfRat rat(4);
  std::uint32_t early = mustAdmit(rat, "EARLY", 500, 600 * TICKS_PER_SEC);
  std::uint32_t late = mustAdmit(rat, "LATE", 500, 3600 * TICKS_PER_SEC);
  (void)early;
  auto pick = pickDispatchSlot(rat, 200, 0, 120 * TICKS_PER_SEC);
  REQUIRE(pick.has_value());
  CHECK(*pick == late);
}

TEST_CASE("pickDispatchSlot eligibility gates")
{
  VfRat rat(4);
  std::uint32_t s = mustAdmit(rat, "A", 500, 1000);

  SUBCASE("a departing vehicle takes no new work")
  {
    rat.find(s)->departing = true;
    CHECK_FALSE(pickDispatchSlot(rat, 100, 0, 10).has_value());
  }
  SUBCASE("insufficient available resources")
  {
    rat.reserve(s, "busy", 450);
    CHECK_FALSE(pickDispatchSlot(rat, 100, 0, 10).has_value());
  }
  SUBCASE("the stay must cover the whole execution")
  {
    CHECK_FALSE(pickDispatchSlot(rat, 100, 0, 1001).has_value());
    CHECK(pickDispatchSlot(rat, 100, 0, 1000).has_value()); // exact fit counts
    CHECK_FALSE(pickDispatchSlot(rat, 100, 500, 501).has_value());
  }
  SUBCASE("empty table")
  {
    rat.erase(s);
    CHECK_FALSE(pickDispatchSlot(rat, 1, 0, 1).has_value());
  }
}

TEST_CASE("pickDispatchSlot tie-breaks by availability, then lowest slot")
{
  VfRat rat(8);
  mustAdmit(rat, "A", 300, 5000); // slot 0
  mustAdmit(rat, "B", 400, 5000); // slot 1: same departure, more available
  CHECK(pickDispatchSlot(rat, 100, 0, 10) == 1);

  VfRat tie(8);
  mustAdmit(tie, "A", 400, 5000); // slot 0
  mustAdmit(tie, "B", 400, 5000); // slot 1: full tie
  CHECK(pickDispatchSlot(tie, 100, 0, 10) == 0);
}

TEST_CASE("pickDispatchSlot compares current availability, not initial")
{
  VfRat rat(4);
  std::uint32_t a = mustAdmit(rat, "A", 600, 5000);
  std::uint32_t b = mustAdmit(rat, "B", 500, 5000);
  rat.reserve(a, "busy", 300); // a now has 300 available, b has 500
  auto pick = pickDispatchSlot(rat, 100, 0, 10);
  REQUIRE(pick.has_value());
  CHECK(*pick == b);
}

// ---------------------------------------------------------------------------
// Handover policy
// ---------------------------------------------------------------------------

TEST_CASE("pickHandoverSlot never picks the departing slot itself")
{
  VfRat rat(4);
  std::uint32_t leaving = mustAdmit(rat, "LEAVING", 900, 9000);
  std::uint32_t target = mustAdmit(rat, "TARGET", 300, 5000);
  // The departing vehicle would win every preference test; it is excluded.
  auto pick = pickHandoverSlot(rat, leaving, 100, 0, 10);
  REQUIRE(pick.has_value());
  CHECK(*pick == target);
}

TEST_CASE("pickHandoverSlot applies the same eligibility and preference rules")
{
  VfRat rat(8);
  std::uint32_t leaving = mustAdmit(rat, "LEAVING", 900, 9000);
  mustAdmit(rat, "SHORT", 500, 200);   // leaves too soon for the remaining work
  std::uint32_t best = mustAdmit(rat, "LONG", 500, 8000);
  mustAdmit(rat, "POOR", 50, 8000);    // not enough resources

  auto pick = pickHandoverSlot(rat, leaving, 100, 0, 300);
  REQUIRE(pick.has_value());
  CHECK(*pick == best);

  // Nobody else fits: the instance has no fog target left.
  CHECK_FALSE(pickHandoverSlot(rat, leaving, 600, 0, 300).has_value());
}

// ---------------------------------------------------------------------------
// Fog-cluster choice at the bridge
// ---------------------------------------------------------------------------

TEST_CASE("selectFogFace picks the least loaded cluster, lowest face on ties")
{
  CHECK(selectFogFace({{5, 3}, {7, 1}, {9, 2}}) == 7);
  CHECK(selectFogFace({{9, 2}, {5, 2}, {7, 2}}) == 5); // tie -> lowest face id
  CHECK(selectFogFace({{4, 0}}) == 4);
  CHECK_THROWS_AS(selectFogFace({}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Conservation property
// ---------------------------------------------------------------------------

TEST_CASE("property: random reserve/release/move sequences conserve resources")
{
  std::mt19937_64 rng(77001);
  for (int trial = 0; trial < 100; ++trial) {
    VfRat rat(6);
    std::vector<std::uint32_t> slots;
    for (int v = 0; v < 4; ++v)
      slots.push_back(mustAdmit(rat, "VIN" + std::to_string(v),
                                300 + rng() % 300, 1000000));

    // name -> (slot, demand) for every live reservation
    std::map<std::string, std::pair<std::uint32_t, std::uint64_t>> live;
    int next_name = 0;

    for (int step = 0; step < 120; ++step) {
      int op = static_cast<int>(rng() % 3);
      if (op == 0) { // reserve somewhere it fits
        std::uint64_t demand = 20 + rng() % 150;
        std::uint32_t s = slots[rng() % slots.size()];
        if (rat.find(s)->available < demand)
          continue;
        std::string name = "r" + std::to_string(next_name++);
        rat.reserve(s, name, demand);
        live[name] = {s, demand};
      }
      else if (op == 1 && !live.empty()) { // release a random live one
        auto it = live.begin();
        std::advance(it, static_cast<long>(rng() % live.size()));
        rat.release(it->second.first, it->first, it->second.second);
        live.erase(it);
      }
      else if (op == 2 && !live.empty()) { // move a random live one
        auto it = live.begin();
        std::advance(it, static_cast<long>(rng() % live.size()));
        std::uint32_t to = slots[rng() % slots.size()];
        if (to == it->second.first || rat.find(to)->available < it->second.second)
          continue;
        rat.move(it->second.first, to, it->first, it->second.second);
        it->second.first = to;
      }
      rat.checkConsistent();
    }

    // Ledger check: what is missing from each vehicle is exactly the sum of
    // the reservations currently parked on it.
    for (std::uint32_t s : slots) {
      std::uint64_t reserved = 0;
      for (const auto& [name, where] : live)
        if (where.first == s)
          reserved += where.second;
      CHECK(rat.find(s)->initial == rat.find(s)->available + reserved);
      CHECK(rat.find(s)->running.size() ==
            static_cast<std::size_t>(std::count_if(live.begin(), live.end(),
              [s](const auto& kv) { return kv.second.first == s; })));
    }
  }
}
