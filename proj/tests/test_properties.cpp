#include <doctest.h>

#include <algorithm>

#include "property_checks.hpp"
#include "qnet/simulation.hpp"

using namespace qnet;
using namespace qnet::checks;

TEST_CASE("random networks keep every engine invariant") {
  const auto violations = check_random_networks(50, 150.0);
  for (const auto& e : violations.examples()) MESSAGE(e);
  for (const auto& p : kProperties) {
    CAPTURE(p);
    CHECK(violations.count(p) == 0);
  }
  CHECK(violations.total() == 0);
}

TEST_CASE("random networks are not degenerate") {
  std::size_t multi_node = 0;
  std::size_t multi_class = 0;
  std::size_t scheduled = 0;
  std::size_t finite = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto network = validate(random_network(seed));
    multi_node += network.number_of_nodes() > 1 ? 1 : 0;
    multi_class += network.number_of_classes() > 1 ? 1 : 0;
    for (const auto& c : network.centres()) {
      scheduled += c.schedule() ? 1 : 0;
      finite += c.queue_capacity ? 1 : 0;
    }
  }
  CHECK(multi_node >= 10);
  CHECK(multi_class >= 10);
  CHECK(scheduled >= 5);
  CHECK(finite >= 10);
}

TEST_CASE("online deadlock detection matches a brute-force oracle") {
  constexpr double kLimit = 4.0;
  std::size_t deadlocked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    const auto network = validate(random_deadlock_network(seed));
    Simulation sim(network, seed, true);
    const auto detected = sim.simulate_until_deadlock(kLimit);
    const auto oracle = brute_force_deadlock(network, seed, kLimit);
    REQUIRE(detected.has_value() == oracle.has_value());
    if (!detected) continue;
    ++deadlocked;
    CHECK(*detected == *oracle);

    // The reported cycle is made of blocked servers, each waiting on the
    // next one's node.
    const auto& cycle = sim.deadlock()->cycle;
    REQUIRE_FALSE(cycle.empty());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const auto view = sim.node_view(cycle[i].node - 1);
      const auto server = std::find_if(view.servers.begin(), view.servers.end(),
                                       [&](const ServerView& s) { return s.id == cycle[i].server; });
      REQUIRE(server != view.servers.end());
      CHECK(server->blocked);
      CHECK(server->destination == cycle[(i + 1) % cycle.size()].node);
    }
  }
  CHECK(deadlocked >= 20);
  CHECK(deadlocked < 100);
}

TEST_CASE("engine waits follow the Lindley recurrence") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CAPTURE(seed);
    CHECK(lindley_max_difference(seed, 3000, 3.0, 5.0) < 1e-9);
  }
}
