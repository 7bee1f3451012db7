#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnet/network.hpp"

namespace qnet::checks {

inline const std::vector<std::string> kProperties = {
    "chronology", "identities", "conservation", "capacity", "priority",
    "fifo",       "blocking",   "determinism",  "workers",  "csv"};

class Violations {
 public:
  void add(const std::string& property, const std::string& message);
  std::size_t count(const std::string& property) const;
  std::size_t total() const;
  const std::vector<std::string>& examples() const { return examples_; }

 private:
  std::map<std::string, std::size_t> counts_;
  std::vector<std::string> examples_;
};

/// 1-3 nodes, 1-2 classes, with a random mix of schedules, finite
/// capacities, priorities, batches, baulking and class changes.
NetworkConfig random_network(std::uint64_t seed);

/// Small cyclic networks with tight capacities, prone to deadlock.
NetworkConfig random_deadlock_network(std::uint64_t seed);

/// Runs one simulation event by event and checks every engine property on it.
void check_run(const Network& network, std::uint64_t seed, double max_time, Violations& out);

/// Compares a three-trial report computed with one worker and with three.
void check_worker_invariance(const Network& network, std::uint64_t seed, double max_time, Violations& out);

/// Runs `check_run` and `check_worker_invariance` on random_network(s) for
/// every seed in [0, seeds).
Violations check_random_networks(std::size_t seeds, double max_time);

/// First clock at which the engine state, rebuilt from node views after
/// every event, holds a blocked server that can never move again.
std::optional<double> brute_force_deadlock(const Network& network, std::uint64_t seed, double time_limit);

/// Largest gap between the engine's waits and the Lindley recurrence
/// W(n+1) = max(0, W(n) + S(n) - A(n+1)) on an M/M/1 queue, both fed the
/// same pre-drawn inter-arrival and service times.
double lindley_max_difference(std::uint64_t seed, std::size_t customers, double lambda, double mu);

}  // namespace qnet::checks
