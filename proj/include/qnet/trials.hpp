#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qnet/network.hpp"
#include "qnet/records.hpp"
#include "qnet/simulation.hpp"

namespace qnet {

struct MaxTime {
  double max_time;
};
struct MaxCustomers {
  std::uint64_t n;
  CustomerCount mode;
};
struct UntilDeadlock {
  double time_limit = kNever;
};
using Termination = std::variant<MaxTime, MaxCustomers, UntilDeadlock>;

/// Trial k runs with seed base_seed + k.
struct TrialPlan {
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  Termination termination = MaxTime{1.0};
  /// Records with arrival_date <= warmup are left out of summaries.
  double warmup = 0.0;
  std::size_t workers = 1;
};

struct TrialResult {
  std::uint64_t seed = 0;
  double end_time = 0.0;
  Counters counters;
  std::uint64_t in_system = 0;
  /// Every completed service, warm-up included.
  std::vector<DataRecord> records;
  /// Post-warm-up summary.
  Summary summary;
  std::optional<DeadlockReport> deadlock;
};

/// Unweighted mean over trials of each per-trial mean; trials lacking a
/// value are skipped and `trials` counts those that contributed.
struct GrandStat {
  std::size_t trials = 0;
  std::optional<double> mean_wait;
  std::optional<double> mean_time_blocked;
  std::optional<double> mean_service_time;
};

struct GrandSummary {
  GrandStat overall;
  std::map<std::size_t, GrandStat> by_node;
  std::map<std::size_t, GrandStat> by_class;
  std::map<std::pair<std::size_t, std::size_t>, GrandStat> by_node_class;
};

struct TrialReport {
  /// Ordered by seed.
  std::vector<TrialResult> trials;
  GrandSummary grand;
};

/// Runs one seeded trial.
TrialResult run_trial(const Network& network, std::uint64_t seed, const TrialPlan& plan);

/// Runs every trial, `plan.workers` at a time. Output does not depend on the
/// worker count. The first failing trial's exception is rethrown.
TrialReport run_trials(const Network& network, const TrialPlan& plan);

GrandSummary grand_summary(const std::vector<TrialResult>& trials);

/// Summary document: per-trial and grand statistics.
std::string report_to_json(const TrialReport& report);

/// Writes <dir>/records_seed<k>.csv per trial and returns the paths.
std::vector<std::filesystem::path> emit_records(const TrialReport& report, const std::filesystem::path& dir);

}  // namespace qnet
