#include "qnet/trials.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace qnet {

using json = nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_plan(const TrialPlan& plan) {
  if (plan.trials < 1) throw std::invalid_argument("number of trials must be >= 1");
  if (plan.workers < 1) throw std::invalid_argument("number of workers must be >= 1");
  if (!(plan.warmup >= 0.0)) throw std::invalid_argument("warm-up must be >= 0");
  if (const auto* t = std::get_if<MaxTime>(&plan.termination)) {
    if (!(t->max_time > 0.0)) throw std::invalid_argument("maximum time must be > 0");
    if (!(plan.warmup < t->max_time)) throw std::invalid_argument("warm-up must be shorter than the maximum time");
  }
  if (const auto* c = std::get_if<MaxCustomers>(&plan.termination); c && c->n < 1) {
    throw std::invalid_argument("maximum number of customers must be >= 1");
  }
}

struct GrandAccumulator {
  std::size_t trials = 0;
  double wait = 0.0;
  double blocked = 0.0;
  double service = 0.0;

  void add(const Stats& s) {
    if (s.count == 0) return;
    ++trials;
    wait += *s.mean_wait;
    blocked += *s.mean_time_blocked;
    service += *s.mean_service_time;
  }

  GrandStat finish() const {
    GrandStat g;
    g.trials = trials;
    if (trials > 0) {
      const auto n = static_cast<double>(trials);
      g.mean_wait = wait / n;
      g.mean_time_blocked = blocked / n;
      g.mean_service_time = service / n;
    }
    return g;
  }
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json stats_json(const Stats& s) {
  return {{"count", s.count},
          {"mean_wait", optional_number(s.mean_wait)},
          {"mean_time_blocked", optional_number(s.mean_time_blocked)},
          {"mean_service_time", optional_number(s.mean_service_time)}};
}

json grand_json(const GrandStat& g) {
  return {{"trials", g.trials},
          {"mean_wait", optional_number(g.mean_wait)},
          {"mean_time_blocked", optional_number(g.mean_time_blocked)},
          {"mean_service_time", optional_number(g.mean_service_time)}};
}

template <class Map, class ToJson>
json breakdown_json(const Map& by_node, const Map& by_class,
                    const std::map<std::pair<std::size_t, std::size_t>, typename Map::mapped_type>& by_node_class,
                    ToJson to_json) {
  json nodes = json::array();
  for (const auto& [node, s] : by_node) {
    json j = to_json(s);
    j["node"] = node;
    nodes.push_back(j);
  }
  json classes = json::array();
  for (const auto& [cls, s] : by_class) {
    json j = to_json(s);
    j["customer_class"] = cls;
    classes.push_back(j);
  }
  json pairs = json::array();
  for (const auto& [key, s] : by_node_class) {
    json j = to_json(s);
    j["node"] = key.first;
    j["customer_class"] = key.second;
    pairs.push_back(j);
  }
  return {{"by_node", nodes}, {"by_class", classes}, {"by_node_class", pairs}};
}

}  // namespace

TrialResult run_trial(const Network& network, std::uint64_t seed, const TrialPlan& plan) {
  const bool detect = std::holds_alternative<UntilDeadlock>(plan.termination);
  Simulation sim(network, seed, detect);
  std::visit(overloaded{
                 [&](const MaxTime& t) { sim.simulate_until_max_time(t.max_time); },
                 [&](const MaxCustomers& c) { sim.simulate_until_max_customers(c.n, c.mode); },
                 [&](const UntilDeadlock& d) { sim.simulate_until_deadlock(d.time_limit); },
             },
             plan.termination);

  TrialResult result;
  result.seed = seed;
  result.end_time = sim.clock();
  result.counters = sim.counters();
  result.in_system = sim.individuals_in_system();
  result.records = sim.get_all_records();
  result.deadlock = sim.deadlock();
  if (plan.warmup > 0.0) {
    RecordFilter after_warmup;
    after_warmup.min_arrival_date = plan.warmup;
    result.summary = summarize(filter(result.records, after_warmup));
  } else {
    result.summary = summarize(result.records);
  }
  return result;
}

TrialReport run_trials(const Network& network, const TrialPlan& plan) {
  check_plan(plan);
  TrialReport report;
  report.trials.resize(plan.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_trial = plan.trials;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < plan.trials; i = next++) {
      try {
        report.trials[i] = run_trial(network, plan.base_seed + i, plan);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_trial) {
          failed_trial = i;
          failure = std::current_exception();
        }
      }
    }
  };

  const std::size_t workers = std::min(plan.workers, plan.trials);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  report.grand = grand_summary(report.trials);
  return report;
}

GrandSummary grand_summary(const std::vector<TrialResult>& trials) {
  GrandAccumulator overall;
  std::map<std::size_t, GrandAccumulator> by_node;
  std::map<std::size_t, GrandAccumulator> by_class;
  std::map<std::pair<std::size_t, std::size_t>, GrandAccumulator> by_node_class;
  for (const auto& t : trials) {
    overall.add(t.summary.overall);
    for (const auto& [k, s] : t.summary.by_node) by_node[k].add(s);
    for (const auto& [k, s] : t.summary.by_class) by_class[k].add(s);
    for (const auto& [k, s] : t.summary.by_node_class) by_node_class[k].add(s);
  }
  GrandSummary g;
  g.overall = overall.finish();
  for (const auto& [k, acc] : by_node) g.by_node[k] = acc.finish();
  for (const auto& [k, acc] : by_class) g.by_class[k] = acc.finish();
  for (const auto& [k, acc] : by_node_class) g.by_node_class[k] = acc.finish();
  return g;
}

std::string report_to_json(const TrialReport& report) {
  json trials = json::array();
  for (const auto& t : report.trials) {
    json j = {{"seed", t.seed},
              {"end_time", t.end_time},
              {"records", t.records.size()},
              {"counters",
               {{"arrived", t.counters.arrived},
                {"accepted", t.counters.accepted},
                {"baulked", t.counters.baulked},
                {"rejected", t.counters.rejected},
                {"finished", t.counters.finished},
                {"in_system", t.in_system}}},
              {"summary", stats_json(t.summary.overall)}};
    j["summary"].update(breakdown_json(t.summary.by_node, t.summary.by_class, t.summary.by_node_class, stats_json));
    if (t.deadlock) {
      j["deadlock_time"] = t.deadlock->detected_at;
      json cycle = json::array();
      for (const auto& v : t.deadlock->cycle) cycle.push_back(to_string(v));
      j["cycle"] = cycle;
    } else {
      j["deadlock_time"] = nullptr;
    }
    trials.push_back(j);
  }
  json grand = grand_json(report.grand.overall);
  grand.update(breakdown_json(report.grand.by_node, report.grand.by_class, report.grand.by_node_class, grand_json));
  json doc = {{"trials", trials}, {"grand", grand}};
  return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_records(const TrialReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create records directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> paths;
  for (const auto& t : report.trials) {
    const auto path = dir / ("records_seed" + std::to_string(t.seed) + ".csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    try {
      write_csv(t.records, out);
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
    paths.push_back(path);
  }
  return paths;
}

}  // namespace qnet
