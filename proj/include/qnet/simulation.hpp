#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "qnet/distributions.hpp"
#include "qnet/network.hpp"
#include "qnet/records.hpp"
#include "qnet/state_digraph.hpp"

namespace qnet {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

enum class CustomerCount { arrived, accepted, finished };

/// "arrived" | "accepted" | "finished"
std::optional<CustomerCount> parse_customer_count(std::string_view mode);

struct Counters {
  std::uint64_t arrived = 0;
  std::uint64_t accepted = 0;
  std::uint64_t baulked = 0;
  std::uint64_t rejected = 0;
  /// Customers that left the system.
  std::uint64_t finished = 0;
};

/// One service start, kept when tracing is enabled.
struct ServiceStart {
  double time;
  std::size_t node;  // 1-based
  std::size_t server;
  std::uint64_t individual;
  std::size_t priority;
  /// Best (lowest) priority level still waiting at the node afterwards.
  std::optional<std::size_t> best_waiting_priority;
};

/// Read-only view of a server for inspection.
struct ServerView {
  std::size_t id;
  std::optional<std::uint64_t> customer;
  bool blocked = false;
  bool retiring = false;
  /// 1-based destination of the blocked customer.
  std::optional<std::size_t> destination;
};

struct NodeView {
  std::size_t waiting = 0;
  std::size_t in_service = 0;  // includes blocked customers holding a server
  std::size_t blocked = 0;
  std::size_t on_duty = 0;     // servers not retiring
  std::size_t blocked_queue = 0;
  std::optional<std::size_t> queue_capacity;
  double next_event_date = kNever;
  std::vector<ServerView> servers;
};

/// Event-scheduling simulation of one run over a validated Network. Each
/// instance runs once: the first simulate_* call (or step) consumes it.
///
/// Simultaneous events are ordered: external arrivals first, then nodes by
/// index, and within a node service completions before shift changes.
class Simulation {
 public:
  Simulation(const Network& network, std::uint64_t seed, bool detect_deadlock = false);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Processes every event dated <= max_time.
  void simulate_until_max_time(double max_time);
  /// Stops after the event that brings the chosen counter to n. A batch
  /// arrival is processed whole, so arrival counts may overshoot n.
  void simulate_until_max_customers(std::uint64_t n, CustomerCount mode);
  /// Runs until deadlock is detected and returns the clock at detection;
  /// nullopt if events run out (or pass `time_limit`) first.
  std::optional<double> simulate_until_deadlock(double time_limit = kNever);

  /// Date of the next B-event, or kNever.
  double next_event_date() const;
  /// A-phase plus one B-event and its consequences. False when nothing is
  /// scheduled.
  bool step();

  double clock() const { return clock_; }
  const Counters& counters() const { return counters_; }
  std::uint64_t individuals_in_system() const;

  /// Completed services ordered by exit_date, then id_number.
  std::vector<DataRecord> get_all_records() const;

  const std::optional<DeadlockReport>& deadlock() const { return deadlock_; }
  /// Null unless deadlock detection was requested.
  const StateDigraph* state_digraph() const;

  void enable_trace() { trace_enabled_ = true; }
  const std::vector<ServiceStart>& trace() const { return trace_; }

  double arrival_next_event_date() const;
  std::size_t number_of_nodes() const;
  /// `node` is 0-based.
  NodeView node_view(std::size_t node) const;
  const Network& network() const { return network_; }

 private:
  struct Individual {
    std::uint64_t id = 0;
    std::size_t customer_class = 0;
    std::size_t priority = 0;
    std::size_t node = 0;
    double arrival_date = 0.0;
    double service_start_date = 0.0;
    double service_end_date = 0.0;
    std::size_t queue_size_at_arrival = 0;
    std::optional<std::size_t> server;
    bool blocked = false;
    std::optional<std::size_t> destination;
  };

  struct Server {
    std::size_t id = 0;
    Individual* customer = nullptr;
    bool retiring = false;
  };

  struct Node {
    /// Keyed by server id; ids increase as servers come on duty.
    std::map<std::size_t, Server> servers;
    /// Waiting customers by priority level, each level FIFO.
    std::map<std::size_t, std::deque<Individual*>> queue;
    std::size_t waiting = 0;
    /// Customers blocked elsewhere that are destined here, in blocking order.
    std::deque<Individual*> blocked_queue;
    std::size_t next_server_id = 1;
    const Schedule* schedule = nullptr;
    std::size_t shift = 0;
    double cycle_start = 0.0;
    double next_shift = kNever;
  };

  void mark_used();
  std::optional<std::size_t> next_active_node() const;
  void arrival_event();
  void node_event(std::size_t node);
  void release(std::size_t node, std::size_t server_id);
  void depart(Individual& ind, std::size_t node, std::optional<std::size_t> destination);
  void accept(Individual& ind, std::size_t node);
  void block(Individual& ind, std::size_t destination);
  void unblock(std::size_t node);
  void shift_change(std::size_t node);
  void start_service(std::size_t node, Server& server, Individual& ind);
  double node_next_event_date(std::size_t node) const;
  void fill_idle_servers(std::size_t node);
  void add_server(std::size_t node);
  void remove_server(std::size_t node, std::size_t server_id);
  bool has_space(std::size_t node) const;
  std::size_t present(std::size_t node) const;
  std::optional<std::size_t> draw_destination(std::size_t customer_class, std::size_t node);
  std::size_t draw_new_class(std::size_t customer_class, std::size_t node);
  void run_pending_deadlock_checks();

  Network network_;
  RandomStream stream_;
  double clock_ = 0.0;
  bool used_ = false;
  Counters counters_;
  std::uint64_t next_id_ = 0;

  // Per-run copies so that stateful families (Sequential) never touch the
  // shared Network. Indexed [class][node].
  std::vector<std::vector<Distribution>> arrival_dists_;
  std::vector<std::vector<Distribution>> service_dists_;
  std::vector<std::vector<Distribution>> batch_dists_;
  std::vector<std::vector<double>> next_arrival_;

  std::vector<Node> nodes_;
  std::deque<Individual> individuals_;
  std::vector<DataRecord> records_;
  std::unique_ptr<StateDigraph> digraph_;
  std::optional<DeadlockReport> deadlock_;
  std::vector<ServerKey> pending_blocks_;
  bool pending_full_check_ = false;
  bool trace_enabled_ = false;
  std::vector<ServiceStart> trace_;
};

}  // namespace qnet
