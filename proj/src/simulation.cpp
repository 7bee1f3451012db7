#include "qnet/simulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace qnet {

namespace {

constexpr double kExitMassTolerance = 1e-9;

/// Index drawn from a probability row. Rows with a single possible outcome
/// consume no variate. nullopt is the residual mass (leaving the system).
std::optional<std::size_t> draw_from_row(const std::vector<double>& row, RandomStream& stream,
                                         bool residual_allowed) {
  double total = 0.0;
  std::size_t positive = 0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    total += row[j];
    if (row[j] > 0.0) {
      ++positive;
      last_positive = j;
    }
  }
  const bool residual = residual_allowed && 1.0 - total > kExitMassTolerance;
  if (positive == 0) return std::nullopt;
  if (positive == 1 && !residual) return last_positive;

  const double u = stream.next_uniform();
  double cumulative = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    cumulative += row[j];
    if (u < cumulative) return j;
  }
  if (residual) return std::nullopt;
  return last_positive;
}

}  // namespace

std::optional<CustomerCount> parse_customer_count(std::string_view mode) {
  if (mode == "arrived") return CustomerCount::arrived;
  if (mode == "accepted") return CustomerCount::accepted;
  if (mode == "finished") return CustomerCount::finished;
  return std::nullopt;
}

Simulation::Simulation(const Network& network, std::uint64_t seed, bool detect_deadlock)
    : network_(network), stream_(seed) {
  const std::size_t n_nodes = network_.number_of_nodes();
  const std::size_t n_classes = network_.number_of_classes();
  if (detect_deadlock) digraph_ = std::make_unique<StateDigraph>();

  for (const auto& cls : network_.classes()) {
    arrival_dists_.push_back(cls.arrival);
    service_dists_.push_back(cls.service);
    batch_dists_.push_back(cls.batching);
  }

  nodes_.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const auto& centre = network_.centre(i);
    std::int64_t servers = 0;
    if (const auto* schedule = centre.schedule()) {
      nodes_[i].schedule = schedule;
      nodes_[i].next_shift = schedule->front().end_time;
      servers = schedule->front().servers;
    } else {
      servers = std::get<std::int64_t>(centre.servers);
    }
    for (std::int64_t s = 0; s < servers; ++s) add_server(i);
  }

  next_arrival_.assign(n_classes, std::vector<double>(n_nodes, kNever));
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t k = 0; k < n_classes; ++k) {
      auto& d = arrival_dists_[k][i];
      if (!d.is_no_arrivals()) next_arrival_[k][i] = sample(d, stream_, 0.0);
    }
  }
}

Simulation::~Simulation() = default;

void Simulation::mark_used() { used_ = true; }

const StateDigraph* Simulation::state_digraph() const { return digraph_.get(); }

std::size_t Simulation::number_of_nodes() const { return nodes_.size(); }

double Simulation::arrival_next_event_date() const {
  double best = kNever;
  for (const auto& row : next_arrival_) {
    for (double t : row) best = std::min(best, t);
  }
  return best;
}

double Simulation::node_next_event_date(std::size_t node) const {
  const auto& n = nodes_[node];
  double best = n.next_shift;
  for (const auto& [_, server] : n.servers) {
    if (server.customer && !server.customer->blocked) best = std::min(best, server.customer->service_end_date);
  }
  return best;
}

std::optional<std::size_t> Simulation::next_active_node() const {
  std::optional<std::size_t> best;
  double best_date = kNever;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double t = node_next_event_date(i);
    if (t < best_date) {
      best_date = t;
      best = i;
    }
  }
  return best;
}

double Simulation::next_event_date() const {
  double best = arrival_next_event_date();
  for (std::size_t i = 0; i < nodes_.size(); ++i) best = std::min(best, node_next_event_date(i));
  return best;
}

bool Simulation::step() {
  mark_used();
  const double arrival_date = arrival_next_event_date();
  const auto node = next_active_node();
  const double node_date = node ? node_next_event_date(*node) : kNever;
  if (arrival_date == kNever && node_date == kNever) return false;

  if (arrival_date <= node_date) {
    clock_ = arrival_date;
    arrival_event();
  } else {
    clock_ = node_date;
    node_event(*node);
  }
  run_pending_deadlock_checks();
  return true;
}

void Simulation::simulate_until_max_time(double max_time) {
  if (used_) throw std::logic_error("a Simulation can only be run once");
  if (!(max_time > 0.0)) throw std::invalid_argument("maximum simulation time must be positive");
  mark_used();
  while (next_event_date() <= max_time) step();
}

void Simulation::simulate_until_max_customers(std::uint64_t n, CustomerCount mode) {
  if (used_) throw std::logic_error("a Simulation can only be run once");
  if (n < 1) throw std::invalid_argument("maximum number of customers must be >= 1");
  mark_used();
  const std::uint64_t& counter = mode == CustomerCount::arrived    ? counters_.arrived
                                 : mode == CustomerCount::accepted ? counters_.accepted
                                                                   : counters_.finished;
  while (counter < n && step()) {
  }
}

std::optional<double> Simulation::simulate_until_deadlock(double time_limit) {
  if (used_) throw std::logic_error("a Simulation can only be run once");
  if (!digraph_) throw std::logic_error("simulate_until_deadlock needs deadlock detection enabled");
  mark_used();
  while (!deadlock_ && next_event_date() <= time_limit && step()) {
  }
  if (deadlock_) return deadlock_->detected_at;
  return std::nullopt;
}

void Simulation::arrival_event() {
  std::size_t node = 0;
  std::size_t cls = 0;
  double best = kNever;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t k = 0; k < next_arrival_.size(); ++k) {
      if (next_arrival_[k][i] < best) {
        best = next_arrival_[k][i];
        node = i;
        cls = k;
      }
    }
  }

  const std::size_t batch = sample_batch_size(batch_dists_[cls][node], stream_);
  const auto& baulking = network_.centre(node).baulking[cls];
  for (std::size_t b = 0; b < batch; ++b) {
    ++next_id_;
    ++counters_.arrived;
    if (baulking) {
      const double p = (*baulking)(present(node));
      if (stream_.next_uniform() < p) {
        ++counters_.baulked;
        continue;
      }
    }
    if (!has_space(node)) {
      ++counters_.rejected;
      continue;
    }
    ++counters_.accepted;
    auto& ind = individuals_.emplace_back();
    ind.id = next_id_;
    ind.customer_class = cls;
    ind.priority = network_.customer_class(cls).priority;
    accept(ind, node);
  }

  next_arrival_[cls][node] = clock_ + sample(arrival_dists_[cls][node], stream_, clock_);
}

void Simulation::node_event(std::size_t node) {
  auto& n = nodes_[node];
  std::optional<std::size_t> due;
  double due_date = kNever;
  for (const auto& [id, server] : n.servers) {
    if (server.customer && !server.customer->blocked && server.customer->service_end_date < due_date) {
      due_date = server.customer->service_end_date;
      due = id;
    }
  }
  if (due && due_date <= n.next_shift) {
    release(node, *due);
  } else {
    shift_change(node);
  }
}

void Simulation::release(std::size_t node, std::size_t server_id) {
  Individual& ind = *nodes_[node].servers.at(server_id).customer;
  const auto destination = draw_from_row(network_.customer_class(ind.customer_class).routing[node], stream_, true);
  if (destination && !has_space(*destination)) {
    block(ind, *destination);
    return;
  }
  depart(ind, node, destination);
}

void Simulation::block(Individual& ind, std::size_t destination) {
  ind.blocked = true;
  ind.destination = destination;
  nodes_[destination].blocked_queue.push_back(&ind);
  if (digraph_) {
    const ServerKey key{ind.node + 1, *ind.server};
    digraph_->on_block(key, destination + 1);
    pending_blocks_.push_back(key);
  }
}

void Simulation::depart(Individual& ind, std::size_t node, std::optional<std::size_t> destination) {
  auto& n = nodes_[node];
  const std::size_t server_id = *ind.server;

  DataRecord r;
  r.id_number = ind.id;
  r.customer_class = ind.customer_class;
  r.node = node + 1;
  r.arrival_date = ind.arrival_date;
  r.waiting_time = ind.service_start_date - ind.arrival_date;
  r.service_start_date = ind.service_start_date;
  r.service_time = ind.service_end_date - ind.service_start_date;
  r.service_end_date = ind.service_end_date;
  r.time_blocked = clock_ - ind.service_end_date;
  r.exit_date = clock_;
  r.destination = destination ? static_cast<std::int64_t>(*destination + 1) : kExitDestination;
  r.queue_size_at_arrival = ind.queue_size_at_arrival;

  const bool was_blocked = ind.blocked;
  ind.server.reset();
  ind.blocked = false;
  ind.destination.reset();

  auto& server = n.servers.at(server_id);
  server.customer = nullptr;
  if (digraph_ && was_blocked) digraph_->on_unblock({node + 1, server_id});
  if (server.retiring) {
    remove_server(node, server_id);
  } else {
    fill_idle_servers(node);
  }

  r.queue_size_at_departure = n.waiting;
  records_.push_back(r);

  if (destination) {
    ind.customer_class = draw_new_class(ind.customer_class, node);
    ind.priority = network_.customer_class(ind.customer_class).priority;
    accept(ind, *destination);
  } else {
    ++counters_.finished;
  }

  unblock(node);
}

void Simulation::accept(Individual& ind, std::size_t node) {
  auto& n = nodes_[node];
  ind.node = node;
  ind.arrival_date = clock_;
  for (auto& [_, server] : n.servers) {
    if (!server.customer && !server.retiring) {
      start_service(node, server, ind);
      ind.queue_size_at_arrival = n.waiting;
      return;
    }
  }
  n.queue[ind.priority].push_back(&ind);
  ++n.waiting;
  ind.queue_size_at_arrival = n.waiting;
}

void Simulation::unblock(std::size_t node) {
  auto& n = nodes_[node];
  while (!n.blocked_queue.empty() && has_space(node)) {
    Individual* ind = n.blocked_queue.front();
    n.blocked_queue.pop_front();
    depart(*ind, ind->node, node);
  }
}

void Simulation::start_service(std::size_t node, Server& server, Individual& ind) {
  server.customer = &ind;
  ind.server = server.id;
  ind.service_start_date = clock_;
  ind.service_end_date = clock_ + sample(service_dists_[ind.customer_class][node], stream_, clock_);
  if (trace_enabled_) {
    const auto& queue = nodes_[node].queue;
    std::optional<std::size_t> best_waiting;
    if (!queue.empty()) best_waiting = queue.begin()->first;
    trace_.push_back({clock_, node + 1, server.id, ind.id, ind.priority, best_waiting});
  }
}

void Simulation::fill_idle_servers(std::size_t node) {
  auto& n = nodes_[node];
  for (auto& [_, server] : n.servers) {
    if (n.waiting == 0) return;
    if (server.customer || server.retiring) continue;
    auto level = n.queue.begin();
    Individual* next = level->second.front();
    level->second.pop_front();
    if (level->second.empty()) n.queue.erase(level);
    --n.waiting;
    start_service(node, server, *next);
  }
}

void Simulation::shift_change(std::size_t node) {
  auto& n = nodes_[node];
  const auto& schedule = *n.schedule;
  n.shift = (n.shift + 1) % schedule.size();
  if (n.shift == 0) n.cycle_start += schedule.back().end_time;
  n.next_shift = n.cycle_start + schedule[n.shift].end_time;

  const auto target = static_cast<std::size_t>(schedule[n.shift].servers);
  std::size_t on_duty = 0;
  for (const auto& [_, server] : n.servers) on_duty += server.retiring ? 0 : 1;

  if (target > on_duty) {
    std::size_t needed = target - on_duty;
    // Servers still finishing a service are asked to stay before new ones start.
    for (auto& [_, server] : n.servers) {
      if (needed == 0) break;
      if (server.retiring) {
        server.retiring = false;
        --needed;
      }
    }
    for (; needed > 0; --needed) add_server(node);
    fill_idle_servers(node);
    unblock(node);
  } else if (target < on_duty) {
    std::size_t excess = on_duty - target;
    std::vector<std::size_t> leaving;
    for (auto it = n.servers.rbegin(); it != n.servers.rend() && excess > 0; ++it) {
      if (!it->second.customer && !it->second.retiring) {
        leaving.push_back(it->first);
        --excess;
      }
    }
    for (auto it = n.servers.rbegin(); it != n.servers.rend() && excess > 0; ++it) {
      if (it->second.customer && !it->second.retiring) {
        it->second.retiring = true;
        --excess;
      }
    }
    for (std::size_t id : leaving) remove_server(node, id);
  }
}

void Simulation::add_server(std::size_t node) {
  auto& n = nodes_[node];
  const std::size_t id = n.next_server_id++;
  n.servers.emplace(id, Server{id, nullptr, false});
  if (digraph_) digraph_->add_vertex({node + 1, id});
}

void Simulation::remove_server(std::size_t node, std::size_t server_id) {
  nodes_[node].servers.erase(server_id);
  if (digraph_) {
    digraph_->remove_vertex({node + 1, server_id});
    pending_full_check_ = true;
  }
}

void Simulation::run_pending_deadlock_checks() {
  if (!digraph_) return;
  if (!deadlock_) {
    std::optional<std::vector<ServerKey>> cycle;
    if (pending_full_check_) {
      cycle = digraph_->check_deadlock();
    } else {
      for (const auto& key : pending_blocks_) {
        if ((cycle = digraph_->check_deadlock_from(key))) break;
      }
    }
    if (cycle) deadlock_ = DeadlockReport{clock_, std::move(*cycle)};
  }
  pending_blocks_.clear();
  pending_full_check_ = false;
}

bool Simulation::has_space(std::size_t node) const {
  const auto& capacity = network_.centre(node).queue_capacity;
  if (!capacity) return true;
  const auto& n = nodes_[node];
  for (const auto& [_, server] : n.servers) {
    if (!server.customer && !server.retiring) return true;
  }
  return n.waiting < *capacity;
}

std::size_t Simulation::present(std::size_t node) const {
  const auto& n = nodes_[node];
  std::size_t count = n.waiting;
  for (const auto& [_, server] : n.servers) count += server.customer ? 1 : 0;
  return count;
}

std::size_t Simulation::draw_new_class(std::size_t customer_class, std::size_t node) {
  const Matrix* change = network_.class_change(node);
  if (!change) return customer_class;
  return draw_from_row((*change)[customer_class], stream_, false).value_or(customer_class);
}

std::uint64_t Simulation::individuals_in_system() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) total += present(i);
  return total;
}

std::vector<DataRecord> Simulation::get_all_records() const {
  std::vector<DataRecord> out = records_;
  std::stable_sort(out.begin(), out.end(), [](const DataRecord& a, const DataRecord& b) {
    if (a.exit_date != b.exit_date) return a.exit_date < b.exit_date;
    return a.id_number < b.id_number;
  });
  return out;
}

NodeView Simulation::node_view(std::size_t node) const {
  const auto& n = nodes_.at(node);
  NodeView view;
  view.waiting = n.waiting;
  view.blocked_queue = n.blocked_queue.size();
  view.queue_capacity = network_.centre(node).queue_capacity;
  view.next_event_date = node_next_event_date(node);
  for (const auto& [id, server] : n.servers) {
    ServerView sv;
    sv.id = id;
    sv.retiring = server.retiring;
    if (!server.retiring) ++view.on_duty;
    if (server.customer) {
      ++view.in_service;
      sv.customer = server.customer->id;
      sv.blocked = server.customer->blocked;
      if (sv.blocked) {
        ++view.blocked;
        sv.destination = *server.customer->destination + 1;
      }
    }
    view.servers.push_back(sv);
  }
  return view;
}

}  // namespace qnet
