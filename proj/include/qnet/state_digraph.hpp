#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qnet {

/// A server vertex: 1-based node number and the server's id at that node.
struct ServerKey {
  std::size_t node;
  std::size_t server;

  auto operator<=>(const ServerKey&) const = default;
};

/// "node:server"
std::string to_string(const ServerKey& key);

struct DeadlockReport {
  double detected_at;
  /// Witnessing cycle; consecutive entries (and last to first) are edges.
  std::vector<ServerKey> cycle;
};

/// Waits-for digraph over servers. A server holding a blocked customer has
/// an edge to every server at that customer's destination node; all other
/// servers are sinks.
///
/// The network is deadlocked when some blocked server can reach no sink:
/// every server it transitively waits on is itself blocked (a knot). With
/// one server per node this is the same as a directed cycle.
class StateDigraph {
 public:
  void add_vertex(const ServerKey& v);
  /// Drops the vertex and every edge touching it.
  void remove_vertex(const ServerKey& v);

  /// Throws std::logic_error if `origin` is unknown or already blocked.
  void on_block(const ServerKey& origin, std::size_t destination_node);
  void on_unblock(const ServerKey& origin);

  /// Checks only the part of the graph reachable from `v`. Sufficient after
  /// on_block(v, ...), since any new knot must contain v.
  std::optional<std::vector<ServerKey>> check_deadlock_from(const ServerKey& v) const;
  /// Checks every blocked vertex.
  std::optional<std::vector<ServerKey>> check_deadlock() const;

  /// Any directed cycle, knot or not.
  std::optional<std::vector<ServerKey>> find_cycle() const;

  bool contains(const ServerKey& v) const { return vertices_.contains(v); }
  bool has_edge(const ServerKey& from, const ServerKey& to) const;
  const std::set<ServerKey>& successors(const ServerKey& v) const;
  std::optional<std::size_t> blocked_toward(const ServerKey& v) const;
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const;

 private:
  struct Vertex {
    std::set<ServerKey> out;
    std::optional<std::size_t> destination;
  };

  Vertex& at(const ServerKey& v);
  std::vector<ServerKey> witness_cycle(const ServerKey& start) const;

  std::map<ServerKey, Vertex> vertices_;
};

}  // namespace qnet
