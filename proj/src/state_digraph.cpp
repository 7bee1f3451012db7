#include "qnet/state_digraph.hpp"

#include <algorithm>
#include <stdexcept>

namespace qnet {

std::string to_string(const ServerKey& key) {
  return std::to_string(key.node) + ":" + std::to_string(key.server);
}

StateDigraph::Vertex& StateDigraph::at(const ServerKey& v) {
  auto it = vertices_.find(v);
  if (it == vertices_.end()) throw std::logic_error("unknown server vertex " + to_string(v));
  return it->second;
}

void StateDigraph::add_vertex(const ServerKey& v) {
  if (!vertices_.try_emplace(v).second) throw std::logic_error("duplicate server vertex " + to_string(v));
  // Servers already blocked toward this node now wait on the newcomer too.
  for (auto& [key, vertex] : vertices_) {
    if (vertex.destination == v.node) vertex.out.insert(v);
  }
}

void StateDigraph::remove_vertex(const ServerKey& v) {
  if (vertices_.erase(v) == 0) return;
  for (auto& [_, vertex] : vertices_) vertex.out.erase(v);
}

void StateDigraph::on_block(const ServerKey& origin, std::size_t destination_node) {
  auto& vertex = at(origin);
  if (vertex.destination) throw std::logic_error("server " + to_string(origin) + " is already blocked");
  vertex.destination = destination_node;
  for (auto it = vertices_.lower_bound({destination_node, 0});
       it != vertices_.end() && it->first.node == destination_node; ++it) {
    vertex.out.insert(it->first);
  }
}

void StateDigraph::on_unblock(const ServerKey& origin) {
  auto it = vertices_.find(origin);
  if (it == vertices_.end()) return;
  it->second.out.clear();
  it->second.destination.reset();
}

bool StateDigraph::has_edge(const ServerKey& from, const ServerKey& to) const {
  auto it = vertices_.find(from);
  return it != vertices_.end() && it->second.out.contains(to);
}

const std::set<ServerKey>& StateDigraph::successors(const ServerKey& v) const {
  static const std::set<ServerKey> none;
  auto it = vertices_.find(v);
  return it == vertices_.end() ? none : it->second.out;
}

std::optional<std::size_t> StateDigraph::blocked_toward(const ServerKey& v) const {
  auto it = vertices_.find(v);
  return it == vertices_.end() ? std::nullopt : it->second.destination;
}

std::size_t StateDigraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, vertex] : vertices_) n += vertex.out.size();
  return n;
}

std::vector<ServerKey> StateDigraph::witness_cycle(const ServerKey& start) const {
  // Every vertex reachable from `start` has an out-edge, so following the
  // first successor must revisit a vertex.
  std::vector<ServerKey> path;
  std::map<ServerKey, std::size_t> position;
  ServerKey current = start;
  while (!position.contains(current)) {
    position[current] = path.size();
    path.push_back(current);
    current = *vertices_.at(current).out.begin();
  }
  return {path.begin() + static_cast<std::ptrdiff_t>(position[current]), path.end()};
}

std::optional<std::vector<ServerKey>> StateDigraph::check_deadlock_from(const ServerKey& v) const {
  auto it = vertices_.find(v);
  if (it == vertices_.end() || it->second.out.empty()) return std::nullopt;

  std::set<ServerKey> seen{v};
  std::vector<ServerKey> stack{v};
  while (!stack.empty()) {
    const ServerKey u = stack.back();
    stack.pop_back();
    const auto& out = vertices_.at(u).out;
    if (out.empty()) return std::nullopt;  // reaches a server that can still finish
    for (const auto& w : out) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return witness_cycle(v);
}

std::optional<std::vector<ServerKey>> StateDigraph::check_deadlock() const {
  for (const auto& [key, vertex] : vertices_) {
    if (vertex.out.empty()) continue;
    if (auto cycle = check_deadlock_from(key)) return cycle;
  }
  return std::nullopt;
}

std::optional<std::vector<ServerKey>> StateDigraph::find_cycle() const {
  enum class Mark { fresh, active, done };
  std::map<ServerKey, Mark> mark;
  for (const auto& [key, _] : vertices_) mark[key] = Mark::fresh;

  for (const auto& [root, _] : vertices_) {
    if (mark[root] != Mark::fresh) continue;
    // Iterative DFS; `path` mirrors the active stack.
    std::vector<std::pair<ServerKey, std::set<ServerKey>::const_iterator>> frames;
    std::vector<ServerKey> path;
    frames.emplace_back(root, vertices_.at(root).out.begin());
    path.push_back(root);
    mark[root] = Mark::active;
    while (!frames.empty()) {
      auto& [u, next] = frames.back();
      if (next == vertices_.at(u).out.end()) {
        mark[u] = Mark::done;
        frames.pop_back();
        path.pop_back();
        continue;
      }
      const ServerKey w = *next++;
      if (mark[w] == Mark::active) {
        auto from = std::find(path.begin(), path.end(), w);
        return std::vector<ServerKey>(from, path.end());
      }
      if (mark[w] == Mark::fresh) {
        mark[w] = Mark::active;
        frames.emplace_back(w, vertices_.at(w).out.begin());
        path.push_back(w);
      }
    }
  }
  return std::nullopt;
}

}  // namespace qnet
