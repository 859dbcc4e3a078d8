#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace vgw::store {

/// Directed multigraph of conversions keyed by node value, where every edge
/// carries a unique, totally ordered label.
///
/// `shortest_path` returns the label sequence of a minimum-length path and,
/// among equally short paths, the lexicographically smallest label sequence.
template <typename Node, typename Label>
class ConversionGraph {
 public:
  struct Edge {
    Node from;
    Node to;
    Label label;
  };

  void add_edge(const Node& from, const Node& to, const Label& label) {
    nodes_.insert(from);
    nodes_.insert(to);
    out_[from].push_back(Edge{from, to, label});
    in_[to].push_back(Edge{from, to, label});
    ++edge_count_;
  }

  bool has_edge(const Node& from, const Node& to) const {
    auto it = out_.find(from);
    if (it == out_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const Edge& e) { return e.to == to; });
  }

  const std::set<Node>& nodes() const { return nodes_; }
  std::size_t edge_count() const { return edge_count_; }

  /// Empty vector when `source == target`; nullopt when unreachable.
  std::optional<std::vector<Edge>> shortest_path(const Node& source, const Node& target) const {
    if (source == target) return std::vector<Edge>{};

    // Hop distance of every node to `target`, via BFS over reversed edges.
    std::map<Node, std::size_t> dist;
    std::deque<Node> frontier{target};
    dist[target] = 0;
    while (!frontier.empty()) {
      Node v = frontier.front();
      frontier.pop_front();
      auto it = in_.find(v);
      if (it == in_.end()) continue;
      for (const Edge& e : it->second) {
        if (dist.contains(e.from)) continue;
        dist[e.from] = dist[v] + 1;
        frontier.push_back(e.from);
      }
    }
    auto src = dist.find(source);
    if (src == dist.end()) return std::nullopt;

    // Walk forward; at each step the smallest label that stays on a shortest
    // path wins, which yields the lexicographically least label sequence.
    std::vector<Edge> path;
    Node at = source;
    std::size_t remaining = src->second;
    while (remaining > 0) {
      const Edge* best = nullptr;
      for (const Edge& e : out_.at(at)) {
        auto d = dist.find(e.to);
        if (d == dist.end() || d->second != remaining - 1) continue;
        if (best == nullptr || e.label < best->label) best = &e;
      }
      path.push_back(*best);
      at = best->to;
      --remaining;
    }
    return path;
  }

 private:
  std::set<Node> nodes_;
  std::map<Node, std::vector<Edge>> out_;
  std::map<Node, std::vector<Edge>> in_;
  std::size_t edge_count_ = 0;
};

}  // namespace vgw::store
