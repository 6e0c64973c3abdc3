#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plsm/graph/entries.hpp"
#include "plsm/types.hpp"

namespace plsm::graph {

enum class OpType : uint8_t { kAddVertex, kDeleteVertex, kAddEdge, kDeleteEdge };

struct GraphOp {
  OpType type;
  VertexId u = 0;
  VertexId v = 0;
};

// Brute-force ground truth: plain adjacency sets updated by direct replay.
// Shares no code with the engine path; only the result types.
//
// Semantics mirrored by GraphStore:
//  - add_edge makes both endpoints exist;
//  - delete_edge never creates a vertex;
//  - delete_vertex clears the vertex but leaves dangling references in other
//    vertices' lists (filtered only in strict mode).
class ReplayOracle {
 public:
  explicit ReplayOracle(DirectionMode direction, bool strict = false)
      : direction_(direction), strict_(strict) {}

  void apply(const GraphOp& op) {
    switch (op.type) {
      case OpType::kAddVertex:
        vertices_[op.u];
        break;
      case OpType::kDeleteVertex:
        vertices_.erase(op.u);
        break;
      case OpType::kAddEdge:
        vertices_[op.u].out.insert(op.v);
        if (directed()) vertices_[op.v].in.insert(op.u);
        else vertices_[op.v].out.insert(op.u);
        break;
      case OpType::kDeleteEdge:
        if (auto it = vertices_.find(op.u); it != vertices_.end()) it->second.out.erase(op.v);
        if (auto it = vertices_.find(op.v); it != vertices_.end()) {
          if (directed()) it->second.in.erase(op.u);
          else it->second.out.erase(op.u);
        }
        break;
    }
  }

  void apply(const std::vector<GraphOp>& ops) {
    for (const auto& op : ops) apply(op);
  }

  bool exists(VertexId u) const { return vertices_.count(u) != 0; }

  std::optional<Adjacency> neighbors(VertexId u) const {
    auto it = vertices_.find(u);
    if (it == vertices_.end()) return std::nullopt;
    Adjacency adj;
    for (VertexId v : it->second.out) {
      if (!strict_ || exists(v)) adj.out.push_back(v);
    }
    for (VertexId v : it->second.in) {
      if (!strict_ || exists(v)) adj.in.push_back(v);
    }
    return adj;
  }

  bool has_edge(VertexId u, VertexId v) const {
    auto it = vertices_.find(u);
    if (it == vertices_.end()) return false;
    if (strict_ && !exists(v)) return false;
    return it->second.out.count(v) != 0;
  }

  std::vector<VertexId> vertex_ids() const {
    std::vector<VertexId> ids;
    for (const auto& [id, state] : vertices_) ids.push_back(id);
    return ids;
  }

  size_t vertex_count() const { return vertices_.size(); }

  // Edge count as the graph store's census defines it.
  size_t edge_count() const {
    size_t directed_entries = 0;
    size_t loops = 0;
    for (const auto& [id, state] : vertices_) {
      directed_entries += state.out.size();
      loops += state.out.count(id);
    }
    return directed() ? directed_entries : (directed_entries - loops) / 2 + loops;
  }

 private:
  struct VertexState {
    std::set<VertexId> out;
    std::set<VertexId> in;
  };

  bool directed() const { return direction_ == DirectionMode::kDirected; }

  DirectionMode direction_;
  bool strict_;
  std::map<VertexId, VertexState> vertices_;
};

// Property oracle: a plain map keyed by (element, name).
class PropertyOracle {
 public:
  struct Element {
    bool is_edge = false;
    VertexId a = 0;
    VertexId b = 0;
    auto operator<=>(const Element&) const = default;
  };

  void set(const Element& e, const std::string& name, const std::string& value) {
    props_[{e, name}] = value;
  }
  void erase(const Element& e, const std::string& name) { props_.erase({e, name}); }

  std::optional<std::string> get(const Element& e, const std::string& name) const {
    auto it = props_.find({e, name});
    if (it == props_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<Element> find(bool is_edge, const std::string& name, const std::string& value) const {
    std::vector<Element> out;
    for (const auto& [key, v] : props_) {
      if (key.first.is_edge == is_edge && key.second == name && v == value) out.push_back(key.first);
    }
    return out;
  }

 private:
  std::map<std::pair<Element, std::string>, std::string> props_;
};

}  // namespace plsm::graph
