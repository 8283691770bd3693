#pragma once

#include "shiftlab/types.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <string>
#include <vector>

namespace shiftlab {

// Graph over named variables with directed and undirected edges. Used for PC
// skeletons, PDAGs after orientation, and plain DAGs.
class MixedGraph {
 public:
  MixedGraph() = default;
  explicit MixedGraph(std::vector<std::string> nodes);

  Index node_count() const { return static_cast<Index>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  Index index_of(const std::string& name) const;  // throws if absent
  const std::string& name_of(Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  bool has_node(const std::string& name) const;

  void add_directed(Index from, Index to);
  void add_undirected(Index a, Index b);
  void remove_undirected(Index a, Index b);
  void remove_directed(Index from, Index to);

  bool directed(Index from, Index to) const;
  bool undirected(Index a, Index b) const;
  bool adjacent(Index a, Index b) const;

  std::vector<Index> adjacency(Index v) const;  // any edge
  std::vector<Index> parents(Index v) const;
  std::vector<Index> children(Index v) const;
  std::vector<Index> undirected_neighbors(Index v) const;

  Index directed_edge_count() const;
  Index undirected_edge_count() const;
  bool directed_part_acyclic() const;
  bool fully_directed() const { return undirected_edge_count() == 0; }

  // DOT text; undirected edges rendered with dir=none.
  std::string to_dot(const std::vector<std::string>& changing = {}) const;
  // {nodes, directed, undirected, changing_modules}; keys sorted.
  nlohmann::json to_json(const std::vector<std::string>& changing = {}) const;
  static MixedGraph from_json(const nlohmann::json& doc);

 private:
  void check(Index v) const;

  std::vector<std::string> nodes_;
  std::vector<std::vector<bool>> directed_;
  std::vector<std::vector<bool>> undirected_;
};

// Partition of nodes into groups with directed edges lifted to group level.
struct GroupDag {
  std::vector<std::vector<std::string>> groups;
  std::vector<std::pair<Index, Index>> edges;  // group index -> group index

  Index group_count() const { return static_cast<Index>(groups.size()); }
  Index group_of(const std::string& name) const;
  std::vector<Index> group_parents(Index g) const;
  std::vector<Index> topological_order() const;  // throws InconsistencyError on a cycle
  bool acyclic() const;

  nlohmann::json to_json() const;
  static GroupDag from_json(const nlohmann::json& doc);
};

// parents + children + co-parents in the directed part (pre: DAG).
std::set<std::string> markov_blanket(const MixedGraph& dag, const std::string& node);

// Connected components of the undirected subgraph become groups; directed
// edges are lifted between groups. Throws InconsistencyError if lifting
// creates a cycle.
GroupDag collapse_groups(const MixedGraph& pdag);

// The subgraph induced by keep (node names), preserving edge kinds.
MixedGraph induced_subgraph(const MixedGraph& g, const std::set<std::string>& keep);

}  // namespace shiftlab
