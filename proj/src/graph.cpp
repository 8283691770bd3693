#include "shiftlab/graph.hpp"

#include "shiftlab/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace shiftlab {

MixedGraph::MixedGraph(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  directed_.assign(n, std::vector<bool>(n, false));
  undirected_.assign(n, std::vector<bool>(n, false));
}

void MixedGraph::check(Index v) const {
  if (v < 0 || v >= node_count()) throw ContractError("graph: node index out of range");
}

Index MixedGraph::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i] == name) return static_cast<Index>(i);
  throw ContractError("graph: unknown node '" + name + "'");
}

bool MixedGraph::has_node(const std::string& name) const {
  for (const auto& n : nodes_)
    if (n == name) return true;
  return false;
}

void MixedGraph::add_directed(Index from, Index to) {
  check(from);
  check(to);
  if (from == to) throw ContractError("graph: self-loop rejected");
  if (undirected_[from][to])
    throw InconsistencyError("graph: edge " + name_of(from) + "-" + name_of(to) +
                             " is already undirected");
  directed_[from][to] = true;
}

void MixedGraph::add_undirected(Index a, Index b) {
  check(a);
  check(b);
  if (a == b) throw ContractError("graph: self-loop rejected");
  if (directed_[a][b] || directed_[b][a])
    throw InconsistencyError("graph: edge " + name_of(a) + "-" + name_of(b) +
                             " is already directed");
  undirected_[a][b] = undirected_[b][a] = true;
}

void MixedGraph::remove_undirected(Index a, Index b) {
  check(a);
  check(b);
  undirected_[a][b] = undirected_[b][a] = false;
}

void MixedGraph::remove_directed(Index from, Index to) {
  check(from);
  check(to);
  directed_[from][to] = false;
}

bool MixedGraph::directed(Index from, Index to) const {
  check(from);
  check(to);
  return directed_[from][to];
}

bool MixedGraph::undirected(Index a, Index b) const {
  check(a);
  check(b);
  return undirected_[a][b];
}

bool MixedGraph::adjacent(Index a, Index b) const {
  return directed(a, b) || directed(b, a) || undirected(a, b);
}

std::vector<Index> MixedGraph::adjacency(Index v) const {
  check(v);
  std::vector<Index> out;
  for (Index u = 0; u < node_count(); ++u)
    if (u != v && adjacent(v, u)) out.push_back(u);
  return out;
}

std::vector<Index> MixedGraph::parents(Index v) const {
  check(v);
  std::vector<Index> out;
  for (Index u = 0; u < node_count(); ++u)
    if (directed_[u][v]) out.push_back(u);
  return out;
}

std::vector<Index> MixedGraph::children(Index v) const {
  check(v);
  std::vector<Index> out;
  for (Index u = 0; u < node_count(); ++u)
    if (directed_[v][u]) out.push_back(u);
  return out;
}

std::vector<Index> MixedGraph::undirected_neighbors(Index v) const {
  check(v);
  std::vector<Index> out;
  for (Index u = 0; u < node_count(); ++u)
    if (undirected_[v][u]) out.push_back(u);
  return out;
}

Index MixedGraph::directed_edge_count() const {
  Index count = 0;
  for (Index i = 0; i < node_count(); ++i)
    for (Index j = 0; j < node_count(); ++j)
      if (directed_[i][j]) ++count;
  return count;
}

Index MixedGraph::undirected_edge_count() const {
  Index count = 0;
  for (Index i = 0; i < node_count(); ++i)
    for (Index j = i + 1; j < node_count(); ++j)
      if (undirected_[i][j]) ++count;
  return count;
}

bool MixedGraph::directed_part_acyclic() const {
  const Index n = node_count();
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 active, 2 done
  std::function<bool(Index)> visit = [&](Index v) {
    state[static_cast<std::size_t>(v)] = 1;
    for (Index u = 0; u < n; ++u) {
      if (!directed_[v][u]) continue;
      if (state[static_cast<std::size_t>(u)] == 1) return false;
      if (state[static_cast<std::size_t>(u)] == 0 && !visit(u)) return false;
    }
    state[static_cast<std::size_t>(v)] = 2;
    return true;
  };
  for (Index v = 0; v < n; ++v)
    if (state[static_cast<std::size_t>(v)] == 0 && !visit(v)) return false;
  return true;
}

std::string MixedGraph::to_dot(const std::vector<std::string>& changing) const {
  std::ostringstream os;
  os << "digraph G {\n";
  for (const auto& n : nodes_) {
    os << "  " << n;
    if (std::find(changing.begin(), changing.end(), n) != changing.end())
      os << " [style=filled, fillcolor=lightpink]";
    os << ";\n";
  }
  for (Index i = 0; i < node_count(); ++i)
    for (Index j = 0; j < node_count(); ++j)
      if (directed_[i][j]) os << "  " << name_of(i) << " -> " << name_of(j) << ";\n";
  for (Index i = 0; i < node_count(); ++i)
    for (Index j = i + 1; j < node_count(); ++j)
      if (undirected_[i][j])
        os << "  " << name_of(i) << " -> " << name_of(j) << " [dir=none];\n";
  os << "}\n";
  return os.str();
}

nlohmann::json MixedGraph::to_json(const std::vector<std::string>& changing) const {
  nlohmann::json doc;
  doc["nodes"] = nodes_;
  auto edges = nlohmann::json::array();
  for (Index i = 0; i < node_count(); ++i)
    for (Index j = 0; j < node_count(); ++j)
      if (directed_[i][j]) edges.push_back({name_of(i), name_of(j)});
  doc["directed"] = edges;
  auto undirected = nlohmann::json::array();
  for (Index i = 0; i < node_count(); ++i)
    for (Index j = i + 1; j < node_count(); ++j)
      if (undirected_[i][j]) undirected.push_back({name_of(i), name_of(j)});
  doc["undirected"] = undirected;
  doc["changing_modules"] = changing;
  return doc;
}

MixedGraph MixedGraph::from_json(const nlohmann::json& doc) {
  MixedGraph g(doc.at("nodes").get<std::vector<std::string>>());
  for (const auto& e : doc.at("directed"))
    g.add_directed(g.index_of(e.at(0).get<std::string>()), g.index_of(e.at(1).get<std::string>()));
  for (const auto& e : doc.at("undirected"))
    g.add_undirected(g.index_of(e.at(0).get<std::string>()),
                     g.index_of(e.at(1).get<std::string>()));
  return g;
}

Index GroupDag::group_of(const std::string& name) const {
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto& n : groups[g])
      if (n == name) return static_cast<Index>(g);
  throw ContractError("group dag: unknown node '" + name + "'");
}

std::vector<Index> GroupDag::group_parents(Index g) const {
  std::vector<Index> out;
  for (const auto& [from, to] : edges)
    if (to == g) out.push_back(from);
  std::sort(out.begin(), out.end());
  return out;
}

bool GroupDag::acyclic() const {
  try {
    topological_order();
    return true;
  } catch (const InconsistencyError&) {
    return false;
  }
}

std::vector<Index> GroupDag::topological_order() const {
  const Index n = group_count();
  std::vector<Index> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& [from, to] : edges) {
    (void)from;
    ++indeg[static_cast<std::size_t>(to)];
  }
  std::vector<Index> order;
  std::vector<bool> placed(static_cast<std::size_t>(n), false);
  while (static_cast<Index>(order.size()) < n) {
    Index pick = -1;
    for (Index g = 0; g < n; ++g)
      if (!placed[static_cast<std::size_t>(g)] && indeg[static_cast<std::size_t>(g)] == 0) {
        pick = g;
        break;
      }
    if (pick < 0) throw InconsistencyError("group dag: cycle detected");
    placed[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (const auto& [from, to] : edges)
      if (from == pick) --indeg[static_cast<std::size_t>(to)];
  }
  return order;
}

nlohmann::json GroupDag::to_json() const {
  nlohmann::json doc;
  doc["groups"] = groups;
  auto e = nlohmann::json::array();
  for (const auto& [from, to] : edges) e.push_back({from, to});
  doc["edges"] = e;
  return doc;
}

GroupDag GroupDag::from_json(const nlohmann::json& doc) {
  GroupDag g;
  g.groups = doc.at("groups").get<std::vector<std::vector<std::string>>>();
  for (const auto& e : doc.at("edges"))
    g.edges.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>());
  if (!g.acyclic()) throw InconsistencyError("group dag: cycle in serialized form");
  return g;
}

std::set<std::string> markov_blanket(const MixedGraph& dag, const std::string& node) {
  if (!dag.directed_part_acyclic())
    throw ContractError("markov_blanket: directed part is not acyclic");
  const Index y = dag.index_of(node);
  std::set<std::string> blanket;
  for (const Index p : dag.parents(y)) blanket.insert(dag.name_of(p));
  for (const Index c : dag.children(y)) {
    blanket.insert(dag.name_of(c));
    for (const Index cp : dag.parents(c))
      if (cp != y) blanket.insert(dag.name_of(cp));
  }
  blanket.erase(node);
  return blanket;
}

GroupDag collapse_groups(const MixedGraph& pdag) {
  const Index n = pdag.node_count();
  std::vector<Index> component(static_cast<std::size_t>(n), -1);
  Index next = 0;
  for (Index v = 0; v < n; ++v) {
    if (component[static_cast<std::size_t>(v)] >= 0) continue;
    // Flood fill along undirected edges only.
    std::vector<Index> stack{v};
    component[static_cast<std::size_t>(v)] = next;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (const Index w : pdag.undirected_neighbors(u))
        if (component[static_cast<std::size_t>(w)] < 0) {
          component[static_cast<std::size_t>(w)] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }

  GroupDag out;
  out.groups.assign(static_cast<std::size_t>(next), {});
  for (Index v = 0; v < n; ++v)
    out.groups[static_cast<std::size_t>(component[static_cast<std::size_t>(v)])].push_back(
        pdag.name_of(v));

  std::set<std::pair<Index, Index>> lifted;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (pdag.directed(i, j)) {
        const Index gi = component[static_cast<std::size_t>(i)];
        const Index gj = component[static_cast<std::size_t>(j)];
        if (gi != gj) lifted.insert({gi, gj});
      }
  out.edges.assign(lifted.begin(), lifted.end());
  if (!out.acyclic()) throw InconsistencyError("collapse_groups: lifted graph is cyclic");
  return out;
}

MixedGraph induced_subgraph(const MixedGraph& g, const std::set<std::string>& keep) {
  std::vector<std::string> nodes;
  for (const auto& n : g.nodes())
    if (keep.count(n)) nodes.push_back(n);
  MixedGraph out(nodes);
  for (const auto& a : nodes)
    for (const auto& b : nodes) {
      if (g.directed(g.index_of(a), g.index_of(b)))
        out.add_directed(out.index_of(a), out.index_of(b));
    }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (g.undirected(g.index_of(nodes[i]), g.index_of(nodes[j])))
        out.add_undirected(static_cast<Index>(i), static_cast<Index>(j));
  return out;
}

}  // namespace shiftlab
