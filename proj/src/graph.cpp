#include "amrcl/graph.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "amrcl/traversal.hpp"

namespace amrcl {

AmrGraph::AmrGraph(std::string root, std::vector<Node> nodes, std::vector<Edge> edges)
    : root_(std::move(root)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].variable, i);
  outgoing_.resize(nodes_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto it = index_.find(edges_[e].source);
    if (it != index_.end()) outgoing_[it->second].push_back(e);
  }
}

std::vector<Edge> AmrGraph::relations() const {
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (e.kind == EdgeKind::relation) out.push_back(e);
  return out;
}

std::vector<Edge> AmrGraph::attributes() const {
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (e.kind == EdgeKind::attribute) out.push_back(e);
  return out;
}

std::size_t AmrGraph::index_of(std::string_view variable) const {
  auto it = index_.find(std::string(variable));
  return it == index_.end() ? npos : it->second;
}

const std::string* AmrGraph::label_of(std::string_view variable) const {
  const std::size_t i = index_of(variable);
  return i == npos ? nullptr : &nodes_[i].label;
}

bool AmrGraph::operator==(const AmrGraph& other) const {
  return root_ == other.root_ && nodes_ == other.nodes_ && edges_ == other.edges_;
}

bool is_inverse_role(std::string_view role) {
  static constexpr std::string_view kNotInverse[] = {":consist-of", ":prep-out-of",
                                                     ":prep-on-behalf-of"};
  if (role.size() <= 4 || !role.ends_with("-of")) return false;
  return std::find(std::begin(kNotInverse), std::end(kNotInverse), role) == std::end(kNotInverse);
}

std::string invert_role(std::string_view role) {
  if (is_inverse_role(role)) return std::string(role.substr(0, role.size() - 3));
  return std::string(role) + "-of";
}

namespace {

std::string strip_quotes(std::string_view value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    return std::string(value.substr(1, value.size() - 2));
  return std::string(value);
}

}  // namespace

std::vector<Triple> to_triples(const AmrGraph& graph) {
  std::vector<Triple> out;
  out.reserve(1 + graph.nodes().size() + graph.edges().size());
  if (const std::string* label = graph.label_of(graph.root()))
    out.push_back({graph.root(), ":top", *label, TripleKind::top});
  for (const auto& n : graph.nodes())
    out.push_back({n.variable, ":instance", n.label, TripleKind::instance});
  for (const auto& e : graph.edges()) {
    if (e.kind == EdgeKind::attribute) {
      out.push_back({e.source, e.role, strip_quotes(e.target), TripleKind::attribute});
    } else if (is_inverse_role(e.role)) {
      out.push_back({e.target, invert_role(e.role), e.source, TripleKind::relation});
    } else {
      out.push_back({e.source, e.role, e.target, TripleKind::relation});
    }
  }
  return out;
}

std::unordered_map<std::string, int> incoming_relation_counts(const AmrGraph& graph) {
  std::unordered_map<std::string, int> counts;
  for (const auto& t : to_triples(graph))
    if (t.kind == TripleKind::relation) ++counts[t.object];
  return counts;
}

int reentrancy_count(const AmrGraph& graph) {
  int total = 0;
  for (const auto& [var, n] : incoming_relation_counts(graph))
    if (n >= 2) total += n - 1;
  return total;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::missing_root: return "MissingRoot";
    case ViolationKind::root_unbound: return "RootUnbound";
    case ViolationKind::duplicate_variable: return "DuplicateVariable";
    case ViolationKind::dangling_reference: return "DanglingReference";
    case ViolationKind::bad_role: return "BadRole";
    case ViolationKind::disconnected: return "Disconnected";
    case ViolationKind::unreachable: return "Unreachable";
    case ViolationKind::empty_graph: return "EmptyGraph";
  }
  return "Unknown";
}

bool looks_like_variable(std::string_view token) {
  if (token.empty() || !std::islower(static_cast<unsigned char>(token[0]))) return false;
  return std::all_of(token.begin() + 1, token.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::vector<Violation> validate(const AmrGraph& graph) {
  std::vector<Violation> out;
  if (graph.empty()) {
    out.push_back({ViolationKind::empty_graph, "", "graph has no instances"});
    return out;
  }
  if (graph.root().empty()) {
    out.push_back({ViolationKind::missing_root, "", "graph has no root"});
  } else if (!graph.has_variable(graph.root())) {
    out.push_back({ViolationKind::root_unbound, graph.root(), "root has no instance"});
  }

  std::unordered_set<std::string> seen;
  for (const auto& n : graph.nodes())
    if (!seen.insert(n.variable).second)
      out.push_back({ViolationKind::duplicate_variable, n.variable,
                     "variable '" + n.variable + "' bound more than once"});

  for (const auto& e : graph.edges()) {
    if (e.role.size() < 2 || e.role[0] != ':')
      out.push_back({ViolationKind::bad_role, e.role, "role '" + e.role + "' must start with ':'"});
    if (!graph.has_variable(e.source))
      out.push_back({ViolationKind::dangling_reference, e.source,
                     "edge source '" + e.source + "' is unbound"});
    if (e.kind == EdgeKind::relation && !graph.has_variable(e.target))
      out.push_back({ViolationKind::dangling_reference, e.target,
                     "relation target '" + e.target + "' is unbound"});
  }

  // Undirected connectivity over variables.
  const std::size_t n = graph.variable_count();
  std::vector<std::vector<std::size_t>> adjacent(n);
  for (const auto& e : graph.edges()) {
    if (e.kind != EdgeKind::relation) continue;
    const std::size_t a = graph.index_of(e.source);
    const std::size_t b = graph.index_of(e.target);
    if (a == AmrGraph::npos || b == AmrGraph::npos) continue;
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  }
  const std::size_t root = graph.index_of(graph.root());
  const std::size_t start = root == AmrGraph::npos ? 0 : root;
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> work{start};
  reached[start] = true;
  while (!work.empty()) {
    const std::size_t v = work.back();
    work.pop_back();
    for (std::size_t w : adjacent[v])
      if (!reached[w]) {
        reached[w] = true;
        work.push_back(w);
      }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    out.push_back({ViolationKind::disconnected, "", "graph has more than one component"});
    return out;
  }

  // Every variable must be reachable along edges as written, otherwise the
  // depth-first serialization cannot print it.
  if (root != AmrGraph::npos) {
    struct Marker {
      std::vector<bool>& hit;
      void open(std::size_t i, int) { hit[i] = true; }
      void constant(const Edge&) {}
      void revisit(const Edge&, std::size_t) {}
      void descend(const Edge&) {}
      void close(std::size_t) {}
    };
    std::vector<bool> hit(n, false);
    walk_depth_first(graph, Marker{hit});
    for (std::size_t i = 0; i < n; ++i)
      if (!hit[i] && graph.index_of(graph.nodes()[i].variable) == i)
        out.push_back({ViolationKind::unreachable, graph.nodes()[i].variable,
                       "variable '" + graph.nodes()[i].variable +
                           "' is not reachable from the root along written edges"});
  }
  return out;
}

}  // namespace amrcl
