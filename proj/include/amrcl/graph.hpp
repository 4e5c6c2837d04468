#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace amrcl {

// A variable bound to its concept label, e.g. (d / die-01).
struct Node {
  std::string variable;
  std::string label;

  bool operator==(const Node&) const = default;
};

enum class EdgeKind { relation, attribute };

// An outgoing edge as written in the source text. For relations `target` is a
// variable; for attributes it is a constant literal. Inverse roles (`:ARG0-of`)
// are kept as written; canonical triples normalize them.
struct Edge {
  std::string source;
  std::string role;
  std::string target;
  EdgeKind kind = EdgeKind::relation;

  bool operator==(const Edge&) const = default;
};

enum class TripleKind { instance, relation, attribute, top };

struct Triple {
  std::string subject;
  std::string role;
  std::string object;
  TripleKind kind = TripleKind::instance;

  auto operator<=>(const Triple&) const = default;
};

// Rooted, directed, labeled graph. Node and edge order is preserved from the
// source and drives every depth-first traversal. Values are immutable once
// built; construction does not check validity (see validate()).
class AmrGraph {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  AmrGraph() = default;
  AmrGraph(std::string root, std::vector<Node> nodes, std::vector<Edge> edges);

  const std::string& root() const { return root_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }

  std::vector<Edge> relations() const;
  std::vector<Edge> attributes() const;

  bool empty() const { return nodes_.empty(); }
  std::size_t variable_count() const { return nodes_.size(); }

  // Index of the first node binding `variable`, or npos.
  std::size_t index_of(std::string_view variable) const;
  bool has_variable(std::string_view variable) const { return index_of(variable) != npos; }
  const std::string* label_of(std::string_view variable) const;

  // Edge indices leaving each node, in stored order. Edges whose source is
  // unbound are not listed.
  std::span<const std::size_t> outgoing(std::size_t node) const { return outgoing_[node]; }

  bool operator==(const AmrGraph& other) const;

 private:
  std::string root_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

// Roles ending in `-of` that are real role names rather than inversions.
bool is_inverse_role(std::string_view role);
std::string invert_role(std::string_view role);

// Canonical triple list: one top triple, instance triples, relation triples
// with inverse roles normalized, attribute triples with string quotes removed.
std::vector<Triple> to_triples(const AmrGraph& graph);

// Number of incoming relation edges per variable (canonical direction).
std::unordered_map<std::string, int> incoming_relation_counts(const AmrGraph& graph);
// Σ (in-degree − 1) over variables with two or more incoming relations.
int reentrancy_count(const AmrGraph& graph);

enum class ViolationKind {
  missing_root,
  root_unbound,
  duplicate_variable,
  dangling_reference,
  bad_role,
  disconnected,
  unreachable,
  empty_graph,
};

struct Violation {
  ViolationKind kind;
  std::string element;
  std::string message;
};

std::string_view to_string(ViolationKind kind);

// Empty iff every graph invariant holds.
std::vector<Violation> validate(const AmrGraph& graph);

// Heuristic for bare tokens: a letter optionally followed by digits, the
// shape of variables in released corpora.
bool looks_like_variable(std::string_view token);

}  // namespace amrcl
