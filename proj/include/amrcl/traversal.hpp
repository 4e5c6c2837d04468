#pragma once

#include <cstddef>
#include <vector>

#include "amrcl/graph.hpp"

namespace amrcl {

// Depth-first walk from the root following outgoing edges in stored order.
// This single traversal defines PENMAN serialization, linearization and node
// depth, so the three always agree.
//
// The visitor receives:
//   open(node_index, depth)            first visit of a variable
//   constant(edge)                     attribute edge
//   revisit(edge, target_index)        relation to an already visited variable
//   descend(edge)                      relation about to open its target
//   close(node_index)                  all edges of the node consumed
// Relations to unbound variables are skipped.
template <class Visitor>
void walk_depth_first(const AmrGraph& graph, Visitor&& visitor) {
  const std::size_t root = graph.index_of(graph.root());
  if (root == AmrGraph::npos) return;

  struct Frame {
    std::size_t node;
    std::size_t next = 0;
    int depth;
  };
  std::vector<bool> visited(graph.variable_count(), false);
  std::vector<Frame> stack;
  visited[root] = true;
  visitor.open(root, 1);
  stack.push_back({root, 0, 1});

  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto out = graph.outgoing(frame.node);
    if (frame.next == out.size()) {
      visitor.close(frame.node);
      stack.pop_back();
      continue;
    }
    const Edge& edge = graph.edges()[out[frame.next++]];
    if (edge.kind == EdgeKind::attribute) {
      visitor.constant(edge);
      continue;
    }
    const std::size_t target = graph.index_of(edge.target);
    if (target == AmrGraph::npos) continue;
    if (visited[target]) {
      visitor.revisit(edge, target);
      continue;
    }
    visited[target] = true;
    const int depth = frame.depth + 1;
    visitor.descend(edge);
    visitor.open(target, depth);
    stack.push_back({target, 0, depth});
  }
}

}  // namespace amrcl
