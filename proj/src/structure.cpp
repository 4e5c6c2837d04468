#include "amrcl/structure.hpp"

#include <algorithm>

#include "amrcl/linearize.hpp"
#include "amrcl/traversal.hpp"

namespace amrcl {

namespace {

struct DepthRecorder {
  const AmrGraph& graph;
  DepthConvention convention;
  std::unordered_map<std::string, int> depth;
  int deepest = 0;

  void open(std::size_t i, int d) {
    depth.emplace(graph.nodes()[i].variable, d);
    deepest = std::max(deepest, d);
  }
  void constant(const Edge& e) {
    if (convention == DepthConvention::attribute_leaves)
      deepest = std::max(deepest, depth.at(e.source) + 1);
  }
  void revisit(const Edge&, std::size_t) {}
  void descend(const Edge&) {}
  void close(std::size_t) {}
};

}  // namespace

DepthAnnotatedGraph compute_depth(const AmrGraph& graph, DepthConvention convention) {
  DepthRecorder rec{graph, convention, {}};
  walk_depth_first(graph, rec);
  return {graph, std::move(rec.depth), rec.deepest};
}

int graph_depth(const AmrGraph& graph, DepthConvention convention) {
  DepthRecorder rec{graph, convention, {}};
  walk_depth_first(graph, rec);
  return rec.deepest;
}

AmrGraph extract_subgraph(const AmrGraph& graph, int depth) {
  if (depth < 1) throw InvalidDepth(depth);
  DepthRecorder rec{graph, DepthConvention::concepts_only, {}};
  walk_depth_first(graph, rec);
  if (depth >= rec.deepest) return graph;

  auto kept = [&](const std::string& var) {
    auto it = rec.depth.find(var);
    return it != rec.depth.end() && it->second <= depth;
  };
  std::vector<Node> nodes;
  for (const auto& n : graph.nodes())
    if (kept(n.variable)) nodes.push_back(n);
  std::vector<Edge> edges;
  for (const auto& e : graph.edges()) {
    if (!kept(e.source)) continue;
    if (e.kind == EdgeKind::relation && !kept(e.target)) continue;
    edges.push_back(e);
  }
  return AmrGraph(graph.root(), std::move(nodes), std::move(edges));
}

std::string_view to_string(BucketLevel level) {
  return level == BucketLevel::structure ? "structure" : "instance";
}

std::optional<BucketLevel> bucket_level_from_string(std::string_view text) {
  if (text == "structure") return BucketLevel::structure;
  if (text == "instance") return BucketLevel::instance;
  return std::nullopt;
}

BucketSet::BucketSet(BucketLevel level, std::vector<std::vector<std::string>> buckets)
    : level_(level), buckets_(std::move(buckets)) {
  for (std::size_t i = 0; i < buckets_.size(); ++i)
    for (const auto& id : buckets_[i])
      if (!index_.emplace(id, static_cast<int>(i + 1)).second)
        throw std::invalid_argument("instance '" + id + "' appears in more than one bucket slot");
}

const std::vector<std::string>& BucketSet::bucket(int index) const {
  if (index < 1 || index > max_index())
    throw std::out_of_range("bucket index " + std::to_string(index) + " outside 1.." +
                            std::to_string(max_index()));
  return buckets_[static_cast<std::size_t>(index - 1)];
}

std::size_t BucketSet::total() const {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

int BucketSet::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? 0 : it->second;
}

std::string sub_instance_id(std::string_view parent_id, int depth) {
  return std::string(parent_id) + "#d" + std::to_string(depth);
}

BucketBuild build_buckets(std::span<const Instance> corpus, BucketLevel level) {
  if (corpus.empty()) throw EmptyCorpus();
  std::vector<std::vector<std::string>> buckets;
  auto place = [&](int index, const std::string& id) {
    if (static_cast<int>(buckets.size()) < index) buckets.resize(static_cast<std::size_t>(index));
    buckets[static_cast<std::size_t>(index - 1)].push_back(id);
  };

  BucketBuild out;
  for (const auto& inst : corpus) {
    const int depth = graph_depth(inst.graph);
    if (level == BucketLevel::instance) {
      place(depth, inst.id);
      continue;
    }
    for (int d = 1; d <= depth; ++d) {
      Instance sub;
      sub.id = sub_instance_id(inst.id, d);
      sub.snt = inst.snt;
      sub.graph = extract_subgraph(inst.graph, d);
      sub.depth = d;
      sub.kind = InstanceKind::sub;
      sub.parent_id = inst.id;
      place(d, sub.id);
      out.sub_instances.push_back(std::move(sub));
    }
  }
  out.buckets = BucketSet(level, std::move(buckets));
  return out;
}

}  // namespace amrcl
