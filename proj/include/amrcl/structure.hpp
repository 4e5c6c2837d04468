#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amrcl/graph.hpp"
#include "amrcl/instance.hpp"

namespace amrcl {

// Whether attribute constants form a layer of their own. The default counts
// concept nodes only; the other convention exists to measure how sensitive
// depth statistics are to the choice.
enum class DepthConvention { concepts_only, attribute_leaves };

struct DepthAnnotatedGraph {
  AmrGraph graph;
  std::unordered_map<std::string, int> node_depth;
  int graph_depth = 0;
};

// Root is depth 1; every other variable sits one below the variable that
// first reaches it in the depth-first walk. Re-entrant edges never deepen a
// node.
DepthAnnotatedGraph compute_depth(const AmrGraph& graph,
                                  DepthConvention convention = DepthConvention::concepts_only);

int graph_depth(const AmrGraph& graph, DepthConvention convention = DepthConvention::concepts_only);

// Keeps the variables of depth <= `depth`, the relations between kept
// variables and the attributes of kept variables. Order is preserved.
AmrGraph extract_subgraph(const AmrGraph& graph, int depth);

enum class BucketLevel { structure, instance };

std::string_view to_string(BucketLevel level);
std::optional<BucketLevel> bucket_level_from_string(std::string_view text);

// Depth-indexed buckets. Index i holds instances of depth i; empty buckets
// are kept so the index always equals the depth.
class BucketSet {
 public:
  BucketSet() = default;
  BucketSet(BucketLevel level, std::vector<std::vector<std::string>> buckets);

  BucketLevel level() const { return level_; }
  int max_index() const { return static_cast<int>(buckets_.size()); }
  // 1-based.
  const std::vector<std::string>& bucket(int index) const;
  std::size_t total() const;
  // Bucket index of an instance id, or 0 when absent.
  int index_of(std::string_view id) const;

  bool operator==(const BucketSet& other) const {
    return level_ == other.level_ && buckets_ == other.buckets_;
  }

 private:
  BucketLevel level_ = BucketLevel::instance;
  std::vector<std::vector<std::string>> buckets_;
  std::unordered_map<std::string, int> index_;
};

class EmptyCorpus : public std::invalid_argument {
 public:
  EmptyCorpus() : std::invalid_argument("EmptyCorpus: no instances to bucket") {}
};

struct BucketBuild {
  BucketSet buckets;
  // Structure level only: one sub-instance per (graph, depth 1..D).
  std::vector<Instance> sub_instances;
};

// Id given to the depth-`depth` sub-instance of `parent_id`.
std::string sub_instance_id(std::string_view parent_id, int depth);

// Instance level places each full graph in bucket graph_depth. Structure
// level cuts every graph at each depth 1..D and buckets the cuts by depth.
// Instances keep corpus order inside each bucket.
BucketBuild build_buckets(std::span<const Instance> corpus, BucketLevel level);

}  // namespace amrcl
