#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "amrcl/corpus.hpp"
#include "amrcl/linearize.hpp"
#include "amrcl/penman.hpp"
#include "amrcl/structure.hpp"
#include "doctest.h"

using namespace amrcl;

namespace {

// Depth of each variable read off PENMAN text: the parenthesis nesting at the
// point where the variable is defined.
std::map<std::string, int> nesting_depth(const std::string& text) {
  std::map<std::string, int> depth;
  int level = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '(') {
      ++level;
      std::size_t a = i + 1;
      while (text[a] == ' ') ++a;
      std::size_t b = a;
      while (text[b] != ' ' && text[b] != '/') ++b;
      depth[text.substr(a, b - a)] = level;
    } else if (c == ')') {
      --level;
    }
  }
  return depth;
}

// Shortest directed path from the root along written edges, root = 1.
std::map<std::string, int> bfs_depth(const AmrGraph& g) {
  std::map<std::string, int> depth{{g.root(), 1}};
  std::deque<std::string> queue{g.root()};
  while (!queue.empty()) {
    const std::string v = queue.front();
    queue.pop_front();
    for (const auto& e : g.edges())
      if (e.kind == EdgeKind::relation && e.source == v && !depth.contains(e.target)) {
        depth[e.target] = depth[v] + 1;
        queue.push_back(e.target);
      }
  }
  return depth;
}

std::vector<Triple> sorted_triples(const AmrGraph& g) {
  auto t = to_triples(g);
  std::sort(t.begin(), t.end());
  return t;
}

bool is_sub_multiset(const std::vector<Triple>& small, const std::vector<Triple>& large) {
  return std::includes(large.begin(), large.end(), small.begin(), small.end());
}

}  // namespace

TEST_CASE("die-01 depths") {
  const auto a = compute_depth(parse_penman("(d / die-01 :ARG1 (s / soldier :quant 9))"));
  CHECK(a.node_depth.at("d") == 1);
  CHECK(a.node_depth.at("s") == 2);
  CHECK(a.graph_depth == 2);
}

TEST_CASE("single node has depth 1") {
  CHECK(graph_depth(parse_penman("(a / amr-empty)")) == 1);
}

TEST_CASE("attribute leaves convention adds a layer only below attributes") {
  const auto g = parse_penman("(d / die-01 :ARG1 (s / soldier :quant 9))");
  CHECK(graph_depth(g, DepthConvention::attribute_leaves) == 3);
  CHECK(graph_depth(parse_penman("(d / die-01 :polarity - :ARG1 (s / soldier))"),
                    DepthConvention::attribute_leaves) == 2);
  CHECK(graph_depth(parse_penman("(a / amr-empty)"), DepthConvention::attribute_leaves) == 1);
}

TEST_CASE("re-entrant node keeps its first-visit depth") {
  // b is reached first through the deep chain a > c > d > b; the later direct
  // edge a :ARG1 b would give a shorter path.
  const std::string text =
      "(a / alpha :ARG0 (c / gamma :ARG0 (d / delta :ARG0 (b / beta))) :ARG1 b)";
  const auto g = parse_penman(text);
  const auto a = compute_depth(g);
  const auto oracle = nesting_depth(text);
  for (const auto& [var, d] : oracle) CHECK(a.node_depth.at(var) == d);
  CHECK(a.node_depth.at("b") == 4);
  CHECK(bfs_depth(g).at("b") == 2);
  CHECK(a.graph_depth == 4);
}

TEST_CASE("depth agrees with nesting and bounds the shortest path on synthetic graphs") {
  for (const auto& inst : gen_synthetic_corpus(500, 1, 9, 13)) {
    const std::string text = serialize_penman(inst.graph);
    const auto a = compute_depth(inst.graph);
    const auto oracle = nesting_depth(text);
    const auto bfs = bfs_depth(inst.graph);
    int deepest = 0;
    for (const auto& [var, d] : oracle) {
      CHECK(a.node_depth.at(var) == d);
      CHECK(bfs.at(var) <= d);
      deepest = std::max(deepest, d);
    }
    CHECK(a.graph_depth == deepest);
    CHECK(inst.depth == deepest);
  }
}

TEST_CASE("extract_subgraph at depth 1 keeps the root only") {
  // "Nine of the twenty soldiers died."
  const auto g = parse_penman(
      "(d / die-01 :ARG1 (s / soldier :quant 9 :ARG1-of (i / include-91 :ARG2 (s2 / soldier "
      ":quant 20))))");
  const auto root = extract_subgraph(g, 1);
  CHECK(serialize_penman(root) == "(d / die-01)");
  CHECK(extract_subgraph(g, graph_depth(g)) == g);
  CHECK(extract_subgraph(g, 10) == g);
  CHECK_THROWS_AS(extract_subgraph(g, 0), InvalidDepth);
}

TEST_CASE("re-entrant edge from a removed node is dropped") {
  const std::string text = "(a / alpha :ARG0 (b / beta :ARG1 (c / gamma :ARG2 b)))";
  const auto g = parse_penman(text);
  const auto sub = extract_subgraph(g, 2);

  const auto depth = nesting_depth(text);
  std::vector<Triple> expected;
  for (const auto& t : to_triples(g)) {
    const bool keep_subject = depth.at(t.subject) <= 2;
    const bool keep_object = t.kind != TripleKind::relation || depth.at(t.object) <= 2;
    if (keep_subject && keep_object) expected.push_back(t);
  }
  std::sort(expected.begin(), expected.end());
  CHECK(sorted_triples(sub) == expected);
  CHECK(serialize_penman(sub) == "(a / alpha :ARG0 (b / beta))");
}

TEST_CASE("sub-graph laws on synthetic graphs") {
  for (const auto& inst : gen_synthetic_corpus(300, 1, 8, 17)) {
    const int depth = inst.depth;
    std::vector<Triple> previous;
    for (int d = 1; d <= depth; ++d) {
      const auto sub = extract_subgraph(inst.graph, d);
      const auto triples = sorted_triples(sub);
      CHECK(validate(sub).empty());
      CHECK(graph_depth(sub) == d);
      CHECK(is_sub_multiset(previous, triples));
      previous = triples;
    }
    CHECK(extract_subgraph(inst.graph, depth) == inst.graph);
  }
}

TEST_CASE("bucket level names") {
  CHECK(to_string(BucketLevel::structure) == "structure");
  CHECK(bucket_level_from_string("instance") == BucketLevel::instance);
  CHECK_FALSE(bucket_level_from_string("graph"));
}

namespace {

Instance full(std::string id, std::string_view amr) {
  Instance inst;
  inst.id = std::move(id);
  inst.graph = parse_penman(amr);
  inst.depth = graph_depth(inst.graph);
  return inst;
}

}  // namespace

TEST_CASE("one depth-3 graph") {
  const std::vector<Instance> corpus{
      full("g1", "(a / alpha :ARG0 (b / beta :ARG1 (c / gamma)))")};

  const auto sc = build_buckets(corpus, BucketLevel::structure);
  CHECK(sc.buckets.max_index() == 3);
  CHECK(sc.sub_instances.size() == 3);
  for (int i = 1; i <= 3; ++i)
    CHECK(sc.buckets.bucket(i) == std::vector<std::string>{sub_instance_id("g1", i)});
  for (const auto& sub : sc.sub_instances) {
    CHECK(sub.kind == InstanceKind::sub);
    CHECK(sub.parent_id == "g1");
    CHECK(graph_depth(sub.graph) == sub.depth);
  }

  const auto ic = build_buckets(corpus, BucketLevel::instance);
  CHECK(ic.buckets.max_index() == 3);
  CHECK(ic.buckets.bucket(1).empty());
  CHECK(ic.buckets.bucket(2).empty());
  CHECK(ic.buckets.bucket(3) == std::vector<std::string>{"g1"});
  CHECK(ic.sub_instances.empty());
}

TEST_CASE("graphs of depth 2 and 4 give six sub-instances") {
  const std::vector<Instance> corpus{
      full("x", "(a / alpha :ARG0 (b / beta))"),
      full("y", "(a / alpha :ARG0 (b / beta :ARG1 (c / gamma :mod (d / delta))))")};
  const auto sc = build_buckets(corpus, BucketLevel::structure);
  CHECK(sc.sub_instances.size() == 6);
  CHECK(sc.buckets.total() == 6);
  CHECK(sc.buckets.bucket(1).size() == 2);
  CHECK(sc.buckets.bucket(2).size() == 2);
  CHECK(sc.buckets.bucket(3) == std::vector<std::string>{sub_instance_id("y", 3)});
  CHECK(sc.buckets.index_of(sub_instance_id("y", 4)) == 4);
  CHECK(sc.buckets.index_of("nope") == 0);
}

TEST_CASE("bucket totals over a synthetic corpus") {
  const auto corpus = gen_synthetic_corpus(400, 1, 9, 3);
  const auto sc = build_buckets(corpus, BucketLevel::structure);
  const auto ic = build_buckets(corpus, BucketLevel::instance);
  const int depth_sum = std::accumulate(corpus.begin(), corpus.end(), 0,
                                        [](int s, const Instance& i) { return s + i.depth; });
  CHECK(sc.buckets.total() == static_cast<std::size_t>(depth_sum));
  CHECK(ic.buckets.total() == corpus.size());
  for (const auto& inst : corpus) CHECK(ic.buckets.index_of(inst.id) == inst.depth);
  // Every graph of depth >= i contributes one sub-instance to S_i.
  for (int i = 1; i <= sc.buckets.max_index(); ++i) {
    const auto deep = std::count_if(corpus.begin(), corpus.end(),
                                    [&](const Instance& x) { return x.depth >= i; });
    CHECK(sc.buckets.bucket(i).size() == static_cast<std::size_t>(deep));
  }
}

TEST_CASE("bucket errors") {
  CHECK_THROWS_AS(build_buckets({}, BucketLevel::instance), EmptyCorpus);
  CHECK_THROWS(BucketSet(BucketLevel::instance, {{"a"}, {"a"}}));
  const BucketSet set(BucketLevel::instance, {{"a"}});
  CHECK_THROWS_AS(set.bucket(0), std::out_of_range);
  CHECK_THROWS_AS(set.bucket(2), std::out_of_range);
}
