#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "amrcl/corpus.hpp"
#include "amrcl/penman.hpp"
#include "amrcl/structure.hpp"
#include "doctest.h"

using namespace amrcl;

namespace {

constexpr const char* kTwoBlocks = R"(# AMR release (generated on Mon Jan 1, 2024)

# ::id nw.1 ::date 2012-01-01 ::annotator A
# ::snt Nine of the twenty soldiers died .
(d / die-01
      :ARG1 (s / soldier :quant 9))

# ::id nw.2
# ::snt The boy wants to go .
(w / want-01
      :ARG0 (b / boy)
      :ARG1 (g / go-02 :ARG0 b))
)";

}  // namespace

TEST_CASE("two-block file") {
  std::istringstream in(kTwoBlocks);
  const auto result = read_amr_corpus(in, "test.txt");
  CHECK(result.errors.empty());
  REQUIRE(result.instances.size() == 2);
  CHECK(result.instances[0].id == "nw.1");
  CHECK(result.instances[0].snt == "Nine of the twenty soldiers died .");
  CHECK(result.instances[0].depth == 2);
  CHECK(result.instances[0].kind == InstanceKind::full);
  CHECK(result.instances[1].snt == "The boy wants to go .");
  CHECK(result.instances[1].depth == 2);
}

TEST_CASE("metadata fields") {
  std::istringstream in(kTwoBlocks);
  CorpusReader reader(in, "x");
  const auto block = reader.next_block();
  REQUIRE(block);
  CHECK(block->metadata.at("id") == "nw.1");
  CHECK(block->metadata.at("date") == "2012-01-01");
  CHECK(block->metadata.at("annotator") == "A");
  CHECK(block->line == 3);
}

TEST_CASE("malformed block is reported and the rest still loads") {
  std::istringstream in(
      "# ::id a\n# ::snt one\n(a / alpha :ARG0 (b / beta)\n\n"
      "# ::id b\n# ::snt two\n(c / gamma)\n");
  const auto result = read_amr_corpus(in, "f");
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].id == "a");
  CHECK(result.errors[0].line == 1);
  CHECK(result.errors[0].message.find("UnbalancedParens") != std::string::npos);
  REQUIRE(result.instances.size() == 1);
  CHECK(result.instances[0].id == "b");
}

TEST_CASE("missing ids are synthesized from source and line") {
  std::istringstream in("\n\n(a / alpha)\n\r\n(b / beta)\r\n");
  const auto result = read_amr_corpus(in, "plain.amr");
  REQUIRE(result.instances.size() == 2);
  CHECK(result.instances[0].id == "plain.amr:3");
  CHECK(result.instances[1].id == "plain.amr:5");
  CHECK(result.instances[1].snt.empty());
}

TEST_CASE("writer output reads back") {
  const auto corpus = gen_synthetic_corpus(50, 1, 7, 21);
  std::stringstream buffer;
  for (const auto& inst : corpus) write_amr_block(buffer, inst);
  const auto back = read_amr_corpus(buffer, "synth");
  CHECK(back.errors.empty());
  REQUIRE(back.instances.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(back.instances[i].id == corpus[i].id);
    CHECK(back.instances[i].snt == corpus[i].snt);
    CHECK(back.instances[i].graph == corpus[i].graph);
    CHECK(back.instances[i].depth == corpus[i].depth);
  }
}

TEST_CASE("reading from a path") {
  const auto path = std::filesystem::temp_directory_path() / "amrcl_corpus_test.txt";
  {
    std::ofstream out(path);
    out << kTwoBlocks;
  }
  const auto result = read_amr_corpus(path);
  CHECK(result.instances.size() == 2);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_amr_corpus(path), std::runtime_error);
}

TEST_CASE("synthetic corpus is deterministic and valid") {
  const auto a = gen_synthetic_corpus(100, 1, 6, 7);
  const auto b = gen_synthetic_corpus(100, 1, 6, 7);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].snt == b[i].snt);
    CHECK(a[i].graph == b[i].graph);
    CHECK(validate(a[i].graph).empty());
    CHECK(a[i].depth >= 1);
    CHECK(a[i].depth <= 6);
    CHECK(graph_depth(a[i].graph) == a[i].depth);
  }
  CHECK(gen_synthetic_corpus(100, 1, 6, 8)[0].graph != a[0].graph);
}

TEST_CASE("synthetic corpus uses the advertised features") {
  const auto corpus = gen_synthetic_corpus(500, 2, 8, 3);
  int reentrant = 0, negated = 0, named = 0, wiki = 0, inverse = 0;
  for (const auto& inst : corpus) {
    reentrant += reentrancy_count(inst.graph) > 0;
    bool neg = false, nm = false, wk = false, inv = false;
    for (const auto& e : inst.graph.edges()) {
      neg |= e.role == ":polarity";
      nm |= e.role == ":name";
      wk |= e.role == ":wiki";
      inv |= is_inverse_role(e.role);
    }
    negated += neg;
    named += nm;
    wiki += wk;
    inverse += inv;
  }
  CHECK(reentrant > 50);
  CHECK(negated > 50);
  CHECK(named > 50);
  CHECK(wiki == named);
  CHECK(inverse > 20);
}

TEST_CASE("synthetic depth histogram is close to uniform") {
  const std::size_t n = 10000;
  const auto corpus = gen_synthetic_corpus(n, 1, 8, 99);
  std::map<int, int> hist;
  for (const auto& inst : corpus) ++hist[inst.depth];
  const double share = static_cast<double>(n) / 8;
  REQUIRE(hist.size() == 8);
  for (const auto& [depth, count] : hist) {
    CHECK(count >= 0.8 * share);
    CHECK(count <= 1.2 * share);
  }
}

TEST_CASE("synthetic range errors") {
  CHECK_THROWS_AS(gen_synthetic_corpus(0, 1, 3, 0), InvalidRange);
  CHECK_THROWS_AS(gen_synthetic_corpus(5, 0, 3, 0), InvalidRange);
  CHECK_THROWS_AS(gen_synthetic_corpus(5, 4, 3, 0), InvalidRange);
  CHECK_THROWS_AS(gen_synthetic_corpus(5, 1, 13, 0), InvalidRange);
  const auto deep = gen_synthetic_corpus(20, 12, 12, 0);
  for (const auto& inst : deep) CHECK(inst.depth == 12);
}
