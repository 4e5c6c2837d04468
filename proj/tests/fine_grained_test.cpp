#include "amrcl/corpus.hpp"
#include "amrcl/fine_grained.hpp"
#include "amrcl/penman.hpp"
#include "doctest.h"
#include "support/random_graphs.hpp"

using namespace amrcl;

namespace {

std::size_t count(const AmrGraph& g, FineGrainedMetric m) { return metric_triples(g, m).size(); }

}  // namespace

TEST_CASE("metric names") {
  CHECK(kFineGrainedMetrics.size() == 8);
  for (auto m : kFineGrainedMetrics) CHECK(metric_from_string(to_string(m)) == m);
  CHECK_FALSE(metric_from_string("ner"));
}

TEST_CASE("identical graphs score 1 on every metric") {
  const auto g = parse_penman(
      "(w / want-01 :polarity - :ARG0 (p / person :name (n / name :op1 \"Ann\") :wiki \"Ann\") "
      ":ARG1 (g / go-02 :ARG0 p))");
  const auto report = fine_grained(g, g);
  for (auto m : kFineGrainedMetrics) CHECK(report[m].f1 == 1.0);

  // A graph with nothing to score for some metrics still scores 1 against itself.
  const auto bare = parse_penman("(a / alpha)");
  const auto empty_report = fine_grained(bare, bare);
  CHECK(count(bare, FineGrainedMetric::negation) == 0);
  for (auto m : kFineGrainedMetrics) CHECK(empty_report[m].f1 == 1.0);
}

TEST_CASE("one relabeled edge: unlabeled stays 1, overall drops") {
  const auto gold = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))");
  const auto pred = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG1 b))");
  const auto report = fine_grained(gold, pred);
  CHECK(report[FineGrainedMetric::unlabeled].f1 == 1.0);
  const auto overall = smatch_oracle(gold, pred);
  CHECK(overall.f1 < 1.0);
  CHECK(overall.matched == 6);
  CHECK(report[FineGrainedMetric::srl].f1 < 1.0);
  CHECK(report[FineGrainedMetric::concepts].f1 == 1.0);
}

TEST_CASE("missing polarity: negation 0, concepts unchanged") {
  const auto gold = parse_penman("(g / go-02 :polarity - :ARG0 (b / boy))");
  const auto pred = parse_penman("(g / go-02 :ARG0 (b / boy))");
  const auto report = fine_grained(gold, pred);
  CHECK(metric_triples(gold, FineGrainedMetric::negation) ==
        std::vector<Triple>{{"g", ":polarity", "-", TripleKind::attribute}});
  CHECK(report[FineGrainedMetric::negation].f1 == 0.0);
  CHECK(report[FineGrainedMetric::concepts].f1 == 1.0);
  CHECK(report[FineGrainedMetric::concepts].f1 == fine_grained(gold, gold)[FineGrainedMetric::concepts].f1);
}

TEST_CASE("no_wsd ignores sense numbers only") {
  const auto gold = parse_penman("(r / run-01 :ARG0 (d / dog))");
  const auto pred = parse_penman("(r / run-02 :ARG0 (d / dog))");
  const auto report = fine_grained(gold, pred);
  CHECK(report[FineGrainedMetric::no_wsd].f1 == 1.0);
  CHECK(report[FineGrainedMetric::concepts].f1 < 1.0);
  const auto other = fine_grained(gold, parse_penman("(r / walk-01 :ARG0 (d / dog))"));
  CHECK(other[FineGrainedMetric::no_wsd].f1 < 1.0);
}

TEST_CASE("named entity and wiki triples") {
  const auto g = parse_penman(
      "(v / visit-01 :ARG0 (p / person :name (n / name :op1 \"Ann\" :op2 \"Lee\") :wiki -) "
      ":ARG1 (c / city :name (n2 / name :op1 \"Rome\") :wiki \"Rome\"))");
  // p, n, c, n2 instances; two :name edges; three :opN attributes.
  CHECK(count(g, FineGrainedMetric::named_entities) == 4 + 2 + 3);
  CHECK(count(g, FineGrainedMetric::wikification) == 2);

  const auto wrong_name = parse_penman(
      "(v / visit-01 :ARG0 (p / person :name (n / name :op1 \"Ann\" :op2 \"Li\") :wiki -) "
      ":ARG1 (c / city :name (n2 / name :op1 \"Rome\") :wiki \"Rome\"))");
  const auto report = fine_grained(g, wrong_name);
  CHECK(report[FineGrainedMetric::named_entities].matched == 8);
  CHECK(report[FineGrainedMetric::wikification].f1 == 1.0);
}

TEST_CASE("reentrancy triples") {
  const auto g = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))");
  const auto t = metric_triples(g, FineGrainedMetric::reentrancies);
  // b's instance and its two incoming relations.
  CHECK(t.size() == 3);
  CHECK(count(parse_penman("(w / want-01 :ARG0 (b / boy))"), FineGrainedMetric::reentrancies) == 0);

  // Inverse roles count in their canonical direction: b is the ARG0 of both.
  const auto inv = parse_penman("(b / boy :ARG0-of (w / want-01) :ARG0-of (g / go-02))");
  CHECK(count(inv, FineGrainedMetric::reentrancies) == 3);
  const auto inv2 = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0-of b))");
  CHECK(count(inv2, FineGrainedMetric::reentrancies) == 3);
}

TEST_CASE("srl keeps core roles only") {
  const auto g = parse_penman("(g / go-02 :ARG0 (b / boy) :time (t / today) :ARG1-of (w / want-01))");
  const auto t = metric_triples(g, FineGrainedMetric::srl);
  CHECK(t.size() == 2);
  for (const auto& x : t) CHECK(x.role.starts_with(":ARG"));
}

TEST_CASE("unlabeled is never below labeled") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto [gold, pred] = testing::random_pair(rng, 5);
    const auto unlabeled = smatch_oracle_triples(metric_triples(gold, FineGrainedMetric::unlabeled),
                                                 metric_triples(pred, FineGrainedMetric::unlabeled));
    CHECK(unlabeled.matched >= smatch_oracle(gold, pred).matched);
  }
}

TEST_CASE("fine-grained over synthetic identity pairs") {
  for (const auto& inst : gen_synthetic_corpus(100, 1, 6, 8)) {
    const auto r = fine_grained(inst.graph, inst.graph);
    for (auto m : kFineGrainedMetrics) CHECK(r[m].f1 == 1.0);
  }
}
