#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "amrcl/graph.hpp"
#include "amrcl/smatch.hpp"

namespace amrcl {

enum class FineGrainedMetric {
  unlabeled,
  no_wsd,
  concepts,
  named_entities,
  negation,
  wikification,
  reentrancies,
  srl,
};

inline constexpr std::array<FineGrainedMetric, 8> kFineGrainedMetrics = {
    FineGrainedMetric::unlabeled,      FineGrainedMetric::no_wsd,
    FineGrainedMetric::concepts,       FineGrainedMetric::named_entities,
    FineGrainedMetric::negation,       FineGrainedMetric::wikification,
    FineGrainedMetric::reentrancies,   FineGrainedMetric::srl,
};

std::string_view to_string(FineGrainedMetric metric);
std::optional<FineGrainedMetric> metric_from_string(std::string_view text);

// The triple set a metric scores, derived from the canonical triples:
//   unlabeled       every relation role becomes `:rel`
//   no_wsd          `-NN` sense suffixes dropped from concepts
//   concepts        instance triples
//   named_entities  nodes with a `:name` edge, the edge, the name node and
//                   its `:opN` attributes
//   negation        `:polarity` triples
//   wikification    `:wiki` triples
//   reentrancies    variables with two or more incoming relations, with their
//                   instance triples and every relation touching them
//   srl             `:ARGn` relations
std::vector<Triple> metric_triples(const AmrGraph& graph, FineGrainedMetric metric);

struct FineGrainedReport {
  std::array<ScoredPair, kFineGrainedMetrics.size()> scores;

  const ScoredPair& operator[](FineGrainedMetric metric) const {
    return scores[static_cast<std::size_t>(metric)];
  }
};

FineGrainedReport fine_grained(const AmrGraph& gold, const AmrGraph& pred,
                               const SmatchOptions& options = {});

}  // namespace amrcl
