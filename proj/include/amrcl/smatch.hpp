#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "amrcl/graph.hpp"

namespace amrcl {

struct SmatchOptions {
  // Restart 0 is seeded greedily from concept matches; the rest are random.
  int restarts = 4;
  std::uint64_t seed = 0;
};

struct ScoredPair {
  std::string gold_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Gold variable -> predicted variable, for the mapped gold variables.
  std::vector<std::pair<std::string, std::string>> mapping;
  int matched = 0;
  int gold_total = 0;
  int pred_total = 0;
};

// precision = matched / pred, recall = matched / gold, f1 their harmonic
// mean; a zero denominator scores 0, except that two empty sets score 1.
ScoredPair score_from_counts(int matched, int gold_total, int pred_total);

// Best match count between two triple multisets found by hill climbing over
// injective variable mappings. Variables are the subjects of all triples and
// the objects of relation triples.
ScoredPair smatch_triples(std::span<const Triple> gold, std::span<const Triple> pred,
                          const SmatchOptions& options = {});

ScoredPair smatch_score(const AmrGraph& gold, const AmrGraph& pred,
                        const SmatchOptions& options = {});

class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kOracleMaxVariables = 8;
inline constexpr std::uint64_t kOracleMaxMappings = 10'000'000;

// Exact optimum by enumerating every injective mapping from the smaller
// variable set into the larger. Throws TooLarge past kOracleMaxVariables
// variables on the smaller side or kOracleMaxMappings mappings.
ScoredPair smatch_oracle_triples(std::span<const Triple> gold, std::span<const Triple> pred);
ScoredPair smatch_oracle(const AmrGraph& gold, const AmrGraph& pred);

}  // namespace amrcl
