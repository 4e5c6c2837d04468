#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrcl/fine_grained.hpp"
#include "amrcl/graph.hpp"
#include "amrcl/smatch.hpp"

namespace amrcl {

// Depth range [lo, hi]; an open top bin has no hi.
struct DepthBin {
  int lo = 1;
  std::optional<int> hi;

  bool contains(int depth) const { return depth >= lo && (!hi || depth <= *hi); }
  std::string label() const;
};

// Parses "1,2,3,4,5,6,7+"; items are `k`, `a-b` or a final `k+`. Bins must
// be increasing and non-overlapping.
std::vector<DepthBin> parse_bins(std::string_view spec);
inline constexpr std::string_view kDefaultBins = "1,2,3,4,5,6,7+";

struct GraphPair {
  std::string id;
  AmrGraph gold;
  // Missing when the prediction could not be recovered; scored as empty.
  std::optional<AmrGraph> pred;
};

struct ScoreRecord {
  std::string id;
  int depth = 0;  // gold graph depth
  ScoredPair score;
  std::optional<FineGrainedReport> fine;
};

// Scores pairs on `jobs` threads. Pair i is searched with a seed derived
// from (options.seed, i), so results do not depend on the thread count.
std::vector<ScoreRecord> score_corpus(std::span<const GraphPair> pairs,
                                      const SmatchOptions& options, int jobs = 1,
                                      bool with_fine_grained = false);

// Pooled matched/gold/pred counts over all records.
ScoredPair micro_average(std::span<const ScoreRecord> records);
FineGrainedReport micro_average_fine(std::span<const ScoreRecord> records);

struct BinRow {
  DepthBin bin;
  std::size_t count = 0;
  std::optional<double> mean_f1;  // empty for an empty bin
};

class EmptyInput : public std::invalid_argument {
 public:
  EmptyInput() : std::invalid_argument("EmptyInput: no pairs to report") {}
};

// Mean per-pair F1 by gold depth. Throws std::out_of_range when a depth falls
// in no bin.
std::vector<BinRow> stratify(std::span<const ScoreRecord> records, std::span<const DepthBin> bins);

std::vector<BinRow> depth_stratified_report(std::span<const GraphPair> pairs,
                                            std::span<const DepthBin> bins,
                                            const SmatchOptions& options = {});

// One JSON object per pair: id, depth, matched, gold_total, pred_total,
// precision, recall, f1 and the fine-grained scores when present.
void write_scores_jsonl(std::ostream& out, std::span<const ScoreRecord> records);
std::vector<ScoreRecord> read_scores_jsonl(std::istream& in);

void write_scores_tsv(std::ostream& out, std::span<const ScoreRecord> records);
void write_depth_table_tsv(std::ostream& out, std::span<const BinRow> rows);
// Corpus micro-average, per-depth table and, when records carry them,
// fine-grained micro-averages.
std::string report_json(std::span<const ScoreRecord> records, std::span<const BinRow> rows);

}  // namespace amrcl
