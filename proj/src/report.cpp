#include "amrcl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <thread>

#include "amrcl/jsonl.hpp"
#include "amrcl/rng.hpp"
#include "amrcl/structure.hpp"
#include "json.hpp"

namespace amrcl {

using ordered_json = nlohmann::ordered_json;

std::string DepthBin::label() const {
  if (!hi) return std::to_string(lo) + "+";
  if (*hi == lo) return std::to_string(lo);
  return std::to_string(lo) + "-" + std::to_string(*hi);
}

namespace {

int parse_int(std::string_view text, std::string_view spec) {
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || value < 1)
    throw std::invalid_argument("bad depth bin '" + std::string(text) + "' in \"" +
                                std::string(spec) + "\"");
  return value;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::vector<DepthBin> parse_bins(std::string_view spec) {
  std::vector<DepthBin> bins;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!bins.empty() && !bins.back().hi)
      throw std::invalid_argument("open bin must be last in \"" + std::string(spec) + "\"");
    DepthBin bin;
    if (item.ends_with('+')) {
      bin.lo = parse_int(item.substr(0, item.size() - 1), spec);
    } else if (const std::size_t dash = item.find('-'); dash != std::string_view::npos) {
      bin.lo = parse_int(item.substr(0, dash), spec);
      bin.hi = parse_int(item.substr(dash + 1), spec);
      if (*bin.hi < bin.lo)
        throw std::invalid_argument("empty bin '" + std::string(item) + "'");
    } else {
      bin.lo = bin.hi.emplace(parse_int(item, spec));
    }
    if (!bins.empty() && bin.lo <= *bins.back().hi)
      throw std::invalid_argument("bins overlap or are out of order in \"" + std::string(spec) +
                                  "\"");
    bins.push_back(bin);
    start = comma + 1;
  }
  return bins;
}

std::vector<ScoreRecord> score_corpus(std::span<const GraphPair> pairs,
                                      const SmatchOptions& options, int jobs,
                                      bool with_fine_grained) {
  std::vector<ScoreRecord> records(pairs.size());
  auto work = [&](std::size_t i) {
    const GraphPair& pair = pairs[i];
    SmatchOptions local = options;
    local.seed = mix_seed(options.seed, i);
    ScoreRecord& rec = records[i];
    rec.id = pair.id;
    rec.depth = graph_depth(pair.gold);
    const AmrGraph empty;
    const AmrGraph& pred = pair.pred ? *pair.pred : empty;
    if (pair.pred) {
      rec.score = smatch_score(pair.gold, pred, local);
    } else {
      rec.score = score_from_counts(0, static_cast<int>(to_triples(pair.gold).size()), 0);
    }
    rec.score.gold_id = pair.id;
    if (with_fine_grained) rec.fine = fine_grained(pair.gold, pred, local);
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)),
                                                     pairs.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) work(i);
    return records;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < pairs.size(); i += workers) work(i);
    });
  for (auto& t : threads) t.join();
  return records;
}

ScoredPair micro_average(std::span<const ScoreRecord> records) {
  int matched = 0, gold = 0, pred = 0;
  for (const auto& r : records) {
    matched += r.score.matched;
    gold += r.score.gold_total;
    pred += r.score.pred_total;
  }
  return score_from_counts(matched, gold, pred);
}

FineGrainedReport micro_average_fine(std::span<const ScoreRecord> records) {
  FineGrainedReport out;
  for (std::size_t m = 0; m < kFineGrainedMetrics.size(); ++m) {
    int matched = 0, gold = 0, pred = 0;
    for (const auto& r : records) {
      if (!r.fine) continue;
      matched += r.fine->scores[m].matched;
      gold += r.fine->scores[m].gold_total;
      pred += r.fine->scores[m].pred_total;
    }
    out.scores[m] = score_from_counts(matched, gold, pred);
  }
  return out;
}

std::vector<BinRow> stratify(std::span<const ScoreRecord> records, std::span<const DepthBin> bins) {
  if (records.empty()) throw EmptyInput();
  std::vector<BinRow> rows;
  std::vector<double> sums(bins.size(), 0.0);
  for (const auto& b : bins) rows.push_back({b, 0, std::nullopt});
  for (const auto& r : records) {
    bool placed = false;
    for (std::size_t b = 0; b < bins.size() && !placed; ++b) {
      if (!bins[b].contains(r.depth)) continue;
      ++rows[b].count;
      sums[b] += r.score.f1;
      placed = true;
    }
    if (!placed)
      throw std::out_of_range("depth " + std::to_string(r.depth) + " of '" + r.id +
                              "' falls in no bin");
  }
  for (std::size_t b = 0; b < rows.size(); ++b)
    if (rows[b].count > 0) rows[b].mean_f1 = sums[b] / static_cast<double>(rows[b].count);
  return rows;
}

std::vector<BinRow> depth_stratified_report(std::span<const GraphPair> pairs,
                                            std::span<const DepthBin> bins,
                                            const SmatchOptions& options) {
  if (pairs.empty()) throw EmptyInput();
  const auto records = score_corpus(pairs, options);
  return stratify(records, bins);
}

namespace {

ordered_json score_json(const ScoredPair& s) {
  return ordered_json{{"matched", s.matched},     {"gold_total", s.gold_total},
                      {"pred_total", s.pred_total}, {"precision", s.precision},
                      {"recall", s.recall},       {"f1", s.f1}};
}

ScoredPair score_from_json(const nlohmann::json& j) {
  return score_from_counts(j.at("matched").get<int>(), j.at("gold_total").get<int>(),
                           j.at("pred_total").get<int>());
}

}  // namespace

void write_scores_jsonl(std::ostream& out, std::span<const ScoreRecord> records) {
  for (const auto& r : records) {
    ordered_json j{{"id", r.id}, {"depth", r.depth}};
    j.update(score_json(r.score));
    if (r.fine) {
      ordered_json fine = ordered_json::object();
      for (auto m : kFineGrainedMetrics) fine[std::string(to_string(m))] = score_json((*r.fine)[m]);
      j["fine_grained"] = std::move(fine);
    }
    out << j.dump() << '\n';
  }
}

std::vector<ScoreRecord> read_scores_jsonl(std::istream& in) {
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ScoreRecord r;
      r.id = j.at("id").get<std::string>();
      r.depth = j.at("depth").get<int>();
      if (r.depth < 1) throw std::invalid_argument("depth must be >= 1");
      r.score = score_from_json(j);
      r.score.gold_id = r.id;
      if (j.contains("fine_grained")) {
        FineGrainedReport fine;
        for (auto m : kFineGrainedMetrics)
          fine.scores[static_cast<std::size_t>(m)] =
              score_from_json(j.at("fine_grained").at(std::string(to_string(m))));
        r.fine = fine;
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(FormatErrc::malformed, lineno, e.what());
    } catch (const std::invalid_argument& e) {
      throw FormatError(FormatErrc::invalid, lineno, e.what());
    }
  }
  return records;
}

void write_scores_tsv(std::ostream& out, std::span<const ScoreRecord> records) {
  out << "id\tdepth\tmatched\tgold_total\tpred_total\tprecision\trecall\tf1\n";
  for (const auto& r : records)
    out << r.id << '\t' << r.depth << '\t' << r.score.matched << '\t' << r.score.gold_total
        << '\t' << r.score.pred_total << '\t' << fixed4(r.score.precision) << '\t'
        << fixed4(r.score.recall) << '\t' << fixed4(r.score.f1) << '\n';
}

void write_depth_table_tsv(std::ostream& out, std::span<const BinRow> rows) {
  out << "depth\tcount\tmean_f1\n";
  for (const auto& row : rows)
    out << row.bin.label() << '\t' << row.count << '\t'
        << (row.mean_f1 ? fixed4(*row.mean_f1) : std::string("-")) << '\n';
}

std::string report_json(std::span<const ScoreRecord> records, std::span<const BinRow> rows) {
  ordered_json j;
  j["pairs"] = records.size();
  j["micro"] = score_json(micro_average(records));
  ordered_json table = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r{{"depth", row.bin.label()}, {"count", row.count}};
    r["mean_f1"] = row.mean_f1 ? ordered_json(*row.mean_f1) : ordered_json(nullptr);
    table.push_back(std::move(r));
  }
  j["by_depth"] = std::move(table);
  const bool any_fine =
      std::any_of(records.begin(), records.end(), [](const auto& r) { return r.fine.has_value(); });
  if (any_fine) {
    const auto fine = micro_average_fine(records);
    ordered_json f = ordered_json::object();
    for (auto m : kFineGrainedMetrics) f[std::string(to_string(m))] = score_json(fine[m]);
    j["fine_grained"] = std::move(f);
  }
  return j.dump(2);
}

}  // namespace amrcl
