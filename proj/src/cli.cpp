#include "amrcl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "amrcl/corpus.hpp"
#include "amrcl/curriculum.hpp"
#include "amrcl/fine_grained.hpp"
#include "amrcl/jsonl.hpp"
#include "amrcl/linearize.hpp"
#include "amrcl/penman.hpp"
#include "amrcl/report.hpp"
#include "amrcl/smatch.hpp"
#include "amrcl/structure.hpp"

namespace amrcl::cli {

namespace {

// Raised for problems in the data a command reads; maps to exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for flag values CLI11 cannot check on its own; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("AMRCL_SEED");
  if (!env || !*env) return 0;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || end != text.data() + text.size())
    throw UsageError("AMRCL_SEED is not an unsigned integer: '" + std::string(text) + "'");
  return seed;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  write(file);
  if (!file) throw DataError("error writing " + path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

CorpusReadResult read_corpus(const std::string& path) {
  auto in = open_input(path);
  return read_amr_corpus(in, std::filesystem::path(path).filename().string());
}

// Reports corpus errors; returns true when any were found.
bool report_corpus_errors(const CorpusReadResult& corpus, std::ostream& err) {
  for (const auto& e : corpus.errors)
    err << "error: " << e.id << " (line " << e.line << "): " << e.message << '\n';
  return !corpus.errors.empty();
}

// "3" or "1..6".
std::pair<int, int> parse_depth_range(const std::string& text) {
  auto number = [&](std::string_view s) {
    int v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
      throw UsageError("bad depth range '" + text + "'");
    return v;
  };
  const std::size_t dots = text.find("..");
  if (dots == std::string::npos) {
    const int d = number(text);
    return {d, d};
  }
  return {number(std::string_view(text).substr(0, dots)),
          number(std::string_view(text).substr(dots + 2))};
}

struct Options {
  std::string corpus;
  std::string output;
  bool strict = false;

  int depth = 0;
  int at_least = 7;
  bool attribute_leaves = false;

  std::string instances;
  std::string level = "instance";
  std::string instances_out;

  std::string sc_buckets;
  std::string ic_buckets;
  CurriculumConfig config;
  std::string mode = "forward";
  std::string sampling = "uniform-instance";
  bool random_baseline = false;

  std::string gold;
  std::string pred;
  std::string pred_format = "penman";
  bool fine = false;
  int restarts = 4;
  int jobs = 1;
  std::string scores_out;
  std::uint64_t seed = 0;

  std::string scores;
  bool by_depth = false;
  std::string bins{kDefaultBins};
  std::string format = "tsv";

  std::size_t n = 0;
  std::string depths = "1..6";
};

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = read_corpus(o.corpus);
  const bool bad = report_corpus_errors(corpus, err);
  std::size_t invalid = 0;
  for (const auto& inst : corpus.instances) {
    const auto violations = validate(inst.graph);
    for (const auto& v : violations) err << "error: " << inst.id << ": " << v.message << '\n';
    if (!violations.empty()) ++invalid;
  }
  out << corpus.instances.size() + corpus.errors.size() << " graphs, "
      << corpus.errors.size() + invalid << " invalid\n";
  return (bad || invalid) && o.strict ? kExitDataError : kExitOk;
}

int cmd_linearize(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = read_corpus(o.corpus);
  const bool bad = report_corpus_errors(corpus, err);
  emit(o.output, out, [&](std::ostream& s) { write_instances(s, corpus.instances); });
  return bad && o.strict ? kExitDataError : kExitOk;
}

int cmd_depth(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = read_corpus(o.corpus);
  const bool bad = report_corpus_errors(corpus, err);
  const auto convention =
      o.attribute_leaves ? DepthConvention::attribute_leaves : DepthConvention::concepts_only;
  std::size_t deep = 0;
  out << "id\tdepth\n";
  for (const auto& inst : corpus.instances) {
    const int d = graph_depth(inst.graph, convention);
    if (d >= o.at_least) ++deep;
    out << inst.id << '\t' << d << '\n';
  }
  if (!corpus.instances.empty())
    err << corpus.instances.size() << " graphs, " << deep << " with depth >= " << o.at_least
        << " (" << fixed4(static_cast<double>(deep) / static_cast<double>(corpus.instances.size()))
        << ")\n";
  return bad && o.strict ? kExitDataError : kExitOk;
}

int cmd_subgraph(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = read_corpus(o.corpus);
  const bool bad = report_corpus_errors(corpus, err);
  emit(o.output, out, [&](std::ostream& s) {
    for (const auto& inst : corpus.instances) {
      Instance sub;
      sub.id = inst.depth > o.depth ? sub_instance_id(inst.id, o.depth) : inst.id;
      sub.snt = inst.snt;
      sub.graph = extract_subgraph(inst.graph, o.depth);
      write_amr_block(s, sub);
    }
  });
  return bad && o.strict ? kExitDataError : kExitOk;
}

int cmd_buckets(const Options& o, std::ostream& out, std::ostream&) {
  auto in = open_input(o.instances);
  auto instances = read_instances(in);
  std::erase_if(instances, [](const Instance& i) { return i.kind != InstanceKind::full; });
  const auto level = bucket_level_from_string(o.level);
  if (!level) throw UsageError("--level must be structure or instance");
  const auto build = build_buckets(instances, *level);
  emit(o.output, out, [&](std::ostream& s) { write_buckets(s, build.buckets); });
  if (!o.instances_out.empty())
    emit(o.instances_out, out,
         [&](std::ostream& s) { write_instances(s, build.sub_instances); });
  return kExitOk;
}

BucketSet load_buckets(const std::string& path, BucketLevel expected) {
  auto in = open_input(path);
  BucketSet set = read_buckets(in);
  if (set.level() != expected)
    throw DataError(path + ": expected " + std::string(to_string(expected)) + " buckets");
  return set;
}

int cmd_schedule(Options o, std::ostream& out, std::ostream& err) {
  o.config.mode = *mode_from_string(o.mode);
  o.config.sampling = *sampling_from_string(o.sampling);
  o.config.seed = o.seed;
  const BucketSet ic = load_buckets(o.ic_buckets, BucketLevel::instance);
  Schedule schedule;
  if (o.random_baseline) {
    std::vector<InstanceRef> refs;
    for (int b = 1; b <= ic.max_index(); ++b)
      for (const auto& id : ic.bucket(b)) refs.push_back({id, b});
    schedule = make_random_baseline(refs, o.config);
  } else {
    if (o.sc_buckets.empty()) throw UsageError("--sc-buckets is required");
    const BucketSet sc = load_buckets(o.sc_buckets, BucketLevel::structure);
    schedule = make_schedule(sc, ic, o.config);
  }
  for (const auto& w : schedule.warnings) err << "warning: " << w << '\n';
  emit(o.output, out, [&](std::ostream& s) { write_schedule(s, schedule); });
  return kExitOk;
}

// Predictions keyed by id. Tokens files hold `id<TAB>tokens` per line.
std::map<std::string, std::optional<AmrGraph>> read_predictions(const Options& o,
                                                                std::ostream& err) {
  std::map<std::string, std::optional<AmrGraph>> preds;
  if (o.pred_format == "penman") {
    const auto corpus = read_corpus(o.pred);
    for (const auto& e : corpus.errors) {
      err << "warning: prediction " << e.id << " unreadable, scored as empty: " << e.message
          << '\n';
      preds[e.id] = std::nullopt;
    }
    for (const auto& inst : corpus.instances) preds[inst.id] = inst.graph;
    return preds;
  }
  auto in = open_input(o.pred);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(o.pred + ":" + std::to_string(lineno) + ": expected id<TAB>tokens");
    const std::string id = line.substr(0, tab);
    try {
      preds[id] = delinearize(TokenSequence::parse(std::string_view(line).substr(tab + 1)));
    } catch (const Unrecoverable& e) {
      err << "warning: prediction " << id << " unrecoverable, scored as empty: " << e.what()
          << '\n';
      preds[id] = std::nullopt;
    }
  }
  return preds;
}

int cmd_smatch(const Options& o, std::ostream& out, std::ostream& err) {
  const auto gold = read_corpus(o.gold);
  if (report_corpus_errors(gold, err)) throw DataError("gold corpus has unreadable graphs");
  auto preds = read_predictions(o, err);

  std::vector<GraphPair> pairs;
  pairs.reserve(gold.instances.size());
  for (const auto& g : gold.instances) {
    GraphPair pair{g.id, g.graph, std::nullopt};
    if (auto it = preds.find(g.id); it != preds.end()) {
      pair.pred = std::move(it->second);
      preds.erase(it);
    } else {
      err << "warning: no prediction for " << g.id << ", scored as empty\n";
    }
    pairs.push_back(std::move(pair));
  }
  for (const auto& [id, _] : preds) err << "warning: prediction " << id << " has no gold graph\n";

  const SmatchOptions options{o.restarts, o.seed};
  const auto records = score_corpus(pairs, options, o.jobs, o.fine);
  const auto total = micro_average(records);
  out << "Precision: " << fixed4(total.precision) << '\n';
  out << "Recall: " << fixed4(total.recall) << '\n';
  out << "F1: " << fixed4(total.f1) << '\n';
  if (o.fine) {
    const auto fine = micro_average_fine(records);
    out << "metric\tprecision\trecall\tf1\n";
    for (auto m : kFineGrainedMetrics)
      out << to_string(m) << '\t' << fixed4(fine[m].precision) << '\t' << fixed4(fine[m].recall)
          << '\t' << fixed4(fine[m].f1) << '\n';
  }
  if (!o.scores_out.empty())
    emit(o.scores_out, out, [&](std::ostream& s) { write_scores_jsonl(s, records); });
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<DepthBin> bins;
  try {
    bins = parse_bins(o.bins);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto in = open_input(o.scores);
  const auto records = read_scores_jsonl(in);
  if (records.empty()) throw DataError(o.scores + ": no score records");
  std::vector<BinRow> rows;
  if (o.by_depth) {
    try {
      rows = stratify(records, bins);
    } catch (const std::out_of_range& e) {
      throw DataError(e.what());
    }
  }
  if (o.format == "json") {
    out << report_json(records, rows) << '\n';
    return kExitOk;
  }
  const auto total = micro_average(records);
  if (o.by_depth) {
    write_depth_table_tsv(out, rows);
  } else {
    out << "pairs\tprecision\trecall\tf1\n"
        << records.size() << '\t' << fixed4(total.precision) << '\t' << fixed4(total.recall)
        << '\t' << fixed4(total.f1) << '\n';
  }
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  const auto [lo, hi] = parse_depth_range(o.depths);
  std::vector<Instance> corpus;
  try {
    corpus = gen_synthetic_corpus(o.n, lo, hi, o.seed);
  } catch (const InvalidRange& e) {
    throw UsageError(e.what());
  }
  emit(o.output, out, [&](std::ostream& s) {
    for (const auto& inst : corpus) write_amr_block(s, inst);
  });
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Hierarchical curriculum toolkit for AMR parsing", "amrcl"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate an AMR corpus");
  validate_cmd->add_option("corpus", o.corpus, "AMR corpus file")->required()->check(CLI::ExistingFile);
  validate_cmd->add_flag("--strict", o.strict, "Exit 1 when any graph is invalid");

  auto* linearize_cmd = app.add_subcommand("linearize", "Write instance JSONL for an AMR corpus");
  linearize_cmd->add_option("corpus", o.corpus, "AMR corpus file")->required()->check(CLI::ExistingFile);
  linearize_cmd->add_option("-o,--output", o.output, "Instance JSONL (default stdout)");
  linearize_cmd->add_flag("--strict", o.strict, "Exit 1 when any graph fails to parse");

  auto* depth_cmd = app.add_subcommand("depth", "Per-graph depth TSV");
  depth_cmd->add_option("corpus", o.corpus, "AMR corpus file")->required()->check(CLI::ExistingFile);
  depth_cmd->add_option("--at-least", o.at_least, "Depth threshold for the summary on stderr")
      ->check(CLI::PositiveNumber);
  depth_cmd->add_flag("--attribute-leaves", o.attribute_leaves,
                      "Count attribute constants as a layer of their own");
  depth_cmd->add_flag("--strict", o.strict, "Exit 1 when any graph fails to parse");

  auto* subgraph_cmd = app.add_subcommand("subgraph", "Cut every graph at a depth");
  subgraph_cmd->add_option("corpus", o.corpus, "AMR corpus file")->required()->check(CLI::ExistingFile);
  subgraph_cmd->add_option("-d,--depth", o.depth, "Depth to keep")->required()->check(CLI::PositiveNumber);
  subgraph_cmd->add_option("-o,--output", o.output, "AMR output (default stdout)");
  subgraph_cmd->add_flag("--strict", o.strict, "Exit 1 when any graph fails to parse");

  auto* buckets_cmd = app.add_subcommand("buckets", "Build a bucket manifest from instance JSONL");
  buckets_cmd->add_option("instances", o.instances, "Instance JSONL")->required()->check(CLI::ExistingFile);
  buckets_cmd->add_option("--level", o.level, "structure or instance")
      ->check(CLI::IsMember({"structure", "instance"}));
  buckets_cmd->add_option("-o,--output", o.output, "Bucket manifest (default stdout)");
  buckets_cmd->add_option("--instances-out", o.instances_out,
                          "Structure level: sub-instance JSONL");

  auto* schedule_cmd = app.add_subcommand("schedule", "Compile a curriculum schedule manifest");
  schedule_cmd->add_option("--sc-buckets", o.sc_buckets, "Structure-level bucket manifest")
      ->check(CLI::ExistingFile);
  schedule_cmd->add_option("--ic-buckets", o.ic_buckets, "Instance-level bucket manifest")
      ->required()->check(CLI::ExistingFile);
  schedule_cmd->add_option("--t-sc", o.config.t_sc, "Steps per structure episode")
      ->capture_default_str()->check(CLI::PositiveNumber);
  schedule_cmd->add_option("--t-ic", o.config.t_ic, "Steps per instance episode")
      ->capture_default_str()->check(CLI::PositiveNumber);
  schedule_cmd->add_option("--batch-size", o.config.batch_size, "Instances per step")
      ->capture_default_str()->check(CLI::PositiveNumber);
  schedule_cmd->add_option("--final-epochs", o.config.final_epochs, "Epochs after the curricula")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  schedule_cmd->add_option("--batch-tokens", o.config.batch_tokens,
                           "Token budget per batch recorded for the trainer")
      ->capture_default_str()->check(CLI::PositiveNumber);
  schedule_cmd->add_option("--mode", o.mode, "forward, inverse or random")
      ->capture_default_str()->check(CLI::IsMember({"forward", "inverse", "random"}));
  schedule_cmd->add_option("--sampling", o.sampling, "uniform-instance or uniform-bucket")
      ->capture_default_str()->check(CLI::IsMember({"uniform-instance", "uniform-bucket"}));
  schedule_cmd->add_option("--seed", o.seed, "RNG seed (default $AMRCL_SEED or 0)");
  schedule_cmd->add_flag("--lenient", o.config.lenient, "Skip episodes whose buckets are empty");
  schedule_cmd->add_flag("--random-baseline", o.random_baseline,
                         "Uniform sampling over full instances in every phase");
  schedule_cmd->add_option("-o,--output", o.output, "Schedule manifest (default stdout)");

  auto* smatch_cmd = app.add_subcommand("smatch", "Score predictions against gold graphs");
  smatch_cmd->add_option("--gold", o.gold, "Gold AMR corpus")->required()->check(CLI::ExistingFile);
  smatch_cmd->add_option("--pred", o.pred, "Predictions")->required()->check(CLI::ExistingFile);
  smatch_cmd->add_option("--pred-format", o.pred_format,
                         "penman (AMR corpus) or tokens (id<TAB>linearized tokens per line)")
      ->capture_default_str()->check(CLI::IsMember({"penman", "tokens"}));
  smatch_cmd->add_flag("--fine-grained", o.fine, "Also print the fine-grained metrics");
  smatch_cmd->add_option("--restarts", o.restarts, "Hill-climbing restarts per pair")
      ->capture_default_str()->check(CLI::PositiveNumber);
  smatch_cmd->add_option("--seed", o.seed, "RNG seed (default $AMRCL_SEED or 0)");
  smatch_cmd->add_option("-j,--jobs", o.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  smatch_cmd->add_option("--scores-out", o.scores_out, "Per-pair score JSONL");

  auto* report_cmd = app.add_subcommand("report", "Summarize per-pair scores");
  report_cmd->add_option("--scores", o.scores, "Score JSONL from smatch --scores-out")
      ->required()->check(CLI::ExistingFile);
  report_cmd->add_flag("--by-depth", o.by_depth, "Mean F1 per gold-depth bin");
  report_cmd->add_option("--bins", o.bins, "Depth bins")->capture_default_str();
  report_cmd->add_option("--format", o.format, "tsv or json")
      ->capture_default_str()->check(CLI::IsMember({"tsv", "json"}));

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic AMR corpus");
  synth_cmd->add_option("-n", o.n, "Number of graphs")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--depths", o.depths, "Depth range, e.g. 1..6")->capture_default_str();
  synth_cmd->add_option("--seed", o.seed, "RNG seed (default $AMRCL_SEED or 0)");
  synth_cmd->add_option("-o,--output", o.output, "AMR output (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    if (linearize_cmd->parsed()) return cmd_linearize(o, out, err);
    if (depth_cmd->parsed()) return cmd_depth(o, out, err);
    if (subgraph_cmd->parsed()) return cmd_subgraph(o, out, err);
    if (buckets_cmd->parsed()) return cmd_buckets(o, out, err);
    if (schedule_cmd->parsed()) return cmd_schedule(o, out, err);
    if (smatch_cmd->parsed()) return cmd_smatch(o, out, err);
    if (report_cmd->parsed()) return cmd_report(o, out, err);
    if (synth_cmd->parsed()) return cmd_synth(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace amrcl::cli
