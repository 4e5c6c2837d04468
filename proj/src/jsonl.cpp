#include "amrcl/jsonl.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "amrcl/linearize.hpp"
#include "amrcl/penman.hpp"
#include "json.hpp"

namespace amrcl {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

FormatError::FormatError(FormatErrc code, std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
      code_(code),
      line_(line) {}

namespace {

std::vector<std::string> expected_tokens(const Instance& inst) {
  TokenSequence seq = linearize(inst.graph);
  if (inst.kind == InstanceKind::sub) seq = with_depth_token(std::move(seq), inst.depth);
  return seq.rendered();
}

// Calls `fn(json, lineno)` for every non-blank line after checking its
// format_version. JSON and type errors become FormatError.
template <class Fn>
void for_each_record(std::istream& in, Fn fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError(FormatErrc::malformed, lineno, e.what());
    }
    if (!j.is_object()) throw FormatError(FormatErrc::malformed, lineno, "record is not an object");
    const auto v = j.find("format_version");
    if (v == j.end() || !v->is_number_integer())
      throw FormatError(FormatErrc::malformed, lineno, "missing format_version");
    if (v->get<int>() != kFormatVersion)
      throw FormatError(FormatErrc::version_mismatch, lineno,
                        "VersionMismatch: format_version " + v->dump() + ", expected " +
                            std::to_string(kFormatVersion));
    try {
      fn(j, lineno);
    } catch (const json::exception& e) {
      throw FormatError(FormatErrc::malformed, lineno, e.what());
    }
  }
}

}  // namespace

std::string instance_record(const Instance& inst) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["id"] = inst.id;
  j["snt"] = inst.snt;
  j["tokens"] = expected_tokens(inst);
  j["depth"] = inst.depth;
  j["bucket"] = inst.depth;
  j["kind"] = to_string(inst.kind);
  j["amr"] = serialize_penman(inst.graph);
  if (inst.parent_id) j["parent_id"] = *inst.parent_id;
  return j.dump();
}

void write_instances(std::ostream& out, std::span<const Instance> instances) {
  for (const auto& inst : instances) out << instance_record(inst) << '\n';
}

std::vector<Instance> read_instances(std::istream& in) {
  std::vector<Instance> out;
  for_each_record(in, [&](const json& j, std::size_t lineno) {
    auto invalid = [&](const std::string& what) {
      return FormatError(FormatErrc::invalid, lineno, what);
    };
    Instance inst;
    inst.id = j.at("id").get<std::string>();
    inst.snt = j.at("snt").get<std::string>();
    const auto kind = instance_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw invalid("unknown kind " + j.at("kind").dump());
    inst.kind = *kind;
    if (j.contains("parent_id")) inst.parent_id = j.at("parent_id").get<std::string>();
    if ((inst.kind == InstanceKind::sub) != inst.parent_id.has_value())
      throw invalid("parent_id must be present exactly for sub instances");
    try {
      inst.graph = parse_penman(j.at("amr").get<std::string>());
    } catch (const PenmanError& e) {
      throw invalid(inst.id + ": " + e.what());
    }
    inst.depth = j.at("depth").get<int>();
    if (inst.depth != graph_depth(inst.graph))
      throw invalid(inst.id + ": recorded depth " + std::to_string(inst.depth) +
                    " differs from graph depth " + std::to_string(graph_depth(inst.graph)));
    if (j.at("bucket").get<int>() != inst.depth)
      throw invalid(inst.id + ": bucket differs from depth");
    if (j.at("tokens").get<std::vector<std::string>>() != expected_tokens(inst))
      throw invalid(inst.id + ": tokens do not match the linearized graph");
    out.push_back(std::move(inst));
  });
  return out;
}

std::string bucket_manifest_text(const BucketSet& buckets) {
  std::string out;
  for (int b = 1; b <= buckets.max_index(); ++b) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["level"] = to_string(buckets.level());
    j["bucket"] = b;
    j["instance_ids"] = buckets.bucket(b);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_buckets(std::ostream& out, const BucketSet& buckets) { out << bucket_manifest_text(buckets); }

BucketSet read_buckets(std::istream& in) {
  std::optional<BucketLevel> level;
  std::vector<std::vector<std::string>> lists;
  for_each_record(in, [&](const json& j, std::size_t lineno) {
    const auto this_level = bucket_level_from_string(j.at("level").get<std::string>());
    if (!this_level) throw FormatError(FormatErrc::invalid, lineno, "unknown level");
    if (level && *level != *this_level)
      throw FormatError(FormatErrc::invalid, lineno, "mixed bucket levels");
    level = this_level;
    const int index = j.at("bucket").get<int>();
    if (index != static_cast<int>(lists.size()) + 1)
      throw FormatError(FormatErrc::invalid, lineno,
                        "expected bucket " + std::to_string(lists.size() + 1) + ", found " +
                            std::to_string(index));
    lists.push_back(j.at("instance_ids").get<std::vector<std::string>>());
  });
  if (!level) throw FormatError(FormatErrc::invalid, 0, "bucket manifest is empty");
  try {
    return BucketSet(*level, std::move(lists));
  } catch (const std::invalid_argument& e) {
    throw FormatError(FormatErrc::invalid, 0, e.what());
  }
}

namespace {

ordered_json header_json(const Schedule& s) {
  const auto& c = s.config;
  ordered_json config;
  config["t_sc"] = c.t_sc;
  config["t_ic"] = c.t_ic;
  config["batch_size"] = c.batch_size;
  config["final_epochs"] = c.final_epochs;
  config["mode"] = to_string(c.mode);
  config["seed"] = c.seed;
  config["sampling"] = to_string(c.sampling);
  config["lenient"] = c.lenient;
  config["batch_tokens"] = c.batch_tokens;

  ordered_json notes;
  notes["phase_order"] = "SC,IC,FINAL";
  notes["depth_token"] = "sub instances only";
  notes["batch_unit"] = "instances";
  notes["batch_tokens"] = c.batch_tokens;
  notes["warnings"] = s.warnings;

  ordered_json h;
  h["format_version"] = kFormatVersion;
  h["kind"] = s.random_baseline ? "random-baseline" : "curriculum";
  h["config"] = std::move(config);
  h["n"] = s.n;
  h["m"] = s.m;
  h["bucket_digest"] = s.bucket_digest;
  h["notes"] = std::move(notes);
  return h;
}

template <class T>
T parse_enum(const json& j, std::optional<T> (*from)(std::string_view), std::size_t lineno) {
  const auto text = j.get<std::string>();
  const auto value = from(text);
  if (!value) throw FormatError(FormatErrc::invalid, lineno, "unknown value '" + text + "'");
  return *value;
}

}  // namespace

std::string schedule_manifest_text(const Schedule& schedule) {
  std::ostringstream out;
  write_schedule(out, schedule);
  return out.str();
}

void write_schedule(std::ostream& out, const Schedule& schedule) {
  out << header_json(schedule).dump() << '\n';
  for (const auto& step : schedule.steps) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["step"] = step.global_step;
    j["phase"] = to_string(step.phase);
    j["episode"] = step.episode;
    j["ids"] = step.instance_ids;
    out << j.dump() << '\n';
  }
}

Schedule read_schedule(std::istream& in) {
  Schedule s;
  bool header = false;
  for_each_record(in, [&](const json& j, std::size_t lineno) {
    if (!header) {
      header = true;
      const auto kind = j.at("kind").get<std::string>();
      if (kind != "curriculum" && kind != "random-baseline")
        throw FormatError(FormatErrc::invalid, lineno, "unknown schedule kind '" + kind + "'");
      s.random_baseline = kind == "random-baseline";
      const json& c = j.at("config");
      s.config.t_sc = c.at("t_sc").get<int>();
      s.config.t_ic = c.at("t_ic").get<int>();
      s.config.batch_size = c.at("batch_size").get<int>();
      s.config.final_epochs = c.at("final_epochs").get<int>();
      s.config.mode = parse_enum(c.at("mode"), mode_from_string, lineno);
      s.config.seed = c.at("seed").get<std::uint64_t>();
      s.config.sampling = parse_enum(c.at("sampling"), sampling_from_string, lineno);
      s.config.lenient = c.at("lenient").get<bool>();
      s.config.batch_tokens = c.at("batch_tokens").get<int>();
      try {
        s.config.check();
      } catch (const std::invalid_argument& e) {
        throw FormatError(FormatErrc::invalid, lineno, e.what());
      }
      s.n = j.at("n").get<int>();
      s.m = j.at("m").get<int>();
      s.bucket_digest = j.at("bucket_digest").get<std::string>();
      if (j.contains("notes") && j.at("notes").contains("warnings"))
        s.warnings = j.at("notes").at("warnings").get<std::vector<std::string>>();
      return;
    }
    ScheduleStep step;
    step.global_step = j.at("step").get<std::int64_t>();
    if (step.global_step != static_cast<std::int64_t>(s.steps.size()) + 1)
      throw FormatError(FormatErrc::invalid, lineno,
                        "expected step " + std::to_string(s.steps.size() + 1));
    step.phase = parse_enum(j.at("phase"), phase_from_string, lineno);
    step.episode = j.at("episode").get<int>();
    step.instance_ids = j.at("ids").get<std::vector<std::string>>();
    s.steps.push_back(std::move(step));
  });
  if (!header) throw FormatError(FormatErrc::invalid, 0, "schedule manifest is empty");
  return s;
}

}  // namespace amrcl
