#include <sstream>

#include "amrcl/corpus.hpp"
#include "amrcl/jsonl.hpp"
#include "amrcl/linearize.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace amrcl;
using nlohmann::json;

namespace {

FormatErrc error_code(const std::string& text, auto reader) {
  std::istringstream in(text);
  try {
    reader(in);
  } catch (const FormatError& e) {
    return e.code();
  }
  FAIL("no FormatError for: " << text);
  return FormatErrc::malformed;
}

std::size_t error_line(const std::string& text, auto reader) {
  std::istringstream in(text);
  try {
    reader(in);
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

const auto read_inst = [](std::istream& in) { return read_instances(in); };
const auto read_bkt = [](std::istream& in) { return read_buckets(in); };
const auto read_sched = [](std::istream& in) { return read_schedule(in); };

}  // namespace

TEST_CASE("instance records round trip") {
  const auto corpus = gen_synthetic_corpus(40, 1, 6, 5);
  const auto build = build_buckets(corpus, BucketLevel::structure);
  std::vector<Instance> all = corpus;
  all.insert(all.end(), build.sub_instances.begin(), build.sub_instances.end());

  std::stringstream buffer;
  write_instances(buffer, all);
  const auto back = read_instances(buffer);
  REQUIRE(back.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(back[i].id == all[i].id);
    CHECK(back[i].snt == all[i].snt);
    CHECK(back[i].graph == all[i].graph);
    CHECK(back[i].depth == all[i].depth);
    CHECK(back[i].kind == all[i].kind);
    CHECK(back[i].parent_id == all[i].parent_id);
  }
}

TEST_CASE("instance record fields") {
  const auto corpus = gen_synthetic_corpus(1, 3, 3, 2);
  const auto full = json::parse(instance_record(corpus[0]));
  CHECK(full["format_version"] == kFormatVersion);
  CHECK(full["kind"] == "full");
  CHECK(full["depth"] == 3);
  CHECK(full["bucket"] == 3);
  CHECK(full["tokens"] == linearize(corpus[0].graph).rendered());
  CHECK_FALSE(full.contains("parent_id"));

  const auto sub = build_buckets(corpus, BucketLevel::structure).sub_instances.at(1);
  const auto j = json::parse(instance_record(sub));
  CHECK(j["kind"] == "sub");
  CHECK(j["parent_id"] == corpus[0].id);
  CHECK(j["tokens"][0] == "<2>");
}

TEST_CASE("instance records are re-validated") {
  const auto corpus = gen_synthetic_corpus(1, 2, 2, 2);
  const auto good = json::parse(instance_record(corpus[0]));

  auto with = [&](const char* key, json value) {
    auto j = good;
    j[key] = std::move(value);
    return j.dump() + "\n";
  };
  CHECK(error_code(with("depth", 5), read_inst) == FormatErrc::invalid);
  CHECK(error_code(with("bucket", 1), read_inst) == FormatErrc::invalid);
  CHECK(error_code(with("tokens", json::array({"(", "x", ")"})), read_inst) == FormatErrc::invalid);
  CHECK(error_code(with("kind", "partial"), read_inst) == FormatErrc::invalid);
  CHECK(error_code(with("kind", "sub"), read_inst) == FormatErrc::invalid);
  CHECK(error_code(with("amr", "(a / b"), read_inst) == FormatErrc::invalid);
  CHECK(error_code(with("format_version", 2), read_inst) == FormatErrc::version_mismatch);

  auto missing = good;
  missing.erase("format_version");
  CHECK(error_code(missing.dump() + "\n", read_inst) == FormatErrc::malformed);
}

TEST_CASE("truncated final line names its line") {
  const auto corpus = gen_synthetic_corpus(3, 1, 4, 2);
  std::ostringstream out;
  write_instances(out, corpus);
  const std::string text = out.str();
  const std::string truncated = text.substr(0, text.size() - 10);
  CHECK(error_code(truncated, read_inst) == FormatErrc::malformed);
  CHECK(error_line(truncated, read_inst) == 3);

  std::istringstream in(truncated);
  try {
    read_instances(in);
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("blank lines are ignored") {
  const auto corpus = gen_synthetic_corpus(2, 1, 4, 2);
  std::stringstream buffer;
  buffer << instance_record(corpus[0]) << "\n\n" << instance_record(corpus[1]) << "\n";
  CHECK(read_instances(buffer).size() == 2);
}

TEST_CASE("bucket manifests round trip") {
  const auto corpus = gen_synthetic_corpus(60, 1, 7, 3);
  for (auto level : {BucketLevel::structure, BucketLevel::instance}) {
    const auto buckets = build_buckets(corpus, level).buckets;
    std::stringstream buffer;
    write_buckets(buffer, buckets);
    CHECK(buffer.str() == bucket_manifest_text(buckets));
    const auto back = read_buckets(buffer);
    CHECK(back == buckets);
  }
}

TEST_CASE("bucket manifests keep empty buckets") {
  const BucketSet buckets(BucketLevel::instance, {{"a"}, {}, {"b", "c"}});
  std::stringstream buffer;
  write_buckets(buffer, buckets);
  const auto back = read_buckets(buffer);
  CHECK(back.max_index() == 3);
  CHECK(back.bucket(2).empty());
  CHECK(back == buckets);
}

TEST_CASE("bucket manifest errors") {
  CHECK(error_code("", read_bkt) == FormatErrc::invalid);
  const std::string one =
      R"({"format_version":1,"level":"instance","bucket":1,"instance_ids":["a"]})"
      "\n";
  const std::string skip =
      R"({"format_version":1,"level":"instance","bucket":3,"instance_ids":["b"]})"
      "\n";
  const std::string mixed =
      R"({"format_version":1,"level":"structure","bucket":2,"instance_ids":["b"]})"
      "\n";
  CHECK(error_code(one + skip, read_bkt) == FormatErrc::invalid);
  CHECK(error_line(one + skip, read_bkt) == 2);
  CHECK(error_code(one + mixed, read_bkt) == FormatErrc::invalid);
  CHECK(error_code("{\"format_version\":7}\n", read_bkt) == FormatErrc::version_mismatch);
  CHECK(error_code("not json\n", read_bkt) == FormatErrc::malformed);
}

TEST_CASE("schedule manifests round trip") {
  const auto corpus = gen_synthetic_corpus(30, 1, 4, 4);
  const auto sc = build_buckets(corpus, BucketLevel::structure).buckets;
  const auto ic = build_buckets(corpus, BucketLevel::instance).buckets;
  CurriculumConfig config;
  config.t_sc = 5;
  config.t_ic = 3;
  config.batch_size = 2;
  config.final_epochs = 2;
  config.seed = 17;
  const auto schedule = make_schedule(sc, ic, config);

  std::stringstream buffer;
  write_schedule(buffer, schedule);
  CHECK(buffer.str() == schedule_manifest_text(schedule));
  const auto back = read_schedule(buffer);
  CHECK(back.config == schedule.config);
  CHECK(back.n == schedule.n);
  CHECK(back.m == schedule.m);
  CHECK(back.bucket_digest == schedule.bucket_digest);
  CHECK(back.steps == schedule.steps);
  CHECK_FALSE(back.random_baseline);

  const auto header = json::parse(schedule_manifest_text(schedule).substr(
      0, schedule_manifest_text(schedule).find('\n')));
  CHECK(header["kind"] == "curriculum");
  CHECK(header["config"]["t_sc"] == 5);
  CHECK(header["config"]["batch_tokens"] == 2048);
  CHECK(header["bucket_digest"].get<std::string>().starts_with("sha256:"));
}

TEST_CASE("random baseline manifests round trip") {
  const std::vector<InstanceRef> refs{{"a", 1}, {"b", 2}, {"c", 2}};
  CurriculumConfig config;
  config.t_sc = 2;
  config.t_ic = 2;
  config.final_epochs = 1;
  const auto schedule = make_random_baseline(refs, config);
  std::stringstream buffer;
  write_schedule(buffer, schedule);
  const auto back = read_schedule(buffer);
  CHECK(back.random_baseline);
  CHECK(back.steps == schedule.steps);
}

TEST_CASE("schedule manifest errors") {
  const auto corpus = gen_synthetic_corpus(5, 1, 2, 4);
  CurriculumConfig config;
  config.t_sc = 2;
  config.t_ic = 2;
  config.final_epochs = 1;
  const auto schedule = make_schedule(build_buckets(corpus, BucketLevel::structure).buckets,
                                      build_buckets(corpus, BucketLevel::instance).buckets, config);
  const std::string text = schedule_manifest_text(schedule);
  const std::string header = text.substr(0, text.find('\n') + 1);

  CHECK(error_code("", read_sched) == FormatErrc::invalid);
  auto bad_step = json::parse(text.substr(text.find('\n') + 1, text.find('\n', text.find('\n') + 1) -
                                                                   text.find('\n') - 1));
  bad_step["step"] = 9;
  CHECK(error_code(header + bad_step.dump() + "\n", read_sched) == FormatErrc::invalid);
  CHECK(error_line(header + bad_step.dump() + "\n", read_sched) == 2);

  auto bad_header = json::parse(header);
  bad_header["config"]["t_sc"] = 0;
  CHECK(error_code(bad_header.dump() + "\n", read_sched) == FormatErrc::invalid);
}
