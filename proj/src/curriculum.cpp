#include "amrcl/curriculum.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include "amrcl/jsonl.hpp"
#include "amrcl/rng.hpp"

namespace amrcl {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::sc: return "SC";
    case Phase::ic: return "IC";
    case Phase::final: return "FINAL";
  }
  return "?";
}

std::string_view to_string(CurriculumMode mode) {
  switch (mode) {
    case CurriculumMode::forward: return "forward";
    case CurriculumMode::inverse: return "inverse";
    case CurriculumMode::random: return "random";
  }
  return "?";
}

std::string_view to_string(SamplingPolicy policy) {
  return policy == SamplingPolicy::uniform_instance ? "uniform-instance" : "uniform-bucket";
}

std::optional<Phase> phase_from_string(std::string_view text) {
  if (text == "SC") return Phase::sc;
  if (text == "IC") return Phase::ic;
  if (text == "FINAL") return Phase::final;
  return std::nullopt;
}

std::optional<CurriculumMode> mode_from_string(std::string_view text) {
  if (text == "forward") return CurriculumMode::forward;
  if (text == "inverse") return CurriculumMode::inverse;
  if (text == "random") return CurriculumMode::random;
  return std::nullopt;
}

std::optional<SamplingPolicy> sampling_from_string(std::string_view text) {
  if (text == "uniform-instance") return SamplingPolicy::uniform_instance;
  if (text == "uniform-bucket") return SamplingPolicy::uniform_bucket;
  return std::nullopt;
}

void CurriculumConfig::check() const {
  if (t_sc < 1) throw std::invalid_argument("t_sc must be >= 1");
  if (t_ic < 1) throw std::invalid_argument("t_ic must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (final_epochs < 0) throw std::invalid_argument("final_epochs must be >= 0");
  if (batch_tokens < 1) throw std::invalid_argument("batch_tokens must be >= 1");
}

EmptyBucketUnion::EmptyBucketUnion(Phase phase, int episode)
    : std::runtime_error("EmptyBucketUnion: no admissible instances in " +
                         std::string(to_string(phase)) + " episode " + std::to_string(episode)) {}

std::pair<int, int> admissible_range(CurriculumMode mode, int episode, int max_index) {
  switch (mode) {
    case CurriculumMode::forward: return {1, std::min(episode, max_index)};
    case CurriculumMode::inverse: return {std::max(1, max_index - episode + 1), max_index};
    case CurriculumMode::random: return {1, max_index};
  }
  return {1, max_index};
}

std::string bucket_digest(const BucketSet& sc, const BucketSet& ic) {
  const std::string text = bucket_manifest_text(sc) + bucket_manifest_text(ic);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

namespace {

// Draws ids from a contiguous run of buckets under a sampling policy.
class BucketSampler {
 public:
  BucketSampler(const BucketSet& buckets, int lo, int hi) {
    for (int b = lo; b <= hi; ++b) {
      const auto& ids = buckets.bucket(b);
      if (ids.empty()) continue;
      members_.push_back(&ids);
      size_ += ids.size();
    }
  }

  bool empty() const { return size_ == 0; }

  const std::string& draw(Rng& rng, SamplingPolicy policy) const {
    if (policy == SamplingPolicy::uniform_bucket) {
      const auto& ids = *members_[rng.below(members_.size())];
      return ids[rng.below(ids.size())];
    }
    std::size_t k = rng.below(size_);
    for (const auto* ids : members_) {
      if (k < ids->size()) return (*ids)[k];
      k -= ids->size();
    }
    return members_.back()->back();
  }

 private:
  std::vector<const std::vector<std::string>*> members_;
  std::size_t size_ = 0;
};

void emit_curriculum_phase(Schedule& out, Phase phase, const BucketSet& buckets, int episodes,
                           int steps_per_episode, const CurriculumConfig& config, Rng& rng) {
  for (int episode = 1; episode <= episodes; ++episode) {
    int effective = episode;
    auto [lo, hi] = admissible_range(config.mode, effective, episodes);
    BucketSampler sampler(buckets, lo, hi);
    while (sampler.empty()) {
      if (!config.lenient || effective == episodes) throw EmptyBucketUnion(phase, episode);
      ++effective;
      std::tie(lo, hi) = admissible_range(config.mode, effective, episodes);
      sampler = BucketSampler(buckets, lo, hi);
    }
    if (effective != episode) {
      std::string msg = std::string(to_string(phase)) + " episode " + std::to_string(episode) +
                        " has no admissible instances; sampling as episode " +
                        std::to_string(effective);
      out.warnings.push_back(std::move(msg));
    }
    for (int s = 0; s < steps_per_episode; ++s) {
      ScheduleStep step;
      step.global_step = static_cast<std::int64_t>(out.steps.size()) + 1;
      step.phase = phase;
      step.episode = episode;
      step.instance_ids.reserve(static_cast<std::size_t>(config.batch_size));
      for (int b = 0; b < config.batch_size; ++b)
        step.instance_ids.push_back(sampler.draw(rng, config.sampling));
      out.steps.push_back(std::move(step));
    }
  }
}

void emit_final_phase(Schedule& out, std::vector<std::string> ids, const CurriculumConfig& config,
                      Rng& rng) {
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 1; epoch <= config.final_epochs; ++epoch) {
    rng.shuffle(std::span<std::string>(ids));
    for (std::size_t at = 0; at < ids.size(); at += batch) {
      ScheduleStep step;
      step.global_step = static_cast<std::int64_t>(out.steps.size()) + 1;
      step.phase = Phase::final;
      step.episode = epoch;
      const std::size_t end = std::min(ids.size(), at + batch);
      step.instance_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(at),
                               ids.begin() + static_cast<std::ptrdiff_t>(end));
      out.steps.push_back(std::move(step));
    }
  }
}

std::vector<std::string> all_ids(const BucketSet& buckets) {
  std::vector<std::string> ids;
  ids.reserve(buckets.total());
  for (int b = 1; b <= buckets.max_index(); ++b)
    ids.insert(ids.end(), buckets.bucket(b).begin(), buckets.bucket(b).end());
  return ids;
}

}  // namespace

Schedule make_schedule(const BucketSet& sc_buckets, const BucketSet& ic_buckets,
                       const CurriculumConfig& config) {
  config.check();
  Schedule out;
  out.config = config;
  out.n = sc_buckets.max_index();
  out.m = ic_buckets.max_index();
  out.bucket_digest = bucket_digest(sc_buckets, ic_buckets);

  Rng sc_rng(mix_seed(config.seed, 0));
  Rng ic_rng(mix_seed(config.seed, 1));
  Rng final_rng(mix_seed(config.seed, 2));
  emit_curriculum_phase(out, Phase::sc, sc_buckets, out.n, config.t_sc, config, sc_rng);
  emit_curriculum_phase(out, Phase::ic, ic_buckets, out.m, config.t_ic, config, ic_rng);
  emit_final_phase(out, all_ids(ic_buckets), config, final_rng);
  return out;
}

Schedule make_random_baseline(std::span<const InstanceRef> full_instances,
                              const CurriculumConfig& config) {
  config.check();
  if (full_instances.empty()) throw EmptyCorpus();
  std::vector<std::vector<std::string>> buckets;
  for (const auto& ref : full_instances) {
    if (ref.depth < 1) throw std::invalid_argument("instance '" + ref.id + "' has no depth");
    if (static_cast<int>(buckets.size()) < ref.depth)
      buckets.resize(static_cast<std::size_t>(ref.depth));
    buckets[static_cast<std::size_t>(ref.depth - 1)].push_back(ref.id);
  }
  const BucketSet ic(BucketLevel::instance, std::move(buckets));

  Schedule out;
  out.config = config;
  out.config.mode = CurriculumMode::random;
  out.random_baseline = true;
  out.n = ic.max_index();
  out.m = ic.max_index();
  out.bucket_digest = bucket_digest(BucketSet(BucketLevel::structure, {}), ic);

  CurriculumConfig uniform = out.config;
  Rng sc_rng(mix_seed(config.seed, 0));
  Rng ic_rng(mix_seed(config.seed, 1));
  Rng final_rng(mix_seed(config.seed, 2));
  emit_curriculum_phase(out, Phase::sc, ic, out.n, config.t_sc, uniform, sc_rng);
  emit_curriculum_phase(out, Phase::ic, ic, out.m, config.t_ic, uniform, ic_rng);
  emit_final_phase(out, all_ids(ic), config, final_rng);
  return out;
}

namespace {

const BucketSet& lookup_set(const Schedule& schedule, Phase phase, const BucketSet& sc,
                            const BucketSet& ic) {
  return phase == Phase::sc && !schedule.random_baseline ? sc : ic;
}

}  // namespace

ExposureStats bucket_exposure_stats(const Schedule& schedule, const BucketSet& sc,
                                    const BucketSet& ic) {
  ExposureStats stats;
  for (const auto& step : schedule.steps) {
    const BucketSet& set = lookup_set(schedule, step.phase, sc, ic);
    auto& hist = stats[{step.phase, step.episode}];
    for (const auto& id : step.instance_ids) ++hist[set.index_of(id)];
  }
  return stats;
}

std::vector<std::string> check_schedule(const Schedule& schedule, const BucketSet& sc,
                                        const BucketSet& ic) {
  std::vector<std::string> problems;
  const auto& cfg = schedule.config;
  std::int64_t count[3] = {0, 0, 0};
  Phase last = Phase::sc;
  std::unordered_map<int, std::unordered_map<std::string, int>> final_seen;

  for (std::size_t i = 0; i < schedule.steps.size(); ++i) {
    const auto& step = schedule.steps[i];
    const std::string where = "step " + std::to_string(step.global_step);
    if (step.global_step != static_cast<std::int64_t>(i) + 1)
      problems.push_back(where + ": expected global step " + std::to_string(i + 1));
    if (static_cast<int>(step.phase) < static_cast<int>(last))
      problems.push_back(where + ": phase " + std::string(to_string(step.phase)) +
                         " after " + std::string(to_string(last)));
    last = step.phase;
    ++count[static_cast<int>(step.phase)];

    if (step.phase == Phase::final) {
      for (const auto& id : step.instance_ids) ++final_seen[step.episode][id];
      continue;
    }
    const BucketSet& set = lookup_set(schedule, step.phase, sc, ic);
    const int episodes = step.phase == Phase::sc ? schedule.n : schedule.m;
    const auto [lo, hi] = admissible_range(cfg.mode, step.episode, episodes);
    if (step.episode < 1 || step.episode > episodes)
      problems.push_back(where + ": episode " + std::to_string(step.episode) + " out of range");
    if (static_cast<int>(step.instance_ids.size()) != cfg.batch_size)
      problems.push_back(where + ": batch has " + std::to_string(step.instance_ids.size()) +
                         " ids, expected " + std::to_string(cfg.batch_size));
    for (const auto& id : step.instance_ids) {
      const int b = set.index_of(id);
      if (b == 0) {
        problems.push_back(where + ": unknown id '" + id + "'");
      } else if (b < lo || b > hi) {
        problems.push_back(where + ": id '" + id + "' from bucket " + std::to_string(b) +
                           " outside admissible " + std::to_string(lo) + ".." +
                           std::to_string(hi));
      }
    }
  }

  const std::int64_t want_sc = static_cast<std::int64_t>(schedule.n) * cfg.t_sc;
  const std::int64_t want_ic = static_cast<std::int64_t>(schedule.m) * cfg.t_ic;
  if (count[0] != want_sc)
    problems.push_back("SC phase has " + std::to_string(count[0]) + " steps, expected " +
                       std::to_string(want_sc));
  if (count[1] != want_ic)
    problems.push_back("IC phase has " + std::to_string(count[1]) + " steps, expected " +
                       std::to_string(want_ic));

  const auto ids = all_ids(ic);
  for (int epoch = 1; epoch <= cfg.final_epochs; ++epoch) {
    const auto& seen = final_seen[epoch];
    bool ok = seen.size() == ids.size();
    for (const auto& id : ids) {
      auto it = seen.find(id);
      if (it == seen.end() || it->second != 1) ok = false;
    }
    if (!ok)
      problems.push_back("FINAL epoch " + std::to_string(epoch) +
                         " is not a permutation of the instance-level ids");
  }
  if (static_cast<int>(final_seen.size()) > cfg.final_epochs)
    problems.push_back("FINAL phase has more epochs than configured");
  return problems;
}

}  // namespace amrcl
