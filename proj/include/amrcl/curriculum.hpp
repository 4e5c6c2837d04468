#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amrcl/structure.hpp"

namespace amrcl {

enum class Phase { sc, ic, final };
enum class CurriculumMode { forward, inverse, random };
enum class SamplingPolicy { uniform_instance, uniform_bucket };

std::string_view to_string(Phase phase);
std::string_view to_string(CurriculumMode mode);
std::string_view to_string(SamplingPolicy policy);
std::optional<Phase> phase_from_string(std::string_view text);
std::optional<CurriculumMode> mode_from_string(std::string_view text);
std::optional<SamplingPolicy> sampling_from_string(std::string_view text);

struct CurriculumConfig {
  int t_sc = 1000;       // steps per structure-level episode
  int t_ic = 500;        // steps per instance-level episode
  int batch_size = 1;    // instances per step
  int final_epochs = 30;
  CurriculumMode mode = CurriculumMode::forward;
  std::uint64_t seed = 0;
  SamplingPolicy sampling = SamplingPolicy::uniform_instance;
  // Advance past empty admissible unions instead of failing.
  bool lenient = false;
  // Token budget per batch for trainers that batch by target length. Carried
  // in the manifest only; scheduling counts instances.
  int batch_tokens = 2048;

  // Throws std::invalid_argument when a field is out of range.
  void check() const;

  bool operator==(const CurriculumConfig&) const = default;
};

struct ScheduleStep {
  std::int64_t global_step = 0;  // 1-based
  Phase phase = Phase::sc;
  int episode = 0;  // 1-based; the epoch number in the final phase
  std::vector<std::string> instance_ids;

  bool operator==(const ScheduleStep&) const = default;
};

struct Schedule {
  CurriculumConfig config;
  // Set by make_random_baseline: every phase draws full instances.
  bool random_baseline = false;
  int n = 0;  // structure-level episodes
  int m = 0;  // instance-level episodes
  std::string bucket_digest;
  std::vector<ScheduleStep> steps;
  std::vector<std::string> warnings;
};

class EmptyBucketUnion : public std::runtime_error {
 public:
  EmptyBucketUnion(Phase phase, int episode);
};

// Buckets admissible in `episode` of a curriculum over `max_index` buckets:
// [1, episode] forward, [max_index - episode + 1, max_index] inverse, all of
// them in random mode.
std::pair<int, int> admissible_range(CurriculumMode mode, int episode, int max_index);

// SHA-256 over the serialized structure and instance bucket manifests.
std::string bucket_digest(const BucketSet& sc, const BucketSet& ic);

// Structure episodes 1..N, then instance episodes 1..M, then final epochs.
// Each curriculum step draws batch_size ids (with replacement) from the
// admissible buckets; each final epoch is a seeded permutation of the
// instance-level ids cut into batches.
Schedule make_schedule(const BucketSet& sc_buckets, const BucketSet& ic_buckets,
                       const CurriculumConfig& config);

struct InstanceRef {
  std::string id;
  int depth = 0;
};

// Control run with the same step budget as make_schedule would produce for
// these instances (N = M = max depth) but sampling uniformly over all full
// instances in every curriculum step.
Schedule make_random_baseline(std::span<const InstanceRef> full_instances,
                              const CurriculumConfig& config);

using ExposureKey = std::pair<Phase, int>;
using ExposureStats = std::map<ExposureKey, std::map<int, std::int64_t>>;

// Per (phase, episode) histogram of bucket indices over sampled ids.
// Structure steps are looked up in `sc` (in `ic` for a random baseline), the
// others in `ic`; ids found in neither count under bucket 0.
ExposureStats bucket_exposure_stats(const Schedule& schedule, const BucketSet& sc,
                                    const BucketSet& ic);

// Describes every step that draws outside its admissible buckets, every
// phase whose step count breaks the budget, and every final epoch that is
// not a permutation of the instance-level ids.
std::vector<std::string> check_schedule(const Schedule& schedule, const BucketSet& sc,
                                        const BucketSet& ic);

}  // namespace amrcl
