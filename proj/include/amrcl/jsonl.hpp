#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "amrcl/curriculum.hpp"
#include "amrcl/instance.hpp"
#include "amrcl/structure.hpp"

namespace amrcl {

inline constexpr int kFormatVersion = 1;

enum class FormatErrc { malformed, version_mismatch, invalid };

class FormatError : public std::runtime_error {
 public:
  FormatError(FormatErrc code, std::size_t line, const std::string& what);

  FormatErrc code() const { return code_; }
  // 1-based line of the offending record; 0 when the file as a whole is bad.
  std::size_t line() const { return line_; }

 private:
  FormatErrc code_;
  std::size_t line_;
};

// Instance records: one JSON object per line with id, snt, tokens, depth,
// bucket and kind, plus the PENMAN graph under "amr", "parent_id" for
// sub-instances and "format_version". Sub-instance tokens start with <d>.
std::string instance_record(const Instance& inst);
void write_instances(std::ostream& out, std::span<const Instance> instances);
// Re-validates every graph and its recorded depth and tokens.
std::vector<Instance> read_instances(std::istream& in);

// Bucket manifest: one line per bucket, {format_version, level, bucket,
// instance_ids}, buckets 1..max in order.
std::string bucket_manifest_text(const BucketSet& buckets);
void write_buckets(std::ostream& out, const BucketSet& buckets);
BucketSet read_buckets(std::istream& in);

// Schedule manifest: a header line {format_version, kind, config, n, m,
// bucket_digest, notes} followed by one {step, phase, episode, ids} line per
// step.
std::string schedule_manifest_text(const Schedule& schedule);
void write_schedule(std::ostream& out, const Schedule& schedule);
Schedule read_schedule(std::istream& in);

}  // namespace amrcl
