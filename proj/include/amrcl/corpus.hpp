#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "amrcl/instance.hpp"

namespace amrcl {

// One blank-line separated block of an LDC-style AMR file.
struct CorpusBlock {
  std::size_t line = 0;  // 1-based line of the first line in the block
  std::map<std::string, std::string> metadata;  // `# ::key value` pairs
  std::string amr;                              // graph text without comments
};

struct CorpusError {
  std::string id;
  std::size_t line = 0;
  std::string message;
};

// Streams blocks out of an AMR file. Blocks made only of comments (release
// headers) are skipped.
class CorpusReader {
 public:
  // `source` names the input in synthesized ids (`source:line`).
  CorpusReader(std::istream& in, std::string source);

  std::optional<CorpusBlock> next_block();

  // Parses the next block into a full instance. A block that fails to parse
  // yields an error instead; reading can continue after it.
  struct Item {
    std::optional<Instance> instance;
    std::optional<CorpusError> error;
  };
  std::optional<Item> next();

  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

struct CorpusReadResult {
  std::vector<Instance> instances;
  std::vector<CorpusError> errors;
};

CorpusReadResult read_amr_corpus(std::istream& in, const std::string& source);
// Throws std::runtime_error when the file cannot be opened.
CorpusReadResult read_amr_corpus(const std::filesystem::path& path);

// Writes `# ::id`, `# ::snt` and the indented graph, then a blank line.
void write_amr_block(std::ostream& out, const Instance& inst);

class InvalidRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxSyntheticDepth = 12;

struct SyntheticOptions {
  double reentrancy = 0.15;  // chance per node of one extra edge back up the graph
  double negation = 0.1;
  double named_entity = 0.25;
};

// Deterministic random corpus with graph depths drawn uniformly from
// [min_depth, max_depth]. Graphs use a small vocabulary of frames and nouns,
// core and non-core roles, `:polarity`, `:quant`, named entities with
// `:name`/`:opN`/`:wiki`, and occasional re-entrancies. Sentences are a plain
// rendering of the concepts.
std::vector<Instance> gen_synthetic_corpus(std::size_t n, int min_depth, int max_depth,
                                           std::uint64_t seed, const SyntheticOptions& options = {});

}  // namespace amrcl
