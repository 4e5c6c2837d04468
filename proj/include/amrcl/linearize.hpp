#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrcl/graph.hpp"

namespace amrcl {

// Placeholder concept for a pointer the model emitted without a concept.
inline constexpr std::string_view kUnknownConcept = "amr-unknown";

// A linearized graph: whitespace tokens with `<Ri>` pointer tokens standing
// for variables, plus an optional depth-conditioning tag rendered as `<d>`.
class TokenSequence {
 public:
  TokenSequence() = default;
  explicit TokenSequence(std::vector<std::string> tokens, std::optional<int> depth_tag = {});

  // Splits on whitespace; a leading `<d>` token becomes the depth tag. Quoted
  // literals containing spaces stay one token.
  static TokenSequence parse(std::string_view text);
  static TokenSequence from_tokens(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<int> depth_tag() const { return depth_tag_; }

  // Tokens with the `<d>` prefix when a depth tag is set.
  std::vector<std::string> rendered() const;
  std::string str() const;

  bool operator==(const TokenSequence&) const = default;

 private:
  std::vector<std::string> tokens_;
  std::optional<int> depth_tag_;
};

std::string pointer_token(std::size_t index);
// Pointer index of `<Rk>`, if the token is one.
std::optional<std::size_t> parse_pointer_token(std::string_view token);
// Depth of `<d>`, if the token is one.
std::optional<int> parse_depth_token(std::string_view token);

TokenSequence linearize(const AmrGraph& graph);

class InvalidDepth : public std::invalid_argument {
 public:
  explicit InvalidDepth(int depth);
};

TokenSequence with_depth_token(TokenSequence seq, int depth);

class Unrecoverable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rebuilds a graph from possibly malformed model output:
//   - parentheses still open at the end are closed,
//   - a pointer without a concept gets `amr-unknown`,
//   - a role with no following node is dropped,
//   - tokens after the root closes are ignored.
// Relations to pointers that are never defined are dropped too. Variables are
// named after the first letter of their concept (`s`, `s2`, ...). Throws
// Unrecoverable when no root can be identified.
AmrGraph delinearize(const TokenSequence& seq);

}  // namespace amrcl
