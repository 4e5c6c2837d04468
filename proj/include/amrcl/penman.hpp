#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "amrcl/graph.hpp"

namespace amrcl {

enum class PenmanErrc {
  unbalanced_parens,
  duplicate_variable,
  dangling_reference,
  empty_graph,
  syntax,
};

std::string_view to_string(PenmanErrc code);

class PenmanError : public std::runtime_error {
 public:
  PenmanError(PenmanErrc code, std::size_t offset, const std::string& what);

  PenmanErrc code() const { return code_; }
  // Byte offset into the parsed text.
  std::size_t offset() const { return offset_; }

 private:
  PenmanErrc code_;
  std::size_t offset_;
};

// Parses one PENMAN expression. Leading `#` comment lines are skipped and
// alignment suffixes (`~e.3`) are dropped. Bare tokens that name a variable
// bound anywhere in the expression become relations; everything else is a
// constant.
AmrGraph parse_penman(std::string_view text);

enum class PenmanStyle { single_line, indented };

// Depth-first from the root in stored edge order; the first visit of a
// variable prints `(var / concept ...)`, later visits print the bare variable.
std::string serialize_penman(const AmrGraph& graph, PenmanStyle style = PenmanStyle::single_line);

}  // namespace amrcl
