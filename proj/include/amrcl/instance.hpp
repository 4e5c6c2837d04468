#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "amrcl/graph.hpp"

namespace amrcl {

enum class InstanceKind { full, sub };

std::string_view to_string(InstanceKind kind);
std::optional<InstanceKind> instance_kind_from_string(std::string_view text);

// A sentence paired with its graph. Sub-instances carry a depth-truncated
// graph and point back at the full instance they were cut from.
struct Instance {
  std::string id;
  std::string snt;
  AmrGraph graph;
  int depth = 0;
  InstanceKind kind = InstanceKind::full;
  std::optional<std::string> parent_id;
};

}  // namespace amrcl
