#include "amrcl/fine_grained.hpp"

#include <cctype>
#include <unordered_set>

namespace amrcl {

std::string_view to_string(FineGrainedMetric metric) {
  switch (metric) {
    case FineGrainedMetric::unlabeled: return "unlabeled";
    case FineGrainedMetric::no_wsd: return "no_wsd";
    case FineGrainedMetric::concepts: return "concepts";
    case FineGrainedMetric::named_entities: return "named_entities";
    case FineGrainedMetric::negation: return "negation";
    case FineGrainedMetric::wikification: return "wikification";
    case FineGrainedMetric::reentrancies: return "reentrancies";
    case FineGrainedMetric::srl: return "srl";
  }
  return "?";
}

std::optional<FineGrainedMetric> metric_from_string(std::string_view text) {
  for (auto m : kFineGrainedMetrics)
    if (to_string(m) == text) return m;
  return std::nullopt;
}

namespace {

std::string strip_sense(const std::string& label) {
  const std::size_t dash = label.rfind('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == label.size()) return label;
  for (std::size_t i = dash + 1; i < label.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return label;
  return label.substr(0, dash);
}

bool is_core_role(std::string_view role) {
  if (!role.starts_with(":ARG")) return false;
  role.remove_prefix(4);
  if (role.ends_with("-of")) role.remove_suffix(3);
  if (role.empty()) return false;
  for (char c : role)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_op_role(std::string_view role) {
  if (!role.starts_with(":op") || role.size() == 3) return false;
  for (char c : role.substr(3))
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::vector<Triple> metric_triples(const AmrGraph& graph, FineGrainedMetric metric) {
  const auto all = to_triples(graph);
  std::vector<Triple> out;
  switch (metric) {
    case FineGrainedMetric::unlabeled:
      out = all;
      for (auto& t : out)
        if (t.kind == TripleKind::relation) t.role = ":rel";
      break;
    case FineGrainedMetric::no_wsd:
      out = all;
      for (auto& t : out)
        if (t.kind == TripleKind::instance || t.kind == TripleKind::top)
          t.object = strip_sense(t.object);
      break;
    case FineGrainedMetric::concepts:
      for (const auto& t : all)
        if (t.kind == TripleKind::instance) out.push_back(t);
      break;
    case FineGrainedMetric::named_entities: {
      std::unordered_set<std::string> entities, names;
      for (const auto& t : all)
        if (t.kind == TripleKind::relation && t.role == ":name") {
          entities.insert(t.subject);
          names.insert(t.object);
        }
      for (const auto& t : all) {
        const bool instance = t.kind == TripleKind::instance &&
                              (entities.contains(t.subject) || names.contains(t.subject));
        const bool edge = t.kind == TripleKind::relation && t.role == ":name";
        const bool op = t.kind == TripleKind::attribute && names.contains(t.subject) &&
                        is_op_role(t.role);
        if (instance || edge || op) out.push_back(t);
      }
      break;
    }
    case FineGrainedMetric::negation:
      for (const auto& t : all)
        if (t.role == ":polarity") out.push_back(t);
      break;
    case FineGrainedMetric::wikification:
      for (const auto& t : all)
        if (t.role == ":wiki") out.push_back(t);
      break;
    case FineGrainedMetric::reentrancies: {
      std::unordered_set<std::string> reentrant;
      for (const auto& [var, n] : incoming_relation_counts(graph))
        if (n >= 2) reentrant.insert(var);
      for (const auto& t : all) {
        if (t.kind == TripleKind::instance && reentrant.contains(t.subject)) out.push_back(t);
        if (t.kind == TripleKind::relation &&
            (reentrant.contains(t.subject) || reentrant.contains(t.object)))
          out.push_back(t);
      }
      break;
    }
    case FineGrainedMetric::srl:
      for (const auto& t : all)
        if (t.kind == TripleKind::relation && is_core_role(t.role)) out.push_back(t);
      break;
  }
  return out;
}

FineGrainedReport fine_grained(const AmrGraph& gold, const AmrGraph& pred,
                               const SmatchOptions& options) {
  FineGrainedReport report;
  for (auto metric : kFineGrainedMetrics) {
    const auto g = metric_triples(gold, metric);
    const auto p = metric_triples(pred, metric);
    report.scores[static_cast<std::size_t>(metric)] = smatch_triples(g, p, options);
  }
  return report;
}

}  // namespace amrcl
