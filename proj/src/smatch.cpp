#include "amrcl/smatch.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "amrcl/rng.hpp"

namespace amrcl {

ScoredPair score_from_counts(int matched, int gold_total, int pred_total) {
  ScoredPair out;
  out.matched = matched;
  out.gold_total = gold_total;
  out.pred_total = pred_total;
  if (gold_total == 0 && pred_total == 0) {
    out.precision = out.recall = out.f1 = 1.0;
    return out;
  }
  out.precision = pred_total > 0 ? static_cast<double>(matched) / pred_total : 0.0;
  out.recall = gold_total > 0 ? static_cast<double>(matched) / gold_total : 0.0;
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

namespace {

constexpr int kUnmapped = -1;

// Variables of a triple list, numbered by first appearance.
struct VariableTable {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;

  int add(const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  }
  int size() const { return static_cast<int>(names.size()); }
};

VariableTable collect_variables(std::span<const Triple> triples) {
  VariableTable table;
  for (const auto& t : triples) {
    table.add(t.subject);
    if (t.kind == TripleKind::relation) table.add(t.object);
  }
  return table;
}

// Score of a mapping decomposes into per-variable terms (instance, attribute
// and top triples, self-loops) and terms over pairs of mapped variables
// (relation triples). The tables below hold both.
class MatchTables {
 public:
  MatchTables(std::span<const Triple> gold, std::span<const Triple> pred)
      : gold_vars_(collect_variables(gold)), pred_vars_(collect_variables(pred)) {
    const int g = gold_vars_.size();
    const int p = pred_vars_.size();
    unary_.assign(static_cast<std::size_t>(g) * static_cast<std::size_t>(p), 0);
    partners_.resize(static_cast<std::size_t>(g) * static_cast<std::size_t>(p));

    // (kind, role, object) -> count, per variable.
    using UnaryKey = std::tuple<TripleKind, std::string, std::string>;
    std::map<UnaryKey, std::vector<std::pair<int, int>>> pred_unary;
    std::map<std::tuple<int, std::string, int>, int> pred_rel_count;
    {
      std::map<std::pair<int, UnaryKey>, int> counts;
      for (const auto& t : pred) {
        if (t.kind == TripleKind::relation) {
          ++pred_rel_count[{pred_vars_.index.at(t.subject), t.role,
                            pred_vars_.index.at(t.object)}];
        } else {
          ++counts[{pred_vars_.index.at(t.subject), {t.kind, t.role, t.object}}];
        }
      }
      for (const auto& [key, n] : counts) pred_unary[key.second].push_back({key.first, n});
    }
    std::map<std::pair<int, UnaryKey>, int> gold_unary;
    std::map<std::tuple<int, std::string, int>, int> gold_rel_count;
    for (const auto& t : gold) {
      if (t.kind == TripleKind::relation) {
        ++gold_rel_count[{gold_vars_.index.at(t.subject), t.role, gold_vars_.index.at(t.object)}];
      } else {
        ++gold_unary[{gold_vars_.index.at(t.subject), {t.kind, t.role, t.object}}];
      }
    }
    for (const auto& [key, n] : gold_unary) {
      auto it = pred_unary.find(key.second);
      if (it == pred_unary.end()) continue;
      for (const auto& [j, m] : it->second) unary(key.first, j) += std::min(n, m);
    }

    std::map<std::string, std::vector<std::tuple<int, int, int>>> pred_by_role;
    for (const auto& [key, n] : pred_rel_count)
      pred_by_role[std::get<1>(key)].push_back({std::get<0>(key), std::get<2>(key), n});
    for (const auto& [key, n] : gold_rel_count) {
      const auto& [i, role, k] = key;
      auto it = pred_by_role.find(role);
      if (it == pred_by_role.end()) continue;
      for (const auto& [j, l, m] : it->second) {
        const int w = std::min(n, m);
        if (i == k) {
          if (j == l) unary(i, j) += w;
          continue;
        }
        if (j == l) continue;
        partners_[slot(i, j)].push_back({k, l, w});
        partners_[slot(k, l)].push_back({i, j, w});
      }
    }
  }

  int gold_size() const { return gold_vars_.size(); }
  int pred_size() const { return pred_vars_.size(); }
  const VariableTable& gold_vars() const { return gold_vars_; }
  const VariableTable& pred_vars() const { return pred_vars_; }

  int unary_weight(int i, int j) const { return unary_[slot(i, j)]; }

  // Matches gained by mapping i -> j against the rest of `map`, ignoring the
  // gold variables `skip_a` and `skip_b`.
  int contribution(const std::vector<int>& map, int i, int j, int skip_a = -1,
                   int skip_b = -1) const {
    if (j == kUnmapped) return 0;
    int total = unary_[slot(i, j)];
    for (const auto& p : partners_[slot(i, j)])
      if (p.gold != skip_a && p.gold != skip_b && map[static_cast<std::size_t>(p.gold)] == p.pred)
        total += p.weight;
    return total;
  }

  // Relation matches between the assignments i -> j and k -> l.
  int pair_weight(int i, int j, int k, int l) const {
    if (j == kUnmapped || l == kUnmapped) return 0;
    int total = 0;
    for (const auto& p : partners_[slot(i, j)])
      if (p.gold == k && p.pred == l) total += p.weight;
    return total;
  }

  int score(const std::vector<int>& map) const {
    int unary_total = 0;
    int pair_total = 0;
    for (int i = 0; i < gold_size(); ++i) {
      const int j = map[static_cast<std::size_t>(i)];
      if (j == kUnmapped) continue;
      unary_total += unary_[slot(i, j)];
      for (const auto& p : partners_[slot(i, j)])
        if (map[static_cast<std::size_t>(p.gold)] == p.pred) pair_total += p.weight;
    }
    return unary_total + pair_total / 2;
  }

 private:
  struct Partner {
    int gold;
    int pred;
    int weight;
  };

  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(pred_vars_.size()) +
           static_cast<std::size_t>(j);
  }
  int& unary(int i, int j) { return unary_[slot(i, j)]; }

  VariableTable gold_vars_;
  VariableTable pred_vars_;
  std::vector<int> unary_;
  std::vector<std::vector<Partner>> partners_;
};

// Concept-match greedy seeding, then leftover gold variables take leftover
// predicted variables in order.
std::vector<int> greedy_mapping(const MatchTables& t) {
  std::vector<int> map(static_cast<std::size_t>(t.gold_size()), kUnmapped);
  std::vector<bool> used(static_cast<std::size_t>(t.pred_size()), false);
  for (int i = 0; i < t.gold_size(); ++i) {
    int best = kUnmapped;
    int best_w = 0;
    for (int j = 0; j < t.pred_size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const int w = t.unary_weight(i, j);
      if (w > best_w) {
        best = j;
        best_w = w;
      }
    }
    if (best != kUnmapped) {
      map[static_cast<std::size_t>(i)] = best;
      used[static_cast<std::size_t>(best)] = true;
    }
  }
  int next = 0;
  for (int i = 0; i < t.gold_size(); ++i) {
    if (map[static_cast<std::size_t>(i)] != kUnmapped) continue;
    while (next < t.pred_size() && used[static_cast<std::size_t>(next)]) ++next;
    if (next == t.pred_size()) break;
    map[static_cast<std::size_t>(i)] = next;
    used[static_cast<std::size_t>(next)] = true;
  }
  return map;
}

std::vector<int> random_mapping(const MatchTables& t, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(t.pred_size()));
  std::iota(pool.begin(), pool.end(), 0);
  rng.shuffle(std::span<int>(pool));
  std::vector<int> map(static_cast<std::size_t>(t.gold_size()), kUnmapped);
  for (std::size_t i = 0; i < map.size() && i < pool.size(); ++i) map[i] = pool[i];
  return map;
}

// Steepest ascent over single-variable moves (to an unused predicted variable
// or to none) and swaps of two images. Ties go to the earliest move in a
// fixed order: moves by (gold, target), then swaps by (gold, gold).
int hill_climb(const MatchTables& t, std::vector<int>& map, int score) {
  const int g = t.gold_size();
  const int p = t.pred_size();
  std::vector<int> owner(static_cast<std::size_t>(p), kUnmapped);
  for (int i = 0; i < g; ++i)
    if (map[static_cast<std::size_t>(i)] != kUnmapped)
      owner[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] = i;

  while (true) {
    int best_gain = 0;
    int best_i = -1, best_target = kUnmapped, best_k = -1;
    for (int i = 0; i < g; ++i) {
      const int cur = map[static_cast<std::size_t>(i)];
      const int base = t.contribution(map, i, cur);
      for (int j = -1; j < p; ++j) {
        if (j == cur || (j != kUnmapped && owner[static_cast<std::size_t>(j)] != kUnmapped))
          continue;
        const int gain = t.contribution(map, i, j) - base;
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
          best_target = j;
          best_k = -1;
        }
      }
    }
    for (int i = 0; i < g; ++i) {
      const int a = map[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < g; ++k) {
        const int b = map[static_cast<std::size_t>(k)];
        if (a == b) continue;
        const int before = t.contribution(map, i, a, i, k) + t.contribution(map, k, b, i, k) +
                           t.pair_weight(i, a, k, b);
        const int after = t.contribution(map, i, b, i, k) + t.contribution(map, k, a, i, k) +
                          t.pair_weight(i, b, k, a);
        const int gain = after - before;
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
          best_k = k;
        }
      }
    }
    if (best_gain <= 0) return score;

    score += best_gain;
    if (best_k < 0) {
      const int cur = map[static_cast<std::size_t>(best_i)];
      if (cur != kUnmapped) owner[static_cast<std::size_t>(cur)] = kUnmapped;
      map[static_cast<std::size_t>(best_i)] = best_target;
      if (best_target != kUnmapped) owner[static_cast<std::size_t>(best_target)] = best_i;
    } else {
      auto& a = map[static_cast<std::size_t>(best_i)];
      auto& b = map[static_cast<std::size_t>(best_k)];
      std::swap(a, b);
      if (a != kUnmapped) owner[static_cast<std::size_t>(a)] = best_i;
      if (b != kUnmapped) owner[static_cast<std::size_t>(b)] = best_k;
    }
  }
}

ScoredPair finish(int matched, std::size_t gold_total, std::size_t pred_total,
                  const VariableTable& gold_vars, const VariableTable& pred_vars,
                  const std::vector<int>& map) {
  ScoredPair out =
      score_from_counts(matched, static_cast<int>(gold_total), static_cast<int>(pred_total));
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] != kUnmapped)
      out.mapping.emplace_back(gold_vars.names[i],
                               pred_vars.names[static_cast<std::size_t>(map[i])]);
  return out;
}

}  // namespace

ScoredPair smatch_triples(std::span<const Triple> gold, std::span<const Triple> pred,
                          const SmatchOptions& options) {
  const MatchTables tables(gold, pred);
  const int ceiling = static_cast<int>(std::min(gold.size(), pred.size()));
  Rng rng(options.seed);

  std::vector<int> best_map(static_cast<std::size_t>(tables.gold_size()), kUnmapped);
  int best = 0;
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> map = r == 0 ? greedy_mapping(tables) : random_mapping(tables, rng);
    const int score = hill_climb(tables, map, tables.score(map));
    if (score > best || r == 0) {
      best = score;
      best_map = std::move(map);
    }
    if (best >= ceiling) break;
  }
  return finish(best, gold.size(), pred.size(), tables.gold_vars(), tables.pred_vars(),
                best_map);
}

ScoredPair smatch_score(const AmrGraph& gold, const AmrGraph& pred, const SmatchOptions& options) {
  const auto g = to_triples(gold);
  const auto p = to_triples(pred);
  return smatch_triples(g, p, options);
}

namespace {

// Counts triples shared by the mapped gold list and the predicted list,
// directly from the triples. Unmapped gold variables get names that cannot
// occur in the prediction.
class DirectCounter {
 public:
  DirectCounter(std::span<const Triple> gold, std::span<const Triple> pred) : gold_(gold) {
    for (const auto& t : pred) ++pred_counts_[t];
  }

  int count(const std::unordered_map<std::string, std::string>& rename) const {
    std::map<Triple, int> mapped;
    for (const auto& t : gold_) {
      Triple m = t;
      m.subject = image(rename, t.subject);
      if (t.kind == TripleKind::relation) m.object = image(rename, t.object);
      ++mapped[m];
    }
    int matched = 0;
    for (const auto& [t, n] : mapped) {
      auto it = pred_counts_.find(t);
      if (it != pred_counts_.end()) matched += std::min(n, it->second);
    }
    return matched;
  }

 private:
  static std::string image(const std::unordered_map<std::string, std::string>& rename,
                           const std::string& var) {
    auto it = rename.find(var);
    return it == rename.end() ? std::string("\x01") + var : it->second;
  }

  std::span<const Triple> gold_;
  std::map<Triple, int> pred_counts_;
};

std::uint64_t injection_count(std::uint64_t from, std::uint64_t into) {
  std::uint64_t n = 1;
  for (std::uint64_t k = 0; k < from; ++k) {
    n *= into - k;
    if (n > kOracleMaxMappings) return n;
  }
  return n;
}

}  // namespace

ScoredPair smatch_oracle_triples(std::span<const Triple> gold, std::span<const Triple> pred) {
  const VariableTable gv = collect_variables(gold);
  const VariableTable pv = collect_variables(pred);
  const bool gold_smaller = gv.size() <= pv.size();
  const VariableTable& small = gold_smaller ? gv : pv;
  const VariableTable& large = gold_smaller ? pv : gv;
  if (small.size() > kOracleMaxVariables)
    throw TooLarge("TooLarge: " + std::to_string(small.size()) +
                   " variables on the smaller side exceed the exhaustive limit of " +
                   std::to_string(kOracleMaxVariables));
  const auto mappings = injection_count(static_cast<std::uint64_t>(small.size()),
                                        static_cast<std::uint64_t>(large.size()));
  if (mappings > kOracleMaxMappings)
    throw TooLarge("TooLarge: more than " + std::to_string(kOracleMaxMappings) +
                   " injective mappings to enumerate");

  const DirectCounter counter(gold, pred);
  const std::size_t k = static_cast<std::size_t>(small.size());
  const std::size_t n = static_cast<std::size_t>(large.size());

  // choice[d] = index into `large` for small variable d; odometer over
  // injective assignments.
  std::vector<std::size_t> choice(k, 0);
  std::vector<bool> taken(n, false);
  int best = -1;
  std::unordered_map<std::string, std::string> best_rename;

  auto evaluate = [&]() {
    std::unordered_map<std::string, std::string> rename;
    for (std::size_t d = 0; d < k; ++d) {
      const std::string& s = small.names[d];
      const std::string& l = large.names[choice[d]];
      if (gold_smaller) {
        rename.emplace(s, l);
      } else {
        rename.emplace(l, s);
      }
    }
    const int c = counter.count(rename);
    if (c > best) {
      best = c;
      best_rename = std::move(rename);
    }
  };

  // Depth-first enumeration with an explicit cursor.
  std::size_t depth = 0;
  if (k == 0) {
    evaluate();
  } else {
    choice[0] = 0;
    while (true) {
      if (choice[depth] >= n) {
        if (depth == 0) break;
        --depth;
        taken[choice[depth]] = false;
        ++choice[depth];
        continue;
      }
      if (taken[choice[depth]]) {
        ++choice[depth];
        continue;
      }
      if (depth + 1 == k) {
        evaluate();
        ++choice[depth];
        continue;
      }
      taken[choice[depth]] = true;
      ++depth;
      choice[depth] = 0;
    }
  }

  ScoredPair out = score_from_counts(std::max(best, 0), static_cast<int>(gold.size()),
                                     static_cast<int>(pred.size()));
  for (const auto& name : gv.names) {
    auto it = best_rename.find(name);
    if (it != best_rename.end()) out.mapping.emplace_back(name, it->second);
  }
  return out;
}

ScoredPair smatch_oracle(const AmrGraph& gold, const AmrGraph& pred) {
  const auto g = to_triples(gold);
  const auto p = to_triples(pred);
  return smatch_oracle_triples(g, p);
}

}  // namespace amrcl
