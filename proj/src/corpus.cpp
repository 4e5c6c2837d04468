#include "amrcl/corpus.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "amrcl/penman.hpp"
#include "amrcl/rng.hpp"
#include "amrcl/structure.hpp"

namespace amrcl {

std::string_view to_string(InstanceKind kind) { return kind == InstanceKind::full ? "full" : "sub"; }

std::optional<InstanceKind> instance_kind_from_string(std::string_view text) {
  if (text == "full") return InstanceKind::full;
  if (text == "sub") return InstanceKind::sub;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// `# ::id abc ::date 2017 ::annotator x` -> {id: abc, date: 2017, annotator: x}
void parse_metadata(std::string_view line, std::map<std::string, std::string>& out) {
  std::vector<std::size_t> starts;
  for (std::size_t p = line.find("::"); p != std::string_view::npos; p = line.find("::", p + 2)) {
    if (p == 0 || std::isspace(static_cast<unsigned char>(line[p - 1])) || line[p - 1] == '#')
      starts.push_back(p);
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t end = i + 1 < starts.size() ? starts[i + 1] : line.size();
    std::string_view field = line.substr(starts[i] + 2, end - starts[i] - 2);
    std::size_t sep = 0;
    while (sep < field.size() && !std::isspace(static_cast<unsigned char>(field[sep]))) ++sep;
    std::string key(field.substr(0, sep));
    if (key.empty()) continue;
    out[key] = std::string(trim(field.substr(sep)));
  }
}

}  // namespace

CorpusReader::CorpusReader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {}

std::optional<CorpusBlock> CorpusReader::next_block() {
  std::string line;
  while (true) {
    CorpusBlock block;
    bool started = false;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string_view t = trim(line);
      if (t.empty()) {
        if (started) break;
        continue;
      }
      if (!started) {
        started = true;
        block.line = line_;
      }
      if (t.front() == '#') {
        parse_metadata(t, block.metadata);
      } else {
        block.amr += line;
        block.amr += '\n';
      }
    }
    if (!started) return std::nullopt;
    if (!block.amr.empty()) return block;
  }
}

std::optional<CorpusReader::Item> CorpusReader::next() {
  auto block = next_block();
  if (!block) return std::nullopt;
  Item item;
  auto id_it = block->metadata.find("id");
  const std::string id = id_it != block->metadata.end() && !id_it->second.empty()
                             ? id_it->second
                             : source_ + ":" + std::to_string(block->line);
  try {
    Instance inst;
    inst.id = id;
    if (auto snt = block->metadata.find("snt"); snt != block->metadata.end())
      inst.snt = snt->second;
    inst.graph = parse_penman(block->amr);
    inst.depth = graph_depth(inst.graph);
    inst.kind = InstanceKind::full;
    item.instance = std::move(inst);
  } catch (const PenmanError& e) {
    item.error = CorpusError{id, block->line, e.what()};
  }
  return item;
}

CorpusReadResult read_amr_corpus(std::istream& in, const std::string& source) {
  CorpusReadResult out;
  CorpusReader reader(in, source);
  while (auto item = reader.next()) {
    if (item->instance) out.instances.push_back(std::move(*item->instance));
    if (item->error) out.errors.push_back(std::move(*item->error));
  }
  return out;
}

CorpusReadResult read_amr_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_amr_corpus(in, path.filename().string());
}

void write_amr_block(std::ostream& out, const Instance& inst) {
  out << "# ::id " << inst.id << '\n';
  out << "# ::snt " << inst.snt << '\n';
  out << serialize_penman(inst.graph, PenmanStyle::indented) << "\n\n";
}

namespace {

constexpr std::array<std::string_view, 16> kFrames = {
    "die-01",  "kill-01",  "want-01", "see-01",  "give-01", "go-02",     "say-01",  "know-01",
    "make-01", "think-01", "help-01", "believe-01", "fight-01", "live-01", "build-01", "read-01"};
constexpr std::array<std::string_view, 15> kNouns = {
    "soldier", "boy",   "girl",  "book",    "dog",     "government", "army", "house",
    "war",     "village", "child", "teacher", "report", "law",        "river"};
constexpr std::array<std::string_view, 4> kEntityTypes = {"person", "city", "country",
                                                          "organization"};
constexpr std::array<std::string_view, 8> kNames = {"Maria", "Kenya",  "Paris", "Obama",
                                                    "Lagos", "Oxfam", "Tariq", "Peru"};
constexpr std::array<std::string_view, 3> kCoreRoles = {":ARG0", ":ARG1", ":ARG2"};
constexpr std::array<std::string_view, 4> kFrameExtras = {":location", ":time", ":manner",
                                                          ":purpose"};
constexpr std::array<std::string_view, 3> kNounRoles = {":mod", ":poss", ":ARG0-of"};

template <class Array>
std::string pick(Rng& rng, const Array& items) {
  return std::string(items[rng.below(items.size())]);
}

std::string lemma(std::string_view label) {
  const std::size_t dash = label.rfind('-');
  if (dash != std::string_view::npos && dash + 1 < label.size() &&
      std::isdigit(static_cast<unsigned char>(label[dash + 1])))
    return std::string(label.substr(0, dash));
  return std::string(label);
}

class GraphGenerator {
 public:
  GraphGenerator(Rng& rng, int depth, const SyntheticOptions& options)
      : rng_(rng), depth_(depth), options_(options) {}

  AmrGraph run() {
    const std::string root = grow(1, /*spine=*/true, /*want_frame=*/true);
    return AmrGraph(root, std::move(nodes_), std::move(edges_));
  }

  std::string sentence() const {
    std::string out;
    for (const auto& w : words_) {
      if (!out.empty()) out.push_back(' ');
      out += w;
    }
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out + " .";
  }

 private:
  std::string new_variable(std::string_view label) {
    const char letter = label.empty() || !std::isalpha(static_cast<unsigned char>(label[0]))
                            ? 'x'
                            : static_cast<char>(std::tolower(static_cast<unsigned char>(label[0])));
    const int n = ++letters_[letter];
    std::string var(1, letter);
    if (n > 1) var += std::to_string(n);
    return var;
  }

  std::string add_node(const std::string& label, bool reentry_target) {
    std::string var = new_variable(label);
    nodes_.push_back({var, label});
    if (reentry_target) targets_.push_back(var);
    return var;
  }

  void edge(const std::string& from, std::string_view role, const std::string& to, EdgeKind kind) {
    edges_.push_back({from, std::string(role), to, kind});
  }

  // Adds a node at `level` with its subtree; returns its variable.
  std::string grow(int level, bool spine, bool want_frame) {
    const bool room = level < depth_;
    int children = 0;
    if (room) {
      children = spine ? 1 : 0;
      for (int k = 0; k < 2; ++k)
        if (rng_.chance(spine ? 0.5 : 0.4)) ++children;
    }

    const bool frame = want_frame || (children > 0 && rng_.chance(0.5));
    const bool entity = !frame && room && rng_.chance(options_.named_entity);
    std::string label = frame ? pick(rng_, kFrames) : entity ? pick(rng_, kEntityTypes)
                                                              : pick(rng_, kNouns);
    const std::string var = add_node(label, true);
    words_.push_back(lemma(label));

    if (frame && rng_.chance(options_.negation)) {
      edge(var, ":polarity", "-", EdgeKind::attribute);
      words_.push_back("not");
    }
    if (entity) {
      const std::string name = pick(rng_, kNames);
      edge(var, ":wiki", "\"" + name + "\"", EdgeKind::attribute);
      const std::string name_var = [&] {
        std::string nv = new_variable("name");
        nodes_.push_back({nv, "name"});
        return nv;
      }();
      edge(var, ":name", name_var, EdgeKind::relation);
      edge(name_var, ":op1", "\"" + name + "\"", EdgeKind::attribute);
      words_.push_back(name);
    }
    if (!frame && !entity && rng_.chance(0.2)) {
      const std::string n = std::to_string(2 + rng_.below(19));
      edge(var, ":quant", n, EdgeKind::attribute);
      words_.push_back(n);
    }

    const int spine_at = children > 0 && spine ? static_cast<int>(rng_.below(children)) : -1;
    for (int c = 0; c < children; ++c) {
      std::string role;
      bool child_frame = false;
      if (frame) {
        role = c < static_cast<int>(kCoreRoles.size()) && rng_.chance(0.8)
                   ? std::string(kCoreRoles[static_cast<std::size_t>(c)])
                   : pick(rng_, kFrameExtras);
        child_frame = rng_.chance(0.35);
      } else {
        role = pick(rng_, kNounRoles);
        child_frame = role == ":ARG0-of";
      }
      const std::size_t at = edges_.size();
      edge(var, role, "", EdgeKind::relation);
      edges_[at].target = grow(level + 1, c == spine_at, child_frame);
    }

    if (targets_.size() > 1 && rng_.chance(options_.reentrancy)) {
      // Any variable opened before this one is already visited when this
      // edge is reached, so the edge never deepens the graph.
      const std::size_t self = index_of_target(var);
      if (self > 0) {
        const std::string& target = targets_[rng_.below(self)];
        edge(var, frame ? ":ARG1" : ":mod", target, EdgeKind::relation);
      }
    }
    return var;
  }

  std::size_t index_of_target(const std::string& var) const {
    for (std::size_t i = 0; i < targets_.size(); ++i)
      if (targets_[i] == var) return i;
    return 0;
  }

  Rng& rng_;
  int depth_;
  const SyntheticOptions& options_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::string> targets_;
  std::vector<std::string> words_;
  std::unordered_map<char, int> letters_;
};

}  // namespace

std::vector<Instance> gen_synthetic_corpus(std::size_t n, int min_depth, int max_depth,
                                           std::uint64_t seed, const SyntheticOptions& options) {
  if (n < 1) throw InvalidRange("InvalidRange: corpus size must be >= 1");
  if (min_depth < 1 || max_depth > kMaxSyntheticDepth || min_depth > max_depth)
    throw InvalidRange("InvalidRange: depth range " + std::to_string(min_depth) + ".." +
                       std::to_string(max_depth) + " is not within 1.." +
                       std::to_string(kMaxSyntheticDepth));
  std::vector<Instance> out;
  out.reserve(n);
  const auto span = static_cast<std::uint64_t>(max_depth - min_depth + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, i));
    const int depth = min_depth + static_cast<int>(rng.below(span));
    GraphGenerator gen(rng, depth, options);
    Instance inst;
    inst.id = "synth." + std::to_string(i + 1);
    inst.graph = gen.run();
    inst.snt = gen.sentence();
    inst.depth = graph_depth(inst.graph);
    inst.kind = InstanceKind::full;
    if (inst.depth != depth)
      throw std::logic_error("synthetic graph " + inst.id + " has depth " +
                             std::to_string(inst.depth) + ", wanted " + std::to_string(depth));
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace amrcl
