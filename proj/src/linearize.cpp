#include "amrcl/linearize.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

#include "amrcl/traversal.hpp"

namespace amrcl {

namespace {

std::optional<long> bracketed_number(std::string_view token, std::string_view prefix) {
  if (token.size() < prefix.size() + 3 || token.front() != '<' || token.back() != '>')
    return std::nullopt;
  token = token.substr(1, token.size() - 2);
  if (!token.starts_with(prefix)) return std::nullopt;
  token.remove_prefix(prefix.size());
  if (token.empty() || (token.size() > 1 && token[0] == '0')) return std::nullopt;
  long value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string pointer_token(std::size_t index) { return "<R" + std::to_string(index) + ">"; }

std::optional<std::size_t> parse_pointer_token(std::string_view token) {
  if (token.size() < 4) return std::nullopt;
  auto v = bracketed_number(token, "R");
  if (!v) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

std::optional<int> parse_depth_token(std::string_view token) {
  if (token.size() < 3 || token.front() != '<' || token.back() != '>') return std::nullopt;
  std::string_view digits = token.substr(1, token.size() - 2);
  if (digits.empty() || digits[0] == '0') return std::nullopt;
  int value = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || end != digits.data() + digits.size() || value < 1) return std::nullopt;
  return value;
}

TokenSequence::TokenSequence(std::vector<std::string> tokens, std::optional<int> depth_tag)
    : tokens_(std::move(tokens)), depth_tag_(depth_tag) {
  if (depth_tag_ && *depth_tag_ < 1) throw InvalidDepth(*depth_tag_);
}

TokenSequence TokenSequence::from_tokens(std::vector<std::string> tokens) {
  std::optional<int> tag;
  if (!tokens.empty()) {
    tag = parse_depth_token(tokens.front());
    if (tag) tokens.erase(tokens.begin());
  }
  return TokenSequence(std::move(tokens), tag);
}

TokenSequence TokenSequence::parse(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::string tok;
    bool quoted = false;
    while (i < text.size()) {
      const char c = text[i];
      if (!quoted && std::isspace(static_cast<unsigned char>(c))) break;
      if (c == '"') quoted = !quoted;
      if (c == '\\' && quoted && i + 1 < text.size()) {
        tok.push_back(c);
        ++i;
      }
      tok.push_back(text[i]);
      ++i;
    }
    tokens.push_back(std::move(tok));
  }
  return from_tokens(std::move(tokens));
}

std::vector<std::string> TokenSequence::rendered() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size() + 1);
  if (depth_tag_) out.push_back("<" + std::to_string(*depth_tag_) + ">");
  out.insert(out.end(), tokens_.begin(), tokens_.end());
  return out;
}

std::string TokenSequence::str() const {
  std::string out;
  for (const auto& t : rendered()) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

TokenSequence linearize(const AmrGraph& graph) {
  struct Emitter {
    const AmrGraph& graph;
    std::vector<std::string> out;
    std::unordered_map<std::size_t, std::size_t> pointer;

    void open(std::size_t i, int) {
      const std::size_t k = pointer.size();
      pointer.emplace(i, k);
      out.emplace_back("(");
      out.push_back(pointer_token(k));
      out.push_back(graph.nodes()[i].label);
    }
    void constant(const Edge& e) {
      out.push_back(e.role);
      out.push_back(e.target);
    }
    void revisit(const Edge& e, std::size_t target) {
      out.push_back(e.role);
      out.push_back(pointer_token(pointer.at(target)));
    }
    void descend(const Edge& e) { out.push_back(e.role); }
    void close(std::size_t) { out.emplace_back(")"); }
  };
  Emitter emitter{graph, {}, {}};
  walk_depth_first(graph, emitter);
  return TokenSequence(std::move(emitter.out));
}

InvalidDepth::InvalidDepth(int depth)
    : std::invalid_argument("InvalidDepth: depth must be >= 1, got " + std::to_string(depth)) {}

TokenSequence with_depth_token(TokenSequence seq, int depth) {
  if (depth < 1) throw InvalidDepth(depth);
  return TokenSequence(seq.tokens(), depth);
}

namespace {

bool is_role(std::string_view t) { return t.size() >= 2 && t[0] == ':'; }

bool is_special(std::string_view t) {
  return t.size() >= 3 && t.front() == '<' && t.back() == '>' &&
         (parse_pointer_token(t) || parse_depth_token(t));
}

bool is_plain(std::string_view t) {
  return !t.empty() && t != "(" && t != ")" && !is_role(t) && !is_special(t);
}

class Rebuilder {
 public:
  explicit Rebuilder(const std::vector<std::string>& tokens) : tok_(tokens) {}

  AmrGraph run() {
    std::size_t start = 0;
    while (start < tok_.size() && tok_[start] != "(") ++start;
    if (start == tok_.size()) throw Unrecoverable("Unrecoverable: no opening '(' in sequence");
    pos_ = start + 1;

    const auto root = read_head(/*is_root=*/true);
    std::vector<std::size_t> stack{*root};
    while (!stack.empty() && pos_ < tok_.size()) {
      const std::string& t = tok_[pos_];
      if (t == ")") {
        ++pos_;
        stack.pop_back();
      } else if (is_role(t)) {
        ++pos_;
        read_value(stack, t);
      } else if (t == "(") {
        skip_group();
      } else {
        ++pos_;  // stray token inside a node
      }
    }

    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (auto& p : edges_) {
      if (p.pointer) {
        auto it = by_pointer_.find(*p.pointer);
        if (it == by_pointer_.end()) continue;
        p.edge.target = nodes_[it->second].variable;
      }
      edges.push_back(std::move(p.edge));
    }
    std::string root_var = nodes_[*root].variable;
    return AmrGraph(std::move(root_var), std::move(nodes_), std::move(edges));
  }

 private:
  struct PendingEdge {
    Edge edge;
    std::optional<std::size_t> pointer;
  };

  // Reads `<Ri> concept` after '('. Returns the node index; for a pointer that
  // is already defined, the existing node.
  std::optional<std::size_t> read_head(bool is_root) {
    std::optional<std::size_t> ptr;
    if (pos_ < tok_.size()) ptr = parse_pointer_token(tok_[pos_]);
    if (ptr) ++pos_;
    std::optional<std::string> label;
    if (pos_ < tok_.size() && is_plain(tok_[pos_])) label = tok_[pos_++];

    if (ptr) {
      if (auto it = by_pointer_.find(*ptr); it != by_pointer_.end()) return it->second;
    }
    if (!ptr && !label && is_root)
      throw Unrecoverable("Unrecoverable: root has neither a pointer nor a concept");
    const std::size_t index = new_node(label ? *label : std::string(kUnknownConcept));
    if (ptr) by_pointer_.emplace(*ptr, index);
    return index;
  }

  std::size_t new_node(std::string label) {
    char letter = 'x';
    if (!label.empty() && std::isalpha(static_cast<unsigned char>(label[0])))
      letter = static_cast<char>(std::tolower(static_cast<unsigned char>(label[0])));
    const int n = ++letter_count_[letter];
    std::string var(1, letter);
    if (n > 1) var += std::to_string(n);
    nodes_.push_back({std::move(var), std::move(label)});
    return nodes_.size() - 1;
  }

  void read_value(std::vector<std::size_t>& stack, const std::string& role) {
    if (pos_ >= tok_.size()) return;
    const std::string& v = tok_[pos_];
    const std::string source = nodes_[stack.back()].variable;
    if (v == "(") {
      ++pos_;
      const std::size_t child = *read_head(false);
      edges_.push_back({{source, role, nodes_[child].variable, EdgeKind::relation}, {}});
      stack.push_back(child);
    } else if (auto ptr = parse_pointer_token(v)) {
      ++pos_;
      edges_.push_back({{source, role, "", EdgeKind::relation}, ptr});
    } else if (is_plain(v)) {
      ++pos_;
      edges_.push_back({{source, role, v, EdgeKind::attribute}, {}});
    }
    // otherwise the role has no value and is dropped
  }

  void skip_group() {
    int depth = 0;
    while (pos_ < tok_.size()) {
      const std::string& t = tok_[pos_++];
      if (t == "(") ++depth;
      if (t == ")" && --depth == 0) return;
    }
  }

  const std::vector<std::string>& tok_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
  std::vector<PendingEdge> edges_;
  std::unordered_map<std::size_t, std::size_t> by_pointer_;
  std::unordered_map<char, int> letter_count_;
};

}  // namespace

AmrGraph delinearize(const TokenSequence& seq) {
  const auto& tokens = seq.tokens();
  std::size_t skip = 0;
  while (skip < tokens.size() && parse_depth_token(tokens[skip])) ++skip;
  if (skip == 0) return Rebuilder(tokens).run();
  std::vector<std::string> rest(tokens.begin() + static_cast<std::ptrdiff_t>(skip), tokens.end());
  return Rebuilder(rest).run();
}

}  // namespace amrcl
