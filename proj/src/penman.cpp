#include "amrcl/penman.hpp"

#include <cctype>
#include <optional>
#include <unordered_set>
#include <vector>

#include "amrcl/traversal.hpp"

namespace amrcl {

std::string_view to_string(PenmanErrc code) {
  switch (code) {
    case PenmanErrc::unbalanced_parens: return "UnbalancedParens";
    case PenmanErrc::duplicate_variable: return "DuplicateVariable";
    case PenmanErrc::dangling_reference: return "DanglingReference";
    case PenmanErrc::empty_graph: return "EmptyGraph";
    case PenmanErrc::syntax: return "Syntax";
  }
  return "Unknown";
}

PenmanError::PenmanError(PenmanErrc code, std::size_t offset, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + " at offset " + std::to_string(offset) +
                         ": " + what),
      code_(code),
      offset_(offset) {}

namespace {

enum class Tok { lparen, rparen, role, string, symbol, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t offset = 0;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Drops an alignment marker such as `~e.12` or `~e.3,4` from the end of a token.
void strip_alignment(std::string& token) {
  const std::size_t tilde = token.rfind('~');
  if (tilde == std::string::npos || tilde == 0) return;
  std::string_view tail(token);
  tail.remove_prefix(tilde + 1);
  if (tail.size() >= 2 && std::isalpha(static_cast<unsigned char>(tail[0])) && tail[1] == '.')
    tail.remove_prefix(2);
  if (tail.empty() || !std::isdigit(static_cast<unsigned char>(tail[0]))) return;
  for (char c : tail)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != ',' && c != '.') return;
  token.erase(tilde);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token tok;
    tok.offset = pos_;
    if (pos_ >= text_.size()) return tok;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      tok.kind = Tok::lparen;
      return tok;
    }
    if (c == ')') {
      ++pos_;
      tok.kind = Tok::rparen;
      return tok;
    }
    if (c == '"') {
      tok.kind = Tok::string;
      tok.text = read_string(tok.offset);
      return tok;
    }
    tok.kind = c == ':' ? Tok::role : Tok::symbol;
    tok.text = read_symbol();
    strip_alignment(tok.text);
    return tok;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      if (is_space(text_[pos_])) {
        ++pos_;
      } else if (text_[pos_] == '#' && at_line_start()) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_line_start() const {
    for (std::size_t i = pos_; i > 0; --i) {
      const char p = text_[i - 1];
      if (p == '\n') return true;
      if (!is_space(p)) return false;
    }
    return true;
  }

  std::string read_string(std::size_t start) {
    std::string out(1, '"');
    ++pos_;
    bool closed = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      out.push_back(c);
      if (c == '\\' && pos_ < text_.size()) {
        out.push_back(text_[pos_++]);
      } else if (c == '"') {
        closed = true;
        break;
      }
    }
    if (!closed) throw PenmanError(PenmanErrc::syntax, start, "unterminated string literal");
    if (pos_ < text_.size() && text_[pos_] == '~') {
      std::string marker;
      while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
             text_[pos_] != ')')
        marker.push_back(text_[pos_++]);
    }
    return out;
  }

  std::string read_symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != '"')
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct PendingEdge {
  Edge edge;
  bool quoted = false;
  bool bare = false;
  std::size_t offset = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {}

  AmrGraph parse() {
    Token tok = lexer_.next();
    if (tok.kind == Tok::end) throw PenmanError(PenmanErrc::empty_graph, tok.offset, "no graph");
    if (tok.kind == Tok::rparen)
      throw PenmanError(PenmanErrc::unbalanced_parens, tok.offset, "unexpected ')'");
    if (tok.kind != Tok::lparen)
      throw PenmanError(PenmanErrc::syntax, tok.offset, "expected '(' to open the graph");

    const std::string root = open_node(tok.offset);
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
      tok = lexer_.next();
      switch (tok.kind) {
        case Tok::rparen:
          stack.pop_back();
          break;
        case Tok::role:
          read_edge(stack, tok);
          break;
        case Tok::end:
          throw PenmanError(PenmanErrc::unbalanced_parens, tok.offset,
                            std::to_string(stack.size()) + " unclosed '('");
        default:
          throw PenmanError(PenmanErrc::syntax, tok.offset,
                            "expected a role or ')' but found '" + tok.text + "'");
      }
    }

    tok = lexer_.next();
    if (tok.kind == Tok::rparen)
      throw PenmanError(PenmanErrc::unbalanced_parens, tok.offset, "unexpected ')'");
    if (tok.kind != Tok::end)
      throw PenmanError(PenmanErrc::syntax, tok.offset, "trailing content after graph");

    std::vector<Edge> edges;
    edges.reserve(pending_.size());
    for (auto& p : pending_) {
      if (p.bare) {
        if (!p.quoted && bound_.contains(p.edge.target)) {
          p.edge.kind = EdgeKind::relation;
        } else if (!p.quoted && looks_like_variable(p.edge.target)) {
          throw PenmanError(PenmanErrc::dangling_reference, p.offset,
                            "variable '" + p.edge.target + "' is never bound");
        } else {
          p.edge.kind = EdgeKind::attribute;
        }
      }
      edges.push_back(std::move(p.edge));
    }
    return AmrGraph(root, std::move(nodes_), std::move(edges));
  }

 private:
  // Reads `var / concept` after an opening parenthesis.
  std::string open_node(std::size_t paren_offset) {
    Token var = lexer_.next();
    if (var.kind == Tok::end)
      throw PenmanError(PenmanErrc::unbalanced_parens, var.offset, "unclosed '('");
    if (var.kind != Tok::symbol)
      throw PenmanError(PenmanErrc::syntax, var.offset, "expected a variable after '('");

    std::optional<std::string> label;
    bool have_slash = false;
    if (const std::size_t slash = var.text.find('/'); slash != std::string::npos) {
      have_slash = true;
      if (slash + 1 < var.text.size()) label = var.text.substr(slash + 1);
      var.text.erase(slash);
    }
    if (var.text.empty())
      throw PenmanError(PenmanErrc::syntax, var.offset, "empty variable name");
    if (!std::isalpha(static_cast<unsigned char>(var.text[0])))
      throw PenmanError(PenmanErrc::syntax, var.offset,
                        "variable '" + var.text + "' must start with a letter");

    if (!have_slash) {
      Token slash = lexer_.next();
      if (slash.kind == Tok::symbol && slash.text.starts_with('/')) {
        have_slash = true;
        if (slash.text.size() > 1) label = slash.text.substr(1);
      } else if (slash.kind == Tok::end) {
        throw PenmanError(PenmanErrc::unbalanced_parens, slash.offset, "unclosed '('");
      } else {
        throw PenmanError(PenmanErrc::syntax, slash.offset,
                          "expected '/' after variable '" + var.text + "'");
      }
    }
    if (!label) {
      Token concept_tok = lexer_.next();
      if (concept_tok.kind != Tok::symbol && concept_tok.kind != Tok::string) {
        if (concept_tok.kind == Tok::end)
          throw PenmanError(PenmanErrc::unbalanced_parens, concept_tok.offset, "unclosed '('");
        throw PenmanError(PenmanErrc::syntax, concept_tok.offset,
                          "expected a concept for '" + var.text + "'");
      }
      label = std::move(concept_tok.text);
    }
    if (label->empty()) throw PenmanError(PenmanErrc::syntax, paren_offset, "empty concept");
    if (label->starts_with(':'))
      throw PenmanError(PenmanErrc::syntax, var.offset, "expected a concept for '" + var.text + "'");

    if (!bound_.insert(var.text).second)
      throw PenmanError(PenmanErrc::duplicate_variable, var.offset,
                        "variable '" + var.text + "' is bound twice");
    nodes_.push_back({var.text, std::move(*label)});
    return var.text;
  }

  void read_edge(std::vector<std::string>& stack, const Token& role) {
    if (role.text.size() < 2)
      throw PenmanError(PenmanErrc::syntax, role.offset, "empty role name");
    Token value = lexer_.next();
    switch (value.kind) {
      case Tok::lparen: {
        const std::size_t at = pending_.size();
        pending_.push_back({{stack.back(), role.text, "", EdgeKind::relation}, false, false,
                            value.offset});
        std::string child = open_node(value.offset);
        pending_[at].edge.target = child;
        stack.push_back(std::move(child));
        break;
      }
      case Tok::symbol:
      case Tok::string:
        pending_.push_back({{stack.back(), role.text, std::move(value.text), EdgeKind::attribute},
                            value.kind == Tok::string, true, value.offset});
        break;
      case Tok::end:
        throw PenmanError(PenmanErrc::unbalanced_parens, value.offset,
                          "role '" + role.text + "' has no value and '(' is unclosed");
      default:
        throw PenmanError(PenmanErrc::syntax, value.offset,
                          "role '" + role.text + "' has no value");
    }
  }

  Lexer lexer_;
  std::vector<Node> nodes_;
  std::vector<PendingEdge> pending_;
  std::unordered_set<std::string> bound_;
};

struct Printer {
  const AmrGraph& graph;
  PenmanStyle style;
  std::string out;
  int depth = 0;

  void separator() {
    if (style == PenmanStyle::single_line) {
      out.push_back(' ');
    } else {
      out.push_back('\n');
      out.append(static_cast<std::size_t>(depth) * 6, ' ');
    }
  }
  void open(std::size_t i, int d) {
    depth = d;
    const Node& n = graph.nodes()[i];
    out += '(';
    out += n.variable;
    out += " / ";
    out += n.label;
  }
  void constant(const Edge& e) {
    separator();
    out += e.role;
    out += ' ';
    out += e.target;
  }
  void revisit(const Edge& e, std::size_t) { constant(e); }
  void descend(const Edge& e) {
    separator();
    out += e.role;
    out += ' ';
  }
  void close(std::size_t) {
    out += ')';
    --depth;
  }
};

}  // namespace

AmrGraph parse_penman(std::string_view text) { return Parser(text).parse(); }

std::string serialize_penman(const AmrGraph& graph, PenmanStyle style) {
  Printer printer{graph, style, {}};
  walk_depth_first(graph, printer);
  return std::move(printer.out);
}

}  // namespace amrcl
