#pragma once

// Minimal structured text used by every file kind:
//
//   document := (key ':' value)*
//   value    := '[' items ']' | '{' (key ':' value)* '}' | quoted | word-run
//
// Items and fields are separated by ',' or newlines. At top level a
// word-run extends to the end of the line; inside brackets it stops at
// ',', ']', '}' or a newline (outside parentheses). A comma that comes
// before an arrow ("q0, a -> q1") stays part of the run. '#' starts a
// comment.

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzylim/error.hpp"

namespace fuzzylim::textdoc {

struct Node {
  enum class Kind { atom, list, map };
  Kind kind = Kind::atom;
  std::string text;  // atom
  bool quoted = false;
  std::vector<Node> items;                          // list
  std::vector<std::pair<std::string, Node>> fields;  // map
  std::size_t line = 0;

  static Node atom(std::string s, bool q = false) {
    Node n;
    n.text = std::move(s);
    n.quoted = q;
    return n;
  }
  static Node list(std::vector<Node> xs = {}) {
    Node n;
    n.kind = Kind::list;
    n.items = std::move(xs);
    return n;
  }
  static Node map() {
    Node n;
    n.kind = Kind::map;
    return n;
  }

  bool is_atom() const { return kind == Kind::atom; }
  bool is_list() const { return kind == Kind::list; }
  bool is_map() const { return kind == Kind::map; }

  Node& add(std::string key, Node value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  const Node* find(std::string_view key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }
  bool has(std::string_view key) const { return find(key) != nullptr; }

  const Node& at(std::string_view key) const {
    const Node* n = find(key);
    if (!n) throw ParseError(line, "missing key '" + std::string(key) + "'");
    return *n;
  }

  const std::string& as_atom(std::string_view what) const {
    if (!is_atom()) throw ParseError(line, std::string(what) + " must be a single value");
    return text;
  }
  const std::vector<Node>& as_list(std::string_view what) const {
    if (!is_list()) throw ParseError(line, std::string(what) + " must be a [list]");
    return items;
  }
  const Node& as_map(std::string_view what) const {
    if (!is_map()) throw ParseError(line, std::string(what) + " must be a {map}");
    return *this;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Node document() {
    Node root = Node::map();
    root.line = 1;
    fields(root, '\0');
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& reason) const { throw ParseError(line_, reason); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void advance() {
    if (s_[pos_] == '\n') ++line_;
    ++pos_;
  }

  // Skips blanks, comments and (optionally) newlines and commas.
  void skip(bool separators) {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (separators && (c == '\n' || c == ',')) {
        advance();
      } else {
        return;
      }
    }
  }

  static bool key_char(char c, bool first) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           (!first && (std::isdigit(static_cast<unsigned char>(c)) || c == '-'));
  }

  void fields(Node& target, char close) {
    for (;;) {
      skip(true);
      if (at_end()) {
        if (close) error(std::string("missing '") + close + "'");
        return;
      }
      if (close && peek() == close) {
        advance();
        return;
      }
      std::size_t start = pos_;
      std::size_t key_line = line_;
      if (!key_char(peek(), true)) error("expected a key, found '" + std::string(1, peek()) + "'");
      while (!at_end() && key_char(peek(), false)) advance();
      std::string key(s_.substr(start, pos_ - start));
      skip(false);
      if (peek() != ':') error("expected ':' after '" + key + "'");
      advance();
      if (target.find(key)) error("duplicate key '" + key + "'");
      Node v = value(close == '\0');
      v.line = v.line ? v.line : key_line;
      target.fields.emplace_back(std::move(key), std::move(v));
    }
  }

  Node value(bool top_level) {
    skip(false);
    std::size_t line = line_;
    Node n;
    if (peek() == '[') {
      advance();
      n = Node::list();
      for (;;) {
        skip(true);
        if (at_end()) error("missing ']'");
        if (peek() == ']') {
          advance();
          break;
        }
        n.items.push_back(value(false));
      }
    } else if (peek() == '{') {
      advance();
      n = Node::map();
      fields(n, '}');
    } else if (peek() == '"') {
      n = Node::atom(quoted(), true);
    } else {
      n = Node::atom(word_run(top_level));
    }
    n.line = line;
    return n;
  }

  std::string quoted() {
    advance();
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') error("unterminated string");
      char c = peek();
      advance();
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) error("unterminated string");
        c = peek();
        advance();
        if (c == 'n') c = '\n';
      }
      out.push_back(c);
    }
  }

  bool arrow_ahead(std::size_t from) const {
    int depth = 0;
    for (std::size_t i = from; i < s_.size(); ++i) {
      char c = s_[i];
      if (c == '\n' || c == '#' || (depth == 0 && (c == ']' || c == '}'))) return false;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (s_.substr(i, 2) == "->" || s_.substr(i, 3) == "→") return true;
    }
    return false;
  }

  std::string word_run(bool top_level) {
    std::size_t start = pos_;
    int depth = 0;
    bool seen_arrow = false;
    while (!at_end()) {
      char c = peek();
      if (c == '\n' || c == '#') break;
      if (!top_level && depth == 0) {
        if (c == ']' || c == '}') break;
        if (c == ',' && (seen_arrow || !arrow_ahead(pos_ + 1))) break;
      }
      if (s_.substr(pos_, 2) == "->" || s_.substr(pos_, 3) == "→") seen_arrow = true;
      if (c == '(') ++depth;
      if (c == ')' && depth > 0) --depth;
      advance();
    }
    std::string_view run = s_.substr(start, pos_ - start);
    while (!run.empty() && (run.back() == ' ' || run.back() == '\t' || run.back() == '\r')) run.remove_suffix(1);
    if (run.empty()) error("missing value");
    return std::string(run);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline Node parse(std::string_view text) { return Parser(text).document(); }

// ---------------------------------------------------------------------------
// Rendering. Deterministic; parse(render(n)) == n up to line numbers.

inline bool needs_quotes(const std::string& s) {
  if (s.empty() || s.front() == ' ' || s.back() == ' ') return true;
  if (s.front() == '[' || s.front() == '{' || s.front() == '"') return true;
  for (char c : s)
    if (c == ',' || c == ']' || c == '}' || c == '#' || c == '\n' || c == '"' || c == '\\') return true;
  return false;
}

inline std::string render_atom(const Node& n) {
  if (!needs_quotes(n.text)) return n.text;
  std::string out = "\"";
  for (char c : n.text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

inline bool is_flat(const Node& n) {
  if (n.is_atom()) return true;
  if (n.is_list()) {
    for (const auto& i : n.items)
      if (!i.is_atom()) return false;
    return true;
  }
  for (const auto& [k, v] : n.fields)
    if (!is_flat(v)) return false;
  return true;
}

inline std::string render_inline(const Node& n) {
  if (n.is_atom()) return render_atom(n);
  std::string out = n.is_list() ? "[" : "{";
  bool first = true;
  if (n.is_list()) {
    for (const auto& i : n.items) {
      out += first ? "" : ", ";
      out += render_inline(i);
      first = false;
    }
    return out + "]";
  }
  for (const auto& [k, v] : n.fields) {
    out += first ? "" : ", ";
    out += k + ": " + render_inline(v);
    first = false;
  }
  return out + "}";
}

inline void render_value(const Node& n, std::size_t indent, std::string& out) {
  std::string pad(indent, ' ');
  if (is_flat(n) && render_inline(n).size() + indent < 100) {
    out += render_inline(n);
    return;
  }
  if (n.is_list()) {
    out += "[\n";
    for (const auto& i : n.items) {
      out += pad + "  ";
      render_value(i, indent + 2, out);
      out += "\n";
    }
    out += pad + "]";
    return;
  }
  out += "{\n";
  for (const auto& [k, v] : n.fields) {
    out += pad + "  " + k + ": ";
    render_value(v, indent + 2, out);
    out += "\n";
  }
  out += pad + "}";
}

/// Renders a map node as a document, one top-level key per line.
inline std::string render(const Node& doc) {
  std::string out;
  for (const auto& [k, v] : doc.fields) {
    out += k + ": ";
    if (v.is_atom())
      out += render_atom(v);
    else
      render_value(v, 0, out);
    out += "\n";
  }
  return out;
}

/// Structural equality ignoring line numbers and quoting.
inline bool same(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.is_atom()) return a.text == b.text;
  if (a.is_list()) {
    if (a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i)
      if (!same(a.items[i], b.items[i])) return false;
    return true;
  }
  if (a.fields.size() != b.fields.size()) return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i)
    if (a.fields[i].first != b.fields[i].first || !same(a.fields[i].second, b.fields[i].second)) return false;
  return true;
}

}  // namespace fuzzylim::textdoc
