// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/query.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <tuple>

#include "horse/error.hpp"

namespace horse {

namespace {

struct Token {
  std::string text;
  std::size_t pos = 0;
};

struct Phrase {
  std::vector<std::string_view> words;
  Predicate predicate;
};

// Longest phrases first so that multiword forms win.
const std::vector<Phrase>& relation_phrases() {
  static const std::vector<Phrase> phrases = [] {
    std::vector<Phrase> p = {
        {{"above"}, Predicate::above},
        {{"over"}, Predicate::above},
        {{"below"}, Predicate::below},
        {{"under"}, Predicate::below},
        {{"on", "top", "of"}, Predicate::on},
        {{"on"}, Predicate::on},
        {{"to", "the", "left", "of"}, Predicate::left_of},
        {{"left", "of"}, Predicate::left_of},
        {{"to", "the", "right", "of"}, Predicate::right_of},
        {{"right", "of"}, Predicate::right_of},
        {{"in", "front", "of"}, Predicate::in_front_of},
        {{"behind"}, Predicate::behind},
        {{"inside"}, Predicate::inside},
        {{"in"}, Predicate::inside},
        {{"containing"}, Predicate::contains},
        {{"next", "to"}, Predicate::near},
        {{"near"}, Predicate::near},
        {{"bigger", "than"}, Predicate::bigger_than},
        {{"smaller", "than"}, Predicate::smaller_than},
    };
    std::stable_sort(p.begin(), p.end(), [](const Phrase& a, const Phrase& b) {
      return a.words.size() > b.words.size();
    });
    return p;
  }();
  return phrases;
}

const std::vector<std::vector<std::string_view>> kBoilerplate = {
    {"find", "images", "with"}, {"find", "images", "where"},
    {"images", "with"},         {"images", "where"},
    {"show", "me"},
};

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '\'' || c >= 0x80;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c) || c == '.' || c == '?' || c == '!') {
      ++i;
    } else if (c == ',') {
      tokens.push_back({",", i});
      ++i;
    } else if (is_word_char(c)) {
      Token t{{}, i};
      while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) {
        t.text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
      }
      tokens.push_back(std::move(t));
    } else {
      throw Error(Errc::query_parse,
                  std::string("unexpected character '") + text[i] + "' at position " +
                      std::to_string(i),
                  i);
    }
  }
  return tokens;
}

std::optional<SizeWord> size_word(std::string_view w) {
  if (w == "big" || w == "large") return SizeWord::big;
  if (w == "small" || w == "tiny") return SizeWord::small;
  return std::nullopt;
}

bool is_article(std::string_view w) { return w == "a" || w == "an" || w == "the"; }

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab)
      : text_(text), vocab_(vocab), tokens_(tokenize(text)) {}

  QueryGraph run() {
    graph_.raw_text = std::string(text_);
    if (tokens_.empty()) throw Error(Errc::empty_query, "empty query");
    skip_boilerplate();
    clause();
    while (!at_end()) {
      if (peek() == "," || peek() == "and") {
        advance();
        if (!at_end() && peek() == "and") advance();  // ", and"
        clause();
      } else {
        fail("expected ',' or 'and' before '" + std::string(peek()) + "'", cur().pos);
      }
    }
    return std::move(graph_);
  }

 private:
  bool at_end() const { return i_ >= tokens_.size(); }
  std::string_view peek(std::size_t ahead = 0) const {
    return i_ + ahead < tokens_.size() ? std::string_view(tokens_[i_ + ahead].text) : std::string_view();
  }
  const Token& cur() const { return tokens_[i_]; }
  void advance(std::size_t n = 1) { i_ += n; }
  std::size_t position() const { return at_end() ? text_.size() : cur().pos; }

  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    throw Error(Errc::query_parse, what + " (at position " + std::to_string(pos) + ")", pos);
  }

  bool matches(const std::vector<std::string_view>& words, std::size_t at) const {
    if (at + words.size() > tokens_.size()) return false;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (tokens_[at + k].text != words[k]) return false;
    }
    return true;
  }

  const Phrase* relation_at(std::size_t at) const {
    for (const Phrase& p : relation_phrases()) {
      if (matches(p.words, at)) return &p;
    }
    return nullptr;
  }

  std::size_t filler_at(std::size_t at) const {
    if (matches({"is"}, at)) return 1;
    if (matches({"that", "is"}, at) || matches({"which", "is"}, at)) return 2;
    return 0;
  }

  // Tokens that close a noun phrase.
  bool ends_np(std::size_t at) const {
    if (at >= tokens_.size()) return true;
    const std::string& w = tokens_[at].text;
    return w == "," || w == "and" || filler_at(at) > 0 || relation_at(at) != nullptr;
  }

  bool is_adjective(std::string_view w) const {
    return vocab_.is_color(w) || vocab_.is_shape(w) || size_word(w).has_value();
  }

  void skip_boilerplate() {
    for (const auto& b : kBoilerplate) {
      if (matches(b, i_)) {
        advance(b.size());
        return;
      }
    }
  }

  void clause() {
    const int subject = noun_phrase();
    std::size_t filler = filler_at(i_);
    const std::size_t filler_pos = position();
    advance(filler);
    if (at_end() || peek() == "," || peek() == "and") {
      if (filler > 0) fail("expected a relation after 'is'", filler_pos);
      return;
    }
    const Phrase* phrase = relation_at(i_);
    if (!phrase) {
      if (filler > 0) fail("expected a relation after 'is'", position());
      fail("unknown adjective or missing relation before '" + std::string(peek()) + "'", position());
    }
    std::string phrase_text;
    for (auto w : phrase->words) phrase_text += (phrase_text.empty() ? "" : " ") + std::string(w);
    advance(phrase->words.size());
    if (at_end() || peek() == "," || peek() == "and") {
      fail("dangling relation '" + phrase_text + "': expected a noun phrase", position());
    }
    const std::size_t object_pos = position();
    const int object = noun_phrase();
    if (object == subject) {
      fail("relation '" + phrase_text + "' between identical descriptions", object_pos);
    }
    QueryEdge edge{subject, phrase->predicate, object};
    if (std::find(graph_.edges.begin(), graph_.edges.end(), edge) == graph_.edges.end()) {
      graph_.edges.push_back(edge);
    }
  }

  int noun_phrase() {
    if (at_end()) fail("expected a noun phrase", position());
    if (is_article(peek())) advance();

    QueryNode node;
    for (;;) {
      if (at_end() || peek() == "," || peek() == "and" || is_article(peek()) ||
          filler_at(i_) > 0 || relation_at(i_) != nullptr) {
        fail(at_end() ? "expected a noun" : "expected a noun before '" + std::string(peek()) + "'",
             position());
      }
      const Token& tok = cur();
      // An adjective word closing the phrase is the noun itself ("an orange").
      if (is_adjective(tok.text) && !ends_np(i_ + 1)) {
        apply_adjective(node, tok);
        advance();
        continue;
      }
      if (!ends_np(i_ + 1)) fail("unknown adjective '" + tok.text + "'", tok.pos);
      node.label = vocab_.canon_label(tok.text);
      if (node.label.empty()) fail("empty noun", tok.pos);
      advance();
      break;
    }
    return intern(std::move(node));
  }

  void apply_adjective(QueryNode& node, const Token& tok) const {
    if (auto c = vocab_.canon_color(tok.text)) {
      if (node.color && *node.color != *c) fail("conflicting colors '" + tok.text + "'", tok.pos);
      node.color = *c;
    } else if (auto s = vocab_.canon_shape(tok.text)) {
      if (node.shape && *node.shape != *s) fail("conflicting shapes '" + tok.text + "'", tok.pos);
      node.shape = *s;
    } else if (auto z = size_word(tok.text)) {
      if (node.size && *node.size != *z) fail("conflicting sizes '" + tok.text + "'", tok.pos);
      node.size = *z;
    }
  }

  int intern(QueryNode node) {
    for (const QueryNode& n : graph_.nodes) {
      if (n.label == node.label && n.color == node.color && n.shape == node.shape &&
          n.size == node.size) {
        return n.node_id;
      }
    }
    node.node_id = static_cast<int>(graph_.nodes.size());
    graph_.nodes.push_back(std::move(node));
    return graph_.nodes.back().node_id;
  }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::vector<Token> tokens_;
  std::size_t i_ = 0;
  QueryGraph graph_;
};

}  // namespace

std::string_view to_string(SizeWord s) noexcept { return s == SizeWord::big ? "big" : "small"; }

int QueryNode::attribute_count() const noexcept {
  return (color ? 1 : 0) + (shape ? 1 : 0) + (size ? 1 : 0);
}

QueryGraph parse_query(std::string_view text, const Vocabulary& vocab) {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) throw Error(Errc::empty_query, "empty query");
  return Parser(text, vocab).run();
}

std::string_view relation_phrase(Predicate p) noexcept {
  switch (p) {
    case Predicate::above: return "above";
    case Predicate::below: return "below";
    case Predicate::left_of: return "left of";
    case Predicate::right_of: return "right of";
    case Predicate::in_front_of: return "in front of";
    case Predicate::behind: return "behind";
    case Predicate::contains: return "containing";
    case Predicate::inside: return "inside";
    case Predicate::on: return "on";
    case Predicate::near: return "near";
    case Predicate::bigger_than: return "bigger than";
    case Predicate::smaller_than: return "smaller than";
  }
  return "";
}

std::string describe(const QueryNode& node) {
  std::string out;
  auto add = [&out](std::string_view w) {
    if (!out.empty()) out.push_back(' ');
    out.append(w);
  };
  if (node.size) add(to_string(*node.size));
  if (node.color) add(*node.color);
  if (node.shape) add(*node.shape);
  add(node.label);
  return out;
}

std::string unparse(const QueryGraph& graph) {
  std::vector<std::string> clauses;
  std::vector<bool> used(graph.nodes.size(), false);
  for (const QueryEdge& e : graph.edges) {
    clauses.push_back(describe(graph.node(e.from_node)) + " " +
                      std::string(relation_phrase(e.predicate)) + " " +
                      describe(graph.node(e.to_node)));
    used[static_cast<std::size_t>(e.from_node)] = true;
    used[static_cast<std::size_t>(e.to_node)] = true;
  }
  for (const QueryNode& n : graph.nodes) {
    if (!used[static_cast<std::size_t>(n.node_id)]) clauses.push_back(describe(n));
  }
  std::string out;
  for (const auto& c : clauses) {
    if (!out.empty()) out += " and ";
    out += c;
  }
  return out;
}

bool equivalent(const QueryGraph& a, const QueryGraph& b) {
  using Key = std::tuple<std::string, std::optional<std::string>, std::optional<std::string>,
                         std::optional<SizeWord>>;
  auto key = [](const QueryNode& n) { return Key{n.label, n.color, n.shape, n.size}; };
  auto nodes = [&](const QueryGraph& g) {
    std::set<Key> s;
    for (const auto& n : g.nodes) s.insert(key(n));
    return s;
  };
  auto edges = [&](const QueryGraph& g) {
    std::set<std::tuple<Key, Predicate, Key>> s;
    for (const auto& e : g.edges) s.insert({key(g.node(e.from_node)), e.predicate, key(g.node(e.to_node))});
    return s;
  };
  return a.nodes.size() == b.nodes.size() && a.edges.size() == b.edges.size() &&
         nodes(a) == nodes(b) && edges(a) == edges(b);
}

}  // namespace horse
