#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagforge/error.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/lexicon.hpp"

namespace tagforge {

// Source position of each tree form, for diagnostic reporting.
struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct GrammarDocument {
  Grammar grammar;
  std::map<std::string, SourceLoc> tree_locations;
  SourceLoc header_location;
};

namespace detail {

// ---------------------------------------------------------------------------
// Tokenizer for the parenthesized grammar format. Understands (, ), quoted
// strings with \" and \\ escapes, bare atoms, and ; line comments.

enum class SexTokKind { LParen, RParen, String, Atom, End };

struct SexTok {
  SexTokKind kind = SexTokKind::End;
  std::string text;  // string value or atom spelling
  int line = 1;
  int column = 1;
};

class SexLexer {
 public:
  explicit SexLexer(std::string_view src) : src_(src) {}

  const SexTok& peek() {
    if (!buffered_) {
      tok_ = lex();
      buffered_ = true;
    }
    return tok_;
  }

  SexTok next() {
    SexTok t = peek();
    buffered_ = false;
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw PositionedError(Errc::SyntaxError, msg, line, col);
  }

  void advance() {
    if (pos_ < src_.size() && src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SexTok lex() {
    skip_blank();
    SexTok t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) {
      t.kind = SexTokKind::End;
      return t;
    }
    char c = src_[pos_];
    if (c == '(') {
      advance();
      t.kind = SexTokKind::LParen;
      return t;
    }
    if (c == ')') {
      advance();
      t.kind = SexTokKind::RParen;
      return t;
    }
    if (c == '"') {
      advance();
      std::string value;
      while (true) {
        if (pos_ >= src_.size()) fail("unterminated string", t.line, t.column);
        char d = src_[pos_];
        if (d == '"') {
          advance();
          break;
        }
        if (d == '\\') {
          advance();
          if (pos_ >= src_.size())
            fail("unterminated escape", line_, col_);
          char e = src_[pos_];
          if (e != '"' && e != '\\')
            fail(std::string("unknown escape '\\") + e + "'", line_, col_);
          value.push_back(e);
          advance();
        } else {
          value.push_back(d);
          advance();
        }
      }
      t.kind = SexTokKind::String;
      t.text = std::move(value);
      return t;
    }
    // Bare atom: everything up to whitespace, parens, quote, or comment.
    std::string text;
    while (pos_ < src_.size()) {
      char d = src_[pos_];
      if (d == '(' || d == ')' || d == '"' || d == ';' ||
          std::isspace(static_cast<unsigned char>(d)))
        break;
      text.push_back(d);
      advance();
    }
    t.kind = SexTokKind::Atom;
    t.text = std::move(text);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  SexTok tok_;
  bool buffered_ = false;
};

// ---------------------------------------------------------------------------
// Recursive-descent grammar reader.

class GrammarReader {
 public:
  explicit GrammarReader(std::string_view src) : lex_(src) {}

  GrammarDocument read() {
    GrammarDocument doc;
    bool saw_header = false;
    while (true) {
      SexTok t = lex_.next();
      if (t.kind == SexTokKind::End) break;
      if (t.kind != SexTokKind::LParen)
        fail("expected '(' at top level", t);
      SexTok head = expect(SexTokKind::Atom, "form head");
      if (head.text == "grammar") {
        if (saw_header) fail("duplicate grammar header", head);
        saw_header = true;
        doc.header_location = SourceLoc{head.line, head.column};
        read_header(doc.grammar);
      } else if (head.text == "tree") {
        read_tree(doc, SourceLoc{head.line, head.column});
      } else {
        fail("unknown form '" + head.text + "' (expected grammar or tree)",
             head);
      }
    }
    collect_symbols(doc.grammar, doc.grammar.terminals,
                    doc.grammar.nonterminals);
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const SexTok& at) const {
    throw PositionedError(Errc::SyntaxError, msg, at.line, at.column);
  }

  SexTok expect(SexTokKind kind, const std::string& what) {
    SexTok t = lex_.next();
    if (t.kind != kind)
      fail("expected " + what, t);
    return t;
  }

  void read_header(Grammar& g) {
    while (true) {
      SexTok t = lex_.next();
      if (t.kind == SexTokKind::RParen) return;
      if (t.kind != SexTokKind::Atom || t.text != ":start")
        fail("grammar header takes only :start \"SYMBOL\"", t);
      g.start_symbol = expect(SexTokKind::String, "start symbol string").text;
    }
  }

  void read_tree(GrammarDocument& doc, SourceLoc loc) {
    ElementaryTree tree;
    bool has_name = false, has_class = false, has_root = false;
    while (true) {
      SexTok t = lex_.next();
      if (t.kind == SexTokKind::RParen) break;
      if (t.kind == SexTokKind::Atom && !t.text.empty() && t.text[0] == ':') {
        if (t.text == ":name") {
          tree.name = expect(SexTokKind::String, "tree name string").text;
          has_name = true;
        } else if (t.text == ":class") {
          SexTok c = expect(SexTokKind::Atom, "tree class");
          if (c.text == "initial")
            tree.tree_class = TreeClass::Initial;
          else if (c.text == "auxiliary")
            tree.tree_class = TreeClass::Auxiliary;
          else
            fail("tree class must be initial or auxiliary", c);
          has_class = true;
        } else if (t.text == ":anchor-pos") {
          expect(SexTokKind::LParen, "'(' opening the anchor-pos list");
          while (true) {
            SexTok p = lex_.next();
            if (p.kind == SexTokKind::RParen) break;
            if (p.kind != SexTokKind::String)
              fail("anchor-pos entries are strings", p);
            tree.anchor_pos.push_back(p.text);
          }
        } else if (t.text == ":adjrel") {
          tree.adj_rel = expect(SexTokKind::String, "adjrel string").text;
        } else {
          fail("unknown tree keyword '" + t.text + "'", t);
        }
      } else if (t.kind == SexTokKind::LParen) {
        if (has_root) fail("a tree form holds exactly one node form", t);
        tree.root = read_node(t);
        has_root = true;
      } else {
        fail("unexpected token in tree form", t);
      }
    }
    if (!has_name)
      throw PositionedError(Errc::SyntaxError, "tree form lacks :name",
                            loc.line, loc.column);
    if (!has_class)
      throw PositionedError(Errc::SyntaxError, "tree form lacks :class",
                            loc.line, loc.column);
    if (!has_root)
      throw PositionedError(Errc::SyntaxError, "tree form lacks a node form",
                            loc.line, loc.column);

    doc.tree_locations.emplace(tree.name, loc);
    if (tree.tree_class == TreeClass::Initial)
      doc.grammar.initial_trees.push_back(std::move(tree));
    else
      doc.grammar.auxiliary_trees.push_back(std::move(tree));
  }

  // `open` is the already-consumed '(' token (for positions).
  TreeNode read_node(const SexTok& open) {
    SexTok label = lex_.next();
    if (label.kind != SexTokKind::Atom || label.text.empty() ||
        label.text[0] == ':')
      fail("node form must start with a label", label.kind == SexTokKind::End
                                                    ? open
                                                    : label);
    TreeNode node;
    node.label = label.text;

    auto set_kind = [&](NodeKind kind, const SexTok& at) {
      if (node.kind != NodeKind::Interior)
        fail("node carries more than one of :anchor/:subst/:foot/:term/:eps",
             at);
      node.kind = kind;
    };

    while (true) {
      SexTok t = lex_.next();
      if (t.kind == SexTokKind::RParen) break;
      if (t.kind == SexTokKind::Atom && !t.text.empty() && t.text[0] == ':') {
        if (t.text == ":subst")
          set_kind(NodeKind::Subst, t);
        else if (t.text == ":foot")
          set_kind(NodeKind::Foot, t);
        else if (t.text == ":anchor")
          set_kind(NodeKind::Anchor, t);
        else if (t.text == ":eps")
          set_kind(NodeKind::Eps, t);
        else if (t.text == ":term") {
          set_kind(NodeKind::Term, t);
          node.literal = expect(SexTokKind::String, "term literal").text;
        } else if (t.text == ":na")
          node.no_adjoin = true;
        else if (t.text == ":rel")
          node.rel = expect(SexTokKind::String, "rel label").text;
        else
          fail("unknown node flag '" + t.text + "'", t);
      } else if (t.kind == SexTokKind::String) {
        // Bare string child: terminal leaf whose label is its surface.
        node.children.push_back(term_leaf(t.text));
      } else if (t.kind == SexTokKind::LParen) {
        node.children.push_back(read_node(t));
      } else {
        fail("unexpected token in node form", t);
      }
    }
    return node;
  }

  SexLexer lex_;
};

inline void write_atom_or_string(std::ostringstream& out,
                                 const std::string& s) {
  std::string escaped;
  for (char c : s) {
    if (c == '"' || c == '\\') escaped.push_back('\\');
    escaped.push_back(c);
  }
  out << '"' << escaped << '"';
}

inline void write_node(std::ostringstream& out, const TreeNode& n) {
  if (n.kind == NodeKind::Term && n.label == n.literal) {
    write_atom_or_string(out, n.literal);
    return;
  }
  out << '(' << n.label;
  switch (n.kind) {
    case NodeKind::Interior: break;
    case NodeKind::Subst: out << " :subst"; break;
    case NodeKind::Foot: out << " :foot"; break;
    case NodeKind::Anchor: out << " :anchor"; break;
    case NodeKind::Eps: out << " :eps"; break;
    case NodeKind::Term:
      out << " :term ";
      write_atom_or_string(out, n.literal);
      break;
  }
  if (n.no_adjoin) out << " :na";
  if (!n.rel.empty()) {
    out << " :rel ";
    write_atom_or_string(out, n.rel);
  }
  for (const TreeNode& c : n.children) {
    out << ' ';
    write_node(out, c);
  }
  out << ')';
}

inline void write_tree(std::ostringstream& out, const ElementaryTree& t) {
  out << "(tree :name ";
  write_atom_or_string(out, t.name);
  out << " :class " << to_string(t.tree_class);
  if (!t.anchor_pos.empty()) {
    out << " :anchor-pos (";
    for (std::size_t i = 0; i < t.anchor_pos.size(); ++i) {
      if (i) out << ' ';
      write_atom_or_string(out, t.anchor_pos[i]);
    }
    out << ')';
  }
  if (!t.adj_rel.empty()) {
    out << " :adjrel ";
    write_atom_or_string(out, t.adj_rel);
  }
  out << "\n  ";
  write_node(out, t.root);
  out << ")\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public reading/writing surface.

// Syntax only: parses the document and infers symbol sets, without semantic
// validation. Throws SyntaxError (positioned).
inline GrammarDocument parse_grammar_document(std::string_view text) {
  detail::GrammarReader reader(text);
  return reader.read();
}

// Full read: parse + validate. Validation findings are raised as one
// ValidationError whose message lists every diagnostic with its tree's
// source position.
inline Grammar read_grammar(std::string_view text) {
  GrammarDocument doc = parse_grammar_document(text);
  std::vector<Diagnostic> diags = validate_grammar(doc.grammar);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "grammar validation failed (" << diags.size() << " finding"
        << (diags.size() == 1 ? "" : "s") << ")";
    for (const Diagnostic& d : diags) {
      msg << "\n  ";
      auto loc = doc.tree_locations.find(d.tree);
      if (loc != doc.tree_locations.end())
        msg << "line " << loc->second.line << ", col " << loc->second.column
            << ": ";
      msg << d.str();
    }
    throw Error(Errc::ValidationError, msg.str());
  }
  return std::move(doc.grammar);
}

// Canonical serialization: header, then initial trees, then auxiliaries, one
// tree form per block. read_grammar(write_grammar(g)) == g structurally.
inline std::string write_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "(grammar :start ";
  detail::write_atom_or_string(out, g.start_symbol);
  out << ")\n";
  for (const ElementaryTree& t : g.initial_trees) {
    out << '\n';
    detail::write_tree(out, t);
  }
  for (const ElementaryTree& t : g.auxiliary_trees) {
    out << '\n';
    detail::write_tree(out, t);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// POS-tagged sentence reader. One sentence per line; tokens "surface/TAG";
// the LAST slash splits surface from tag. Blank lines and #-lines skipped.

inline std::vector<std::vector<Token>> read_sentences(std::string_view text) {
  std::vector<std::vector<Token>> sentences;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t eol = text.find('\n', start);
    std::string_view line = text.substr(
        start, eol == std::string_view::npos ? text.size() - start
                                             : eol - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank && line[line.find_first_not_of(" \t")] != '#') {
      std::vector<Token> toks;
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() &&
               std::isspace(static_cast<unsigned char>(line[i])))
          ++i;
        if (i >= line.size()) break;
        std::size_t tok_start = i;
        while (i < line.size() &&
               !std::isspace(static_cast<unsigned char>(line[i])))
          ++i;
        std::string_view word = line.substr(tok_start, i - tok_start);
        int col = static_cast<int>(tok_start) + 1;
        std::size_t slash = word.rfind('/');
        if (slash == std::string_view::npos)
          throw PositionedError(Errc::TokenFormatError,
                                "token '" + std::string(word) +
                                    "' lacks a /TAG suffix",
                                line_no, col);
        std::string_view surface = word.substr(0, slash);
        std::string_view tag = word.substr(slash + 1);
        if (surface.empty())
          throw PositionedError(Errc::TokenFormatError,
                                "token has an empty surface form", line_no,
                                col);
        if (tag.empty())
          throw PositionedError(Errc::TokenFormatError,
                                "token '" + std::string(word) +
                                    "' has an empty tag",
                                line_no, col);
        toks.push_back(Token{std::string(surface), std::string(tag),
                             static_cast<int>(toks.size()) + 1});
      }
      if (!toks.empty()) sentences.push_back(std::move(toks));
    }
    if (eol == std::string_view::npos) break;
    start = eol + 1;
  }
  return sentences;
}

// Single-line convenience used by tests.
inline std::vector<Token> read_sentence(std::string_view line) {
  auto all = read_sentences(line);
  if (all.empty())
    throw Error(Errc::EmptySentence, "no tokens on the line");
  return all.front();
}

}  // namespace tagforge
