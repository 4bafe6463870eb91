#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tagforge/compose.hpp"
#include "tagforge/error.hpp"
#include "tagforge/grammar.hpp"

namespace tagforge {

// One POS-tagged input token. Indices are 1-based sentence positions.
struct Token {
  std::string surface;
  std::string pos;
  int index = 0;

  bool operator==(const Token&) const = default;
};

inline Lexeme lexeme_of(const Token& tok) {
  return Lexeme{tok.surface, tok.index, tok.pos};
}

// An elementary tree readied for one parse: anchored trees are bound to the
// token that lexicalizes them, anchorless trees float free of positions.
struct TreeInstance {
  const ElementaryTree* tree = nullptr;
  std::optional<Token> anchor_token;
  int instance_id = 0;

  bool anchored() const { return anchor_token.has_value(); }
};

// Every tree whose anchor accepts this token's tag, bound at the token, in
// grammar declaration order. Instance ids are assigned by the caller.
inline std::vector<const ElementaryTree*> trees_for_tag(
    const Grammar& g, const std::string& pos) {
  std::vector<const ElementaryTree*> out;
  for (const ElementaryTree* t : g.all_trees()) {
    if (std::find(t->anchor_pos.begin(), t->anchor_pos.end(), pos) !=
        t->anchor_pos.end())
      out.push_back(t);
  }
  return out;
}

inline std::vector<TreeInstance> select_trees(const Grammar& g,
                                              const Token& tok) {
  std::vector<TreeInstance> out;
  for (const ElementaryTree* t : trees_for_tag(g, tok.pos))
    out.push_back(TreeInstance{t, tok, static_cast<int>(out.size())});
  return out;
}

// Bind a token to a tree, checking the anchoring contract.
inline TreeInstance make_instance(const ElementaryTree& tree,
                                  const std::optional<Token>& tok,
                                  int instance_id) {
  if (tree.anchored()) {
    if (!tok)
      throw Error(Errc::MissingToken,
                  "tree '" + tree.name + "' needs an anchoring token");
    if (std::find(tree.anchor_pos.begin(), tree.anchor_pos.end(), tok->pos) ==
        tree.anchor_pos.end())
      throw Error(Errc::PosMismatch,
                  "tree '" + tree.name + "' does not anchor on tag '" +
                      tok->pos + "' (token '" + tok->surface + "')");
  } else if (tok) {
    throw Error(Errc::UnexpectedToken,
                "anchorless tree '" + tree.name + "' cannot take token '" +
                    tok->surface + "'");
  }
  return TreeInstance{&tree, tok, instance_id};
}

// The derived tree an instance starts from (anchor expanded to its lexeme).
inline DerivedTree instance_tree(const TreeInstance& inst) {
  std::optional<Lexeme> lex;
  if (inst.anchor_token) lex = lexeme_of(*inst.anchor_token);
  return instantiate(*inst.tree, lex);
}

// All instances taking part in one parse: per token, every tree anchorable
// at it; plus one position-free instance of every anchorless tree.
inline std::vector<TreeInstance> instances_for_sentence(
    const Grammar& g, const std::vector<Token>& sentence) {
  std::vector<TreeInstance> out;
  int next_id = 0;
  for (const ElementaryTree* t : g.all_trees()) {
    if (t->anchored()) {
      for (const Token& tok : sentence) {
        if (std::find(t->anchor_pos.begin(), t->anchor_pos.end(), tok.pos) !=
            t->anchor_pos.end())
          out.push_back(TreeInstance{t, tok, next_id++});
      }
    } else {
      out.push_back(TreeInstance{t, std::nullopt, next_id++});
    }
  }
  return out;
}

}  // namespace tagforge
