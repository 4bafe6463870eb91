#pragma once

// Shared test fixtures: the bundled grammars built programmatically (kept in
// sync with the .tag files by round-trip tests) plus small loaders.

#include <tagforge/tagforge.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

using namespace tagforge;

inline Grammar english_grammar() {
  Grammar g;
  g.start_symbol = "S";
  g.initial_trees.push_back(ElementaryTree{
      "a_saw", TreeClass::Initial, {"VBD"}, "",
      interior("S", {subst_leaf("NP", "nsubj"),
                     interior("VP", {anchor_leaf("V"),
                                     subst_leaf("NP", "dobj")})})});
  g.initial_trees.push_back(ElementaryTree{
      "a_man", TreeClass::Initial, {"NN"}, "",
      interior("NP", {subst_leaf("D", "det"), anchor_leaf("N")})});
  g.initial_trees.push_back(ElementaryTree{
      "a_Mary", TreeClass::Initial, {"NNP"}, "",
      interior("NP", {anchor_leaf("N")})});
  g.initial_trees.push_back(ElementaryTree{
      "a_a", TreeClass::Initial, {"DT"}, "", anchor_leaf("D")});
  g.auxiliary_trees.push_back(ElementaryTree{
      "b_yesterday", TreeClass::Auxiliary, {"RB"}, "advmod",
      interior("S", {interior("Ad", {anchor_leaf("ADV")}), foot_leaf("S")})});
  finalize_grammar(g);
  return g;
}

inline Grammar count_grammar() {
  Grammar g;
  g.start_symbol = "S";
  g.initial_trees.push_back(ElementaryTree{
      "a_e", TreeClass::Initial, {}, "", interior("S", {term_leaf("e")})});
  TreeNode root = interior(
      "S", {term_leaf("a"),
            interior("S", {term_leaf("b"), foot_leaf("S"), term_leaf("c")}),
            term_leaf("d")});
  root.no_adjoin = true;
  g.auxiliary_trees.push_back(
      ElementaryTree{"b_count", TreeClass::Auxiliary, {}, "", root});
  finalize_grammar(g);
  return g;
}

inline Grammar ambig_grammar() {
  Grammar g;
  g.start_symbol = "S";
  g.initial_trees.push_back(ElementaryTree{
      "a_x1", TreeClass::Initial, {"X"}, "",
      interior("S", {anchor_leaf("A")})});
  g.initial_trees.push_back(ElementaryTree{
      "a_x2", TreeClass::Initial, {"X"}, "",
      interior("S", {anchor_leaf("B")})});
  finalize_grammar(g);
  return g;
}

inline std::vector<Token> english_sentence() {
  return {{"Yesterday", "RB", 1},
          {"a", "DT", 2},
          {"man", "NN", 3},
          {"saw", "VBD", 4},
          {"Mary", "NNP", 5}};
}

inline std::string grammar_path(const std::string& stem) {
  return std::string(TAGFORGE_GRAMMAR_DIR) + "/" + stem + ".tag";
}

inline std::string corpus_path(const std::string& stem) {
  return std::string(TAGFORGE_CORPUS_DIR) + "/" + stem + ".tagged";
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline Grammar load_grammar(const std::string& stem) {
  return read_grammar(slurp(grammar_path(stem)));
}

inline std::vector<std::vector<Token>> load_corpus(const std::string& stem) {
  return read_sentences(slurp(corpus_path(stem)));
}

// The unique derivation of the english demo sentence, built by hand.
inline DerivationTree english_derivation() {
  DerivationNode root{"a_saw", Lexeme{"saw", 4, "VBD"}, {}};
  DerivationNode man{"a_man", Lexeme{"man", 3, "NN"}, {}};
  man.edges.push_back({GornAddress::parse("0.1"), CompOp::Subst,
                       DerivationNode{"a_a", Lexeme{"a", 2, "DT"}, {}}});
  root.edges.push_back({GornAddress::parse("0.1"), CompOp::Subst, man});
  root.edges.push_back(
      {GornAddress::parse("0.2.2"), CompOp::Subst,
       DerivationNode{"a_Mary", Lexeme{"Mary", 5, "NNP"}, {}}});
  root.edges.push_back(
      {GornAddress::parse("0"), CompOp::Adjoin,
       DerivationNode{"b_yesterday", Lexeme{"Yesterday", 1, "RB"}, {}}});
  return DerivationTree{root};
}

}  // namespace fixtures
