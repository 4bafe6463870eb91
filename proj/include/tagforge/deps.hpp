#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tagforge/derivation.hpp"
#include "tagforge/error.hpp"
#include "tagforge/grammar.hpp"

namespace tagforge {

// A token as it appears in dependency output: "saw-4". The virtual root is
// {"ROOT", 0}.
struct TokenRef {
  std::string surface;
  int index = 0;

  std::string str() const { return surface + "-" + std::to_string(index); }
  bool operator==(const TokenRef&) const = default;
};

inline TokenRef virtual_root() { return TokenRef{"ROOT", 0}; }

struct Relation {
  std::string label;
  TokenRef head;
  TokenRef dependent;

  std::string str() const {
    return label + "(" + head.str() + ", " + dependent.str() + ")";
  }
  bool operator==(const Relation&) const = default;
};

// Per-word argument mapping: the word's derivation children, substitution
// sites first (by address), then adjunction sites (by address).
struct ArgumentStructure {
  std::string head_lexeme;
  std::vector<std::string> arguments;

  std::string str() const {
    std::string out = head_lexeme + "(";
    for (std::size_t i = 0; i < arguments.size(); ++i) {
      if (i) out += ", ";
      out += arguments[i];
    }
    return out + ")";
  }
  bool operator==(const ArgumentStructure&) const = default;
};

struct DependencyGraph {
  std::vector<TokenRef> tokens;         // every anchor, in derivation DFS order
  std::vector<Relation> relations;      // root relation first, then DFS
  std::vector<ArgumentStructure> argument_structures;  // one per node, DFS
};

namespace detail {

inline const Lexeme& anchor_of(const DerivationNode& node) {
  if (!node.lexeme)
    throw Error(Errc::InvalidDerivation,
                "derivation node '" + node.tree_name +
                    "' has no anchor lexeme to head a dependency");
  return *node.lexeme;
}

inline TokenRef ref_of(const DerivationNode& node) {
  const Lexeme& lex = anchor_of(node);
  return TokenRef{lex.surface, lex.token_index};
}

// Edges in the canonical argument order without mutating the node.
inline std::vector<const DerivationNode::Edge*> ordered_edges(
    const DerivationNode& node) {
  std::vector<const DerivationNode::Edge*> out;
  out.reserve(node.edges.size());
  for (const auto& e : node.edges) out.push_back(&e);
  std::stable_sort(out.begin(), out.end(),
                   [](const DerivationNode::Edge* a,
                      const DerivationNode::Edge* b) {
                     if (a->op != b->op) return a->op == CompOp::Subst;
                     return a->site < b->site;
                   });
  return out;
}

inline std::string edge_label(const Grammar& g, const ElementaryTree& parent,
                              const DerivationNode::Edge& e) {
  if (e.op == CompOp::Subst) {
    const TreeNode& site = node_at(parent.root, e.site);
    return site.rel.empty() ? "dep" : site.rel;
  }
  const ElementaryTree* child = g.find_tree(e.child.tree_name);
  if (child && !child->adj_rel.empty()) return child->adj_rel;
  return "mod";
}

inline void mine_node(const Grammar& g, const DerivationNode& node,
                      DependencyGraph& out) {
  const ElementaryTree* tree = g.find_tree(node.tree_name);
  if (!tree)
    throw Error(Errc::InvalidDerivation,
                "derivation names unknown tree '" + node.tree_name + "'");

  TokenRef head = ref_of(node);
  out.tokens.push_back(head);

  ArgumentStructure args;
  args.head_lexeme = head.surface;
  for (const auto* e : ordered_edges(node))
    args.arguments.push_back(anchor_of(e->child).surface);
  out.argument_structures.push_back(std::move(args));

  for (const auto* e : ordered_edges(node)) {
    out.relations.push_back(
        Relation{edge_label(g, *tree, *e), head, ref_of(e->child)});
    mine_node(g, e->child, out);
  }
}

}  // namespace detail

// Maps a derivation to labeled head→dependent relations: the root anchor
// hangs off the virtual root; each substitution edge contributes the parent
// site's rel label (fallback "dep"); each adjunction edge contributes the
// auxiliary's adjrel (fallback "mod"). The word the auxiliary adjoins INTO
// is the head; the auxiliary's own anchor is the dependent.
inline DependencyGraph mine_dependencies(const Grammar& g,
                                         const DerivationTree& d) {
  if (!is_lexicalized(g))
    throw Error(Errc::GrammarNotLexicalized,
                "dependency mining needs every tree to carry an anchor");
  DependencyGraph out;
  out.relations.push_back(
      Relation{"root", virtual_root(), detail::ref_of(d.root)});
  detail::mine_node(g, d.root, out);

  // The root relation sits first; detail::mine_node appended the rest in
  // depth-first order.
  return out;
}

// The argument structure of one derivation node, located by the chain of
// composition sites leading to it from the root (empty chain = root).
inline ArgumentStructure argument_structure(
    const Grammar& g, const DerivationTree& d,
    const std::vector<GornAddress>& node_path) {
  if (!is_lexicalized(g))
    throw Error(Errc::GrammarNotLexicalized,
                "argument structures need every tree to carry an anchor");
  const DerivationNode* node = &d.root;
  for (const GornAddress& site : node_path) {
    const DerivationNode* next = nullptr;
    for (const auto& e : node->edges)
      if (e.site == site) next = &e.child;
    if (!next)
      throw Error(Errc::NoSuchNode,
                  "derivation node '" + node->tree_name +
                      "' has no composition at " + site.str());
    node = next;
  }

  ArgumentStructure out;
  out.head_lexeme = detail::anchor_of(*node).surface;
  for (const auto* e : detail::ordered_edges(*node))
    out.arguments.push_back(detail::anchor_of(e->child).surface);
  return out;
}

}  // namespace tagforge
