#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tagforge/compose.hpp"
#include "tagforge/error.hpp"
#include "tagforge/gorn.hpp"
#include "tagforge/grammar.hpp"

namespace tagforge {

enum class CompOp { Subst, Adjoin };

inline const char* to_string(CompOp op) {
  return op == CompOp::Subst ? "subst" : "adjoin";
}

// One node of a derivation tree: which elementary tree was used, which token
// anchors it, and which further trees composed into it (site addresses are
// relative to THIS node's elementary tree).
struct DerivationNode {
  struct Edge;

  std::string tree_name;
  std::optional<Lexeme> lexeme;
  std::vector<Edge> edges;

  bool operator==(const DerivationNode&) const;
};

struct DerivationNode::Edge {
  GornAddress site;
  CompOp op = CompOp::Subst;
  DerivationNode child;

  bool operator==(const Edge&) const = default;
};

inline bool DerivationNode::operator==(const DerivationNode& o) const {
  return tree_name == o.tree_name && lexeme == o.lexeme && edges == o.edges;
}

struct DerivationTree {
  DerivationNode root;
  bool operator==(const DerivationTree&) const = default;
};

// ---------------------------------------------------------------------------
// Canonical child order: substitutions by site address, then adjunctions by
// site address. This is the storage, rendering, and argument order.

inline void normalize_derivation(DerivationNode& node) {
  std::stable_sort(node.edges.begin(), node.edges.end(),
                   [](const DerivationNode::Edge& a,
                      const DerivationNode::Edge& b) {
                     if (a.op != b.op) return a.op == CompOp::Subst;
                     return a.site < b.site;
                   });
  for (auto& e : node.edges) normalize_derivation(e.child);
}

inline void normalize_derivation(DerivationTree& d) {
  normalize_derivation(d.root);
}

// Stable textual identity of a derivation: tree names, composition sites and
// ops, anchor surfaces and token positions. POS tags are deliberately left
// out so independently produced derivations compare equal.
inline std::string derivation_key(const DerivationNode& node) {
  std::string out = node.tree_name;
  if (node.lexeme) {
    out += "[" + node.lexeme->surface + "@" +
           std::to_string(node.lexeme->token_index) + "]";
  }
  if (!node.edges.empty()) {
    out += "(";
    for (std::size_t i = 0; i < node.edges.size(); ++i) {
      const auto& e = node.edges[i];
      if (i) out += ",";
      out += std::string(e.op == CompOp::Subst ? "s" : "a") + e.site.str() +
             "=" + derivation_key(e.child);
    }
    out += ")";
  }
  return out;
}

inline std::string derivation_key(const DerivationTree& d) {
  return derivation_key(d.root);
}

inline int count_nodes(const DerivationNode& n) {
  int total = 1;
  for (const auto& e : n.edges) total += count_nodes(e.child);
  return total;
}

inline int count_edges(const DerivationNode& n) {
  int total = static_cast<int>(n.edges.size());
  for (const auto& e : n.edges) total += count_edges(e.child);
  return total;
}

// ---------------------------------------------------------------------------
// Structural validation against a grammar.

namespace detail {

inline void validate_derivation_node(const Grammar& g,
                                     const DerivationNode& node,
                                     std::vector<Diagnostic>& out) {
  auto add = [&](DiagCode code, const GornAddress& addr, std::string detail) {
    out.push_back(Diagnostic{code, node.tree_name, addr, std::move(detail)});
  };

  const ElementaryTree* tree = g.find_tree(node.tree_name);
  if (!tree) {
    add(DiagCode::UnknownTreeName, GornAddress::root(),
        "grammar has no tree named '" + node.tree_name + "'");
    // Children can still be checked against their own trees.
    for (const auto& e : node.edges) validate_derivation_node(g, e.child, out);
    return;
  }

  bool anchored = tree->anchored();
  if (anchored && !node.lexeme)
    add(DiagCode::MissingLexeme, GornAddress::root(),
        "anchored tree used without a lexeme");
  if (!anchored && node.lexeme)
    add(DiagCode::UnexpectedLexeme, GornAddress::root(),
        "anchorless tree carries lexeme '" + node.lexeme->surface + "'");

  std::set<std::string> sites_seen;
  for (const auto& e : node.edges) {
    if (!sites_seen.insert(e.site.str()).second)
      add(DiagCode::DuplicateSite, e.site,
          "two compositions at one site of the same parent");

    const TreeNode* site_node = nullptr;
    try {
      site_node = &node_at(tree->root, e.site);
    } catch (const Error&) {
      add(DiagCode::BadSite, e.site,
          "tree '" + tree->name + "' has no node at " + e.site.str());
    }

    const ElementaryTree* child_tree = g.find_tree(e.child.tree_name);
    if (e.op == CompOp::Subst) {
      if (site_node && site_node->kind != NodeKind::Subst)
        add(DiagCode::SubstSiteInvalid, e.site,
            "substitution into a node not marked for it ('" +
                site_node->label + "', " + to_string(site_node->kind) + ")");
      if (child_tree && child_tree->tree_class != TreeClass::Initial)
        add(DiagCode::SubstChildNotInitial, e.site,
            "substituted tree '" + child_tree->name + "' is auxiliary");
      if (site_node && child_tree &&
          site_node->label != child_tree->root.label)
        add(DiagCode::SiteLabelMismatch, e.site,
            "site label '" + site_node->label + "' vs substituted root '" +
                child_tree->root.label + "'");
    } else {
      if (site_node && !is_adjoinable(*site_node))
        add(DiagCode::AdjoinSiteInvalid, e.site,
            "adjunction at a non-adjoinable node ('" + site_node->label +
                "', " + to_string(site_node->kind) +
                (site_node->no_adjoin ? ", no-adjoin" : "") + ")");
      if (child_tree && child_tree->tree_class != TreeClass::Auxiliary)
        add(DiagCode::AdjoinChildNotAuxiliary, e.site,
            "adjoined tree '" + child_tree->name + "' is initial");
      if (site_node && child_tree &&
          site_node->label != child_tree->root.label)
        add(DiagCode::SiteLabelMismatch, e.site,
            "site label '" + site_node->label + "' vs adjoined root '" +
                child_tree->root.label + "'");
    }

    validate_derivation_node(g, e.child, out);
  }
}

}  // namespace detail

inline std::vector<Diagnostic> validate_derivation(const Grammar& g,
                                                   const DerivationTree& d) {
  std::vector<Diagnostic> out;

  const ElementaryTree* root_tree = g.find_tree(d.root.tree_name);
  if (root_tree && (root_tree->tree_class != TreeClass::Initial ||
                    root_tree->root.label != g.start_symbol))
    out.push_back(Diagnostic{
        DiagCode::RootNotInitialS, d.root.tree_name, GornAddress::root(),
        "derivation root must be an initial tree rooted in '" +
            g.start_symbol + "'"});

  detail::validate_derivation_node(g, d.root, out);
  return out;
}

// ---------------------------------------------------------------------------
// Replay: rebuild the derived tree a derivation describes. Children are
// composed fully before entering the parent (so adjunctions at the root of a
// substituted tree are already in place when the substitution happens).
// Within one node, substitutions go first — they only swap leaf contents, so
// every elementary-tree address stays valid — then adjunctions from the
// deepest site up, which keeps shallower sites' addresses intact.

inline DerivedTree replay_derivation(const Grammar& g,
                                     const DerivationNode& node) {
  const ElementaryTree* tree = g.find_tree(node.tree_name);
  if (!tree)
    throw Error(Errc::InvalidDerivation,
                "derivation names unknown tree '" + node.tree_name + "'");

  DerivedTree acc = instantiate(*tree, node.lexeme);

  std::vector<const DerivationNode::Edge*> subs, adjs;
  for (const auto& e : node.edges)
    (e.op == CompOp::Subst ? subs : adjs).push_back(&e);
  std::stable_sort(adjs.begin(), adjs.end(),
                   [](const DerivationNode::Edge* a,
                      const DerivationNode::Edge* b) {
                     return a->site.depth() > b->site.depth();
                   });

  auto apply = [&](const DerivationNode::Edge& e) {
    DerivedTree child = replay_derivation(g, e.child);
    try {
      acc = e.op == CompOp::Subst ? substitute(acc, e.site, child)
                                  : adjoin(acc, e.site, child);
    } catch (const Error& err) {
      throw Error(err.code(), "replaying '" + node.tree_name + "' at " +
                                  e.site.str() + ": " + err.what());
    }
  };
  for (const auto* e : subs) apply(*e);
  for (const auto* e : adjs) apply(*e);
  return acc;
}

inline DerivedTree replay_derivation(const Grammar& g,
                                     const DerivationTree& d) {
  return replay_derivation(g, d.root);
}

}  // namespace tagforge
