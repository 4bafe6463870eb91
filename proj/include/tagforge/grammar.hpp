#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tagforge/error.hpp"
#include "tagforge/gorn.hpp"

namespace tagforge {

// A node is exactly one of these. Interior nodes carry children; all other
// kinds are frontier leaves in an elementary tree (an anchor gains its lexeme
// child at instantiation time, a subst/foot node is filled by composition).
enum class NodeKind { Interior, Anchor, Subst, Foot, Term, Eps };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Interior: return "interior";
    case NodeKind::Anchor: return "anchor";
    case NodeKind::Subst: return "subst";
    case NodeKind::Foot: return "foot";
    case NodeKind::Term: return "term";
    case NodeKind::Eps: return "eps";
  }
  return "?";
}

struct TreeNode {
  std::string label;     // nonterminal name; for Term nodes, the literal's name
  NodeKind kind = NodeKind::Interior;
  bool no_adjoin = false;   // :na — adjunction barred even on interior nodes
  std::string rel;          // dependency label, subst nodes only ("" = none)
  std::string literal;      // surface string, Term nodes only
  std::vector<TreeNode> children;

  bool operator==(const TreeNode&) const = default;
};

// Convenience constructors used heavily by tests and builders.
inline TreeNode interior(std::string label, std::vector<TreeNode> children) {
  return TreeNode{std::move(label), NodeKind::Interior, false, "", "",
                  std::move(children)};
}
inline TreeNode subst_leaf(std::string label, std::string rel = "") {
  return TreeNode{std::move(label), NodeKind::Subst, false, std::move(rel),
                  "", {}};
}
inline TreeNode foot_leaf(std::string label) {
  return TreeNode{std::move(label), NodeKind::Foot, false, "", "", {}};
}
inline TreeNode anchor_leaf(std::string label) {
  return TreeNode{std::move(label), NodeKind::Anchor, false, "", "", {}};
}
inline TreeNode term_leaf(std::string literal) {
  std::string label = literal;
  return TreeNode{std::move(label), NodeKind::Term, false, "",
                  std::move(literal), {}};
}
inline TreeNode eps_leaf(std::string label) {
  return TreeNode{std::move(label), NodeKind::Eps, false, "", "", {}};
}

enum class TreeClass { Initial, Auxiliary };

inline const char* to_string(TreeClass c) {
  return c == TreeClass::Initial ? "initial" : "auxiliary";
}

struct ElementaryTree {
  std::string name;
  TreeClass tree_class = TreeClass::Initial;
  std::vector<std::string> anchor_pos;  // POS tags the anchor accepts; empty = anchorless
  std::string adj_rel;  // dependency label carried by an auxiliary ("" = none)
  TreeNode root;

  bool anchored() const { return !anchor_pos.empty(); }
  bool operator==(const ElementaryTree&) const = default;
};

// A derived tree: the result of instantiating and composing elementary trees.
// Structurally it is just a node tree; open subst/foot leaves mean the
// derivation is still partial.
struct DerivedTree {
  TreeNode root;
  bool operator==(const DerivedTree&) const = default;
};

struct Grammar {
  std::string start_symbol;
  std::vector<ElementaryTree> initial_trees;
  std::vector<ElementaryTree> auxiliary_trees;
  // Inferred symbol sets; filled by finalize_grammar()/read_grammar().
  std::set<std::string> terminals;
  std::set<std::string> nonterminals;

  const ElementaryTree* find_tree(const std::string& name) const {
    for (const auto& t : initial_trees)
      if (t.name == name) return &t;
    for (const auto& t : auxiliary_trees)
      if (t.name == name) return &t;
    return nullptr;
  }

  // Declaration order: initial trees first, then auxiliaries.
  std::vector<const ElementaryTree*> all_trees() const {
    std::vector<const ElementaryTree*> out;
    out.reserve(initial_trees.size() + auxiliary_trees.size());
    for (const auto& t : initial_trees) out.push_back(&t);
    for (const auto& t : auxiliary_trees) out.push_back(&t);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Tree navigation by Gorn address.

inline const TreeNode& node_at(const TreeNode& root, const GornAddress& addr) {
  const TreeNode* node = &root;
  for (int ordinal : addr.path) {
    if (ordinal < 1 || static_cast<std::size_t>(ordinal) > node->children.size())
      throw Error(Errc::NoSuchAddress,
                  "no node at " + addr.str() + " (stuck under '" +
                      node->label + "')");
    node = &node->children[static_cast<std::size_t>(ordinal - 1)];
  }
  return *node;
}

inline const TreeNode& node_at(const ElementaryTree& t, const GornAddress& a) {
  return node_at(t.root, a);
}
inline const TreeNode& node_at(const DerivedTree& t, const GornAddress& a) {
  return node_at(t.root, a);
}

namespace detail {
inline bool find_address(const TreeNode& node, const TreeNode* target,
                         GornAddress& acc) {
  if (&node == target) return true;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    acc.path.push_back(static_cast<int>(i + 1));
    if (find_address(node.children[i], target, acc)) return true;
    acc.path.pop_back();
  }
  return false;
}
}  // namespace detail

// Address of `target` within the tree rooted at `root`, by node identity.
inline GornAddress address_of(const TreeNode& root, const TreeNode& target) {
  GornAddress acc;
  if (!detail::find_address(root, &target, acc))
    throw Error(Errc::NodeNotInTree, "node '" + target.label +
                                          "' is not part of this tree");
  return acc;
}

inline std::vector<GornAddress> children_addresses(const TreeNode& root,
                                                   const GornAddress& addr) {
  const TreeNode& n = node_at(root, addr);
  std::vector<GornAddress> out;
  out.reserve(n.children.size());
  for (std::size_t i = 0; i < n.children.size(); ++i)
    out.push_back(addr.child(static_cast<int>(i + 1)));
  return out;
}

inline std::vector<GornAddress> children_addresses(const ElementaryTree& t,
                                                   const GornAddress& a) {
  return children_addresses(t.root, a);
}
inline std::vector<GornAddress> children_addresses(const DerivedTree& t,
                                                   const GornAddress& a) {
  return children_addresses(t.root, a);
}

// Depth-first visit of (address, node) pairs.
template <typename F>
inline void visit_nodes(const TreeNode& root, F&& fn) {
  struct Rec {
    F& fn;
    void go(const TreeNode& n, GornAddress& addr) {
      fn(static_cast<const GornAddress&>(addr), n);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        addr.path.push_back(static_cast<int>(i + 1));
        go(n.children[i], addr);
        addr.path.pop_back();
      }
    }
  } rec{fn};
  GornAddress addr;
  rec.go(root, addr);
}

// ---------------------------------------------------------------------------
// Validation diagnostics.

enum class DiagCode {
  // Grammar-level checks.
  FootRootMismatch,
  FootInInitial,
  MissingFoot,
  MultipleFoot,
  DuplicateTreeName,
  SymbolOverlap,
  StartSymbolMissing,
  MultipleAnchors,
  AnchorWithoutPos,
  AnchorPosWithoutAnchor,
  UnmarkedLeaf,
  FlaggedLeafHasChildren,
  RelOutsideSubst,
  AdjRelOnInitial,
  EmptyTermLiteral,
  EmptyLabel,
  EmptyTreeName,
  // Derivation-level checks.
  UnknownTreeName,
  RootNotInitialS,
  DuplicateSite,
  BadSite,
  SubstSiteInvalid,
  AdjoinSiteInvalid,
  SubstChildNotInitial,
  AdjoinChildNotAuxiliary,
  SiteLabelMismatch,
  MissingLexeme,
  UnexpectedLexeme,
};

inline const char* to_string(DiagCode c) {
  switch (c) {
    case DiagCode::FootRootMismatch: return "FootRootMismatch";
    case DiagCode::FootInInitial: return "FootInInitial";
    case DiagCode::MissingFoot: return "MissingFoot";
    case DiagCode::MultipleFoot: return "MultipleFoot";
    case DiagCode::DuplicateTreeName: return "DuplicateTreeName";
    case DiagCode::SymbolOverlap: return "SymbolOverlap";
    case DiagCode::StartSymbolMissing: return "StartSymbolMissing";
    case DiagCode::MultipleAnchors: return "MultipleAnchors";
    case DiagCode::AnchorWithoutPos: return "AnchorWithoutPos";
    case DiagCode::AnchorPosWithoutAnchor: return "AnchorPosWithoutAnchor";
    case DiagCode::UnmarkedLeaf: return "UnmarkedLeaf";
    case DiagCode::FlaggedLeafHasChildren: return "FlaggedLeafHasChildren";
    case DiagCode::RelOutsideSubst: return "RelOutsideSubst";
    case DiagCode::AdjRelOnInitial: return "AdjRelOnInitial";
    case DiagCode::EmptyTermLiteral: return "EmptyTermLiteral";
    case DiagCode::EmptyLabel: return "EmptyLabel";
    case DiagCode::EmptyTreeName: return "EmptyTreeName";
    case DiagCode::UnknownTreeName: return "UnknownTreeName";
    case DiagCode::RootNotInitialS: return "RootNotInitialS";
    case DiagCode::DuplicateSite: return "DuplicateSite";
    case DiagCode::BadSite: return "BadSite";
    case DiagCode::SubstSiteInvalid: return "SubstSiteInvalid";
    case DiagCode::AdjoinSiteInvalid: return "AdjoinSiteInvalid";
    case DiagCode::SubstChildNotInitial: return "SubstChildNotInitial";
    case DiagCode::AdjoinChildNotAuxiliary: return "AdjoinChildNotAuxiliary";
    case DiagCode::SiteLabelMismatch: return "SiteLabelMismatch";
    case DiagCode::MissingLexeme: return "MissingLexeme";
    case DiagCode::UnexpectedLexeme: return "UnexpectedLexeme";
  }
  return "UnknownDiag";
}

struct Diagnostic {
  DiagCode code;
  std::string tree;   // tree name (or derivation path) the finding is about
  GornAddress addr;   // node address, when meaningful
  std::string detail;

  std::string str() const {
    std::string out = to_string(code);
    if (!tree.empty()) out += "@" + tree;
    if (!addr.is_root() || !tree.empty()) out += ":" + addr.str();
    if (!detail.empty()) out += ": " + detail;
    return out;
  }

  bool operator==(const Diagnostic&) const = default;
};

// ---------------------------------------------------------------------------
// Structural validation.

inline std::vector<Diagnostic> validate_tree(const ElementaryTree& t) {
  std::vector<Diagnostic> out;
  auto add = [&](DiagCode code, const GornAddress& addr, std::string detail) {
    out.push_back(Diagnostic{code, t.name, addr, std::move(detail)});
  };

  if (t.name.empty())
    add(DiagCode::EmptyTreeName, GornAddress::root(), "tree has no name");

  std::vector<GornAddress> feet, anchors;
  visit_nodes(t.root, [&](const GornAddress& addr, const TreeNode& n) {
    if (n.label.empty())
      add(DiagCode::EmptyLabel, addr, "node has an empty label");
    switch (n.kind) {
      case NodeKind::Interior:
        if (n.children.empty())
          add(DiagCode::UnmarkedLeaf, addr,
              "frontier nonterminal '" + n.label +
                  "' is neither marked for substitution nor a foot/anchor/"
                  "terminal");
        break;
      case NodeKind::Anchor:
      case NodeKind::Subst:
      case NodeKind::Foot:
      case NodeKind::Term:
      case NodeKind::Eps:
        if (!n.children.empty())
          add(DiagCode::FlaggedLeafHasChildren, addr,
              std::string(to_string(n.kind)) + " node may not have children");
        break;
    }
    if (n.kind == NodeKind::Foot) feet.push_back(addr);
    if (n.kind == NodeKind::Anchor) anchors.push_back(addr);
    if (n.kind == NodeKind::Term && n.literal.empty())
      add(DiagCode::EmptyTermLiteral, addr, "terminal with empty surface");
    if (!n.rel.empty() && n.kind != NodeKind::Subst)
      add(DiagCode::RelOutsideSubst, addr,
          "rel annotation is only meaningful on substitution sites");
  });

  if (t.tree_class == TreeClass::Initial) {
    for (const auto& addr : feet)
      add(DiagCode::FootInInitial, addr, "initial tree may not have a foot");
    if (!t.adj_rel.empty())
      add(DiagCode::AdjRelOnInitial, GornAddress::root(),
          "adjrel is only meaningful on auxiliary trees");
  } else {
    if (feet.empty())
      add(DiagCode::MissingFoot, GornAddress::root(),
          "auxiliary tree must have exactly one foot");
    else if (feet.size() > 1)
      add(DiagCode::MultipleFoot, feet[1],
          "auxiliary tree must have exactly one foot");
    else {
      const TreeNode& foot = node_at(t.root, feet[0]);
      if (foot.label != t.root.label)
        add(DiagCode::FootRootMismatch, feet[0],
            "foot label '" + foot.label + "' differs from root label '" +
                t.root.label + "'");
    }
  }

  if (anchors.size() > 1)
    add(DiagCode::MultipleAnchors, anchors[1],
        "at most one anchor per elementary tree");
  if (anchors.size() == 1 && t.anchor_pos.empty())
    add(DiagCode::AnchorWithoutPos, anchors[0],
        "anchored tree must list accepted POS tags");
  if (anchors.empty() && !t.anchor_pos.empty())
    add(DiagCode::AnchorPosWithoutAnchor, GornAddress::root(),
        "anchor-pos given but the tree has no anchor node");

  return out;
}

// Infer the grammar's symbol sets from its trees: every non-terminal-node
// label is a nonterminal, every term literal is a terminal.
inline void collect_symbols(const Grammar& g, std::set<std::string>& terminals,
                            std::set<std::string>& nonterminals) {
  terminals.clear();
  nonterminals.clear();
  for (const ElementaryTree* t : g.all_trees()) {
    visit_nodes(t->root, [&](const GornAddress&, const TreeNode& n) {
      if (n.kind == NodeKind::Term) {
        if (!n.literal.empty()) terminals.insert(n.literal);
      } else {
        if (!n.label.empty()) nonterminals.insert(n.label);
      }
    });
  }
}

inline std::vector<Diagnostic> validate_grammar(const Grammar& g) {
  std::vector<Diagnostic> out;

  std::set<std::string> seen, reported;
  for (const ElementaryTree* t : g.all_trees()) {
    auto tree_diags = validate_tree(*t);
    out.insert(out.end(), tree_diags.begin(), tree_diags.end());
    if (!t->name.empty() && !seen.insert(t->name).second &&
        reported.insert(t->name).second)
      out.push_back(Diagnostic{DiagCode::DuplicateTreeName, t->name,
                               GornAddress::root(),
                               "more than one tree named '" + t->name + "'"});
  }

  std::set<std::string> terminals, nonterminals;
  collect_symbols(g, terminals, nonterminals);
  std::vector<std::string> overlap;
  std::set_intersection(terminals.begin(), terminals.end(),
                        nonterminals.begin(), nonterminals.end(),
                        std::back_inserter(overlap));
  for (const auto& name : overlap)
    out.push_back(Diagnostic{DiagCode::SymbolOverlap, "", GornAddress::root(),
                             "'" + name +
                                 "' is used both as a terminal and as a "
                                 "nonterminal"});

  if (g.start_symbol.empty() || !nonterminals.count(g.start_symbol))
    out.push_back(Diagnostic{DiagCode::StartSymbolMissing, "",
                             GornAddress::root(),
                             "start symbol '" + g.start_symbol +
                                 "' does not occur as a nonterminal"});

  return out;
}

// Fill the inferred symbol sets. Returns the grammar's diagnostics.
inline std::vector<Diagnostic> finalize_grammar(Grammar& g) {
  collect_symbols(g, g.terminals, g.nonterminals);
  return validate_grammar(g);
}

inline bool is_lexicalized(const Grammar& g) {
  for (const ElementaryTree* t : g.all_trees())
    if (!t->anchored()) return false;
  return !g.initial_trees.empty() || !g.auxiliary_trees.empty();
}

// Throws GrammarInvalid if the grammar has any diagnostic.
inline void require_valid(const Grammar& g) {
  auto diags = validate_grammar(g);
  if (!diags.empty())
    throw Error(Errc::GrammarInvalid,
                "grammar failed validation: " + diags.front().str() +
                    (diags.size() > 1
                         ? " (+" + std::to_string(diags.size() - 1) + " more)"
                         : ""));
}

}  // namespace tagforge
