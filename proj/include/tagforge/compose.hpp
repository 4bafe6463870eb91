#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tagforge/error.hpp"
#include "tagforge/gorn.hpp"
#include "tagforge/grammar.hpp"

namespace tagforge {

// A surface token bound to an anchor, remembering where in the input it sat.
struct Lexeme {
  std::string surface;
  int token_index = 0;  // 1-based position in the sentence; 0 = unplaced
  std::string pos;      // tag the anchor was matched under ("" = none)

  bool operator==(const Lexeme&) const = default;
};

namespace detail {

inline TreeNode* mutable_node_at(TreeNode& root, const GornAddress& addr) {
  TreeNode* node = &root;
  for (int ordinal : addr.path) {
    if (ordinal < 1 || static_cast<std::size_t>(ordinal) > node->children.size())
      throw Error(Errc::NoSuchAddress, "no node at " + addr.str());
    node = &node->children[static_cast<std::size_t>(ordinal - 1)];
  }
  return node;
}

inline bool contains_kind(const TreeNode& root, NodeKind kind) {
  bool found = false;
  visit_nodes(root, [&](const GornAddress&, const TreeNode& n) {
    if (n.kind == kind) found = true;
  });
  return found;
}

inline std::optional<GornAddress> find_unique_foot(const TreeNode& root) {
  std::vector<GornAddress> feet;
  visit_nodes(root, [&](const GornAddress& a, const TreeNode& n) {
    if (n.kind == NodeKind::Foot) feet.push_back(a);
  });
  if (feet.size() != 1) return std::nullopt;
  return feet[0];
}

}  // namespace detail

// True iff adjunction may target this node: an interior nonterminal that is
// not barred. Roots of (derived) trees count as interior once they have
// children, which every well-formed elementary root does.
inline bool is_adjoinable(const TreeNode& n) {
  return n.kind == NodeKind::Interior && !n.no_adjoin;
}

// ---------------------------------------------------------------------------
// Substitution: replace an open substitution leaf with an initial-derived
// tree whose root bears the same label.

inline DerivedTree substitute(const DerivedTree& host, const GornAddress& site,
                              const DerivedTree& filler) {
  const TreeNode& target = node_at(host.root, site);
  if (target.kind != NodeKind::Subst)
    throw Error(Errc::NotSubstitutionSite,
                "node at " + site.str() + " ('" + target.label +
                    "') is not an open substitution site");
  if (target.label != filler.root.label)
    throw Error(Errc::LabelMismatch,
                "substitution site '" + target.label + "' at " + site.str() +
                    " cannot take a tree rooted in '" + filler.root.label +
                    "'");
  // A tree containing a foot is auxiliary-derived and may never substitute.
  if (detail::contains_kind(filler.root, NodeKind::Foot))
    throw Error(Errc::FillerNotInitial,
                "substitution filler rooted in '" + filler.root.label +
                    "' contains a foot node");

  DerivedTree out = host;
  *detail::mutable_node_at(out.root, site) = filler.root;
  return out;
}

// ---------------------------------------------------------------------------
// Adjunction: splice an auxiliary-derived tree in at an interior node. The
// subtree previously below the site moves under the auxiliary's foot.

inline DerivedTree adjoin(const DerivedTree& host, const GornAddress& site,
                          const DerivedTree& aux) {
  const TreeNode& target = node_at(host.root, site);
  if (!is_adjoinable(target))
    throw Error(Errc::AdjunctionForbidden,
                "adjunction not allowed at " + site.str() + " ('" +
                    target.label + "', " + to_string(target.kind) +
                    (target.no_adjoin ? ", no-adjoin" : "") + ")");
  auto foot_addr = detail::find_unique_foot(aux.root);
  if (!foot_addr)
    throw Error(Errc::AuxNotAuxiliary,
                "adjoined tree rooted in '" + aux.root.label +
                    "' does not have exactly one foot");
  if (target.label != aux.root.label)
    throw Error(Errc::LabelMismatch,
                "adjunction site '" + target.label + "' at " + site.str() +
                    " cannot take an auxiliary rooted in '" + aux.root.label +
                    "'");

  DerivedTree out = host;
  TreeNode* site_node = detail::mutable_node_at(out.root, site);
  TreeNode displaced = std::move(*site_node);

  TreeNode spliced = aux.root;
  TreeNode* foot = detail::mutable_node_at(spliced, *foot_addr);
  // The displaced subtree takes the foot's place wholesale; the foot node
  // itself disappears from the derived tree.
  *foot = std::move(displaced);
  *site_node = std::move(spliced);
  return out;
}

// ---------------------------------------------------------------------------
// Instantiation: stamp out a derived tree from an elementary tree, feeding
// the anchor its lexeme. Anchored trees require a lexeme; anchorless trees
// reject one.

inline DerivedTree instantiate(const ElementaryTree& t,
                               const std::optional<Lexeme>& lexeme) {
  bool has_anchor = detail::contains_kind(t.root, NodeKind::Anchor);
  if (has_anchor && !lexeme)
    throw Error(Errc::InvalidDerivation,
                "tree '" + t.name + "' is anchored and needs a lexeme");
  if (!has_anchor && lexeme)
    throw Error(Errc::InvalidDerivation,
                "tree '" + t.name + "' has no anchor for lexeme '" +
                    lexeme->surface + "'");

  DerivedTree out{t.root};
  if (has_anchor) {
    visit_nodes(t.root, [&](const GornAddress& addr, const TreeNode& n) {
      if (n.kind != NodeKind::Anchor) return;
      TreeNode* slot = detail::mutable_node_at(out.root, addr);
      // The anchor becomes an interior preterminal dominating the surface
      // form, so rendered output shows (POSLabel word).
      slot->kind = NodeKind::Interior;
      slot->children.push_back(term_leaf(lexeme->surface));
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Yield: frontier terminals, left to right. Empty leaves contribute nothing.
// Open subst/foot/anchor leaves are reported as errors by yield_of, while
// frontier_of exposes them for partial-tree inspection.

inline std::vector<std::string> yield_of(const DerivedTree& t) {
  std::vector<std::string> out;
  visit_nodes(t.root, [&](const GornAddress& addr, const TreeNode& n) {
    switch (n.kind) {
      case NodeKind::Term:
        out.push_back(n.literal);
        break;
      case NodeKind::Eps:
      case NodeKind::Interior:
        break;
      case NodeKind::Subst:
      case NodeKind::Foot:
      case NodeKind::Anchor:
        throw Error(Errc::IncompleteTree,
                    "derived tree still has an open " +
                        std::string(to_string(n.kind)) + " leaf '" + n.label +
                        "' at " + addr.str());
    }
  });
  return out;
}

inline bool is_complete(const DerivedTree& t) {
  bool open = false;
  visit_nodes(t.root, [&](const GornAddress&, const TreeNode& n) {
    if (n.kind == NodeKind::Subst || n.kind == NodeKind::Foot ||
        n.kind == NodeKind::Anchor)
      open = true;
  });
  return !open;
}

}  // namespace tagforge
