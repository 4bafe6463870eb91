#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tagforge/compose.hpp"
#include "tagforge/deps.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/error.hpp"
#include "tagforge/grammar.hpp"

namespace tagforge {

// ---------------------------------------------------------------------------
// Derived trees: single-line bracketing, e.g.
//   (S (Ad (ADV Yesterday)) (S (NP (D a) (N man)) (VP (V saw) (NP (N Mary)))))
// Terminals render bare; empty-string leaves render as their bare category.

namespace detail {

inline void render_derived_node(std::ostringstream& out, const TreeNode& n) {
  switch (n.kind) {
    case NodeKind::Term:
      out << n.literal;
      return;
    case NodeKind::Eps:
      out << '(' << n.label << ')';
      return;
    case NodeKind::Subst:
    case NodeKind::Foot:
    case NodeKind::Anchor:
      throw Error(Errc::IncompleteTree,
                  "cannot render a tree with an open " +
                      std::string(to_string(n.kind)) + " leaf '" + n.label +
                      "'");
    case NodeKind::Interior:
      break;
  }
  out << '(' << n.label;
  for (const TreeNode& c : n.children) {
    out << ' ';
    render_derived_node(out, c);
  }
  out << ')';
}

}  // namespace detail

inline std::string render_derived(const DerivedTree& t) {
  std::ostringstream out;
  detail::render_derived_node(out, t.root);
  return out.str();
}

// ---------------------------------------------------------------------------
// Derivation trees.

enum class DerivationStyle { Canonical, Paper };

namespace detail {

// Canonical: one node per line, `name[surface]`, children indented two
// spaces per level with their composition `<op @ site>`.
inline void render_canonical(std::ostringstream& out,
                             const DerivationNode& node, int depth,
                             const GornAddress* site, CompOp op) {
  for (int i = 0; i < depth; ++i) out << "  ";
  out << node.tree_name;
  if (node.lexeme) out << '[' << node.lexeme->surface << ']';
  if (site) out << " <" << to_string(op) << " @ " << site->str() << '>';
  out << '\n';
  for (const auto* e : ordered_edges(node))
    render_canonical(out, e->child, depth + 1, &e->site, e->op);
}

// Listing style: tab-separated `lexeme  treeName  {site}  index  POS` with
// 0-based token indices; the root row has no site column; children are
// indented two spaces per level. Anchorless nodes show "-" columns.
inline void render_listing(std::ostringstream& out,
                           const DerivationNode& node, int depth,
                           const GornAddress* site) {
  for (int i = 0; i < depth; ++i) out << "  ";
  if (node.lexeme)
    out << node.lexeme->surface;
  else
    out << '-';
  out << '\t' << node.tree_name;
  if (site) out << "\t{" << site->str() << '}';
  if (node.lexeme) {
    out << '\t' << node.lexeme->token_index - 1;
    out << '\t' << (node.lexeme->pos.empty() ? "-" : node.lexeme->pos);
  } else {
    out << "\t-\t-";
  }
  out << '\n';
  for (const auto* e : ordered_edges(node))
    render_listing(out, e->child, depth + 1, &e->site);
}

}  // namespace detail

inline std::string render_derivation(
    const DerivationTree& d, DerivationStyle style = DerivationStyle::Canonical) {
  std::ostringstream out;
  if (style == DerivationStyle::Canonical)
    detail::render_canonical(out, d.root, 0, nullptr, CompOp::Subst);
  else
    detail::render_listing(out, d.root, 0, nullptr);
  return out.str();
}

// ---------------------------------------------------------------------------
// Dependency output.

enum class DepsStyle { Triples, ArgStruct };

inline std::string render_deps(const DependencyGraph& dg,
                               DepsStyle style = DepsStyle::Triples) {
  std::ostringstream out;
  if (style == DepsStyle::Triples) {
    for (const Relation& r : dg.relations) out << r.str() << '\n';
  } else {
    for (const ArgumentStructure& a : dg.argument_structures)
      out << a.str() << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// DOT emission.

namespace detail {

inline bool is_dot_keyword(const std::string& s) {
  std::string lower;
  for (char c : s)
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "node" || lower == "edge" || lower == "graph" ||
         lower == "digraph" || lower == "subgraph" || lower == "strict";
}

inline bool is_plain_dot_id(const std::string& s) {
  if (s.empty() || is_dot_keyword(s)) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string dot_id(const std::string& s) {
  if (is_plain_dot_id(s)) return s;
  return '"' + dot_escape(s) + '"';
}

struct DotDerivationWalk {
  std::ostringstream nodes;
  std::ostringstream edges;
  std::map<std::string, int> name_uses;

  std::string claim_id(const std::string& name) {
    int n = ++name_uses[name];
    if (n == 1) return name;
    return name + "_" + std::to_string(n);
  }

  void walk(const DerivationNode& node, const std::string& id) {
    nodes << "  " << dot_id(id) << " [label=\"" << dot_escape(node.tree_name);
    if (node.lexeme) nodes << '[' << dot_escape(node.lexeme->surface) << ']';
    nodes << "\"];\n";
    for (const auto* e : ordered_edges(node)) {
      std::string child_id = claim_id(e->child.tree_name);
      edges << "  " << dot_id(id) << " -> " << dot_id(child_id)
            << " [label=\"" << to_string(e->op) << '@' << e->site.str()
            << "\"];\n";
      walk(e->child, child_id);
    }
  }
};

inline void dot_derived_walk(std::ostringstream& out, const TreeNode& n,
                             int& counter, int parent) {
  int id = counter++;
  std::string label = n.kind == NodeKind::Term ? n.literal : n.label;
  out << "  n" << id << " [label=\"" << dot_escape(label) << "\"];\n";
  if (parent >= 0) out << "  n" << parent << " -> n" << id << ";\n";
  for (const TreeNode& c : n.children) dot_derived_walk(out, c, counter, id);
}

}  // namespace detail

inline std::string render_dot(const DerivationTree& d) {
  detail::DotDerivationWalk walk;
  std::string root_id = walk.claim_id(d.root.tree_name);
  walk.walk(d.root, root_id);
  std::ostringstream out;
  out << "digraph derivation {\n"
      << walk.nodes.str() << walk.edges.str() << "}\n";
  return out.str();
}

inline std::string render_dot(const DerivedTree& t) {
  std::ostringstream out;
  out << "digraph derived {\n";
  int counter = 0;
  detail::dot_derived_walk(out, t.root, counter, -1);
  out << "}\n";
  return out.str();
}

inline std::string render_dot(const DependencyGraph& dg) {
  std::ostringstream out;
  out << "digraph deps {\n";
  out << "  " << detail::dot_id(virtual_root().str()) << ";\n";
  for (const TokenRef& t : dg.tokens)
    out << "  " << detail::dot_id(t.str()) << ";\n";
  for (const Relation& r : dg.relations)
    out << "  " << detail::dot_id(r.head.str()) << " -> "
        << detail::dot_id(r.dependent.str()) << " [label=\""
        << detail::dot_escape(r.label) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace tagforge
