#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tagforge/derivation.hpp"
#include "tagforge/error.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/lexicon.hpp"

namespace tagforge {

namespace chart_detail {

// Elementary tree flattened for chart work: nodes in depth-first preorder
// with parent/child wiring and precomputed addresses.
struct XNode {
  std::string label;
  NodeKind kind = NodeKind::Interior;
  bool no_adjoin = false;
  std::string literal;
  int parent = -1;
  int child_index = 0;  // 1-based position among siblings; 0 for the root
  std::vector<int> children;
  GornAddress addr;
};

struct XTree {
  const ElementaryTree* tree = nullptr;
  std::vector<XNode> nodes;
  int foot = -1;
  int anchor = -1;
};

inline int flatten(XTree& xt, const TreeNode& n, int parent, int child_index,
                   const GornAddress& addr) {
  int id = static_cast<int>(xt.nodes.size());
  xt.nodes.push_back(XNode{n.label, n.kind, n.no_adjoin, n.literal, parent,
                           child_index, {}, addr});
  if (n.kind == NodeKind::Foot) xt.foot = id;
  if (n.kind == NodeKind::Anchor) xt.anchor = id;
  for (std::size_t c = 0; c < n.children.size(); ++c) {
    int cid = flatten(xt, n.children[c], id, static_cast<int>(c) + 1,
                      addr.child(static_cast<int>(c) + 1));
    xt.nodes[id].children.push_back(cid);
  }
  return id;
}

inline XTree compile_tree(const ElementaryTree& t) {
  XTree xt;
  xt.tree = &t;
  flatten(xt, t.root, -1, 0, GornAddress::root());
  return xt;
}

inline bool node_adjoinable(const XNode& n) {
  return n.kind == NodeKind::Interior && !n.no_adjoin;
}

enum class Stage { Partial = 0, Below = 1, Done = 2 };

// How an item came to be; the alternatives on one item are the packed
// forest's ambiguity.
struct Backptr {
  enum Kind {
    Axiom,        // scan/epsilon/foot: no antecedents
    Combine,      // prev PARTIAL (or none for the first child) + child DONE
    Promote,      // PARTIAL(arity) -> BELOW, or BELOW -> DONE (no adjunction)
    Adjoined,     // aux root DONE + this node's BELOW
    Substituted,  // initial root DONE fills this substitution site
  };
  Kind kind = Axiom;
  int a = -1;  // Combine: prev PARTIAL (-1 if child_index == 1); Promote: the
               // promoted item; Adjoined: aux root DONE; Substituted: filler
  int b = -1;  // Combine: child DONE; Adjoined: the BELOW item

  bool operator==(const Backptr&) const = default;
};

struct Item {
  int inst = 0;
  int node = 0;
  Stage stage = Stage::Done;
  int count = 0;  // children assembled; meaningful for Partial
  int i = 0, l = 0;
  int j = -1, k = -1;  // foot gap; -1/-1 when absent

  bool has_gap() const { return j >= 0; }
  std::array<int, 8> key() const {
    return {inst, node, static_cast<int>(stage), count, i, l, j, k};
  }
};

class Parser;
class Unpacker;

}  // namespace chart_detail

// Packed forest of every derivation of one sentence. Backpointers record
// alternative rule applications per item; goal items are the roots.
class DerivationForest {
 public:
  DerivationForest(const Grammar& g, std::vector<Token> sentence)
      : grammar_(&g), sentence_(std::move(sentence)) {}

  bool recognized() const { return !goals_.empty(); }
  std::size_t item_count() const { return items_.size(); }
  const Grammar& grammar() const { return *grammar_; }
  const std::vector<Token>& sentence() const { return sentence_; }

 private:
  friend class chart_detail::Parser;
  friend class chart_detail::Unpacker;
  friend DerivationForest parse_forest(const Grammar&,
                                       const std::vector<Token>&);
  friend std::vector<DerivationTree> enumerate_derivations(
      const DerivationForest&, int);

  const Grammar* grammar_;
  std::vector<Token> sentence_;
  std::vector<TreeInstance> instances_;
  std::vector<chart_detail::XTree> xtrees_;  // one per instance
  std::vector<chart_detail::Item> items_;
  std::vector<std::vector<chart_detail::Backptr>> backptrs_;
  std::vector<int> goals_;
};

namespace chart_detail {

class Parser {
 public:
  Parser(const Grammar& g, const std::vector<Token>& sentence,
         DerivationForest& out)
      : g_(g), sentence_(sentence), n_(static_cast<int>(sentence.size())),
        out_(out) {}

  void run() {
    out_.instances_ = instances_for_sentence(g_, sentence_);
    for (const TreeInstance& inst : out_.instances_)
      out_.xtrees_.push_back(compile_tree(*inst.tree));

    index_static();
    seed();
    while (!agenda_.empty()) {
      int id = agenda_.front();
      agenda_.pop_front();
      fire(id);
    }
    collect_goals();
  }

 private:
  using Key = std::array<int, 8>;

  const XNode& xnode(const Item& it) const {
    return out_.xtrees_[it.inst].nodes[it.node];
  }

  // Deduplicating insert: a known item only accumulates the backpointer (no
  // re-queue) — this is what keeps the forest packed.
  void push(Item it, Backptr bp) {
    auto found = index_.find(it.key());
    if (found != index_.end()) {
      auto& bps = out_.backptrs_[found->second];
      if (std::find(bps.begin(), bps.end(), bp) == bps.end())
        bps.push_back(bp);
      return;
    }
    int id = static_cast<int>(out_.items_.size());
    index_.emplace(it.key(), id);
    out_.items_.push_back(it);
    out_.backptrs_.push_back({bp});
    enqueue_indexes(id);
    agenda_.push_back(id);
  }

  void index_static() {
    for (std::size_t inst = 0; inst < out_.instances_.size(); ++inst) {
      const XTree& xt = out_.xtrees_[inst];
      bool aux = xt.tree->tree_class == TreeClass::Auxiliary;
      if (aux) aux_insts_by_label_[xt.nodes[0].label].push_back(
          static_cast<int>(inst));
      for (std::size_t node = 0; node < xt.nodes.size(); ++node)
        if (xt.nodes[node].kind == NodeKind::Subst)
          subst_sites_by_label_[xt.nodes[node].label].push_back(
              {static_cast<int>(inst), static_cast<int>(node)});
    }
  }

  void seed() {
    for (std::size_t inst = 0; inst < out_.instances_.size(); ++inst) {
      const XTree& xt = out_.xtrees_[inst];
      const auto& token = out_.instances_[inst].anchor_token;
      for (std::size_t node = 0; node < xt.nodes.size(); ++node) {
        const XNode& xn = xt.nodes[node];
        switch (xn.kind) {
          case NodeKind::Anchor: {
            int p = token->index;  // instances are built anchored
            push(Item{static_cast<int>(inst), static_cast<int>(node),
                      Stage::Done, 0, p - 1, p, -1, -1},
                 Backptr{Backptr::Axiom, -1, -1});
            break;
          }
          case NodeKind::Term:
            for (int p = 1; p <= n_; ++p)
              if (sentence_[p - 1].surface == xn.literal)
                push(Item{static_cast<int>(inst), static_cast<int>(node),
                          Stage::Done, 0, p - 1, p, -1, -1},
                     Backptr{Backptr::Axiom, -1, -1});
            break;
          case NodeKind::Eps:
            for (int p = 0; p <= n_; ++p)
              push(Item{static_cast<int>(inst), static_cast<int>(node),
                        Stage::Done, 0, p, p, -1, -1},
                   Backptr{Backptr::Axiom, -1, -1});
            break;
          default:
            break;  // foot items are created lazily; the rest assemble
        }
      }
    }
  }

  void enqueue_indexes(int id) {
    const Item& it = out_.items_[id];
    const XNode& xn = xnode(it);
    if (it.stage == Stage::Done) {
      if (xn.parent >= 0)
        done_children_[{it.inst, it.node, it.i}].push_back(id);
      if (xn.parent < 0 &&
          out_.xtrees_[it.inst].tree->tree_class == TreeClass::Auxiliary &&
          it.has_gap())
        aux_root_done_[{xn.label, it.j, it.k}].push_back(id);
    } else if (it.stage == Stage::Partial) {
      partials_[{it.inst, it.node, it.count, it.l}].push_back(id);
    } else {
      if (node_adjoinable(xn))
        adjoinable_below_[{xn.label, it.i, it.l}].push_back(id);
    }
  }

  // Child-Combine gap bookkeeping: at most one of the two parts may carry
  // the foot gap.
  static bool merge_gap(const Item& a, const Item& b, int& j, int& k) {
    if (a.has_gap() && b.has_gap()) return false;
    j = a.has_gap() ? a.j : b.j;
    k = a.has_gap() ? a.k : b.k;
    return true;
  }

  void combine(int partial_id, int done_id) {
    const Item& p = out_.items_[partial_id];
    const Item& d = out_.items_[done_id];
    int j, k;
    if (!merge_gap(p, d, j, k)) return;
    push(Item{p.inst, p.node, Stage::Partial, p.count + 1, p.i, d.l, j, k},
         Backptr{Backptr::Combine, partial_id, done_id});
  }

  void first_child(int done_id) {
    const Item& d = out_.items_[done_id];
    const XNode& xn = xnode(d);
    push(Item{d.inst, xn.parent, Stage::Partial, 1, d.i, d.l, d.j, d.k},
         Backptr{Backptr::Combine, -1, done_id});
  }

  void fire(int id) {
    // Copy: pushes may reallocate the item vector.
    const Item it = out_.items_[id];
    const XNode xn = xnode(it);

    if (it.stage == Stage::Partial) {
      int arity = static_cast<int>(xn.children.size());
      if (it.count == arity) {
        push(Item{it.inst, it.node, Stage::Below, 0, it.i, it.l, it.j, it.k},
             Backptr{Backptr::Promote, id, -1});
      } else {
        int child_node = xn.children[it.count];
        auto found = done_children_.find({it.inst, child_node, it.l});
        if (found != done_children_.end())
          for (int done_id : std::vector<int>(found->second))
            combine(id, done_id);
      }
      return;
    }

    if (it.stage == Stage::Below) {
      // Adjunction is optional everywhere.
      push(Item{it.inst, it.node, Stage::Done, 0, it.i, it.l, it.j, it.k},
           Backptr{Backptr::Promote, id, -1});
      if (node_adjoinable(xn)) {
        // Lazy foot axiom: a potential adjunction site spanning (i, l) gives
        // every matching auxiliary instance a foot item with that gap.
        auto auxes = aux_insts_by_label_.find(xn.label);
        if (auxes != aux_insts_by_label_.end())
          for (int aux_inst : auxes->second) {
            int foot = out_.xtrees_[aux_inst].foot;
            push(Item{aux_inst, foot, Stage::Done, 0, it.i, it.l, it.i, it.l},
                 Backptr{Backptr::Axiom, -1, -1});
          }
        // Pair with auxiliaries already fully parsed around this span.
        auto roots = aux_root_done_.find({xn.label, it.i, it.l});
        if (roots != aux_root_done_.end())
          for (int aux_id : std::vector<int>(roots->second)) {
            const Item& aux = out_.items_[aux_id];
            push(Item{it.inst, it.node, Stage::Done, 0, aux.i, aux.l, it.j,
                      it.k},
                 Backptr{Backptr::Adjoined, aux_id, id});
          }
      }
      return;
    }

    // Stage::Done.
    if (xn.parent >= 0) {
      if (xn.child_index == 1) {
        first_child(id);
      } else {
        auto found =
            partials_.find({it.inst, xn.parent, xn.child_index - 1, it.i});
        if (found != partials_.end())
          for (int partial_id : std::vector<int>(found->second))
            combine(partial_id, id);
      }
      return;
    }

    // Done at a root node.
    const XTree& xt = out_.xtrees_[it.inst];
    if (xt.tree->tree_class == TreeClass::Initial && !it.has_gap()) {
      auto sites = subst_sites_by_label_.find(xn.label);
      if (sites != subst_sites_by_label_.end())
        for (auto [site_inst, site_node] : sites->second)
          push(Item{site_inst, site_node, Stage::Done, 0, it.i, it.l, -1, -1},
               Backptr{Backptr::Substituted, id, -1});
    }
    if (xt.tree->tree_class == TreeClass::Auxiliary && it.has_gap()) {
      auto belows = adjoinable_below_.find({xn.label, it.j, it.k});
      if (belows != adjoinable_below_.end())
        for (int below_id : std::vector<int>(belows->second)) {
          const Item& below = out_.items_[below_id];
          push(Item{below.inst, below.node, Stage::Done, 0, it.i, it.l,
                    below.j, below.k},
               Backptr{Backptr::Adjoined, id, below_id});
        }
    }
  }

  void collect_goals() {
    for (std::size_t id = 0; id < out_.items_.size(); ++id) {
      const Item& it = out_.items_[id];
      const XTree& xt = out_.xtrees_[it.inst];
      if (it.stage == Stage::Done && xnode(it).parent < 0 &&
          xt.tree->tree_class == TreeClass::Initial &&
          xt.nodes[0].label == g_.start_symbol && it.i == 0 && it.l == n_ &&
          !it.has_gap())
        out_.goals_.push_back(static_cast<int>(id));
    }
  }

  const Grammar& g_;
  const std::vector<Token>& sentence_;
  int n_;
  DerivationForest& out_;

  std::map<Key, int> index_;
  std::deque<int> agenda_;
  // (inst, node, start) -> DONE items at that child node.
  std::map<std::array<int, 3>, std::vector<int>> done_children_;
  // (inst, node, count, end) -> PARTIAL items awaiting child count+1.
  std::map<std::array<int, 4>, std::vector<int>> partials_;
  // (root label, gap j, gap k) -> DONE aux-root items.
  std::map<std::tuple<std::string, int, int>, std::vector<int>> aux_root_done_;
  // (node label, span i, span l) -> BELOW items at adjoinable nodes.
  std::map<std::tuple<std::string, int, int>, std::vector<int>>
      adjoinable_below_;
  std::map<std::string, std::vector<int>> aux_insts_by_label_;
  std::map<std::string, std::vector<std::pair<int, int>>>
      subst_sites_by_label_;
};

}  // namespace chart_detail

inline DerivationForest parse_forest(const Grammar& g,
                                     const std::vector<Token>& sentence) {
  require_valid(g);
  if (sentence.empty())
    throw Error(Errc::EmptySentence, "cannot parse an empty sentence");
  DerivationForest forest(g, sentence);
  chart_detail::Parser parser(g, sentence, forest);
  parser.run();
  return forest;
}

inline bool recognize(const Grammar& g, const std::vector<Token>& sentence) {
  return parse_forest(g, sentence).recognized();
}

// ---------------------------------------------------------------------------
// Forest unpacking.

namespace chart_detail {

// Readings of an item: alternative edge lists this item contributes to its
// instance's derivation node. Items reached through substitution/adjunction
// backpointers are expanded into complete child derivation nodes.
class Unpacker {
 public:
  Unpacker(const DerivationForest& f, long cap) : f_(f), cap_(cap) {}

  std::vector<DerivationNode> roots(int goal_item) {
    return nodes_for(f_.items_[goal_item].inst, goal_item);
  }

 private:
  using EdgeList = std::vector<DerivationNode::Edge>;

  std::vector<DerivationNode> nodes_for(int inst, int root_item) {
    std::vector<DerivationNode> out;
    const TreeInstance& instance = f_.instances_[inst];
    for (const EdgeList& edges : readings(root_item)) {
      DerivationNode node;
      node.tree_name = instance.tree->name;
      if (instance.anchor_token)
        node.lexeme = lexeme_of(*instance.anchor_token);
      node.edges = edges;
      out.push_back(std::move(node));
      guard(out.size());
    }
    return out;
  }

  const std::vector<EdgeList>& readings(int id) {
    auto memo = memo_.find(id);
    if (memo != memo_.end()) return memo->second;
    // Cycles can only arise through zero-width auxiliaries (an item feeding
    // its own derivation); such readings are pruned — they denote infinite
    // derivation families that a finite enumeration cannot list anyway.
    if (!on_stack_.insert(id).second) {
      static const std::vector<EdgeList> empty;
      return empty;
    }

    std::vector<EdgeList> out;
    const Item& it = f_.items_[id];
    const chart_detail::XNode& xn = f_.xtrees_[it.inst].nodes[it.node];
    for (const Backptr& bp : f_.backptrs_[id]) {
      switch (bp.kind) {
        case Backptr::Axiom:
          out.push_back({});
          break;
        case Backptr::Promote:
          for (const EdgeList& r : readings(bp.a)) out.push_back(r);
          break;
        case Backptr::Combine: {
          std::vector<EdgeList> lefts =
              bp.a >= 0 ? readings(bp.a) : std::vector<EdgeList>{{}};
          std::vector<EdgeList> rights = readings(bp.b);
          for (const EdgeList& l : lefts)
            for (const EdgeList& r : rights) {
              EdgeList both = l;
              both.insert(both.end(), r.begin(), r.end());
              out.push_back(std::move(both));
              guard(out.size());
            }
          break;
        }
        case Backptr::Substituted: {
          const Item& filler = f_.items_[bp.a];
          for (DerivationNode& child : nodes_for(filler.inst, bp.a)) {
            out.push_back({DerivationNode::Edge{xn.addr, CompOp::Subst,
                                                std::move(child)}});
            guard(out.size());
          }
          break;
        }
        case Backptr::Adjoined: {
          const Item& aux = f_.items_[bp.a];
          std::vector<DerivationNode> children = nodes_for(aux.inst, bp.a);
          for (const EdgeList& below : readings(bp.b))
            for (const DerivationNode& child : children) {
              EdgeList with = below;
              with.push_back(
                  DerivationNode::Edge{xn.addr, CompOp::Adjoin, child});
              out.push_back(std::move(with));
              guard(out.size());
            }
          break;
        }
      }
      guard(out.size());
    }

    on_stack_.erase(id);
    return memo_.emplace(id, std::move(out)).first->second;
  }

  void guard(std::size_t size) const {
    if (static_cast<long>(size) > cap_)
      throw Error(Errc::BudgetExceeded,
                  "forest holds more than " + std::to_string(cap_) +
                      " readings");
  }

  const DerivationForest& f_;
  long cap_;
  std::map<int, std::vector<EdgeList>> memo_;
  std::set<int> on_stack_;
};

// Sort key mirroring a depth-first walk ordered by (site address, child tree
// name); used only to fix the enumeration order.
inline std::string enumeration_order_key(const DerivationNode& n) {
  std::string out = n.tree_name;
  std::vector<const DerivationNode::Edge*> edges;
  for (const auto& e : n.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(),
            [](const DerivationNode::Edge* a, const DerivationNode::Edge* b) {
              if (a->site != b->site) return a->site < b->site;
              return a->child.tree_name < b->child.tree_name;
            });
  for (const auto* e : edges)
    out += "|" + e->site.str() + ":" + enumeration_order_key(e->child);
  return out;
}

}  // namespace chart_detail

// Distinct derivations read off the forest, deterministically ordered,
// truncated at `max`. Every returned derivation is normalized (substitution
// edges before adjunctions, each group by site address).
inline std::vector<DerivationTree> enumerate_derivations(
    const DerivationForest& f, int max = 64) {
  if (max < 1)
    throw Error(Errc::InvalidDerivation, "enumeration cap must be >= 1");
  chart_detail::Unpacker unpacker(f, 1'000'000);

  std::vector<DerivationTree> result;
  std::set<std::string> seen;
  for (int goal : f.goals_) {
    for (DerivationNode& node : unpacker.roots(goal)) {
      DerivationTree d{std::move(node)};
      normalize_derivation(d);
      if (seen.insert(derivation_key(d)).second)
        result.push_back(std::move(d));
    }
  }

  std::sort(result.begin(), result.end(),
            [](const DerivationTree& a, const DerivationTree& b) {
              std::string ka = chart_detail::enumeration_order_key(a.root);
              std::string kb = chart_detail::enumeration_order_key(b.root);
              if (ka != kb) return ka < kb;
              return derivation_key(a) < derivation_key(b);
            });
  if (static_cast<int>(result.size()) > max)
    result.resize(static_cast<std::size_t>(max));
  return result;
}

}  // namespace tagforge
