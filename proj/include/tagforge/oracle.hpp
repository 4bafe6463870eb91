#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tagforge/compose.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/error.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/lexicon.hpp"

namespace tagforge {

// Exhaustive-search bounds. max_ops caps composition operations (edges) per
// derivation; max_len caps yield length; hard_cap aborts runaway enumeration.
struct OracleBudget {
  int max_ops = 4;
  int max_len = 10;
  long hard_cap = 1'000'000;
};

// One language member found by exhaustive search: the yield as positioned
// tokens (pos is empty for positions produced by plain term leaves) plus the
// derivation that produced it, with anchor token indices bound.
struct OracleEntry {
  std::vector<Token> tokens;
  DerivationTree derivation;

  std::string surface_string() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i].surface;
    }
    return out;
  }
};

namespace oracle_detail {

struct Counter {
  long produced = 0;
  long cap = 1'000'000;

  void bump(long by = 1) {
    produced += by;
    if (produced > cap)
      throw Error(Errc::BudgetExceeded,
                  "derivation search exceeded " + std::to_string(cap) +
                      " candidates");
  }
};

struct Candidate {
  DerivationNode node;
  int ops = 0;
};

struct SiteTask {
  GornAddress addr;
  bool required = false;  // substitution sites must be filled
  std::string label;
};

std::vector<Candidate> enumerate_for_label(const Grammar& g, TreeClass cls,
                                           const std::string& label,
                                           int budget,
                                           const std::vector<Lexeme>& vocab,
                                           Counter& counter);

// All ways to satisfy tasks[idx..] with at most `budget` operations.
inline std::vector<std::pair<std::vector<DerivationNode::Edge>, int>>
enumerate_edges(const Grammar& g, const std::vector<SiteTask>& tasks,
                std::size_t idx, int budget,
                const std::vector<Lexeme>& vocab, Counter& counter) {
  std::vector<std::pair<std::vector<DerivationNode::Edge>, int>> out;
  if (idx == tasks.size()) {
    out.push_back({{}, 0});
    return out;
  }
  const SiteTask& task = tasks[idx];

  if (!task.required) {
    // Adjunction is optional: the site may stay untouched.
    for (auto& rest : enumerate_edges(g, tasks, idx + 1, budget, vocab,
                                      counter))
      out.push_back(std::move(rest));
  }

  if (budget >= 1) {
    TreeClass cls = task.required ? TreeClass::Initial : TreeClass::Auxiliary;
    CompOp op = task.required ? CompOp::Subst : CompOp::Adjoin;
    for (const Candidate& child :
         enumerate_for_label(g, cls, task.label, budget - 1, vocab, counter)) {
      auto rests = enumerate_edges(g, tasks, idx + 1,
                                   budget - 1 - child.ops, vocab, counter);
      for (auto& rest : rests) {
        std::vector<DerivationNode::Edge> edges;
        edges.push_back(
            DerivationNode::Edge{task.addr, op, child.node});
        for (auto& e : rest.first) edges.push_back(std::move(e));
        counter.bump();
        out.push_back({std::move(edges), 1 + child.ops + rest.second});
      }
    }
  }
  return out;
}

inline std::vector<Candidate> enumerate_for_tree(
    const Grammar& g, const ElementaryTree& tree, int budget,
    const std::vector<Lexeme>& vocab, Counter& counter) {
  // Site inventory: every substitution leaf must be filled; every adjoinable
  // interior node may take one adjunction.
  std::vector<SiteTask> tasks;
  visit_nodes(tree.root, [&](const GornAddress& addr, const TreeNode& n) {
    if (n.kind == NodeKind::Subst)
      tasks.push_back(SiteTask{addr, true, n.label});
    else if (is_adjoinable(n))
      tasks.push_back(SiteTask{addr, false, n.label});
  });

  std::vector<std::optional<Lexeme>> lexeme_choices;
  if (tree.anchored()) {
    for (const Lexeme& v : vocab)
      if (std::find(tree.anchor_pos.begin(), tree.anchor_pos.end(), v.pos) !=
          tree.anchor_pos.end())
        lexeme_choices.push_back(v);
  } else {
    lexeme_choices.push_back(std::nullopt);
  }

  std::vector<Candidate> out;
  for (const auto& lex : lexeme_choices) {
    for (auto& fill : enumerate_edges(g, tasks, 0, budget, vocab, counter)) {
      DerivationNode node;
      node.tree_name = tree.name;
      node.lexeme = lex;
      node.edges = std::move(fill.first);
      counter.bump();
      out.push_back(Candidate{std::move(node), fill.second});
    }
  }
  return out;
}

inline std::vector<Candidate> enumerate_for_label(
    const Grammar& g, TreeClass cls, const std::string& label, int budget,
    const std::vector<Lexeme>& vocab, Counter& counter) {
  std::vector<Candidate> out;
  const auto& pool =
      cls == TreeClass::Initial ? g.initial_trees : g.auxiliary_trees;
  for (const ElementaryTree& t : pool) {
    if (t.root.label != label) continue;
    for (auto& c : enumerate_for_tree(g, t, budget, vocab, counter))
      out.push_back(std::move(c));
  }
  return out;
}

// Bind token indices by replaying with unique placeholder surfaces, then
// reading off where each anchor landed in the yield.
inline std::optional<OracleEntry> finish_entry(const Grammar& g,
                                               DerivationNode node,
                                               int max_len) {
  std::vector<DerivationNode*> anchored;
  struct Walk {
    std::vector<DerivationNode*>& anchored;
    void go(DerivationNode& n) {
      if (n.lexeme) anchored.push_back(&n);
      for (auto& e : n.edges) go(e.child);
    }
  };
  Walk{anchored}.go(node);

  DerivationNode probe = node;
  std::vector<DerivationNode*> probe_anchored;
  Walk{probe_anchored}.go(probe);
  for (std::size_t i = 0; i < probe_anchored.size(); ++i)
    probe_anchored[i]->lexeme->surface = "\x01" + std::to_string(i);

  std::vector<std::string> yield =
      yield_of(replay_derivation(g, probe));
  if (static_cast<int>(yield.size()) > max_len || yield.empty())
    return std::nullopt;

  OracleEntry entry;
  for (std::size_t p = 0; p < yield.size(); ++p) {
    const std::string& s = yield[p];
    if (!s.empty() && s[0] == '\x01') {
      std::size_t ordinal = std::stoul(s.substr(1));
      DerivationNode* owner = anchored[ordinal];
      owner->lexeme->token_index = static_cast<int>(p) + 1;
      entry.tokens.push_back(Token{owner->lexeme->surface,
                                   owner->lexeme->pos,
                                   static_cast<int>(p) + 1});
    } else {
      entry.tokens.push_back(Token{s, "", static_cast<int>(p) + 1});
    }
  }
  normalize_derivation(node);
  entry.derivation = DerivationTree{std::move(node)};
  return entry;
}

}  // namespace oracle_detail

// Every complete derivation reachable with at most budget.max_ops
// compositions whose yield is non-empty and at most budget.max_len tokens.
// Anchored trees draw their lexemes from `vocabulary` ((surface, pos) pairs;
// token_index is ignored); with an empty vocabulary only anchorless trees
// take part. Results are deterministic: sorted by surface string, then by
// derivation identity.
inline std::vector<OracleEntry> enumerate_language(
    const Grammar& g, const OracleBudget& budget,
    const std::vector<Lexeme>& vocabulary = {}) {
  oracle_detail::Counter counter;
  counter.cap = budget.hard_cap;

  std::vector<OracleEntry> entries;
  std::set<std::string> seen;
  for (const ElementaryTree& t : g.initial_trees) {
    if (t.root.label != g.start_symbol) continue;
    for (auto& cand : oracle_detail::enumerate_for_tree(
             g, t, budget.max_ops, vocabulary, counter)) {
      auto entry = oracle_detail::finish_entry(g, std::move(cand.node),
                                               budget.max_len);
      if (!entry) continue;
      if (seen.insert(derivation_key(entry->derivation)).second)
        entries.push_back(std::move(*entry));
    }
  }

  std::sort(entries.begin(), entries.end(),
            [](const OracleEntry& a, const OracleEntry& b) {
              auto ka = a.surface_string(), kb = b.surface_string();
              if (ka != kb) return ka < kb;
              return derivation_key(a.derivation) <
                     derivation_key(b.derivation);
            });
  return entries;
}

// Membership + all derivations for one tagged sentence, by exhaustive
// search. A derivation matches when its yield surfaces equal the sentence's
// and every anchored position carries the sentence's tag at that position.
inline std::vector<DerivationTree> oracle_parse(const Grammar& g,
                                                const std::vector<Token>& sentence,
                                                const OracleBudget& budget) {
  if (sentence.empty())
    throw Error(Errc::EmptySentence, "cannot parse an empty sentence");

  std::vector<Lexeme> vocab;
  for (const Token& tok : sentence) {
    Lexeme lex = lexeme_of(tok);
    lex.token_index = 0;
    bool dup = false;
    for (const Lexeme& v : vocab)
      if (v.surface == lex.surface && v.pos == lex.pos) dup = true;
    if (!dup) vocab.push_back(lex);
  }

  OracleBudget b = budget;
  b.max_len = static_cast<int>(sentence.size());

  std::vector<DerivationTree> out;
  for (OracleEntry& entry : enumerate_language(g, b, vocab)) {
    if (entry.tokens.size() != sentence.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (entry.tokens[i].surface != sentence[i].surface) ok = false;
      // Anchored positions must have matched the tag actually at that
      // position; term-literal positions carry no tag constraint.
      if (!entry.tokens[i].pos.empty() &&
          entry.tokens[i].pos != sentence[i].pos)
        ok = false;
    }
    if (ok) out.push_back(std::move(entry.derivation));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser cross-check: see check_equivalence in oracle_check.hpp (it needs
// the chart parser; kept separate so the oracle itself has no dependency on
// the implementation under test).

}  // namespace tagforge
