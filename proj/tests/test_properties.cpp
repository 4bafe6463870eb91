#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

using namespace tagforge;

namespace {

std::vector<Token> retag(std::vector<Token> s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i].index = static_cast<int>(i) + 1;
  return s;
}

const std::vector<Token>& english_pool() {
  static std::vector<Token> pool{{"Yesterday", "RB", 0}, {"a", "DT", 0},
                                 {"man", "NN", 0}, {"saw", "VBD", 0},
                                 {"Mary", "NNP", 0}};
  return pool;
}

std::vector<Token> random_english_sentence(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, english_pool().size() - 1);
  std::vector<Token> out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) out.push_back(english_pool()[pick(rng)]);
  return retag(std::move(out));
}

void shuffle_edges(DerivationNode& n, std::mt19937& rng) {
  std::shuffle(n.edges.begin(), n.edges.end(), rng);
  for (auto& e : n.edges) shuffle_edges(e.child, rng);
}

}  // namespace

TEST_CASE("address round trip over every node of every bundled tree") {
  for (const char* stem : {"english", "count", "ambig", "tamil"}) {
    Grammar g = fixtures::load_grammar(stem);
    for (const ElementaryTree* t : g.all_trees()) {
      visit_nodes(t->root, [&](const GornAddress& addr, const TreeNode& n) {
        CHECK(address_of(t->root, node_at(t->root, addr)) == addr);
        CHECK(&node_at(t->root, address_of(t->root, n)) == &n);
      });
    }
  }
}

TEST_CASE("grammar validation is order-independent") {
  Grammar g = fixtures::english_grammar();
  // Break it in two distinct ways so there are findings to compare.
  g.initial_trees.push_back(g.initial_trees[1]);  // duplicate a_man
  g.auxiliary_trees.push_back(ElementaryTree{
      "b_bad", TreeClass::Auxiliary, {}, "",
      interior("S", {term_leaf("x"), foot_leaf("NP")})});

  auto as_set = [](const std::vector<Diagnostic>& ds) {
    std::set<std::string> out;
    for (const auto& d : ds) out.insert(d.str());
    return out;
  };
  auto baseline = as_set(validate_grammar(g));

  std::mt19937 rng(7);
  for (int round = 0; round < 10; ++round) {
    Grammar p = g;
    std::shuffle(p.initial_trees.begin(), p.initial_trees.end(), rng);
    std::shuffle(p.auxiliary_trees.begin(), p.auxiliary_trees.end(), rng);
    CHECK(as_set(validate_grammar(p)) == baseline);
  }
}

TEST_CASE("yield splicing identity for adjunction") {
  Grammar g = fixtures::count_grammar();
  DerivedTree base = instantiate(*g.find_tree("a_e"), std::nullopt);
  DerivedTree wrap = instantiate(*g.find_tree("b_count"), std::nullopt);

  DerivedTree t = adjoin(base, GornAddress::root(), wrap);
  t = adjoin(t, GornAddress::parse("0.2"), wrap);
  // Splice at the inner S of the innermost wrap: 0.2.2.2 after two wraps.
  GornAddress site = GornAddress::parse("0.2.2.2");

  auto sub_yield = [&](const TreeNode& n) {
    std::vector<std::string> out;
    visit_nodes(n, [&](const GornAddress&, const TreeNode& m) {
      if (m.kind == NodeKind::Term) out.push_back(m.literal);
    });
    return out;
  };

  // Compute prefix/inner/suffix of the host around the site.
  std::vector<std::string> inner = sub_yield(node_at(t.root, site));
  std::vector<std::string> whole = yield_of(t);
  // Locate inner within whole via tree positions: walk terminals, marking
  // whether their address has `site` as a prefix.
  std::vector<std::string> prefix, suffix;
  bool before = true;
  visit_nodes(t.root, [&](const GornAddress& a, const TreeNode& n) {
    if (n.kind != NodeKind::Term) return;
    if (site.is_prefix_of(a)) {
      before = false;
      return;
    }
    (before ? prefix : suffix).push_back(n.literal);
  });

  std::vector<std::string> left{"a", "b"}, right{"c", "d"};
  DerivedTree spliced = adjoin(t, site, wrap);
  std::vector<std::string> expected;
  for (auto& v : {prefix, left, inner, right, suffix})
    expected.insert(expected.end(), v.begin(), v.end());
  CHECK(yield_of(spliced) == expected);
}

TEST_CASE("substitution only changes the target subtree") {
  Grammar g = fixtures::english_grammar();
  DerivedTree saw = instantiate(*g.find_tree("a_saw"),
                                Lexeme{"saw", 4, "VBD"});
  DerivedTree mary = instantiate(*g.find_tree("a_Mary"),
                                 Lexeme{"Mary", 5, "NNP"});
  DerivedTree out = substitute(saw, GornAddress::parse("0.2.2"), mary);
  // Everything outside 0.2.2 is structurally identical.
  CHECK(node_at(out, GornAddress::parse("0.1")) ==
        node_at(saw, GornAddress::parse("0.1")));
  CHECK(node_at(out, GornAddress::parse("0.2.1")) ==
        node_at(saw, GornAddress::parse("0.2.1")));
  CHECK(out.root.label == saw.root.label);
  CHECK(out.root.children.size() == saw.root.children.size());
}

TEST_CASE("substitute and adjoin are pure") {
  Grammar g = fixtures::english_grammar();
  DerivedTree saw = instantiate(*g.find_tree("a_saw"),
                                Lexeme{"saw", 4, "VBD"});
  DerivedTree mary = instantiate(*g.find_tree("a_Mary"),
                                 Lexeme{"Mary", 5, "NNP"});
  DerivedTree yday = instantiate(*g.find_tree("b_yesterday"),
                                 Lexeme{"Yesterday", 1, "RB"});
  DerivedTree saw_copy = saw, mary_copy = mary, yday_copy = yday;

  DerivedTree r1 = substitute(saw, GornAddress::parse("0.2.2"), mary);
  DerivedTree r2 = substitute(saw, GornAddress::parse("0.2.2"), mary);
  CHECK(saw == saw_copy);
  CHECK(mary == mary_copy);
  CHECK(r1 == r2);

  DerivedTree a1 = adjoin(saw, GornAddress::root(), yday);
  DerivedTree a2 = adjoin(saw, GornAddress::root(), yday);
  CHECK(saw == saw_copy);
  CHECK(yday == yday_copy);
  CHECK(a1 == a2);
}

TEST_CASE("replay is invariant under child-list permutation") {
  Grammar en = fixtures::english_grammar();
  Grammar ta = fixtures::load_grammar("tamil");
  auto t2 = fixtures::load_corpus("tamil_example2");

  std::vector<std::pair<const Grammar*, DerivationTree>> cases;
  cases.push_back({&en, fixtures::english_derivation()});
  for (auto& d : enumerate_derivations(parse_forest(ta, t2[0]), 8))
    cases.push_back({&ta, d});

  std::mt19937 rng(11);
  for (auto& [g, d] : cases) {
    DerivedTree reference = replay_derivation(*g, d);
    for (int round = 0; round < 8; ++round) {
      DerivationTree shuffled = d;
      shuffle_edges(shuffled.root, rng);
      CHECK(replay_derivation(*g, shuffled) == reference);
    }
  }
}

TEST_CASE("dependency mining is invariant under child-list permutation") {
  Grammar g = fixtures::english_grammar();
  DerivationTree d = fixtures::english_derivation();
  DependencyGraph ref = mine_dependencies(g, d);
  std::mt19937 rng(13);
  for (int round = 0; round < 8; ++round) {
    DerivationTree shuffled = d;
    shuffle_edges(shuffled.root, rng);
    DependencyGraph dg = mine_dependencies(g, shuffled);
    CHECK(dg.relations == ref.relations);
    CHECK(dg.argument_structures == ref.argument_structures);
    CHECK(dg.tokens == ref.tokens);
  }
}

TEST_CASE("normalization is idempotent and stable") {
  Grammar ta = fixtures::load_grammar("tamil");
  auto t2 = fixtures::load_corpus("tamil_example2");
  for (auto& d : enumerate_derivations(parse_forest(ta, t2[0]), 8)) {
    DerivationTree once = d;
    normalize_derivation(once);
    CHECK(once == d);  // enumeration already normalizes
    DerivationTree twice = once;
    normalize_derivation(twice);
    CHECK(twice == once);
  }
}

TEST_CASE("lexicalized parses bind every token exactly once") {
  // Node count = sentence length, and the anchor multiset is the sentence.
  Grammar en = fixtures::english_grammar();
  Grammar ta = fixtures::load_grammar("tamil");
  auto check_sentence = [](const Grammar& g, const std::vector<Token>& s) {
    for (const auto& d : enumerate_derivations(parse_forest(g, s), 64)) {
      CHECK(count_nodes(d.root) == static_cast<int>(s.size()));
      std::set<int> seen;
      std::function<void(const DerivationNode&)> walk =
          [&](const DerivationNode& n) {
            REQUIRE(n.lexeme.has_value());
            CHECK(seen.insert(n.lexeme->token_index).second);
            CHECK(s[static_cast<std::size_t>(n.lexeme->token_index) - 1]
                      .surface == n.lexeme->surface);
            for (const auto& e : n.edges) walk(e.child);
          };
      walk(d.root);
      CHECK(seen.size() == s.size());
    }
  };
  check_sentence(en, fixtures::english_sentence());
  check_sentence(ta, fixtures::load_corpus("tamil_example1")[0]);
  check_sentence(ta, fixtures::load_corpus("tamil_example2")[0]);
}

TEST_CASE("replay soundness over sampled english strings") {
  // Seeds: every string the exhaustive search finds. Samples: random edits of
  // those seeds (replace/insert/delete), so both members and near-misses flow
  // through the parser.
  Grammar g = fixtures::english_grammar();
  OracleBudget b;
  b.max_ops = 4;
  std::vector<Lexeme> vocab;
  for (const Token& t : english_pool()) vocab.push_back({t.surface, 0, t.pos});

  std::vector<std::vector<Token>> pool;
  for (const auto& e : enumerate_language(g, b, vocab)) pool.push_back(e.tokens);
  REQUIRE(pool.size() == 8);

  std::mt19937 rng(20260818);
  std::uniform_int_distribution<std::size_t> pick_seed(0, pool.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_word(0,
                                                       english_pool().size() - 1);
  std::uniform_int_distribution<int> pick_edit(0, 2);

  int parsed = 0, derivations = 0;
  for (int round = 0; round < 300; ++round) {
    std::vector<Token> s = pool[pick_seed(rng)];
    if (round >= 8) {  // first rounds keep the seeds verbatim
      std::uniform_int_distribution<std::size_t> at(0, s.size() - 1);
      switch (pick_edit(rng)) {
        case 0: s[at(rng)] = english_pool()[pick_word(rng)]; break;
        case 1:
          s.insert(s.begin() + static_cast<long>(at(rng)),
                   english_pool()[pick_word(rng)]);
          break;
        default:
          if (s.size() > 1) s.erase(s.begin() + static_cast<long>(at(rng)));
          break;
      }
    }
    s = retag(std::move(s));
    DerivationForest f = parse_forest(g, s);
    if (!f.recognized()) continue;
    ++parsed;
    for (const auto& d : enumerate_derivations(f, 64)) {
      ++derivations;
      CHECK(validate_derivation(g, d).empty());
      auto y = yield_of(replay_derivation(g, d));
      std::vector<std::string> want;
      for (const Token& t : s) want.push_back(t.surface);
      CHECK(y == want);
    }
  }
  // The seeds alone guarantee the parser is exercised.
  CHECK(parsed >= 8);
  CHECK(derivations >= parsed);
}

TEST_CASE("membership agrees with the oracle on random short strings") {
  Grammar g = fixtures::english_grammar();
  OracleBudget b;
  b.max_ops = 4;
  std::mt19937 rng(97);
  for (int round = 0; round < 60; ++round) {
    std::vector<Token> s = random_english_sentence(rng, 5);
    INFO("sentence: " << [&] {
      std::string out;
      for (const auto& t : s) out += t.surface + " ";
      return out;
    }());
    bool chart = recognize(g, s);
    bool oracle = !oracle_parse(g, s, b).empty();
    CHECK(chart == oracle);
  }
}

TEST_CASE("enumeration order is deterministic") {
  Grammar ta = fixtures::load_grammar("tamil");
  auto t1 = fixtures::load_corpus("tamil_example1");
  auto run = [&] {
    std::vector<std::string> keys;
    for (const auto& d : enumerate_derivations(parse_forest(ta, t1[0]), 64))
      keys.push_back(derivation_key(d));
    return keys;
  };
  auto first = run();
  CHECK(first == run());
  CHECK_FALSE(first.empty());
}

TEST_CASE("renderers are deterministic") {
  Grammar g = fixtures::english_grammar();
  DerivationTree d = fixtures::english_derivation();
  DerivedTree t = replay_derivation(g, d);
  DependencyGraph dg = mine_dependencies(g, d);
  CHECK(render_derivation(d) == render_derivation(d));
  CHECK(render_derivation(d, DerivationStyle::Paper) ==
        render_derivation(d, DerivationStyle::Paper));
  CHECK(render_derived(t) == render_derived(t));
  CHECK(render_deps(dg) == render_deps(dg));
  CHECK(render_dot(d) == render_dot(d));
  CHECK(write_grammar(g) == write_grammar(g));
}

TEST_CASE("oracle budget monotonicity") {
  Grammar g = fixtures::count_grammar();
  std::set<std::string> prev;
  for (int ops = 0; ops <= 3; ++ops) {
    OracleBudget b;
    b.max_ops = ops;
    b.max_len = 13;
    std::set<std::string> cur;
    for (const auto& e : enumerate_language(g, b))
      cur.insert(e.surface_string() + "|" + derivation_key(e.derivation));
    for (const auto& k : prev) CHECK(cur.count(k) == 1);
    prev = std::move(cur);
  }
}

TEST_CASE("oracle derivations validate and replay to their yields") {
  Grammar g = fixtures::english_grammar();
  OracleBudget b;
  b.max_ops = 4;
  std::vector<Lexeme> vocab{{"Yesterday", 0, "RB"}, {"a", 0, "DT"},
                            {"man", 0, "NN"}, {"saw", 0, "VBD"},
                            {"Mary", 0, "NNP"}};
  for (const auto& e : enumerate_language(g, b, vocab)) {
    CHECK(validate_derivation(g, e.derivation).empty());
    auto y = yield_of(replay_derivation(g, e.derivation));
    std::vector<std::string> want;
    for (const auto& t : e.tokens) want.push_back(t.surface);
    CHECK(y == want);
  }
}

TEST_CASE("dependency graphs are trees over the tokens") {
  Grammar ta = fixtures::load_grammar("tamil");
  auto t2 = fixtures::load_corpus("tamil_example2");
  for (const auto& d : enumerate_derivations(parse_forest(ta, t2[0]), 8)) {
    DependencyGraph dg = mine_dependencies(ta, d);
    // Every token is a dependent exactly once (the root anchor's governor is
    // ROOT-0); heads are drawn from the token set or ROOT-0.
    std::set<std::string> dependents;
    for (const auto& r : dg.relations) {
      CHECK_FALSE(r.label.empty());
      CHECK_FALSE(r.head == r.dependent);
      CHECK(dependents.insert(r.dependent.str()).second);
    }
    CHECK(dependents.size() == dg.tokens.size());
    // Concatenated argument structures cover every token exactly once as head.
    CHECK(dg.argument_structures.size() == dg.tokens.size());
  }
}
