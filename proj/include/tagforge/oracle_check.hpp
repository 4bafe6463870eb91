#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tagforge/chart.hpp"
#include "tagforge/oracle.hpp"

namespace tagforge {

struct EquivalenceReport {
  int sentences_checked = 0;
  std::vector<std::string> mismatches;

  bool pass() const { return mismatches.empty(); }
};

namespace oracle_detail {

inline std::string surfaces_of(const std::vector<Token>& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i) out += ' ';
    out += sentence[i].surface;
  }
  return out;
}

}  // namespace oracle_detail

// Exhaustive search vs chart parser, per sentence: membership must agree and
// the derivation sets must be identical (compared by structural identity,
// which ignores POS tags and internal instance bookkeeping).
inline EquivalenceReport check_equivalence(
    const Grammar& g, const std::vector<std::vector<Token>>& corpus,
    const OracleBudget& budget) {
  EquivalenceReport report;
  for (const std::vector<Token>& sentence : corpus) {
    ++report.sentences_checked;
    std::string name = oracle_detail::surfaces_of(sentence);

    std::set<std::string> oracle_keys;
    for (const DerivationTree& d : oracle_parse(g, sentence, budget))
      oracle_keys.insert(derivation_key(d));

    std::set<std::string> chart_keys;
    DerivationForest forest = parse_forest(g, sentence);
    for (const DerivationTree& d : enumerate_derivations(
             forest, static_cast<int>(budget.hard_cap)))
      chart_keys.insert(derivation_key(d));

    if (forest.recognized() != !oracle_keys.empty())
      report.mismatches.push_back(
          "'" + name + "': recognizer says " +
          (forest.recognized() ? "yes" : "no") + ", exhaustive search says " +
          (oracle_keys.empty() ? "no" : "yes"));

    for (const std::string& key : oracle_keys)
      if (!chart_keys.count(key))
        report.mismatches.push_back("'" + name +
                                    "': missing from chart: " + key);
    for (const std::string& key : chart_keys)
      if (!oracle_keys.count(key))
        report.mismatches.push_back("'" + name +
                                    "': extra in chart: " + key);
  }
  return report;
}

}  // namespace tagforge
