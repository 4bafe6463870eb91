// tagforge: validate TAG grammars, parse tagged sentences into derivations,
// and cross-check the parser against exhaustive search.
//
// Exit codes: 0 success; 1 no parse / equivalence mismatch; 2 input error;
// 3 grammar error; 4 search budget exceeded.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tagforge/tagforge.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoParse = 1;
constexpr int kExitInput = 2;
constexpr int kExitGrammar = 3;
constexpr int kExitBudget = 4;

int exit_code_for(tagforge::Errc code) {
  switch (code) {
    case tagforge::Errc::BudgetExceeded:
      return kExitBudget;
    case tagforge::Errc::GrammarInvalid:
    case tagforge::Errc::ValidationError:
    case tagforge::Errc::GrammarNotLexicalized:
      return kExitGrammar;
    default:
      return kExitInput;
  }
}

std::string read_file_or_stdin(const std::string& path) {
  if (path.empty()) {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw tagforge::Error(tagforge::Errc::SyntaxError,
                          "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

tagforge::Grammar load_grammar(const std::string& path) {
  return tagforge::read_grammar(read_file_or_stdin(path));
}

int cmd_validate(const std::string& path) {
  std::string text;
  try {
    text = read_file_or_stdin(path);
  } catch (const tagforge::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  tagforge::GrammarDocument doc;
  try {
    doc = tagforge::parse_grammar_document(text);
  } catch (const tagforge::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  auto diags = tagforge::validate_grammar(doc.grammar);
  for (const auto& d : diags) {
    auto loc = doc.tree_locations.find(d.tree);
    if (loc != doc.tree_locations.end())
      std::cerr << "line " << loc->second.line << ", col "
                << loc->second.column << ": ";
    std::cerr << d.str() << "\n";
  }
  if (!diags.empty()) return kExitGrammar;
  std::cerr << "grammar ok: " << doc.grammar.initial_trees.size()
            << " initial, " << doc.grammar.auxiliary_trees.size()
            << " auxiliary tree(s)\n";
  return kExitOk;
}

std::string render_one(const tagforge::Grammar& g,
                       const tagforge::DerivationTree& d,
                       const std::string& format) {
  using namespace tagforge;
  if (format == "derivation")
    return render_derivation(d, DerivationStyle::Canonical);
  if (format == "paper") return render_derivation(d, DerivationStyle::Paper);
  if (format == "derived")
    return render_derived(replay_derivation(g, d)) + "\n";
  if (format == "deps")
    return render_deps(mine_dependencies(g, d), DepsStyle::Triples);
  if (format == "argstruct")
    return render_deps(mine_dependencies(g, d), DepsStyle::ArgStruct);
  return render_dot(d);  // "dot"
}

int cmd_parse(const std::string& grammar_path, const std::string& input_path,
              const std::string& format, int max_derivations) {
  tagforge::Grammar g;
  try {
    g = load_grammar(grammar_path);
  } catch (const tagforge::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  }

  std::vector<std::vector<tagforge::Token>> sentences;
  try {
    sentences = tagforge::read_sentences(read_file_or_stdin(input_path));
  } catch (const tagforge::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  if (sentences.empty()) {
    std::cerr << "no sentences in input\n";
    return kExitInput;
  }

  int worst = kExitOk;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::ostringstream block;
    try {
      tagforge::DerivationForest forest =
          tagforge::parse_forest(g, sentences[s]);
      auto derivations =
          tagforge::enumerate_derivations(forest, max_derivations);
      if (derivations.empty()) {
        std::string surfaces;
        for (const auto& t : sentences[s]) {
          if (!surfaces.empty()) surfaces += ' ';
          surfaces += t.surface;
        }
        std::cerr << "no parse (sentence " << s + 1 << "): " << surfaces
                  << "\n";
        worst = std::max(worst, kExitNoParse);
        continue;
      }
      for (std::size_t i = 0; i < derivations.size(); ++i) {
        block << "== parse " << i + 1 << "/" << derivations.size() << " ==\n";
        block << render_one(g, derivations[i], format);
      }
    } catch (const tagforge::Error& e) {
      std::cerr << e.what() << "\n";
      return exit_code_for(e.code());
    }
    std::cout << block.str();
  }
  std::cout.flush();
  return worst;
}

int cmd_oracle(const std::string& grammar_path, const std::string& input_path,
               bool have_input, int max_ops, int max_len, bool check_parser) {
  tagforge::Grammar g;
  try {
    g = load_grammar(grammar_path);
  } catch (const tagforge::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  }

  tagforge::OracleBudget budget;
  budget.max_ops = max_ops;
  budget.max_len = max_len;

  std::vector<std::vector<tagforge::Token>> file_sentences;
  std::vector<tagforge::Lexeme> vocabulary;
  if (have_input) {
    try {
      file_sentences = tagforge::read_sentences(read_file_or_stdin(input_path));
    } catch (const tagforge::Error& e) {
      std::cerr << e.what() << "\n";
      return kExitInput;
    }
    for (const auto& sentence : file_sentences)
      for (const auto& tok : sentence) {
        tagforge::Lexeme lex{tok.surface, 0, tok.pos};
        bool dup = false;
        for (const auto& v : vocabulary)
          if (v.surface == lex.surface && v.pos == lex.pos) dup = true;
        if (!dup) vocabulary.push_back(lex);
      }
  }

  try {
    if (!check_parser) {
      auto entries = tagforge::enumerate_language(g, budget, vocabulary);
      std::string last;
      for (const auto& entry : entries) {
        std::string line = entry.surface_string();
        if (line != last) std::cout << line << "\n";
        last = line;
      }
      std::cerr << "enumerated " << entries.size() << " derivation(s)\n";
      return kExitOk;
    }

    // Corpus to cross-check: the input file's sentences when given,
    // otherwise everything the exhaustive search can reach.
    std::vector<std::vector<tagforge::Token>> corpus;
    if (have_input) {
      corpus = file_sentences;
    } else {
      std::set<std::string> seen;
      for (const auto& entry :
           tagforge::enumerate_language(g, budget, vocabulary))
        if (seen.insert(entry.surface_string()).second)
          corpus.push_back(entry.tokens);
    }

    tagforge::EquivalenceReport report =
        tagforge::check_equivalence(g, corpus, budget);
    for (const auto& m : report.mismatches) std::cout << m << "\n";
    std::cerr << "checked " << report.sentences_checked << " sentence(s), "
              << report.mismatches.size() << " mismatch(es)\n";
    return report.pass() ? kExitOk : kExitNoParse;
  } catch (const tagforge::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree Adjoining Grammar toolkit"};
  app.require_subcommand(1);

  std::string grammar_path, input_path, format = "derivation";
  int max_derivations = 64;
  int max_ops = 0, max_len = 10;
  bool check_parser = false;

  CLI::App* validate =
      app.add_subcommand("validate", "check a grammar file for well-formedness");
  validate->add_option("grammar", grammar_path, "grammar file")->required();

  CLI::App* parse = app.add_subcommand(
      "parse", "parse POS-tagged sentences and print each derivation");
  parse->add_option("--grammar,-g", grammar_path, "grammar file")->required();
  parse
      ->add_option("--format,-f", format,
                   "derivation|derived|paper|deps|argstruct|dot")
      ->check(CLI::IsMember({"derivation", "derived", "paper", "deps",
                             "argstruct", "dot"}));
  parse
      ->add_option("--max-derivations,-m", max_derivations,
                   "cap on derivations per sentence")
      ->check(CLI::PositiveNumber);
  parse->add_option("file", input_path,
                    "sentence file (standard input when omitted)");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "exhaustively enumerate the grammar's language; optionally "
                "cross-check the chart parser");
  oracle->add_option("--grammar,-g", grammar_path, "grammar file")->required();
  oracle->add_option("--max-ops", max_ops, "composition operations per derivation")
      ->required()
      ->check(CLI::NonNegativeNumber);
  oracle->add_option("--max-len", max_len, "maximum yield length")
      ->check(CLI::PositiveNumber);
  oracle->add_flag("--check-parser", check_parser,
                   "compare search results against the chart parser");
  oracle->add_option("file", input_path,
                     "tagged sentences supplying the anchoring vocabulary "
                     "and (with --check-parser) the corpus to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (validate->parsed()) return cmd_validate(grammar_path);
  if (parse->parsed())
    return cmd_parse(grammar_path,
                     parse->count("file") ? input_path : std::string(),
                     format, max_derivations);
  return cmd_oracle(grammar_path, input_path,
                    oracle->count("file") > 0, max_ops, max_len,
                    check_parser);
}
