#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tagforge {

// Every failure the library can signal, as a stable code usable in tests and
// for CLI exit-code mapping. Messages are human-readable; codes are contract.
enum class Errc {
  BadAddress,          // malformed Gorn address text
  NoSuchAddress,       // address does not resolve in the tree
  NodeNotInTree,       // address_of target is not a node of the tree
  NotSubstitutionSite, // substitute() aimed at a non-subst node
  LabelMismatch,       // composition label constraint violated
  FillerNotInitial,    // substitution filler still contains a foot
  AdjunctionForbidden, // adjoin() aimed at subst/foot/anchor/term/eps/na node
  AuxNotAuxiliary,     // adjoin() argument has no (unique) foot
  IncompleteTree,      // yield/render on a tree with open subst/foot/anchor
  InvalidDerivation,   // replay/mining precondition failed
  PosMismatch,         // token POS not accepted by the tree's anchor list
  MissingToken,        // anchored tree instantiated without a token
  UnexpectedToken,     // anchorless tree instantiated with a token
  GrammarInvalid,      // operation requires a grammar with no diagnostics
  GrammarNotLexicalized, // dependency mining needs all-anchored trees
  EmptySentence,       // parser requires at least one token
  NoSuchNode,          // derivation node path does not resolve
  SyntaxError,         // unparseable grammar text
  ValidationError,     // grammar text parsed but failed validation
  TokenFormatError,    // sentence token not of the form surface/TAG
  BudgetExceeded,      // oracle enumeration hit its hard cap
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::BadAddress: return "BadAddress";
    case Errc::NoSuchAddress: return "NoSuchAddress";
    case Errc::NodeNotInTree: return "NodeNotInTree";
    case Errc::NotSubstitutionSite: return "NotSubstitutionSite";
    case Errc::LabelMismatch: return "LabelMismatch";
    case Errc::FillerNotInitial: return "FillerNotInitial";
    case Errc::AdjunctionForbidden: return "AdjunctionForbidden";
    case Errc::AuxNotAuxiliary: return "AuxNotAuxiliary";
    case Errc::IncompleteTree: return "IncompleteTree";
    case Errc::InvalidDerivation: return "InvalidDerivation";
    case Errc::PosMismatch: return "PosMismatch";
    case Errc::MissingToken: return "MissingToken";
    case Errc::UnexpectedToken: return "UnexpectedToken";
    case Errc::GrammarInvalid: return "GrammarInvalid";
    case Errc::GrammarNotLexicalized: return "GrammarNotLexicalized";
    case Errc::EmptySentence: return "EmptySentence";
    case Errc::NoSuchNode: return "NoSuchNode";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::TokenFormatError: return "TokenFormatError";
    case Errc::BudgetExceeded: return "BudgetExceeded";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Error with a source position (1-based line/column), for text readers.
class PositionedError : public Error {
 public:
  PositionedError(Errc code, const std::string& msg, int line, int column)
      : Error(code, "line " + std::to_string(line) + ", col " +
                        std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace tagforge
