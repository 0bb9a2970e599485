//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_SMILES_READER_H_
#define SMISELF_SMILES_READER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smiself/molgraph.h"

namespace smiself {

enum class TokenKind {
  kOrganicAtom,
  kBracketAtom,
  kBond,
  kRingDigit,
  kOpenParen,
  kCloseParen,
  kDot,
  kGarbage,
};

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // byte offset into the input

  bool operator==(const Token &) const = default;
};

/// Total segmentation: concatenating the lexemes reproduces the input.
/// Unrecognized bytes become one-byte kGarbage tokens.
std::vector<Token> tokenize(std::string_view input);

// The six invalid-SMILES categories, plus kValid.
enum class ErrorClass {
  kValid,
  kSyntaxError,
  kUnclosedRing,
  kParenthesesError,
  kBondAlreadyExists,
  kAromaticityError,
  kValenceError,
};

inline constexpr ErrorClass kAllErrorClasses[] = {
  ErrorClass::kValid,
  ErrorClass::kSyntaxError,
  ErrorClass::kUnclosedRing,
  ErrorClass::kParenthesesError,
  ErrorClass::kBondAlreadyExists,
  ErrorClass::kAromaticityError,
  ErrorClass::kValenceError,
};

std::string_view to_string(ErrorClass c);
std::optional<ErrorClass> error_class_from_string(std::string_view name);

struct Diagnostic {
  ErrorClass error_class;
  // Byte offset for parser diagnostics; atom index for diagnostics emitted
  // by kekulize() on a bare graph.
  std::size_t position;
  std::string message;
  std::string recovery_action;
};

struct ParseResult {
  MolecularGraph graph;  // kekulized, no dangling or duplicate bonds
  std::vector<Diagnostic> diagnostics;
  // Things dropped without being errors, e.g. stereo marks.
  std::vector<std::string> notes;
  // Byte offset of the token that produced each atom.
  std::vector<std::size_t> atom_positions;

  bool ok() const { return diagnostics.empty(); }
};

/// Never fails. Recovers from every error class and records one Diagnostic
/// per recovery:
///  - unmatched ')' is skipped; unmatched '(' is closed at end of input
///  - ring bonds left open at the end are dropped
///  - ring closures onto the same atom or an existing bond are dropped
///  - garbage bytes, bonds without a following atom, and malformed bracket
///    atoms are skipped
///  - conflicting ring-closure bond orders keep the higher order
///  - aromatic systems that cannot be kekulized are demoted to single bonds
///  - valence violations are reported but the bonds are kept
ParseResult parse_lenient(std::string_view input,
                          const ValenceTable &table = ValenceTable::standard());

struct StrictParseResult {
  std::optional<MolecularGraph> graph;
  std::optional<Diagnostic> error;  // set iff graph is empty

  explicit operator bool() const { return graph.has_value(); }
};

/// Succeeds iff the input is syntactically clean, kekulizable and within
/// valence limits. The returned graph is kekulized.
StrictParseResult parse_strict(std::string_view input,
                               const ValenceTable &table =
                                   ValenceTable::standard());

/// kValid iff parse_strict succeeds, otherwise the class of the first error.
/// Syntax errors are reported before aromaticity, aromaticity before valence.
ErrorClass classify_error(std::string_view input,
                          const ValenceTable &table = ValenceTable::standard());

struct KekulizeResult {
  MolecularGraph graph;
  std::vector<Diagnostic> diagnostics;  // positions are atom indices
};

/// Assigns alternating bond orders to aromatic systems by maximum matching.
/// Aromatic atoms outside rings, and systems with no perfect matching, are
/// demoted to non-aromatic atoms with single bonds.
KekulizeResult kekulize(const MolecularGraph &graph,
                        const ValenceTable &table = ValenceTable::standard());

/// Bonds that lie on at least one cycle.
std::vector<bool> ring_bonds(const MolecularGraph &graph);

}  // namespace smiself

#endif  // SMISELF_SMILES_READER_H_
