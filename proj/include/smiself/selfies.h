//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_SELFIES_H_
#define SMISELF_SELFIES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smiself/molgraph.h"

namespace smiself {

enum class SymbolKind {
  kAtom,
  kBranch,
  kRing,
  kEpsilon,
  kDot,  // fragment separator, written "."
};

struct SelfiesSymbol {
  SymbolKind kind = SymbolKind::kEpsilon;
  int bond_prefix = 0;  // 0 (none), 2 ('=') or 3 ('#')
  int size_digits = 0;  // 1..3 for branches and rings
  Atom atom;            // kAtom only
  std::string raw;      // "[=C]", "[Branch1]", "[epsilon]", "."

  static SelfiesSymbol make_atom(Atom atom, int bond_prefix = 0);
  static SelfiesSymbol make_branch(int size_digits, int bond_prefix = 0);
  static SelfiesSymbol make_ring(int size_digits, int bond_prefix = 0);
  static SelfiesSymbol epsilon();
  static SelfiesSymbol dot();

  /// Structural parse of a lexeme. Accepts decorated atoms such as
  /// "[=13CH1+1]" for any element symbol; does not consult an alphabet.
  static std::optional<SelfiesSymbol> parse(std::string_view lexeme);

  // Requested bond order: the prefix, or 1 when there is none.
  int order() const { return bond_prefix == 0 ? 1 : bond_prefix; }

  bool operator==(const SelfiesSymbol &other) const { return raw == other.raw; }
};

using SymbolIndexMap = std::unordered_map<std::string, int>;

/// Symbol set for a valence table, in index order:
///   1..14  [epsilon] [F] [=O] [#N] [O] [N] [=N] [C] [=C] [#C]
///          [Branch1] [Branch2] [Branch3] [Ring1]
///   15..28 [Ring2] [Ring3], then the '=' and '#' branch and ring variants
///   29..   [X] [=X] [#X] for every table element other than C, N, O, F
/// "." is accepted as a fragment separator but has no index. Decorated atoms
/// (charge, hydrogens, isotope) of table elements are members too, and so is
/// any element symbol when the table treats unknown elements as wildcards.
class Alphabet {
public:
  explicit Alphabet(const ValenceTable &table = ValenceTable::standard());

  static const Alphabet &standard();

  const std::vector<SelfiesSymbol> &symbols() const { return symbols_; }
  const SymbolIndexMap &index_map() const { return index_; }
  const ValenceTable &table() const { return table_; }

  /// 1-based index, or 0 for symbols outside the indexed set.
  int index_of(const SelfiesSymbol &symbol) const;
  int index_of(std::string_view lexeme) const;

  bool contains(std::string_view lexeme) const;
  std::optional<SelfiesSymbol> lookup(std::string_view lexeme) const;

  // Value of a symbol read as a base-16 digit: index - 1 for the first 16
  // symbols, 0 otherwise.
  int digit_value(const SelfiesSymbol &symbol) const;
  const SelfiesSymbol &digit_symbol(int value) const;

  // Bond capacity of an atom symbol; negative when its hydrogens alone
  // overflow the valence, nullopt for elements the table rejects.
  std::optional<int> capacity(const Atom &atom) const;

private:
  ValenceTable table_;
  std::vector<SelfiesSymbol> symbols_;
  SymbolIndexMap index_;
};

struct SelfiesToken {
  std::string lexeme;
  bool in_alphabet;
  std::size_t position;
};

/// Total: bracketed lexemes become one token each, everything else one
/// token per character.
std::vector<SelfiesToken> tokenize_selfies(
    std::string_view input, const Alphabet &alphabet = Alphabet::standard());

/// Drops every token outside the alphabet.
std::vector<SelfiesSymbol> edit_invalid(
    std::string_view input, const Alphabet &alphabet = Alphabet::standard());

std::string to_string(std::span<const SelfiesSymbol> symbols);

enum class TraceAction {
  kPlacedAtom,
  kReducedBond,  // placed, with a lower order than requested
  kIgnored,
  kOpenedBranch,
  kClosedRing,
  kTerminated,
};

struct TraceEntry {
  std::size_t symbol_index;
  TraceAction action;
  int atom = -1;             // atom placed, or ring target
  int head = -1;             // atom the bond attaches to
  int requested_order = 0;
  int order = 0;             // bond order actually used
  int head_capacity = 0;     // head's free slots before this symbol
  int atom_capacity = 0;     // new atom's capacity, or ring target's slots
  int branch_length = 0;
  bool terminates_scope = false;
};

using DecodeTrace = std::vector<TraceEntry>;

struct DecodeResult {
  MolecularGraph graph;
  DecodeTrace trace;
};

/// Derivation with a per-atom remaining-capacity state. Every bond is
/// bounded by the free slots of both endpoints, so the result is always
/// semantically valid. Atom symbols whose element the table rejects are
/// ignored.
DecodeResult decode(std::span<const SelfiesSymbol> symbols,
                    const Alphabet &alphabet = Alphabet::standard());

/// edit_invalid, then decode.
DecodeResult decode(std::string_view selfies,
                    const Alphabet &alphabet = Alphabet::standard());

/// Depth-first from the lowest-index atom of each fragment, visiting
/// neighbors in index order. Does not check validity; bond prefixes the
/// core alphabet lacks ([#O], [=F]) are lowered to the nearest member.
std::vector<SelfiesSymbol> encode(const MolecularGraph &graph,
                                  const Alphabet &alphabet =
                                      Alphabet::standard());

}  // namespace smiself

#endif  // SMISELF_SELFIES_H_
