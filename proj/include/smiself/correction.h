//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_CORRECTION_H_
#define SMISELF_CORRECTION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smiself/selfies.h"
#include "smiself/smiles_reader.h"

namespace smiself {

struct CorrectionReport {
  std::string input;
  std::vector<Diagnostic> diagnostics;
  std::string intermediate_selfies;  // empty when the input was valid
  std::string output;                // canonical SMILES, or "" (sentinel)
  bool was_already_valid = false;
  // Valid input: always false. Invalid input: the corrected molecule differs
  // from the leniently parsed one.
  bool changed = false;
  std::vector<std::string> notes;

  bool is_sentinel() const { return output.empty(); }
};

/// Valid input is canonicalized as is. Anything else goes through
/// lenient parse, SELFIES encode and decode, then canonicalization, so the
/// output always parses strictly unless decoding left no atoms, in which
/// case the output is "" and a note says so.
CorrectionReport smiself_correct(std::string_view input,
                                 const Alphabet &alphabet =
                                     Alphabet::standard());

enum class MutationKind {
  kParenInsert,
  kParenDelete,
  kRingDigitDelete,
  kRingClosureDuplicate,
  kBondInsert,
  kGarbageInsert,
  kCaseFlip,
};

inline constexpr MutationKind kAllMutationKinds[] = {
  MutationKind::kParenInsert,   MutationKind::kParenDelete,
  MutationKind::kRingDigitDelete, MutationKind::kRingClosureDuplicate,
  MutationKind::kBondInsert,    MutationKind::kGarbageInsert,
  MutationKind::kCaseFlip,
};

std::string_view to_string(MutationKind kind);
std::optional<MutationKind> mutation_kind_from_string(std::string_view name);

// `position` is a byte offset for insertions and a token index for edits
// that target existing tokens (deletions, duplications, case flips).
struct Mutation {
  MutationKind kind;
  std::size_t position = 0;
  char character = 0;  // inserted character, where the kind inserts one
};

/// Kinds that have something to act on in `input`.
std::vector<MutationKind> applicable_mutations(std::string_view input);

/// Throws std::invalid_argument when the mutation has nothing to act on.
/// Positions are reduced modulo the number of candidate sites.
std::string apply_mutation(std::string_view input, const Mutation &mutation);

/// Deterministic in (input, seed, kinds). Picks an applicable kind from
/// `kinds` (all kinds when empty), then a site and character. Returns the
/// input unchanged when no requested kind applies.
std::string mutate_smiles(std::string_view input, std::uint64_t seed,
                          std::span<const MutationKind> kinds = {});

}  // namespace smiself

#endif  // SMISELF_CORRECTION_H_
