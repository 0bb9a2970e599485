//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_METRICS_H_
#define SMISELF_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smiself/molgraph.h"

namespace smiself {

class Fingerprint {
public:
  static constexpr std::size_t kDefaultWidth = 2048;
  static constexpr int kDefaultRadius = 2;

  /// Throws std::invalid_argument unless width is a power of two and radius
  /// is non-negative.
  explicit Fingerprint(std::size_t width = kDefaultWidth,
                       int radius = kDefaultRadius);

  std::size_t width() const { return width_; }
  int radius() const { return radius_; }

  void set(std::size_t bit);
  bool test(std::size_t bit) const;
  std::size_t count() const;
  const std::vector<std::uint64_t> &words() const { return words_; }

  bool operator==(const Fingerprint &) const = default;

private:
  std::size_t width_;
  int radius_;
  std::vector<std::uint64_t> words_;
};

/// Edit distance with unit-cost insertions, deletions and substitutions,
/// on raw bytes.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Circular fingerprint. Atom identifiers start from (element, charge,
/// degree, bond-order sum, hydrogen count) and absorb the sorted
/// (bond order, neighbor identifier) list once per radius step. An
/// environment whose bond set was already seen is not added again.
Fingerprint morgan_fingerprint(const MolecularGraph &graph,
                               int radius = Fingerprint::kDefaultRadius,
                               std::size_t width = Fingerprint::kDefaultWidth,
                               const ValenceTable &table =
                                   ValenceTable::standard());

/// |a & b| / |a | b|, and 1 when both are empty. Throws
/// std::invalid_argument when width or radius differ.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

/// Mean of 1 - tanimoto over unordered pairs; nullopt below two entries.
std::optional<double> diversity(std::span<const Fingerprint> fingerprints);
std::optional<double> diversity(std::span<const MolecularGraph> graphs);

/// Non-induced subgraph match on element and bond order. Pattern atoms with
/// a nonzero charge need the same charge; bracket atoms with hydrogens need
/// at least that many on the target atom.
bool membership(const MolecularGraph &graph, const MolecularGraph &pattern,
                const ValenceTable &table = ValenceTable::standard());

struct PatternSet {
  std::string name;
  std::vector<std::string> smiles;
  std::vector<MolecularGraph> patterns;

  // True when any pattern is contained in `graph`.
  bool matches(const MolecularGraph &graph,
               const ValenceTable &table = ValenceTable::standard()) const;
};

/// Reads `name<TAB>smiles` lines; '#' starts a comment. Lines with the same
/// name are merged into one set, in first-appearance order. Throws
/// std::invalid_argument on a malformed line or unparseable pattern.
std::vector<PatternSet> load_patterns(std::istream &in);
std::vector<PatternSet> load_patterns(const std::filesystem::path &path);

/// acrylate, isocyanate and chain_extender.
const std::vector<PatternSet> &builtin_patterns();

/// Fraction of strings that parse strictly; nullopt for an empty corpus.
std::optional<double> validity(std::span<const std::string> corpus);

/// Both sides parse strictly and have the same canonical SMILES.
bool exact_match(std::string_view prediction, std::string_view reference);

/// Throws std::invalid_argument on a length mismatch; nullopt when empty.
std::optional<double> exact_match(std::span<const std::string> predictions,
                                  std::span<const std::string> references);

/// valid_after / invalid_before; nullopt when nothing was invalid. Throws
/// std::invalid_argument when valid_after exceeds invalid_before.
std::optional<double> correction_rate(std::size_t invalid_before,
                                      std::size_t valid_after);

struct MetricsReport {
  std::size_t predictions = 0;
  std::size_t valid_predictions = 0;
  std::size_t references = 0;
  std::size_t invalid_before = 0;
  std::size_t valid_after = 0;

  std::optional<double> validity;
  std::optional<double> exact_match;
  std::optional<double> mean_levenshtein;
  std::optional<double> mean_tanimoto;  // over pairs where both parse
  std::optional<double> diversity;      // over valid predictions
  std::optional<double> membership;     // over valid predictions
  std::optional<double> correction_rate;
};

struct EvaluationInputs {
  std::span<const std::string> predictions;
  // Same length as predictions when present.
  std::optional<std::span<const std::string>> references;
  // Pre-correction strings, aligned with predictions; enables
  // correction_rate.
  std::optional<std::span<const std::string>> originals;
  const PatternSet *membership_class = nullptr;
  int radius = Fingerprint::kDefaultRadius;
  std::size_t width = Fingerprint::kDefaultWidth;
};

MetricsReport evaluate(const EvaluationInputs &inputs,
                       const ValenceTable &table = ValenceTable::standard());

}  // namespace smiself

#endif  // SMISELF_METRICS_H_
