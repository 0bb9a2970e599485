//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_MOLGRAPH_H_
#define SMISELF_MOLGRAPH_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smiself {

struct Element {
  std::string symbol;
  // Allowed total bond counts, strictly increasing and positive.
  std::vector<int> default_valences;
};

enum class UnknownElementPolicy {
  kWildcard,
  kReject,
};

class UnknownElementError: public std::invalid_argument {
public:
  explicit UnknownElementError(std::string_view symbol);
};

/// Element symbol -> allowed valences. The first four entries are always
/// C, N, O and F with single valences 4, 3, 2 and 1.
class ValenceTable {
public:
  static constexpr int kWildcardValence = 8;

  ValenceTable();

  /// Entries for C/N/O/F are validated; other entries are appended in the
  /// given order. Throws std::invalid_argument on malformed input.
  explicit ValenceTable(std::vector<Element> elements,
                        UnknownElementPolicy policy =
                            UnknownElementPolicy::kWildcard);

  static const ValenceTable &standard();

  /// Loads `symbol v1,v2,...` lines ('#' starts a comment) and merges them
  /// over the standard table.
  static ValenceTable from_file(const std::filesystem::path &path,
                                UnknownElementPolicy policy =
                                    UnknownElementPolicy::kWildcard);

  const Element *find(std::string_view symbol) const;
  const std::vector<Element> &elements() const { return elements_; }
  UnknownElementPolicy policy() const { return policy_; }

  // Charge-adjusted valences: each default valence shifted by the formal
  // charge and floored at zero. Unknown elements get the wildcard valence,
  // or throw UnknownElementError under kReject.
  std::vector<int> allowed_valences(std::string_view symbol,
                                    int formal_charge = 0) const;
  int max_valence(std::string_view symbol, int formal_charge = 0) const;

private:
  std::vector<Element> elements_;
  UnknownElementPolicy policy_ = UnknownElementPolicy::kWildcard;
};

struct Atom {
  std::string element;
  int formal_charge = 0;
  std::optional<int> explicit_hydrogens;
  std::optional<int> isotope;
  bool aromatic = false;

  bool operator==(const Atom &) const = default;
};

struct Bond {
  int begin = 0;  // begin < end
  int end = 0;
  int order = 1;
  bool aromatic = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Elements that SMILES may write without brackets.
bool is_organic_subset(std::string_view symbol);

class MolecularGraph;

/// Mutable staging area for a MolecularGraph. Rejects self-loops, duplicate
/// bonds and out-of-range endpoints at insertion time.
class GraphBuilder {
public:
  GraphBuilder() = default;
  explicit GraphBuilder(const MolecularGraph &graph);

  int add_atom(Atom atom);
  int add_bond(int a, int b, int order, bool aromatic = false);

  bool has_bond(int a, int b) const;
  std::optional<int> find_bond(int a, int b) const;

  Atom &atom(int i) { return atoms_.at(i); }
  Bond &bond(int i) { return bonds_.at(i); }
  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t bond_count() const { return bonds_.size(); }

  MolecularGraph build() &&;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

class MolecularGraph {
public:
  MolecularGraph() = default;

  /// Validates the invariants and throws std::invalid_argument on failure.
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_.at(i); }
  const Bond &bond(int i) const { return bonds_.at(i); }
  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  std::span<const Neighbor> neighbors(int i) const { return adjacency_.at(i); }
  int degree(int i) const { return static_cast<int>(adjacency_.at(i).size()); }

  std::optional<int> find_bond(int a, int b) const;
  bool has_bond(int a, int b) const { return find_bond(a, b).has_value(); }

  bool is_kekulized() const;

  /// Atom i of the result is atom perm[i] of this graph.
  MolecularGraph permuted(std::span<const int> perm) const;

private:
  friend class GraphBuilder;
  struct Unchecked { };
  MolecularGraph(Unchecked, std::vector<Atom> atoms, std::vector<Bond> bonds,
                 std::vector<std::vector<Neighbor>> adjacency);

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Sum of incident bond orders plus explicit hydrogens. Throws
/// std::out_of_range for a bad index.
int used_valence(const MolecularGraph &graph, int atom);

/// Smallest allowed valence that fits the used valence, minus the used
/// valence. Negative when even the largest allowed valence is exceeded.
int free_valence(const MolecularGraph &graph, int atom,
                 const ValenceTable &table = ValenceTable::standard());

/// Hydrogens the atom carries: explicit count for bracket atoms, otherwise
/// whatever fills the smallest fitting valence.
int hydrogen_count(const MolecularGraph &graph, int atom,
                   const ValenceTable &table = ValenceTable::standard());

bool is_semantically_valid(const MolecularGraph &graph,
                           const ValenceTable &table = ValenceTable::standard());

/// Labeled-graph isomorphism (element, charge, isotope, explicit H, bond
/// order), decided by canonical SMILES equality.
bool graphs_equivalent(const MolecularGraph &a, const MolecularGraph &b);

}  // namespace smiself

#endif  // SMISELF_MOLGRAPH_H_
