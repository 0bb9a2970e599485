//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_SMILES_WRITER_H_
#define SMISELF_SMILES_WRITER_H_

#include <span>
#include <string>
#include <vector>

#include "smiself/molgraph.h"

namespace smiself {

// rank[atom] is the atom's position in a total order; a permutation of
// 0..n-1.
using CanonicalRank = std::vector<int>;

/// Writes the graph in atom-index order: each fragment starts at its lowest
/// index atom and neighbors are visited in ascending index order. Total on
/// any well-formed graph, including valence violations.
std::string write_smiles(const MolecularGraph &graph);

/// Same traversal, ordered by `rank` instead of atom index. Throws
/// std::invalid_argument unless `rank` is a permutation of 0..n-1.
std::string write_smiles(const MolecularGraph &graph,
                         std::span<const int> rank);

/// Label-independent total order: color refinement on atom invariants, then
/// individualization of tied atoms, keeping the lexicographically smallest
/// relabeled graph. Automorphisms found along the way prune the search.
CanonicalRank canonical_rank(const MolecularGraph &graph);

std::string canonical_smiles(const MolecularGraph &graph);

}  // namespace smiself

#endif  // SMISELF_SMILES_WRITER_H_
