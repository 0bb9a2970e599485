//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_TESTS_SUPPORT_H_
#define SMISELF_TESTS_SUPPORT_H_

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "smiself/molgraph.h"
#include "smiself/selfies.h"
#include "smiself/smiles_reader.h"
#include "smiself/smiles_writer.h"

namespace smiself::testing {

inline std::string data_path(const std::string &name) {
  return std::string(SMISELF_TEST_DATA) + "/" + name;
}

inline std::string project_data_path(const std::string &name) {
  return std::string(SMISELF_DATA_DIR) + "/" + name;
}

// Non-empty lines not starting with '#'.
inline std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (!line.empty() && line[0] != '#')
      out.push_back(line);
  }
  return out;
}

inline MolecularGraph parse(std::string_view smiles) {
  StrictParseResult r = parse_strict(smiles);
  if (!r)
    throw std::runtime_error("test molecule does not parse: "
                             + std::string(smiles));
  return std::move(*r.graph);
}

inline std::vector<int> random_permutation(std::size_t n, std::mt19937_64 &rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Oracle: backtracking search for a label- and bond-order-preserving
// bijection. Shares no code with the canonicalizer.
class BruteForceIsomorphism {
public:
  BruteForceIsomorphism(const MolecularGraph &a, const MolecularGraph &b)
      : a_(a), b_(b), map_(a.size(), -1), used_(b.size(), false) {}

  bool run() {
    if (a_.size() != b_.size() || a_.bonds().size() != b_.bonds().size())
      return false;
    return extend(0);
  }

private:
  static bool same_atom(const Atom &x, const Atom &y) {
    return x.element == y.element && x.formal_charge == y.formal_charge
           && x.isotope == y.isotope
           && x.explicit_hydrogens == y.explicit_hydrogens
           && x.aromatic == y.aromatic;
  }

  bool extend(std::size_t i) {
    if (i == a_.size())
      return true;
    int ai = static_cast<int>(i);
    for (int t = 0; t < static_cast<int>(b_.size()); ++t) {
      if (used_[t] || !same_atom(a_.atom(ai), b_.atom(t))
          || a_.degree(ai) != b_.degree(t))
        continue;
      bool ok = true;
      for (int j = 0; j < ai && ok; ++j) {
        auto ab = a_.find_bond(ai, j);
        auto bb = b_.find_bond(t, map_[j]);
        if (ab.has_value() != bb.has_value())
          ok = false;
        else if (ab && a_.bond(*ab).order != b_.bond(*bb).order)
          ok = false;
      }
      if (!ok)
        continue;
      map_[ai] = t;
      used_[t] = true;
      if (extend(i + 1))
        return true;
      used_[t] = false;
      map_[ai] = -1;
    }
    return false;
  }

  const MolecularGraph &a_;
  const MolecularGraph &b_;
  std::vector<int> map_;
  std::vector<bool> used_;
};

inline bool brute_force_isomorphic(const MolecularGraph &a,
                                   const MolecularGraph &b) {
  return BruteForceIsomorphism(a, b).run();
}

// Arbitrary labeled graph; valence is not respected.
inline MolecularGraph random_graph(std::mt19937_64 &rng, int n,
                                   const std::vector<std::string> &elements,
                                   double edge_probability, int max_order) {
  GraphBuilder b;
  std::uniform_int_distribution<std::size_t> el(0, elements.size() - 1);
  std::uniform_int_distribution<int> order(1, max_order);
  std::bernoulli_distribution edge(edge_probability);
  for (int i = 0; i < n; ++i) {
    Atom a;
    a.element = elements[el(rng)];
    b.add_atom(a);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (edge(rng))
        b.add_bond(i, j, order(rng));
    }
  }
  return std::move(b).build();
}

inline std::vector<SelfiesSymbol> random_selfies(std::mt19937_64 &rng,
                                                 std::size_t max_length,
                                                 const Alphabet &alphabet =
                                                     Alphabet::standard()) {
  const auto &symbols = alphabet.symbols();
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
  std::vector<SelfiesSymbol> out(len(rng));
  for (auto &s: out)
    s = symbols[pick(rng)];
  return out;
}

// Distinct canonical SMILES of decoded random SELFIES, with at least
// `min_atoms` atoms.
inline std::vector<std::string> random_corpus(std::size_t count,
                                              std::uint64_t seed,
                                              std::size_t min_atoms = 2,
                                              std::size_t max_length = 40) {
  std::mt19937_64 rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < count) {
    auto symbols = random_selfies(rng, max_length);
    MolecularGraph g = decode(symbols).graph;
    if (g.size() < min_atoms)
      continue;
    std::string s = canonical_smiles(g);
    if (seen.insert(s).second)
      out.push_back(s);
  }
  return out;
}

}  // namespace smiself::testing

#endif  // SMISELF_TESTS_SUPPORT_H_
