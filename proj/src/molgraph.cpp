//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/molgraph.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace smiself {
namespace {

std::vector<Element> standard_elements() {
  return {
    { "C", { 4 } },  { "N", { 3 } },     { "O", { 2 } },
    { "F", { 1 } },  { "S", { 2, 4, 6 } }, { "P", { 3, 5 } },
    { "Cl", { 1 } }, { "Br", { 1 } },    { "I", { 1 } },
    { "B", { 3 } },  { "H", { 1 } },
  };
}

void validate_element(const Element &e) {
  if (e.symbol.empty())
    throw std::invalid_argument("valence table: empty element symbol");
  if (e.default_valences.empty())
    throw std::invalid_argument("valence table: no valences for " + e.symbol);
  int prev = 0;
  for (int v: e.default_valences) {
    if (v <= prev) {
      throw std::invalid_argument(
          "valence table: valences must be positive and strictly increasing "
          "for " + e.symbol);
    }
    prev = v;
  }
}

std::string_view trim(std::string_view s) {
  const auto *ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

UnknownElementError::UnknownElementError(std::string_view symbol)
    : std::invalid_argument("element not in valence table: "
                            + std::string(symbol)) { }

ValenceTable::ValenceTable(): ValenceTable(standard_elements()) { }

ValenceTable::ValenceTable(std::vector<Element> elements,
                           UnknownElementPolicy policy)
    : policy_(policy) {
  static constexpr std::pair<std::string_view, int> kCore[] = {
    { "C", 4 }, { "N", 3 }, { "O", 2 }, { "F", 1 }
  };

  for (const auto &e: elements)
    validate_element(e);

  for (auto [sym, val]: kCore) {
    auto it = std::find_if(elements.begin(), elements.end(),
                           [&](const Element &e) { return e.symbol == sym; });
    if (it == elements.end()) {
      throw std::invalid_argument("valence table: missing core element "
                                  + std::string(sym));
    }
    if (it->default_valences != std::vector<int> { val }) {
      throw std::invalid_argument("valence table: core element "
                                  + std::string(sym) + " must have valence "
                                  + std::to_string(val));
    }
    elements_.push_back(*it);
  }

  for (auto &e: elements) {
    bool core = std::any_of(std::begin(kCore), std::end(kCore),
                            [&](auto p) { return p.first == e.symbol; });
    if (core)
      continue;
    if (find(e.symbol) != nullptr) {
      throw std::invalid_argument("valence table: duplicate element "
                                  + e.symbol);
    }
    elements_.push_back(std::move(e));
  }
}

const ValenceTable &ValenceTable::standard() {
  static const ValenceTable table;
  return table;
}

ValenceTable ValenceTable::from_file(const std::filesystem::path &path,
                                     UnknownElementPolicy policy) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot read valence table " + path.string());

  std::vector<Element> elements = standard_elements();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (auto hash = sv.find('#'); hash != std::string_view::npos)
      sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty())
      continue;

    auto sep = sv.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno)
                                  + ": expected `symbol valences`");
    }
    Element e { std::string(sv.substr(0, sep)), {} };
    std::string_view rest = trim(sv.substr(sep));
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string_view tok = trim(rest.substr(0, comma));
      int v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw std::invalid_argument(path.string() + ":"
                                    + std::to_string(lineno)
                                    + ": bad valence '" + std::string(tok)
                                    + "'");
      }
      e.default_valences.push_back(v);
      if (comma == std::string_view::npos)
        break;
      rest = rest.substr(comma + 1);
    }

    auto it = std::find_if(elements.begin(), elements.end(),
                           [&](const Element &x) { return x.symbol == e.symbol; });
    if (it != elements.end())
      *it = std::move(e);
    else
      elements.push_back(std::move(e));
  }
  return ValenceTable(std::move(elements), policy);
}

const Element *ValenceTable::find(std::string_view symbol) const {
  for (const auto &e: elements_) {
    if (e.symbol == symbol)
      return &e;
  }
  return nullptr;
}

std::vector<int> ValenceTable::allowed_valences(std::string_view symbol,
                                                int formal_charge) const {
  const Element *e = find(symbol);
  if (e == nullptr) {
    if (policy_ == UnknownElementPolicy::kReject)
      throw UnknownElementError(symbol);
    return { std::max(0, kWildcardValence + formal_charge) };
  }

  std::vector<int> out;
  out.reserve(e->default_valences.size());
  for (int v: e->default_valences) {
    int adjusted = std::max(0, v + formal_charge);
    if (out.empty() || out.back() < adjusted)
      out.push_back(adjusted);
  }
  return out;
}

int ValenceTable::max_valence(std::string_view symbol, int formal_charge) const {
  return allowed_valences(symbol, formal_charge).back();
}

bool is_organic_subset(std::string_view symbol) {
  static constexpr std::string_view kOrganic[] = {
    "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
  };
  return std::find(std::begin(kOrganic), std::end(kOrganic), symbol)
         != std::end(kOrganic);
}

// GraphBuilder

GraphBuilder::GraphBuilder(const MolecularGraph &graph)
    : atoms_(graph.atoms_), bonds_(graph.bonds_), adjacency_(graph.adjacency_) { }

int GraphBuilder::add_atom(Atom atom) {
  if (atom.element.empty())
    throw std::invalid_argument("atom without element");
  if (atom.explicit_hydrogens && *atom.explicit_hydrogens < 0)
    throw std::invalid_argument("negative hydrogen count");
  if (atom.isotope && *atom.isotope <= 0)
    throw std::invalid_argument("isotope must be positive");
  // Outside the organic subset SMILES has no implicit hydrogens.
  if (!atom.explicit_hydrogens && !is_organic_subset(atom.element))
    atom.explicit_hydrogens = 0;

  atoms_.push_back(std::move(atom));
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

int GraphBuilder::add_bond(int a, int b, int order, bool aromatic) {
  const int n = static_cast<int>(atoms_.size());
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::out_of_range("bond endpoint out of range");
  if (a == b)
    throw std::invalid_argument("self-loop bond");
  if (order < 1 || order > 3)
    throw std::invalid_argument("bond order must be 1, 2 or 3");
  if (has_bond(a, b))
    throw std::invalid_argument("duplicate bond");

  int idx = static_cast<int>(bonds_.size());
  bonds_.push_back({ std::min(a, b), std::max(a, b), order, aromatic });
  adjacency_[a].push_back({ b, idx });
  adjacency_[b].push_back({ a, idx });
  return idx;
}

std::optional<int> GraphBuilder::find_bond(int a, int b) const {
  if (a < 0 || a >= static_cast<int>(adjacency_.size()))
    return std::nullopt;
  for (auto nb: adjacency_[a]) {
    if (nb.atom == b)
      return nb.bond;
  }
  return std::nullopt;
}

bool GraphBuilder::has_bond(int a, int b) const {
  return find_bond(a, b).has_value();
}

MolecularGraph GraphBuilder::build() && {
  return MolecularGraph(MolecularGraph::Unchecked {}, std::move(atoms_),
                        std::move(bonds_), std::move(adjacency_));
}

// MolecularGraph

MolecularGraph::MolecularGraph(Unchecked, std::vector<Atom> atoms,
                               std::vector<Bond> bonds,
                               std::vector<std::vector<Neighbor>> adjacency)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)),
      adjacency_(std::move(adjacency)) { }

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds) {
  GraphBuilder builder;
  for (auto &a: atoms)
    builder.add_atom(std::move(a));
  for (const auto &b: bonds)
    builder.add_bond(b.begin, b.end, b.order, b.aromatic);
  *this = std::move(builder).build();
}

std::optional<int> MolecularGraph::find_bond(int a, int b) const {
  for (auto nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return std::nullopt;
}

bool MolecularGraph::is_kekulized() const {
  return std::none_of(atoms_.begin(), atoms_.end(),
                      [](const Atom &a) { return a.aromatic; })
         && std::none_of(bonds_.begin(), bonds_.end(),
                         [](const Bond &b) { return b.aromatic; });
}

MolecularGraph MolecularGraph::permuted(std::span<const int> perm) const {
  if (perm.size() != atoms_.size())
    throw std::invalid_argument("permutation size mismatch");

  std::vector<int> inverse(perm.size(), -1);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    int p = perm[i];
    if (p < 0 || p >= static_cast<int>(perm.size()) || inverse[p] != -1)
      throw std::invalid_argument("not a permutation");
    inverse[p] = static_cast<int>(i);
  }

  GraphBuilder builder;
  for (int p: perm)
    builder.add_atom(atoms_[p]);
  for (const auto &b: bonds_)
    builder.add_bond(inverse[b.begin], inverse[b.end], b.order, b.aromatic);
  return std::move(builder).build();
}

// Valence arithmetic

int used_valence(const MolecularGraph &graph, int atom) {
  if (atom < 0 || atom >= static_cast<int>(graph.size()))
    throw std::out_of_range("atom index out of range");

  int used = graph.atom(atom).explicit_hydrogens.value_or(0);
  for (auto nb: graph.neighbors(atom))
    used += graph.bond(nb.bond).order;
  return used;
}

int free_valence(const MolecularGraph &graph, int atom,
                 const ValenceTable &table) {
  int used = used_valence(graph, atom);
  const Atom &a = graph.atom(atom);
  auto allowed = table.allowed_valences(a.element, a.formal_charge);
  for (int v: allowed) {
    if (v >= used)
      return v - used;
  }
  return allowed.back() - used;
}

int hydrogen_count(const MolecularGraph &graph, int atom,
                   const ValenceTable &table) {
  const Atom &a = graph.atom(atom);
  if (a.explicit_hydrogens)
    return *a.explicit_hydrogens;
  return std::max(0, free_valence(graph, atom, table));
}

bool is_semantically_valid(const MolecularGraph &graph,
                           const ValenceTable &table) {
  for (int i = 0; i < static_cast<int>(graph.size()); ++i) {
    if (free_valence(graph, i, table) < 0)
      return false;
  }
  return true;
}

}  // namespace smiself
