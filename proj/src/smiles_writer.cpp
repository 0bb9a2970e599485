//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/smiles_writer.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "atom_spec.h"

namespace smiself {
namespace {

bool writes_bare(const Atom &atom) {
  if (atom.formal_charge != 0 || atom.isotope || atom.explicit_hydrogens)
    return false;
  if (atom.aromatic) {
    static constexpr std::string_view kBareAromatic[] = { "B", "C", "N",
                                                          "O", "P", "S" };
    return std::find(std::begin(kBareAromatic), std::end(kBareAromatic),
                     atom.element)
           != std::end(kBareAromatic);
  }
  return is_organic_subset(atom.element);
}

std::string atom_text(const Atom &atom) {
  if (!writes_bare(atom))
    return "[" + internal::format_atom_spec(atom, false) + "]";
  std::string out = atom.element;
  if (atom.aromatic)
    out[0] = static_cast<char>(out[0] - 'A' + 'a');
  return out;
}

std::string_view bond_text(const MolecularGraph &g, int b) {
  const Bond &bond = g.bond(b);
  if (bond.aromatic)
    return ":";
  switch (bond.order) {
  case 2:
    return "=";
  case 3:
    return "#";
  default:
    // A plain single bond between lowercase atoms would re-read as aromatic.
    return g.atom(bond.begin).aromatic && g.atom(bond.end).aromatic ? "-" : "";
  }
}

std::string ring_label(int d) {
  if (d < 10)
    return std::string(1, static_cast<char>('0' + d));
  if (d < 100)
    return "%" + std::to_string(d);
  return "%(" + std::to_string(d) + ")";
}

struct Traversal {
  std::vector<int> roots;
  std::vector<int> preorder;  // atom -> visit index
  std::vector<int> parent_bond;
  std::vector<std::vector<int>> children;
  std::vector<std::vector<int>> ring_open;   // bonds, at the ancestor
  std::vector<std::vector<int>> ring_close;  // bonds, at the descendant
};

Traversal traverse(const MolecularGraph &g, std::span<const int> rank) {
  const int n = static_cast<int>(g.size());
  Traversal t;
  t.preorder.assign(n, -1);
  t.parent_bond.assign(n, -1);
  t.children.resize(n);
  t.ring_open.resize(n);
  t.ring_close.resize(n);

  std::vector<std::vector<Neighbor>> sorted(n);
  for (int i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    sorted[i].assign(nb.begin(), nb.end());
    std::sort(sorted[i].begin(), sorted[i].end(),
              [&](Neighbor a, Neighbor b) {
                return rank[a.atom] < rank[b.atom];
              });
  }

  std::vector<int> by_rank(n);
  for (int i = 0; i < n; ++i)
    by_rank[rank[i]] = i;

  std::vector<bool> bond_done(g.bonds().size(), false);
  int counter = 0;
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root: by_rank) {
    if (t.preorder[root] != -1)
      continue;
    t.roots.push_back(root);
    t.preorder[root] = counter++;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto &[v, next] = stack.back();
      if (next == sorted[v].size()) {
        stack.pop_back();
        continue;
      }
      Neighbor nb = sorted[v][next++];
      if (bond_done[nb.bond])
        continue;
      bond_done[nb.bond] = true;
      if (t.preorder[nb.atom] == -1) {
        t.preorder[nb.atom] = counter++;
        t.parent_bond[nb.atom] = nb.bond;
        t.children[v].push_back(nb.atom);
        stack.emplace_back(nb.atom, 0);
      } else {
        t.ring_close[v].push_back(nb.bond);
        t.ring_open[nb.atom].push_back(nb.bond);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    std::sort(t.ring_open[i].begin(), t.ring_open[i].end(), [&](int a, int b) {
      return t.preorder[g.bond(a).other(i)] < t.preorder[g.bond(b).other(i)];
    });
  }
  return t;
}

std::string emit(const MolecularGraph &g, const Traversal &t) {
  std::string out;
  std::vector<int> digit(g.bonds().size(), 0);
  std::vector<bool> in_use(1, true);  // label 0 is never handed out

  auto allocate = [&]() {
    for (std::size_t d = 1; d < in_use.size(); ++d) {
      if (!in_use[d]) {
        in_use[d] = true;
        return static_cast<int>(d);
      }
    }
    in_use.push_back(true);
    return static_cast<int>(in_use.size()) - 1;
  };

  // Positive entries are atoms to write; the negatives mark '(' and ')'.
  constexpr int kOpen = -1, kClose = -2;
  std::vector<int> tasks;
  for (std::size_t r = 0; r < t.roots.size(); ++r) {
    if (r > 0)
      out += '.';
    tasks.push_back(t.roots[r]);
    while (!tasks.empty()) {
      int task = tasks.back();
      tasks.pop_back();
      if (task == kOpen) {
        out += '(';
        continue;
      }
      if (task == kClose) {
        out += ')';
        continue;
      }

      int v = task;
      if (t.parent_bond[v] != -1)
        out += bond_text(g, t.parent_bond[v]);
      out += atom_text(g.atom(v));

      std::vector<int> released;
      for (int b: t.ring_close[v]) {
        out += bond_text(g, b);
        out += ring_label(digit[b]);
        released.push_back(digit[b]);
      }
      for (int b: t.ring_open[v]) {
        digit[b] = allocate();
        out += ring_label(digit[b]);
      }
      for (int d: released)
        in_use[d] = false;

      const auto &kids = t.children[v];
      if (kids.empty())
        continue;
      tasks.push_back(kids.back());
      for (std::size_t k = kids.size() - 1; k-- > 0;) {
        tasks.push_back(kClose);
        tasks.push_back(kids[k]);
        tasks.push_back(kOpen);
      }
    }
  }
  return out;
}

void refine(const MolecularGraph &g, std::vector<int> &color) {
  const int n = static_cast<int>(g.size());
  auto distinct = [&] {
    std::vector<int> c = color;
    std::sort(c.begin(), c.end());
    return std::unique(c.begin(), c.end()) - c.begin();
  };

  auto cells = distinct();
  std::vector<std::vector<std::pair<int, int>>> env(n);
  std::vector<int> idx(n);
  while (cells < n) {
    for (int i = 0; i < n; ++i) {
      env[i].clear();
      for (auto nb: g.neighbors(i))
        env[i].emplace_back(color[nb.atom], g.bond(nb.bond).order);
      std::sort(env[i].begin(), env[i].end());
    }
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](int a, int b) {
      return std::tie(color[a], env[a]) < std::tie(color[b], env[b]);
    };
    std::sort(idx.begin(), idx.end(), less);

    std::vector<int> next(n);
    int new_cells = 0;
    for (int k = 0; k < n; ++k) {
      if (k == 0 || less(idx[k - 1], idx[k])) {
        next[idx[k]] = k;
        ++new_cells;
      } else {
        next[idx[k]] = next[idx[k - 1]];
      }
    }
    color = std::move(next);
    if (new_cells == cells)
      break;
    cells = new_cells;
  }
}

std::vector<int> initial_colors(const MolecularGraph &g) {
  const int n = static_cast<int>(g.size());
  using Key = std::tuple<std::string, bool, int, int, int, int, int>;
  std::vector<Key> keys(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    int orders = 0;
    for (auto nb: g.neighbors(i))
      orders += g.bond(nb.bond).order;
    keys[i] = { a.element, a.aromatic, a.formal_charge, a.isotope.value_or(0),
                a.explicit_hydrogens.value_or(-1), g.degree(i), orders };
  }
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> color(n);
  for (int i = 0; i < n; ++i) {
    color[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[i])
        - sorted.begin());
  }
  return color;
}

class CanonicalSearch {
public:
  explicit CanonicalSearch(const MolecularGraph &g)
      : g_(g), initial_(initial_colors(g)) { }

  CanonicalRank run() {
    std::vector<int> path;
    visit(initial_, path);
    return best_->color;
  }

private:
  struct Leaf {
    std::vector<std::int64_t> certificate;
    std::vector<int> color;
    std::vector<int> atom_at;  // position -> atom
  };

  Leaf make_leaf(std::vector<int> color) const {
    const int n = static_cast<int>(g_.size());
    Leaf leaf;
    leaf.atom_at.resize(n);
    for (int i = 0; i < n; ++i)
      leaf.atom_at[color[i]] = i;
    for (int p = 0; p < n; ++p)
      leaf.certificate.push_back(initial_[leaf.atom_at[p]]);

    std::vector<std::tuple<int, int, int>> edges;
    for (const Bond &b: g_.bonds()) {
      int x = color[b.begin], y = color[b.end];
      edges.emplace_back(std::min(x, y), std::max(x, y), b.order);
    }
    std::sort(edges.begin(), edges.end());
    for (auto [x, y, o]: edges) {
      leaf.certificate.push_back(x);
      leaf.certificate.push_back(y);
      leaf.certificate.push_back(o);
    }
    leaf.color = std::move(color);
    return leaf;
  }

  void record_automorphism(const Leaf &from, const Leaf &to) {
    std::vector<int> gamma(g_.size());
    for (std::size_t p = 0; p < gamma.size(); ++p)
      gamma[from.atom_at[p]] = to.atom_at[p];
    automorphisms_.push_back(std::move(gamma));
  }

  void on_leaf(std::vector<int> color) {
    Leaf leaf = make_leaf(std::move(color));
    if (!first_) {
      first_ = leaf;
      best_ = std::move(leaf);
    } else if (leaf.certificate == first_->certificate) {
      record_automorphism(*first_, leaf);
    } else if (leaf.certificate == best_->certificate) {
      record_automorphism(*best_, leaf);
    } else if (leaf.certificate < best_->certificate) {
      best_ = std::move(leaf);
    }
  }

  // Orbit representative of each atom under the stored automorphisms that
  // fix every atom on `path`.
  std::vector<int> orbits(const std::vector<int> &path) const {
    std::vector<int> parent(g_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x)
        x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto &gamma: automorphisms_) {
      bool fixes = std::all_of(path.begin(), path.end(),
                               [&](int v) { return gamma[v] == v; });
      if (!fixes)
        continue;
      for (std::size_t i = 0; i < gamma.size(); ++i) {
        int a = find(static_cast<int>(i)), b = find(gamma[i]);
        if (a != b)
          parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (std::size_t i = 0; i < parent.size(); ++i)
      parent[i] = find(static_cast<int>(i));
    return parent;
  }

  void visit(std::vector<int> color, std::vector<int> &path) {
    refine(g_, color);

    const int n = static_cast<int>(g_.size());
    std::vector<int> size(n, 0);
    for (int c: color)
      ++size[c];
    int cell = -1;
    for (int c = 0; c < n; ++c) {
      if (size[c] > 1) {
        cell = c;
        break;
      }
    }
    if (cell == -1) {
      on_leaf(std::move(color));
      return;
    }

    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (color[i] == cell)
        members.push_back(i);
    }

    std::vector<int> explored;
    for (int w: members) {
      if (!explored.empty()) {
        std::vector<int> orbit = orbits(path);
        bool seen = std::any_of(explored.begin(), explored.end(),
                                [&](int e) { return orbit[e] == orbit[w]; });
        if (seen)
          continue;
      }
      explored.push_back(w);

      std::vector<int> child = color;
      for (int m: members)
        child[m] = m == w ? cell : cell + 1;
      path.push_back(w);
      visit(std::move(child), path);
      path.pop_back();
    }
  }

  const MolecularGraph &g_;
  std::vector<int> initial_;
  std::optional<Leaf> first_, best_;
  std::vector<std::vector<int>> automorphisms_;
};

}  // namespace

std::string write_smiles(const MolecularGraph &graph) {
  std::vector<int> rank(graph.size());
  std::iota(rank.begin(), rank.end(), 0);
  return emit(graph, traverse(graph, rank));
}

std::string write_smiles(const MolecularGraph &graph,
                         std::span<const int> rank) {
  const std::size_t n = graph.size();
  if (rank.size() != n)
    throw std::invalid_argument("rank size does not match atom count");
  std::vector<bool> seen(n, false);
  for (int r: rank) {
    if (r < 0 || static_cast<std::size_t>(r) >= n || seen[r])
      throw std::invalid_argument("rank is not a permutation");
    seen[r] = true;
  }
  return emit(graph, traverse(graph, rank));
}

CanonicalRank canonical_rank(const MolecularGraph &graph) {
  if (graph.empty())
    return {};
  return CanonicalSearch(graph).run();
}

std::string canonical_smiles(const MolecularGraph &graph) {
  CanonicalRank rank = canonical_rank(graph);
  return emit(graph, traverse(graph, rank));
}

bool graphs_equivalent(const MolecularGraph &a, const MolecularGraph &b) {
  if (a.size() != b.size() || a.bonds().size() != b.bonds().size())
    return false;
  return canonical_smiles(a) == canonical_smiles(b);
}

}  // namespace smiself
