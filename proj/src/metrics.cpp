//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/metrics.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "smiself/smiles_reader.h"
#include "smiself/smiles_writer.h"

namespace smiself {

// Fingerprint

Fingerprint::Fingerprint(std::size_t width, int radius)
    : width_(width), radius_(radius) {
  if (width == 0 || !std::has_single_bit(width))
    throw std::invalid_argument("fingerprint width must be a power of two");
  if (radius < 0)
    throw std::invalid_argument("fingerprint radius must be non-negative");
  words_.assign((width + 63) / 64, 0);
}

void Fingerprint::set(std::size_t bit) {
  if (bit >= width_)
    throw std::out_of_range("fingerprint bit out of range");
  words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64);
}

bool Fingerprint::test(std::size_t bit) const {
  if (bit >= width_)
    throw std::out_of_range("fingerprint bit out of range");
  return (words_[bit / 64] >> (bit % 64)) & 1U;
}

std::size_t Fingerprint::count() const {
  std::size_t n = 0;
  for (auto w: words_)
    n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// Levenshtein

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size())
    std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({ prev[j] + 1, cur[j - 1] + 1, sub });
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Morgan fingerprint

namespace {

// FNV-1a; stable across platforms and runs, unlike std::hash.
class StableHash {
public:
  StableHash &add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (v >> (8 * i)) & 0xff;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  StableHash &add(std::string_view s) {
    for (unsigned char c: s) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return add(s.size());
  }
  std::uint64_t value() const { return state_; }

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t as_u64(int v) {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(v));
}

}  // namespace

Fingerprint morgan_fingerprint(const MolecularGraph &graph, int radius,
                               std::size_t width, const ValenceTable &table) {
  Fingerprint fp(width, radius);
  const int n = static_cast<int>(graph.size());
  const std::size_t n_bonds = graph.bonds().size();

  std::vector<std::uint64_t> ids(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = graph.atom(i);
    int orders = 0;
    for (auto nb: graph.neighbors(i))
      orders += graph.bond(nb.bond).order;
    int h = 0;
    try {
      h = hydrogen_count(graph, i, table);
    } catch (const UnknownElementError &) {
      h = a.explicit_hydrogens.value_or(0);
    }
    ids[i] = StableHash()
                 .add(a.element)
                 .add(as_u64(a.formal_charge))
                 .add(as_u64(graph.degree(i)))
                 .add(as_u64(orders))
                 .add(as_u64(h))
                 .value();
    fp.set(ids[i] & (width - 1));
  }

  using BondSet = std::vector<bool>;
  std::vector<BondSet> env(n, BondSet(n_bonds, false));
  std::set<BondSet> seen;

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    std::vector<BondSet> next_env = env;
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::uint64_t>> around;
      for (auto nb: graph.neighbors(i)) {
        around.emplace_back(graph.bond(nb.bond).order, ids[nb.atom]);
        next_env[i][nb.bond] = true;
        for (std::size_t b = 0; b < n_bonds; ++b) {
          if (env[nb.atom][b])
            next_env[i][b] = true;
        }
      }
      std::sort(around.begin(), around.end());
      StableHash h;
      h.add(as_u64(r)).add(ids[i]);
      for (auto [order, id]: around)
        h.add(as_u64(order)).add(id);
      next[i] = h.value();
    }

    // Same bond set within one step: keep the smaller identifier.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return next[a] < next[b]; });
    for (int i: order) {
      if (graph.degree(i) == 0)
        continue;
      if (seen.insert(next_env[i]).second)
        fp.set(next[i] & (width - 1));
    }
    ids = std::move(next);
    env = std::move(next_env);
  }
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.width() != b.width() || a.radius() != b.radius())
    throw std::invalid_argument("fingerprints differ in width or radius");
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
    either +=
        static_cast<std::size_t>(std::popcount(a.words()[i] | b.words()[i]));
  }
  if (either == 0)
    return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

std::optional<double> diversity(std::span<const Fingerprint> fps) {
  if (fps.size() < 2)
    return std::nullopt;
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = i + 1; j < fps.size(); ++j) {
      sum += 1.0 - tanimoto(fps[i], fps[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

std::optional<double> diversity(std::span<const MolecularGraph> graphs) {
  std::vector<Fingerprint> fps;
  fps.reserve(graphs.size());
  for (const auto &g: graphs)
    fps.push_back(morgan_fingerprint(g));
  return diversity(fps);
}

// Substructure membership

namespace {

class SubgraphMatcher {
public:
  SubgraphMatcher(const MolecularGraph &target, const MolecularGraph &pattern,
                  const ValenceTable &table)
      : target_(target), pattern_(pattern), table_(table),
        mapping_(pattern.size(), -1), used_(target.size(), false) {
    plan_order();
  }

  bool run() { return pattern_.empty() || extend(0); }

private:
  // Connected pieces of the pattern in BFS order, highest degree first.
  void plan_order() {
    const int n = static_cast<int>(pattern_.size());
    std::vector<bool> placed(n, false);
    while (static_cast<int>(order_.size()) < n) {
      int start = -1;
      for (int i = 0; i < n; ++i) {
        if (!placed[i] && (start == -1 || pattern_.degree(i) > pattern_.degree(start)))
          start = i;
      }
      std::vector<int> queue { start };
      placed[start] = true;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        order_.push_back(queue[q]);
        for (auto nb: pattern_.neighbors(queue[q])) {
          if (!placed[nb.atom]) {
            placed[nb.atom] = true;
            queue.push_back(nb.atom);
          }
        }
      }
    }
  }

  bool atom_fits(int p, int t) const {
    const Atom &pa = pattern_.atom(p);
    const Atom &ta = target_.atom(t);
    if (pa.element != ta.element || target_.degree(t) < pattern_.degree(p))
      return false;
    if (pa.formal_charge != 0 && pa.formal_charge != ta.formal_charge)
      return false;
    if (pa.explicit_hydrogens && *pa.explicit_hydrogens > 0) {
      int h;
      try {
        h = hydrogen_count(target_, t, table_);
      } catch (const UnknownElementError &) {
        h = ta.explicit_hydrogens.value_or(0);
      }
      if (h < *pa.explicit_hydrogens)
        return false;
    }
    return true;
  }

  bool bonds_fit(int p, int t) const {
    for (auto nb: pattern_.neighbors(p)) {
      int mapped = mapping_[nb.atom];
      if (mapped == -1)
        continue;
      auto tb = target_.find_bond(t, mapped);
      if (!tb || target_.bond(*tb).order != pattern_.bond(nb.bond).order)
        return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size())
      return true;
    int p = order_[depth];
    for (int t = 0; t < static_cast<int>(target_.size()); ++t) {
      if (used_[t] || !atom_fits(p, t) || !bonds_fit(p, t))
        continue;
      mapping_[p] = t;
      used_[t] = true;
      if (extend(depth + 1))
        return true;
      mapping_[p] = -1;
      used_[t] = false;
    }
    return false;
  }

  const MolecularGraph &target_;
  const MolecularGraph &pattern_;
  const ValenceTable &table_;
  std::vector<int> order_;
  std::vector<int> mapping_;
  std::vector<bool> used_;
};

}  // namespace

bool membership(const MolecularGraph &graph, const MolecularGraph &pattern,
                const ValenceTable &table) {
  if (pattern.size() > graph.size())
    return false;
  return SubgraphMatcher(graph, pattern, table).run();
}

bool PatternSet::matches(const MolecularGraph &graph,
                         const ValenceTable &table) const {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const MolecularGraph &p) {
                       return membership(graph, p, table);
                     });
}

std::vector<PatternSet> load_patterns(std::istream &in) {
  std::vector<PatternSet> sets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty())
      continue;

    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw std::invalid_argument("pattern line " + std::to_string(line_no)
                                  + ": expected name<TAB>smiles");
    }
    std::string name = line.substr(0, tab);
    std::string smiles = line.substr(tab + 1);
    StrictParseResult parsed = parse_strict(smiles);
    if (!parsed) {
      throw std::invalid_argument("pattern line " + std::to_string(line_no)
                                  + ": " + parsed.error->message);
    }

    auto it = std::find_if(sets.begin(), sets.end(),
                           [&](const PatternSet &s) { return s.name == name; });
    if (it == sets.end()) {
      sets.push_back({ name, {}, {} });
      it = sets.end() - 1;
    }
    it->smiles.push_back(smiles);
    it->patterns.push_back(std::move(*parsed.graph));
  }
  return sets;
}

std::vector<PatternSet> load_patterns(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open pattern file " + path.string());
  return load_patterns(in);
}

const std::vector<PatternSet> &builtin_patterns() {
  static const std::vector<PatternSet> kBuiltin = [] {
    std::istringstream in("acrylate\tC=CC(=O)O\n"
                          "acrylate\tC=C(C)C(=O)O\n"
                          "isocyanate\tN=C=O\n"
                          "chain_extender\t[OH]C.C[OH]\n"
                          "chain_extender\t[NH2]C.C[NH2]\n");
    return load_patterns(in);
  }();
  return kBuiltin;
}

// Corpus metrics

std::optional<double> validity(std::span<const std::string> corpus) {
  if (corpus.empty())
    return std::nullopt;
  std::size_t ok = 0;
  for (const auto &s: corpus)
    ok += parse_strict(s) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(corpus.size());
}

bool exact_match(std::string_view prediction, std::string_view reference) {
  StrictParseResult p = parse_strict(prediction);
  StrictParseResult r = parse_strict(reference);
  return p && r && canonical_smiles(*p.graph) == canonical_smiles(*r.graph);
}

std::optional<double> exact_match(std::span<const std::string> predictions,
                                  std::span<const std::string> references) {
  if (predictions.size() != references.size())
    throw std::invalid_argument("predictions and references differ in length");
  if (predictions.empty())
    return std::nullopt;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    hits += exact_match(predictions[i], references[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

std::optional<double> correction_rate(std::size_t invalid_before,
                                      std::size_t valid_after) {
  if (valid_after > invalid_before)
    throw std::invalid_argument("more corrected strings than invalid ones");
  if (invalid_before == 0)
    return std::nullopt;
  return static_cast<double>(valid_after) / static_cast<double>(invalid_before);
}

MetricsReport evaluate(const EvaluationInputs &in, const ValenceTable &table) {
  MetricsReport report;
  const auto &preds = in.predictions;
  report.predictions = preds.size();

  std::vector<std::optional<MolecularGraph>> graphs;
  graphs.reserve(preds.size());
  for (const auto &p: preds) {
    StrictParseResult r = parse_strict(p, table);
    graphs.push_back(std::move(r.graph));
  }

  std::vector<Fingerprint> valid_fps;
  std::size_t members = 0;
  for (const auto &g: graphs) {
    if (!g)
      continue;
    ++report.valid_predictions;
    valid_fps.push_back(morgan_fingerprint(*g, in.radius, in.width, table));
    if (in.membership_class && in.membership_class->matches(*g, table))
      ++members;
  }
  if (!preds.empty()) {
    report.validity = static_cast<double>(report.valid_predictions)
                      / static_cast<double>(preds.size());
  }
  report.diversity = diversity(valid_fps);
  if (in.membership_class && report.valid_predictions > 0) {
    report.membership = static_cast<double>(members)
                        / static_cast<double>(report.valid_predictions);
  }

  if (in.references) {
    const auto &refs = *in.references;
    if (refs.size() != preds.size())
      throw std::invalid_argument("predictions and references differ in length");
    report.references = refs.size();
    if (!refs.empty()) {
      std::size_t hits = 0, distance = 0, pairs = 0;
      double similarity = 0;
      for (std::size_t i = 0; i < refs.size(); ++i) {
        distance += levenshtein(preds[i], refs[i]);
        StrictParseResult r = parse_strict(refs[i], table);
        if (!graphs[i] || !r)
          continue;
        if (canonical_smiles(*graphs[i]) == canonical_smiles(*r.graph))
          ++hits;
        similarity += tanimoto(
            morgan_fingerprint(*graphs[i], in.radius, in.width, table),
            morgan_fingerprint(*r.graph, in.radius, in.width, table));
        ++pairs;
      }
      double n = static_cast<double>(refs.size());
      report.exact_match = static_cast<double>(hits) / n;
      report.mean_levenshtein = static_cast<double>(distance) / n;
      if (pairs > 0)
        report.mean_tanimoto = similarity / static_cast<double>(pairs);
    }
  }

  if (in.originals) {
    const auto &orig = *in.originals;
    if (orig.size() != preds.size())
      throw std::invalid_argument("predictions and originals differ in length");
    for (std::size_t i = 0; i < orig.size(); ++i) {
      if (parse_strict(orig[i], table))
        continue;
      ++report.invalid_before;
      if (graphs[i])
        ++report.valid_after;
    }
    report.correction_rate =
        correction_rate(report.invalid_before, report.valid_after);
  }
  return report;
}

}  // namespace smiself
