//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <set>

#include "smiself/smiles_reader.h"
#include "smiself/smiles_writer.h"
#include "support.h"

namespace smiself {
namespace {

using testing::parse;

MolecularGraph random_decorated_graph(std::mt19937_64 &rng, int n,
                                      double p) {
  static const std::vector<std::string> kElements { "C", "C", "C", "N", "O",
                                                    "S", "Cl", "Br", "Si", "Se" };
  auto g = testing::random_graph(rng, n, kElements, p, 3);
  GraphBuilder b(g);
  for (int i = 0; i < n; ++i) {
    Atom &a = b.atom(i);
    switch (rng() % 8) {
    case 0:
      a.formal_charge = static_cast<int>(rng() % 5) - 2;
      break;
    case 1:
      a.explicit_hydrogens = static_cast<int>(rng() % 4);
      break;
    case 2:
      a.isotope = 12 + static_cast<int>(rng() % 4);
      break;
    default:
      break;
    }
    if (!is_organic_subset(a.element))
      a.explicit_hydrogens = a.explicit_hydrogens.value_or(0);
  }
  return std::move(b).build();
}

TEST(WriteSmiles, Examples) {
  GraphBuilder single;
  single.add_atom({ "C" });
  EXPECT_EQ(write_smiles(std::move(single).build()), "C");

  GraphBuilder two;
  two.add_atom({ "C" });
  two.add_atom({ "O" });
  EXPECT_EQ(write_smiles(std::move(two).build()), "C.O");

  auto aspirin = parse("CC(=O)OC1=CC=CC=C1C(=O)O");
  auto again = parse_strict(write_smiles(aspirin));
  ASSERT_TRUE(again);
  EXPECT_TRUE(graphs_equivalent(*again.graph, aspirin));
}

TEST(WriteSmiles, RankMustBeAPermutation) {
  auto g = parse("CCO");
  std::vector<int> bad { 0, 0, 1 };
  EXPECT_THROW(write_smiles(g, bad), std::invalid_argument);
  std::vector<int> short_rank { 0, 1 };
  EXPECT_THROW(write_smiles(g, short_rank), std::invalid_argument);
}

TEST(WriteSmiles, ManyRingClosuresUsePercentLabels) {
  std::mt19937_64 rng(31);
  auto g = testing::random_graph(rng, 14, { "C" }, 0.9, 1);
  std::string s = write_smiles(g);
  EXPECT_NE(s.find('%'), std::string::npos);
  EXPECT_TRUE(graphs_equivalent(parse_lenient(s).graph, g));
}

TEST(Canonical, Examples) {
  EXPECT_EQ(canonical_smiles(parse("OCC")), canonical_smiles(parse("CCO")));
  EXPECT_EQ(canonical_smiles(parse("C")), "C");
  EXPECT_NE(canonical_smiles(parse("CCO")), canonical_smiles(parse("CC=O")));
}

TEST(Canonical, RankIsAPermutation) {
  auto g = parse("CC(=O)OC1=CC=CC=C1C(=O)O");
  CanonicalRank r = canonical_rank(g);
  std::vector<int> sorted = r;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
    EXPECT_EQ(sorted[i], i);
  EXPECT_EQ(write_smiles(g, r), canonical_smiles(g));
}

TEST(Canonical, BenzeneAllRelabelings) {
  auto g = parse("C1=CC=CC=C1");
  std::vector<int> perm { 0, 1, 2, 3, 4, 5 };
  std::set<std::string> seen;
  do {
    seen.insert(canonical_smiles(g.permuted(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(seen.size(), 1u);
}

TEST(Canonical, AspirinRelabelings) {
  std::mt19937_64 rng(32);
  auto g = parse("CC(=O)OC1=CC=CC=C1C(=O)O");
  std::string expected = canonical_smiles(g);
  for (int i = 0; i < 20; ++i) {
    auto perm = testing::random_permutation(g.size(), rng);
    EXPECT_EQ(canonical_smiles(g.permuted(perm)), expected);
  }
}

TEST(Canonical, CorpusRelabelingAndIdempotence) {
  std::mt19937_64 rng(33);
  for (const auto &s: testing::random_corpus(100, 34)) {
    auto g = parse(s);
    std::string c = canonical_smiles(g);
    EXPECT_EQ(c, s);
    EXPECT_EQ(canonical_smiles(parse(c)), c);
    for (int k = 0; k < 5; ++k) {
      auto perm = testing::random_permutation(g.size(), rng);
      ASSERT_EQ(canonical_smiles(g.permuted(perm)), c) << s;
    }
  }
}

TEST(Canonical, HighlySymmetricGraphs) {
  // Cube, Petersen graph, and K(3,3): heavy ties for refinement alone.
  auto build = [](int n, std::vector<std::pair<int, int>> edges) {
    GraphBuilder b;
    for (int i = 0; i < n; ++i)
      b.add_atom({ "C" });
    for (auto [u, v]: edges)
      b.add_bond(u, v, 1);
    return std::move(b).build();
  };
  std::vector<MolecularGraph> graphs {
    build(8, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 3, 0 }, { 4, 5 }, { 5, 6 },
               { 6, 7 }, { 7, 4 }, { 0, 4 }, { 1, 5 }, { 2, 6 }, { 3, 7 } }),
    build(10, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 3, 4 }, { 4, 0 }, { 0, 5 },
                { 1, 6 }, { 2, 7 }, { 3, 8 }, { 4, 9 }, { 5, 7 }, { 7, 9 },
                { 9, 6 }, { 6, 8 }, { 8, 5 } }),
    build(6, { { 0, 3 }, { 0, 4 }, { 0, 5 }, { 1, 3 }, { 1, 4 }, { 1, 5 },
               { 2, 3 }, { 2, 4 }, { 2, 5 } }),
  };
  std::mt19937_64 rng(35);
  for (const auto &g: graphs) {
    std::string c = canonical_smiles(g);
    for (int k = 0; k < 50; ++k) {
      auto perm = testing::random_permutation(g.size(), rng);
      ASSERT_EQ(canonical_smiles(g.permuted(perm)), c);
    }
  }
  // Same degree sequence as the cube, different graph.
  auto twisted = build(8, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 3, 0 }, { 4, 5 },
                            { 5, 6 }, { 6, 7 }, { 7, 4 }, { 0, 4 }, { 1, 6 },
                            { 2, 5 }, { 3, 7 } });
  EXPECT_EQ(canonical_smiles(twisted) == canonical_smiles(graphs[0]),
            testing::brute_force_isomorphic(twisted, graphs[0]));
}

TEST(Properties, RoundTripThroughLenientParse) {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 3000; ++i) {
    int n = 1 + static_cast<int>(rng() % 12);
    auto g = random_decorated_graph(rng, n, 0.3);
    std::string s = write_smiles(g);
    ParseResult r = parse_lenient(s);
    ASSERT_TRUE(graphs_equivalent(r.graph, g)) << s;
    for (const auto &d: r.diagnostics)
      ASSERT_EQ(d.error_class, ErrorClass::kValenceError) << s;
  }
}

TEST(Properties, CanonicalSoundnessSmallSample) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 2000; ++i) {
    int n = 1 + static_cast<int>(rng() % 7);
    auto a = testing::random_graph(rng, n, { "C", "N" }, 0.4, 2);
    auto b = (i % 2 == 0)
                 ? a.permuted(testing::random_permutation(n, rng))
                 : testing::random_graph(rng, n, { "C", "N" }, 0.4, 2);
    ASSERT_EQ(canonical_smiles(a) == canonical_smiles(b),
              testing::brute_force_isomorphic(a, b))
        << write_smiles(a) << " vs " << write_smiles(b);
  }
}

}  // namespace
}  // namespace smiself
