//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "smiself/smiles_reader.h"
#include "smiself/smiles_writer.h"
#include "support.h"

namespace smiself {
namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view s) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto &t: tokenize(s))
    out.emplace_back(t.kind, t.lexeme);
  return out;
}

bool has(const std::vector<Diagnostic> &diags, ErrorClass c) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const Diagnostic &d) { return d.error_class == c; });
}

std::string random_smiles_like(std::mt19937_64 &rng, std::size_t max_len) {
  static constexpr std::string_view kChars =
      "CCCCNNOOcnosSPFIBrl()()=#-:/\\.[]@+-H123%0123456789xX* ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kChars.size() - 1);
  std::string s(len(rng), ' ');
  for (auto &c: s)
    c = kChars[pick(rng)];
  return s;
}

TEST(Tokenize, Examples) {
  using K = TokenKind;
  EXPECT_EQ(kinds("CC(=O)O"),
            (std::vector<std::pair<TokenKind, std::string>> {
                { K::kOrganicAtom, "C" }, { K::kOrganicAtom, "C" },
                { K::kOpenParen, "(" }, { K::kBond, "=" },
                { K::kOrganicAtom, "O" }, { K::kCloseParen, ")" },
                { K::kOrganicAtom, "O" } }));
  EXPECT_EQ(kinds("[NH3+]C"),
            (std::vector<std::pair<TokenKind, std::string>> {
                { K::kBracketAtom, "[NH3+]" }, { K::kOrganicAtom, "C" } }));
  auto ring = tokenize("C%12CC%12");
  ASSERT_EQ(ring.size(), 5u);
  EXPECT_EQ(ring[1].kind, K::kRingDigit);
  EXPECT_EQ(ring[1].lexeme, "%12");
}

TEST(Tokenize, TwoLetterAtomsWin) {
  auto t = tokenize("ClCBr");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].lexeme, "Cl");
  EXPECT_EQ(t[2].lexeme, "Br");
}

TEST(Tokenize, LexemesReproduceInput) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20000; ++i) {
    std::string s = random_smiles_like(rng, 40);
    std::string joined;
    std::size_t pos = 0;
    for (const auto &t: tokenize(s)) {
      EXPECT_EQ(t.position, pos);
      pos += t.lexeme.size();
      joined += t.lexeme;
    }
    ASSERT_EQ(joined, s);
  }
}

TEST(ParseStrict, Examples) {
  auto allene = parse_strict("C=C=C");
  ASSERT_TRUE(allene);
  EXPECT_EQ(allene.graph->size(), 3u);
  ASSERT_EQ(allene.graph->bonds().size(), 2u);
  for (const auto &b: allene.graph->bonds())
    EXPECT_EQ(b.order, 2);

  auto paren = parse_strict("C#C=C)");
  ASSERT_FALSE(paren);
  EXPECT_EQ(paren.error->error_class, ErrorClass::kParenthesesError);

  auto valence = parse_strict("C#C=C");
  ASSERT_FALSE(valence);
  EXPECT_EQ(valence.error->error_class, ErrorClass::kValenceError);
}

TEST(ParseLenient, AspirinWithExtraParen) {
  std::string s = "CC(=O)OC1=CC=CC=C1=C(=O)O)";
  ParseResult r = parse_lenient(s);
  EXPECT_EQ(r.graph.size(), 13u);
  ASSERT_GE(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.diagnostics[0].error_class, ErrorClass::kParenthesesError);
  EXPECT_EQ(r.diagnostics[0].position, s.size() - 1);
  // The ring carbon at offset 16 exceeds its valence; so does the carboxyl
  // carbon at offset 19, which the bond to the ring also overloads.
  std::set<std::size_t> valence_at;
  for (const auto &d: r.diagnostics) {
    if (d.error_class == ErrorClass::kValenceError)
      valence_at.insert(d.position);
  }
  EXPECT_EQ(valence_at, (std::set<std::size_t> { 16, 19 }));
}

TEST(ParseLenient, TetralinWithExtraParen) {
  ParseResult r = parse_lenient("CC1=CC2=C(C=C1)C(CCC2)(C)C)");
  EXPECT_EQ(r.graph.size(), 13u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].error_class, ErrorClass::kParenthesesError);
}

TEST(ParseLenient, UnclosedRingIsDropped) {
  ParseResult r = parse_lenient("C1CC");
  EXPECT_EQ(r.graph.size(), 3u);
  EXPECT_EQ(r.graph.bonds().size(), 2u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].error_class, ErrorClass::kUnclosedRing);
}

TEST(ParseLenient, RecoveryRules) {
  EXPECT_TRUE(has(parse_lenient("CC(C").diagnostics,
                  ErrorClass::kParenthesesError));
  EXPECT_EQ(parse_lenient("CC(C").graph.size(), 3u);
  auto garbage = parse_lenient("CX!C");
  EXPECT_TRUE(has(garbage.diagnostics, ErrorClass::kSyntaxError));
  EXPECT_EQ(garbage.graph.size(), 2u);
  auto dup = parse_lenient("C12CCC12");
  EXPECT_TRUE(has(dup.diagnostics, ErrorClass::kBondAlreadyExists));
  auto self = parse_lenient("C11");
  EXPECT_FALSE(self.ok());
  EXPECT_EQ(self.graph.bonds().size(), 0u);
  auto dots = parse_lenient("CC.O");
  EXPECT_TRUE(dots.ok());
  EXPECT_EQ(dots.graph.size(), 3u);
  EXPECT_EQ(dots.graph.bonds().size(), 1u);
}

TEST(ParseLenient, StereoBecomesNote) {
  auto r = parse_lenient("F/C=C/F");
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.notes.empty());
  EXPECT_TRUE(parse_strict("C[C@@H](O)N"));
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_error("CC1=CC2=C(C=C1)C(CCC2)(C)C)"),
            ErrorClass::kParenthesesError);
  EXPECT_EQ(classify_error("C(C)(C)(C)(C)C"), ErrorClass::kValenceError);
  EXPECT_EQ(classify_error("C1C1"), ErrorClass::kBondAlreadyExists);
  EXPECT_EQ(classify_error(""), ErrorClass::kSyntaxError);
  EXPECT_EQ(classify_error("c"), ErrorClass::kAromaticityError);
  EXPECT_EQ(classify_error("C1CC"), ErrorClass::kUnclosedRing);
  EXPECT_EQ(classify_error("CCO"), ErrorClass::kValid);
}

TEST(ErrorClassNames, RoundTrip) {
  for (ErrorClass c: kAllErrorClasses)
    EXPECT_EQ(error_class_from_string(to_string(c)), c);
  EXPECT_FALSE(error_class_from_string("Nope"));
}

TEST(Kekulize, Benzene) {
  auto g = testing::parse("c1ccccc1");
  ASSERT_EQ(g.size(), 6u);
  int doubles = 0;
  for (int i = 0; i < 6; ++i) {
    EXPECT_FALSE(g.atom(i).aromatic);
    int d = 0;
    for (auto nb: g.neighbors(i))
      d += g.bond(nb.bond).order == 2 ? 1 : 0;
    EXPECT_EQ(d, 1);
    doubles += d;
  }
  EXPECT_EQ(doubles, 6);
}

TEST(Kekulize, LoneAromaticAtomIsDemoted) {
  auto r = parse_lenient("c");
  ASSERT_EQ(r.graph.size(), 1u);
  EXPECT_FALSE(r.graph.atom(0).aromatic);
  EXPECT_TRUE(has(r.diagnostics, ErrorClass::kAromaticityError));
}

TEST(Kekulize, FourRingHasAPerfectMatching) {
  // Two disjoint double bonds cover the 4-cycle, so this kekulizes.
  auto r = parse_lenient("c1ccc1");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(graphs_equivalent(r.graph, testing::parse("C1=CC=C1")));
}

TEST(Kekulize, OddRingFails) {
  auto r = parse_lenient("c1cccc1");
  EXPECT_TRUE(has(r.diagnostics, ErrorClass::kAromaticityError));
  for (const auto &b: r.graph.bonds())
    EXPECT_EQ(b.order, 1);
  EXPECT_TRUE(parse_strict("c1cc[nH]c1"));
}

// Oracle: exhaustive search for a perfect matching.
bool has_perfect_matching(const std::vector<std::pair<int, int>> &edges,
                          std::vector<bool> covered, std::size_t from) {
  int first = -1;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) {
      first = static_cast<int>(i);
      break;
    }
  }
  if (first == -1)
    return true;
  for (std::size_t e = from; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    if ((a == first || b == first) && !covered[a] && !covered[b]) {
      covered[a] = covered[b] = true;
      if (has_perfect_matching(edges, covered, 0))
        return true;
      covered[a] = covered[b] = false;
    }
  }
  return false;
}

TEST(Kekulize, AgreesWithPerfectMatchingOracle) {
  std::mt19937_64 rng(22);
  int kekulizable = 0, not_kekulizable = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    int n = 3 + static_cast<int>(rng() % 8);
    auto base = testing::random_graph(rng, n, { "C" }, 0.35, 1);
    bool usable = true;
    for (int i = 0; i < n && usable; ++i)
      usable = base.degree(i) >= 2 && base.degree(i) <= 3;
    auto rings = ring_bonds(base);
    usable = usable
             && std::all_of(rings.begin(), rings.end(), [](bool b) { return b; });
    if (!usable)
      continue;
    // Single connected system only, so the oracle answers for the whole graph.
    std::vector<int> seen { 0 };
    std::vector<bool> mark(n, false);
    mark[0] = true;
    for (std::size_t k = 0; k < seen.size(); ++k) {
      for (auto nb: base.neighbors(seen[k])) {
        if (!mark[nb.atom]) {
          mark[nb.atom] = true;
          seen.push_back(nb.atom);
        }
      }
    }
    if (static_cast<int>(seen.size()) != n)
      continue;

    GraphBuilder b;
    for (int i = 0; i < n; ++i) {
      Atom a { "C" };
      a.aromatic = true;
      b.add_atom(a);
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto &bond: base.bonds()) {
      b.add_bond(bond.begin, bond.end, 1, true);
      edges.emplace_back(bond.begin, bond.end);
    }
    auto result = kekulize(std::move(b).build());
    bool expected = has_perfect_matching(edges, std::vector<bool>(n, false), 0);
    bool failed = has(result.diagnostics, ErrorClass::kAromaticityError);
    ASSERT_EQ(failed, !expected) << write_smiles(base);
    (expected ? kekulizable : not_kekulizable)++;
    if (expected) {
      for (int i = 0; i < n; ++i) {
        int d = 0;
        for (auto nb: result.graph.neighbors(i))
          d += result.graph.bond(nb.bond).order == 2;
        EXPECT_EQ(d, 1);
      }
      EXPECT_TRUE(is_semantically_valid(result.graph));
    }
  }
  EXPECT_GT(kekulizable, 50);
  EXPECT_GT(not_kekulizable, 50);
}

TEST(Properties, LenientIsTotalAndSound) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100000; ++i) {
    std::string s = random_smiles_like(rng, 50);
    ParseResult r = parse_lenient(s);
    std::set<std::pair<int, int>> bonds;
    for (const auto &b: r.graph.bonds()) {
      ASSERT_LT(b.begin, b.end);
      ASSERT_LT(b.end, static_cast<int>(r.graph.size()));
      ASSERT_TRUE(bonds.insert({ b.begin, b.end }).second) << s;
    }
    for (const auto &d: r.diagnostics) {
      ASSERT_NE(d.error_class, ErrorClass::kValid);
      ASSERT_LE(d.position, s.size()) << s;
    }
  }
}

TEST(Properties, StrictLenientAndClassifyAgree) {
  std::mt19937_64 rng(24);
  int valid = 0;
  auto corpus = testing::random_corpus(300, 25);
  std::vector<std::string> inputs(corpus.begin(), corpus.end());
  for (int i = 0; i < 30000; ++i)
    inputs.push_back(random_smiles_like(rng, 16));
  for (const auto &s: inputs) {
    StrictParseResult strict = parse_strict(s);
    ErrorClass c = classify_error(s);
    ASSERT_EQ(c == ErrorClass::kValid, static_cast<bool>(strict)) << s;
    if (strict) {
      ++valid;
      ParseResult lenient = parse_lenient(s);
      EXPECT_TRUE(lenient.ok()) << s;
      EXPECT_TRUE(graphs_equivalent(lenient.graph, *strict.graph)) << s;
    } else {
      EXPECT_EQ(c, strict.error->error_class);
    }
  }
  EXPECT_GT(valid, 300);
}

}  // namespace
}  // namespace smiself
