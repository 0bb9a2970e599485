//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "smiself/correction.h"
#include "smiself/selfies.h"
#include "smiself/smiles_writer.h"
#include "support.h"

namespace smiself {
namespace {

using testing::parse;

std::vector<std::pair<std::string, bool>> lexemes(std::string_view s) {
  std::vector<std::pair<std::string, bool>> out;
  for (const auto &t: tokenize_selfies(s))
    out.emplace_back(t.lexeme, t.in_alphabet);
  return out;
}

TEST(Alphabet, Examples) {
  const Alphabet &a = Alphabet::standard();
  EXPECT_TRUE(a.contains("[=C]"));
  EXPECT_FALSE(a.contains("[Qq]"));
  EXPECT_EQ(a.index_of("[C]"), 8);
  EXPECT_EQ(a.index_of("[epsilon]"), 1);
  EXPECT_EQ(a.index_of("[F]"), 2);
  EXPECT_EQ(a.index_of("[Ring1]"), 14);
}

TEST(Alphabet, IndexIsInjectiveAndStable) {
  const Alphabet &a = Alphabet::standard();
  std::set<int> seen;
  for (const auto &s: a.symbols()) {
    int i = a.index_of(s);
    EXPECT_GT(i, 0);
    EXPECT_TRUE(seen.insert(i).second) << s.raw;
    auto parsed = SelfiesSymbol::parse(s.raw);
    ASSERT_TRUE(parsed) << s.raw;
    EXPECT_EQ(parsed->raw, s.raw);
    EXPECT_EQ(parsed->kind, s.kind);
  }
  Alphabet rebuilt(ValenceTable::standard());
  ASSERT_EQ(rebuilt.symbols().size(), a.symbols().size());
  for (std::size_t i = 0; i < a.symbols().size(); ++i)
    EXPECT_EQ(rebuilt.symbols()[i].raw, a.symbols()[i].raw);
}

TEST(Alphabet, DigitsRoundTrip) {
  const Alphabet &a = Alphabet::standard();
  for (int v = 0; v < 16; ++v)
    EXPECT_EQ(a.digit_value(a.digit_symbol(v)), v);
  EXPECT_EQ(a.digit_value(*a.lookup("[S]")), 0);
}

TEST(Alphabet, DecoratedAtoms) {
  const Alphabet &a = Alphabet::standard();
  auto s = SelfiesSymbol::parse("[=13CH1+1]");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->kind, SymbolKind::kAtom);
  EXPECT_EQ(s->bond_prefix, 2);
  EXPECT_EQ(s->atom.element, "C");
  EXPECT_EQ(s->atom.isotope, 13);
  EXPECT_EQ(s->atom.explicit_hydrogens, 1);
  EXPECT_EQ(s->atom.formal_charge, 1);
  EXPECT_TRUE(a.contains("[=13CH1+1]"));
  EXPECT_TRUE(a.contains("[O-1]"));
  EXPECT_TRUE(a.contains("[Si]"));
  Alphabet strict(ValenceTable(ValenceTable::standard().elements(),
                               UnknownElementPolicy::kReject));
  EXPECT_FALSE(strict.contains("[Si]"));
}

TEST(TokenizeSelfies, Examples) {
  using V = std::vector<std::pair<std::string, bool>>;
  EXPECT_EQ(lexemes("[C][=O]"), (V { { "[C]", true }, { "[=O]", true } }));
  EXPECT_EQ(lexemes("[C]xy[O]"), (V { { "[C]", true }, { "x", false },
                                      { "y", false }, { "[O]", true } }));
  EXPECT_EQ(lexemes("[C][Qq]"), (V { { "[C]", true }, { "[Qq]", false } }));
}

TEST(EditInvalid, Examples) {
  EXPECT_EQ(to_string(edit_invalid("[C][Qq][C]")), "[C][C]");
  EXPECT_EQ(to_string(edit_invalid("[C]abc[O]")), "[C][O]");
  EXPECT_TRUE(edit_invalid("garbage").empty());
}

TEST(Decode, Examples) {
  EXPECT_TRUE(graphs_equivalent(decode("[C]").graph, parse("C")));
  DecodeResult r = decode("[O][#C]");
  EXPECT_TRUE(graphs_equivalent(r.graph, parse("O=C")));
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace[1].action, TraceAction::kReducedBond);
  EXPECT_EQ(r.trace[1].requested_order, 3);
  EXPECT_EQ(r.trace[1].order, 2);
  EXPECT_TRUE(decode("").graph.empty());
}

TEST(Decode, AspirinCarboxylBondIsReduced) {
  CorrectionReport rep = smiself_correct("CC(=O)OC1=CC=CC=C1=C(=O)O)");
  auto symbols = edit_invalid(rep.intermediate_selfies);
  std::size_t ring = 0;
  while (ring < symbols.size() && symbols[ring].kind != SymbolKind::kRing)
    ++ring;
  ASSERT_LT(ring + 2, symbols.size());
  std::size_t after = ring + 1 + symbols[ring].size_digits;
  EXPECT_EQ(symbols[after].raw, "[=C]");

  DecodeResult r = decode(symbols);
  auto entry = std::find_if(r.trace.begin(), r.trace.end(),
                            [&](const TraceEntry &e) {
                              return e.symbol_index == after;
                            });
  ASSERT_NE(entry, r.trace.end());
  EXPECT_EQ(entry->action, TraceAction::kReducedBond);
  EXPECT_EQ(entry->requested_order, 2);
  EXPECT_EQ(entry->order, 1);
  EXPECT_EQ(entry->head_capacity, 1);
}

TEST(Decode, DotSeparatesFragments) {
  auto g = decode("[C].[O]").graph;
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.bonds().size(), 0u);
}

TEST(Decode, EpsilonPlacesACarbonInBranchStart) {
  // A branch whose first symbol is [epsilon] yields a lone C in the branch.
  auto g = decode("[N][Branch1][epsilon][epsilon][O]").graph;
  EXPECT_TRUE(graphs_equivalent(g, parse("N(C)O")));
}

TEST(Decode, RejectedElementsAreIgnored) {
  Alphabet strict(ValenceTable(ValenceTable::standard().elements(),
                               UnknownElementPolicy::kReject));
  std::vector<SelfiesSymbol> symbols { *SelfiesSymbol::parse("[C]"),
                                       *SelfiesSymbol::parse("[Si]"),
                                       *SelfiesSymbol::parse("[O]") };
  EXPECT_TRUE(graphs_equivalent(decode(symbols, strict).graph, parse("CO")));
  EXPECT_TRUE(graphs_equivalent(decode(symbols).graph, parse("C[Si]O")));
}

TEST(Encode, Examples) {
  EXPECT_EQ(to_string(encode(parse("C"))), "[C]");
  auto ethanol = parse("CCO");
  EXPECT_TRUE(graphs_equivalent(decode(encode(ethanol)).graph, ethanol));

  auto benzene = parse("c1ccccc1");
  auto symbols = encode(benzene);
  int rings = 0;
  for (const auto &s: symbols)
    rings += s.kind == SymbolKind::kRing;
  EXPECT_EQ(rings, 1);
  EXPECT_TRUE(graphs_equivalent(decode(symbols).graph, benzene));
}

TEST(Encode, ChargedAndIsotopicAtoms) {
  for (std::string s: { "C[N+](C)(C)C", "[13CH3]O", "CC(=O)[O-]", "[NH4+]",
                        "C[Si](C)(C)C", "OS(=O)(=O)O", "FC(F)(F)Cl" }) {
    auto g = parse(s);
    auto round = decode(encode(g)).graph;
    EXPECT_TRUE(graphs_equivalent(round, g)) << s << " -> "
                                             << canonical_smiles(round);
    std::string text = to_string(encode(g));
    EXPECT_TRUE(graphs_equivalent(decode(std::string_view(text)).graph, g))
        << text;
  }
}

TEST(Properties, RandomStringsDecodeToValidGraphs) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100000; ++i) {
    auto symbols = testing::random_selfies(rng, 60);
    DecodeResult r = decode(symbols);
    ASSERT_TRUE(is_semantically_valid(r.graph)) << to_string(symbols);
    ASSERT_LE(r.trace.size(), symbols.size());
    for (const auto &e: r.trace) {
      if (e.action != TraceAction::kPlacedAtom
          && e.action != TraceAction::kReducedBond
          && e.action != TraceAction::kClosedRing)
        continue;
      if (e.order == 0 || e.head < 0)
        continue;
      ASSERT_LE(e.order, e.head_capacity) << to_string(symbols);
      ASSERT_LE(e.order, e.atom_capacity) << to_string(symbols);
      ASSERT_LE(e.order, e.requested_order) << to_string(symbols);
    }
  }
}

TEST(Properties, EditingClosure) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 50000; ++i) {
    std::string s(rng() % 80, ' ');
    for (auto &c: s)
      c = static_cast<char>(rng() % 3 == 0 ? "[]=#CNO"[rng() % 7] : rng() % 256);
    ASSERT_TRUE(is_semantically_valid(decode(std::string_view(s)).graph));
  }
}

TEST(Properties, RoundTripOnCorpus) {
  for (const auto &s: testing::random_corpus(500, 43)) {
    auto g = parse(s);
    auto symbols = encode(g);
    ASSERT_TRUE(graphs_equivalent(decode(symbols).graph, g))
        << s << " " << to_string(symbols);
    auto reparsed = edit_invalid(to_string(symbols));
    ASSERT_EQ(to_string(reparsed), to_string(symbols));
  }
}

}  // namespace
}  // namespace smiself
