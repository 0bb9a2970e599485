//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/correction.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "smiself/smiles_writer.h"

namespace smiself {

CorrectionReport smiself_correct(std::string_view input,
                                 const Alphabet &alphabet) {
  CorrectionReport report;
  report.input = std::string(input);

  ParseResult parsed = parse_lenient(input, alphabet.table());
  report.diagnostics = std::move(parsed.diagnostics);
  report.notes = std::move(parsed.notes);

  if (report.diagnostics.empty()) {
    report.was_already_valid = true;
    report.output = canonical_smiles(parsed.graph);
    return report;
  }

  std::vector<SelfiesSymbol> symbols = encode(parsed.graph, alphabet);
  report.intermediate_selfies = to_string(symbols);
  DecodeResult decoded = decode(symbols, alphabet);
  if (decoded.graph.empty()) {
    report.notes.push_back("EmptyResult: decoding produced no atoms");
    report.changed = !parsed.graph.empty();
    return report;
  }
  report.output = canonical_smiles(decoded.graph);
  report.changed = !graphs_equivalent(decoded.graph, parsed.graph);
  return report;
}

// Mutator

namespace {

constexpr std::string_view kBondChars = "=#";
constexpr std::string_view kGarbageChars = "XQJqjx!?$&{}<>~^;_";

struct Sites {
  std::vector<std::size_t> parens;       // byte offsets
  std::vector<Token> ring_digits;
  std::vector<std::pair<Token, Token>> ring_pairs;
  std::vector<std::size_t> flippable;    // byte offsets of one-letter atoms
  std::set<int> used_labels;
};

int label_of(const Token &tok) {
  int value = 0;
  for (char c: tok.lexeme) {
    if (c >= '0' && c <= '9')
      value = value * 10 + (c - '0');
  }
  return value;
}

Sites find_sites(std::string_view input) {
  Sites s;
  std::map<int, Token> open;
  for (const Token &tok: tokenize(input)) {
    switch (tok.kind) {
    case TokenKind::kOpenParen:
    case TokenKind::kCloseParen:
      s.parens.push_back(tok.position);
      break;
    case TokenKind::kRingDigit: {
      s.ring_digits.push_back(tok);
      int label = label_of(tok);
      s.used_labels.insert(label);
      if (auto it = open.find(label); it != open.end()) {
        s.ring_pairs.emplace_back(it->second, tok);
        open.erase(it);
      } else {
        open.emplace(label, tok);
      }
      break;
    }
    case TokenKind::kOrganicAtom:
      if (tok.lexeme.size() == 1
          && std::string_view("BCNOPSbcnops").find(tok.lexeme[0])
                 != std::string_view::npos)
        s.flippable.push_back(tok.position);
      break;
    default:
      break;
    }
  }
  return s;
}

std::string ring_label_text(int label) {
  if (label < 10)
    return std::string(1, static_cast<char>('0' + label));
  return "%" + std::to_string(label);
}

template <typename T>
const T &pick(const std::vector<T> &sites, std::size_t position,
              MutationKind kind) {
  if (sites.empty()) {
    throw std::invalid_argument("mutation " + std::string(to_string(kind))
                                + " has no site in the input");
  }
  return sites[position % sites.size()];
}

}  // namespace

std::string_view to_string(MutationKind kind) {
  switch (kind) {
  case MutationKind::kParenInsert:
    return "paren-insert";
  case MutationKind::kParenDelete:
    return "paren-delete";
  case MutationKind::kRingDigitDelete:
    return "ring-digit-delete";
  case MutationKind::kRingClosureDuplicate:
    return "ring-closure-duplicate";
  case MutationKind::kBondInsert:
    return "bond-insert";
  case MutationKind::kGarbageInsert:
    return "garbage-insert";
  case MutationKind::kCaseFlip:
    return "case-flip";
  }
  return "unknown";
}

std::optional<MutationKind> mutation_kind_from_string(std::string_view name) {
  for (MutationKind k: kAllMutationKinds) {
    if (to_string(k) == name)
      return k;
  }
  return std::nullopt;
}

std::vector<MutationKind> applicable_mutations(std::string_view input) {
  Sites s = find_sites(input);
  std::vector<MutationKind> out = { MutationKind::kParenInsert };
  if (!s.parens.empty())
    out.push_back(MutationKind::kParenDelete);
  if (!s.ring_digits.empty())
    out.push_back(MutationKind::kRingDigitDelete);
  if (!s.ring_pairs.empty())
    out.push_back(MutationKind::kRingClosureDuplicate);
  out.push_back(MutationKind::kBondInsert);
  out.push_back(MutationKind::kGarbageInsert);
  if (!s.flippable.empty())
    out.push_back(MutationKind::kCaseFlip);
  return out;
}

std::string apply_mutation(std::string_view input, const Mutation &m) {
  std::string out(input);
  std::size_t insert_at = m.position % (input.size() + 1);
  Sites s = find_sites(input);

  switch (m.kind) {
  case MutationKind::kParenInsert:
    out.insert(insert_at, 1, m.character == '(' ? '(' : ')');
    break;
  case MutationKind::kParenDelete:
    out.erase(pick(s.parens, m.position, m.kind), 1);
    break;
  case MutationKind::kRingDigitDelete: {
    const Token &tok = pick(s.ring_digits, m.position, m.kind);
    out.erase(tok.position, tok.lexeme.size());
    break;
  }
  case MutationKind::kRingClosureDuplicate: {
    // A second ring bond between the same two atoms.
    const auto &[first, second] = pick(s.ring_pairs, m.position, m.kind);
    int label = 1;
    while (s.used_labels.count(label))
      ++label;
    std::string text = ring_label_text(label);
    out.insert(second.position + second.lexeme.size(), text);
    out.insert(first.position + first.lexeme.size(), text);
    break;
  }
  case MutationKind::kBondInsert:
    out.insert(insert_at, 1,
               kBondChars.find(m.character) != std::string_view::npos
                   ? m.character
                   : '=');
    break;
  case MutationKind::kGarbageInsert:
    out.insert(insert_at, 1, m.character != 0 ? m.character : 'X');
    break;
  case MutationKind::kCaseFlip: {
    std::size_t at = pick(s.flippable, m.position, m.kind);
    char c = out[at];
    out[at] = static_cast<char>(c >= 'a' ? c - 'a' + 'A' : c - 'A' + 'a');
    break;
  }
  }
  return out;
}

std::string mutate_smiles(std::string_view input, std::uint64_t seed,
                          std::span<const MutationKind> kinds) {
  std::vector<MutationKind> candidates;
  for (MutationKind k: applicable_mutations(input)) {
    if (kinds.empty() || std::find(kinds.begin(), kinds.end(), k) != kinds.end())
      candidates.push_back(k);
  }
  if (candidates.empty())
    return std::string(input);

  std::mt19937_64 rng(seed);
  Mutation m { candidates[rng() % candidates.size()] };
  m.position = static_cast<std::size_t>(rng());
  switch (m.kind) {
  case MutationKind::kParenInsert:
    m.character = rng() % 2 == 0 ? '(' : ')';
    break;
  case MutationKind::kBondInsert:
    m.character = kBondChars[rng() % kBondChars.size()];
    break;
  case MutationKind::kGarbageInsert:
    m.character = kGarbageChars[rng() % kGarbageChars.size()];
    break;
  default:
    break;
  }
  return apply_mutation(input, m);
}

}  // namespace smiself
