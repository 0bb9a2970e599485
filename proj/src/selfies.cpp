//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/selfies.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <utility>

#include "elements.h"

namespace smiself {
namespace {

constexpr int kRadix = 16;
constexpr int kMaxDigits = 3;

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

std::string_view prefix_text(int bond_prefix) {
  switch (bond_prefix) {
  case 2:
    return "=";
  case 3:
    return "#";
  default:
    return "";
  }
}

bool is_plain(const Atom &atom) {
  if (atom.formal_charge != 0 || atom.isotope || atom.aromatic)
    return false;
  if (!atom.explicit_hydrogens)
    return true;
  return *atom.explicit_hydrogens == 0 && !is_organic_subset(atom.element);
}

int digits_for(int value) {
  int d = 1;
  for (int limit = kRadix; value >= limit && d < kMaxDigits; limit *= kRadix)
    ++d;
  return d;
}

// Highest bond prefix at or below `order` that the core table defines for
// undecorated C/N/O/F symbols.
int clamp_core_prefix(const Atom &atom, int order) {
  if (order <= 1)
    return 0;
  if (!is_plain(atom))
    return order;
  if (atom.element == "F")
    return 0;
  if (atom.element == "O")
    return 2;
  return order;
}

}  // namespace

// SelfiesSymbol

SelfiesSymbol SelfiesSymbol::make_atom(Atom atom, int bond_prefix) {
  SelfiesSymbol s;
  s.kind = SymbolKind::kAtom;
  s.bond_prefix = bond_prefix;
  atom.aromatic = false;

  std::string body(prefix_text(bond_prefix));
  if (atom.isotope)
    body += std::to_string(*atom.isotope);
  body += atom.element;
  if (atom.explicit_hydrogens) {
    int h = *atom.explicit_hydrogens;
    if (h > 0 || is_organic_subset(atom.element))
      body += "H" + std::to_string(h);
  }
  if (atom.formal_charge != 0) {
    body += atom.formal_charge > 0 ? '+' : '-';
    body += std::to_string(std::abs(atom.formal_charge));
  }
  s.raw = "[" + body + "]";
  s.atom = std::move(atom);
  return s;
}

SelfiesSymbol SelfiesSymbol::make_branch(int size_digits, int bond_prefix) {
  SelfiesSymbol s;
  s.kind = SymbolKind::kBranch;
  s.size_digits = size_digits;
  s.bond_prefix = bond_prefix;
  s.raw = "[" + std::string(prefix_text(bond_prefix)) + "Branch"
          + std::to_string(size_digits) + "]";
  return s;
}

SelfiesSymbol SelfiesSymbol::make_ring(int size_digits, int bond_prefix) {
  SelfiesSymbol s;
  s.kind = SymbolKind::kRing;
  s.size_digits = size_digits;
  s.bond_prefix = bond_prefix;
  s.raw = "[" + std::string(prefix_text(bond_prefix)) + "Ring"
          + std::to_string(size_digits) + "]";
  return s;
}

SelfiesSymbol SelfiesSymbol::epsilon() {
  SelfiesSymbol s;
  s.kind = SymbolKind::kEpsilon;
  s.raw = "[epsilon]";
  return s;
}

SelfiesSymbol SelfiesSymbol::dot() {
  SelfiesSymbol s;
  s.kind = SymbolKind::kDot;
  s.raw = ".";
  return s;
}

std::optional<SelfiesSymbol> SelfiesSymbol::parse(std::string_view lexeme) {
  if (lexeme == ".")
    return dot();
  if (lexeme.size() < 3 || lexeme.front() != '[' || lexeme.back() != ']')
    return std::nullopt;
  std::string_view body = lexeme.substr(1, lexeme.size() - 2);
  if (body == "epsilon")
    return epsilon();

  int prefix = 0;
  if (body[0] == '=' || body[0] == '#') {
    prefix = body[0] == '=' ? 2 : 3;
    body.remove_prefix(1);
  }

  for (int d = 1; d <= kMaxDigits; ++d) {
    if (body == "Branch" + std::to_string(d))
      return make_branch(d, prefix);
    if (body == "Ring" + std::to_string(d))
      return make_ring(d, prefix);
  }

  Atom atom;
  std::size_t pos = 0;
  auto read_int = [&](std::size_t max_len) -> std::optional<int> {
    std::size_t start = pos;
    int value = 0;
    while (pos < body.size() && is_digit(body[pos]) && pos - start < max_len)
      value = value * 10 + (body[pos++] - '0');
    if (pos == start)
      return std::nullopt;
    return value;
  };

  if (auto iso = read_int(3)) {
    if (*iso == 0)
      return std::nullopt;
    atom.isotope = *iso;
  }
  if (pos >= body.size() || !std::isupper(static_cast<unsigned char>(body[pos])))
    return std::nullopt;
  if (pos + 1 < body.size()
      && std::islower(static_cast<unsigned char>(body[pos + 1]))
      && internal::is_element_symbol(body.substr(pos, 2))) {
    atom.element = std::string(body.substr(pos, 2));
    pos += 2;
  } else if (internal::is_element_symbol(body.substr(pos, 1))) {
    atom.element = std::string(body.substr(pos, 1));
    pos += 1;
  } else {
    return std::nullopt;
  }

  if (pos < body.size() && body[pos] == 'H') {
    ++pos;
    atom.explicit_hydrogens = read_int(2).value_or(1);
  }
  if (pos < body.size() && (body[pos] == '+' || body[pos] == '-')) {
    int sign = body[pos] == '+' ? 1 : -1;
    ++pos;
    int magnitude = read_int(2).value_or(1);
    if (magnitude > 15)
      return std::nullopt;
    atom.formal_charge = sign * magnitude;
  }
  if (pos != body.size())
    return std::nullopt;
  return make_atom(std::move(atom), prefix);
}

// Alphabet

Alphabet::Alphabet(const ValenceTable &table) : table_(table) {
  auto atom = [](std::string element, int prefix = 0) {
    Atom a;
    a.element = std::move(element);
    return SelfiesSymbol::make_atom(std::move(a), prefix);
  };

  symbols_ = {
    SelfiesSymbol::epsilon(),
    atom("F"),
    atom("O", 2),
    atom("N", 3),
    atom("O"),
    atom("N"),
    atom("N", 2),
    atom("C"),
    atom("C", 2),
    atom("C", 3),
  };
  for (int d = 1; d <= kMaxDigits; ++d)
    symbols_.push_back(SelfiesSymbol::make_branch(d));
  for (int d = 1; d <= kMaxDigits; ++d)
    symbols_.push_back(SelfiesSymbol::make_ring(d));
  for (int prefix: { 2, 3 }) {
    for (int d = 1; d <= kMaxDigits; ++d)
      symbols_.push_back(SelfiesSymbol::make_branch(d, prefix));
  }
  for (int prefix: { 2, 3 }) {
    for (int d = 1; d <= kMaxDigits; ++d)
      symbols_.push_back(SelfiesSymbol::make_ring(d, prefix));
  }
  for (const Element &e: table_.elements()) {
    if (e.symbol == "C" || e.symbol == "N" || e.symbol == "O"
        || e.symbol == "F")
      continue;
    for (int prefix: { 0, 2, 3 })
      symbols_.push_back(atom(e.symbol, prefix));
  }

  for (std::size_t i = 0; i < symbols_.size(); ++i)
    index_.emplace(symbols_[i].raw, static_cast<int>(i) + 1);
}

const Alphabet &Alphabet::standard() {
  static const Alphabet kStandard;
  return kStandard;
}

int Alphabet::index_of(const SelfiesSymbol &symbol) const {
  return index_of(symbol.raw);
}

int Alphabet::index_of(std::string_view lexeme) const {
  auto it = index_.find(std::string(lexeme));
  return it == index_.end() ? 0 : it->second;
}

bool Alphabet::contains(std::string_view lexeme) const {
  return lookup(lexeme).has_value();
}

std::optional<SelfiesSymbol> Alphabet::lookup(std::string_view lexeme) const {
  if (int idx = index_of(lexeme); idx > 0)
    return symbols_[idx - 1];
  auto symbol = SelfiesSymbol::parse(lexeme);
  if (!symbol)
    return std::nullopt;
  if (symbol->kind == SymbolKind::kAtom && !capacity(symbol->atom))
    return std::nullopt;
  // Undecorated forms of tabled elements outside the index (e.g. [#O], [=F])
  // are not members. Wildcard elements have no indexed forms.
  if (symbol->kind == SymbolKind::kAtom && is_plain(symbol->atom)
      && table_.find(symbol->atom.element))
    return std::nullopt;
  return symbol;
}

int Alphabet::digit_value(const SelfiesSymbol &symbol) const {
  int idx = index_of(symbol.raw);
  return idx >= 1 && idx <= kRadix ? idx - 1 : 0;
}

const SelfiesSymbol &Alphabet::digit_symbol(int value) const {
  return symbols_.at(value);
}

std::optional<int> Alphabet::capacity(const Atom &atom) const {
  if (!table_.find(atom.element)
      && table_.policy() == UnknownElementPolicy::kReject)
    return std::nullopt;
  return table_.max_valence(atom.element, atom.formal_charge)
         - atom.explicit_hydrogens.value_or(0);
}

// Tokenizing and editing

std::vector<SelfiesToken> tokenize_selfies(std::string_view input,
                                           const Alphabet &alphabet) {
  std::vector<SelfiesToken> out;
  std::size_t i = 0;
  while (i < input.size()) {
    std::size_t len = 1;
    if (input[i] == '[') {
      auto close = input.find(']', i + 1);
      auto reopen = input.find('[', i + 1);
      if (close != std::string_view::npos && reopen > close)
        len = close - i + 1;
    }
    std::string lexeme(input.substr(i, len));
    bool member = alphabet.contains(lexeme);
    out.push_back({ std::move(lexeme), member, i });
    i += len;
  }
  return out;
}

std::vector<SelfiesSymbol> edit_invalid(std::string_view input,
                                        const Alphabet &alphabet) {
  std::vector<SelfiesSymbol> out;
  for (const auto &tok: tokenize_selfies(input, alphabet)) {
    if (!tok.in_alphabet)
      continue;
    out.push_back(*alphabet.lookup(tok.lexeme));
  }
  return out;
}

std::string to_string(std::span<const SelfiesSymbol> symbols) {
  std::string out;
  for (const auto &s: symbols)
    out += s.raw;
  return out;
}

// Decoding

namespace {

class Decoder {
public:
  Decoder(std::span<const SelfiesSymbol> symbols, const Alphabet &alphabet)
      : syms_(symbols), alphabet_(alphabet) { }

  DecodeResult run() {
    std::size_t pos = 0;
    while (pos <= syms_.size()) {
      std::size_t end = pos;
      while (end < syms_.size() && syms_[end].kind != SymbolKind::kDot)
        ++end;
      fragment_start_ = static_cast<int>(builder_.atom_count());
      run_fragment(pos, end);
      pos = end + 1;
    }
    return { std::move(builder_).build(), std::move(trace_) };
  }

private:
  void note(std::size_t index, TraceAction action) {
    TraceEntry e;
    e.symbol_index = index;
    e.action = action;
    trace_.push_back(e);
  }

  int place(Atom atom, int capacity) {
    int idx = builder_.add_atom(std::move(atom));
    remaining_.push_back(capacity);
    return idx;
  }

  // X0: skip to the first placeable atom.
  void run_fragment(std::size_t pos, std::size_t end) {
    while (pos < end) {
      std::size_t at = pos++;
      const SelfiesSymbol &s = syms_[at];
      std::optional<int> c;
      if (s.kind == SymbolKind::kAtom)
        c = alphabet_.capacity(s.atom);
      if (!c || *c < 0) {
        note(at, TraceAction::kIgnored);
        continue;
      }

      int head = place(s.atom, *c);
      TraceEntry e;
      e.symbol_index = at;
      e.action = TraceAction::kPlacedAtom;
      e.atom = head;
      e.requested_order = s.order();
      e.atom_capacity = *c;
      e.terminates_scope = *c == 0;
      trace_.push_back(e);
      if (*c > 0)
        run_scope(pos, end, head, std::nullopt);
      return;
    }
  }

  int read_number(std::size_t &pos, std::size_t end, int digits) {
    int value = 0;
    for (int i = 0; i < digits && pos < end; ++i)
      value = value * kRadix + alphabet_.digit_value(syms_[pos++]);
    return value;
  }

  static int branch_cap(int state, int digits) {
    static constexpr int kCaps[3][3] = {
      { 1, 1, 1 },  // X2
      { 1, 2, 1 },  // X3
      { 1, 3, 2 },  // X4 and above
    };
    return kCaps[std::min(state, 4) - 2][digits - 1];
  }

  // Derives symbols [pos, end) onto `head`. With `cap` set, the scope is a
  // branch whose first bond is limited to *cap (states X5..X7).
  void run_scope(std::size_t pos, std::size_t end, int head,
                 std::optional<int> cap) {
    bool opening = cap.has_value();
    while (pos < end) {
      int k = remaining_[head];
      if (k <= 0)
        return;
      std::size_t at = pos++;
      const SelfiesSymbol &s = syms_[at];

      TraceEntry e;
      e.symbol_index = at;
      e.head = head;
      e.head_capacity = k;
      e.requested_order = s.order();

      switch (s.kind) {
      case SymbolKind::kAtom: {
        auto c = alphabet_.capacity(s.atom);
        if (!c || *c <= 0) {
          e.action = TraceAction::kIgnored;
          trace_.push_back(e);
          break;
        }
        int m = std::min({ s.order(), k, *c });
        if (opening)
          m = std::min(m, *cap);
        int next = place(s.atom, *c - m);
        builder_.add_bond(head, next, m);
        remaining_[head] -= m;
        opening = false;

        e.action = m < s.order() ? TraceAction::kReducedBond
                                 : TraceAction::kPlacedAtom;
        e.atom = next;
        e.order = m;
        e.atom_capacity = *c;
        e.terminates_scope = remaining_[next] == 0;
        trace_.push_back(e);
        head = next;
        if (remaining_[next] == 0)
          return;
        break;
      }

      case SymbolKind::kEpsilon:
        if (opening) {
          // X5..X7 on [epsilon] yields a lone carbon.
          Atom carbon;
          carbon.element = "C";
          int c = alphabet_.capacity(carbon).value_or(4);
          int next = place(std::move(carbon), c - 1);
          builder_.add_bond(head, next, 1);
          remaining_[head] -= 1;
          e.action = TraceAction::kPlacedAtom;
          e.atom = next;
          e.order = 1;
          e.atom_capacity = c;
        } else {
          e.action = TraceAction::kTerminated;
        }
        e.terminates_scope = true;
        trace_.push_back(e);
        return;

      case SymbolKind::kBranch: {
        if (opening || k < 2) {
          e.action = TraceAction::kIgnored;
          trace_.push_back(e);
          break;
        }
        int q = read_number(pos, end, s.size_digits);
        std::size_t body_end = std::min(end, pos + static_cast<std::size_t>(q) + 1);
        int branch_cap_order = s.bond_prefix == 0
                                   ? branch_cap(k, s.size_digits)
                                   : std::min(s.bond_prefix, k - 1);
        e.action = TraceAction::kOpenedBranch;
        e.branch_length = static_cast<int>(body_end - pos);
        e.order = branch_cap_order;
        trace_.push_back(e);
        run_scope(pos, body_end, head, branch_cap_order);
        pos = body_end;
        break;
      }

      case SymbolKind::kRing: {
        if (opening) {
          e.action = TraceAction::kIgnored;
          trace_.push_back(e);
          break;
        }
        int q = read_number(pos, end, s.size_digits);
        int target = std::max(fragment_start_, head - (q + 1));
        int order = std::min({ s.order(), k, remaining_[target] });
        e.atom = target;
        e.atom_capacity = remaining_[target];
        if (target == head || order <= 0 || builder_.has_bond(head, target)) {
          e.action = TraceAction::kIgnored;
          trace_.push_back(e);
          break;
        }
        builder_.add_bond(head, target, order);
        remaining_[head] -= order;
        remaining_[target] -= order;
        e.action = TraceAction::kClosedRing;
        e.order = order;
        e.terminates_scope = remaining_[head] == 0;
        trace_.push_back(e);
        if (remaining_[head] == 0)
          return;
        break;
      }

      case SymbolKind::kDot:
        return;
      }
    }
  }

  std::span<const SelfiesSymbol> syms_;
  const Alphabet &alphabet_;
  GraphBuilder builder_;
  std::vector<int> remaining_;
  DecodeTrace trace_;
  int fragment_start_ = 0;
};

}  // namespace

DecodeResult decode(std::span<const SelfiesSymbol> symbols,
                    const Alphabet &alphabet) {
  return Decoder(symbols, alphabet).run();
}

DecodeResult decode(std::string_view selfies, const Alphabet &alphabet) {
  std::vector<SelfiesSymbol> symbols = edit_invalid(selfies, alphabet);
  return decode(symbols, alphabet);
}

// Encoding

std::vector<SelfiesSymbol> encode(const MolecularGraph &graph,
                                  const Alphabet &alphabet) {
  const int n = static_cast<int>(graph.size());
  std::vector<std::vector<Neighbor>> sorted(n);
  for (int i = 0; i < n; ++i) {
    auto nb = graph.neighbors(i);
    sorted[i].assign(nb.begin(), nb.end());
    std::sort(sorted[i].begin(), sorted[i].end(),
              [](Neighbor a, Neighbor b) { return a.atom < b.atom; });
  }

  std::vector<int> pos(n, -1), parent_bond(n, -1);
  std::vector<std::vector<int>> children(n);
  std::vector<std::vector<std::pair<int, int>>> rings(n);  // (distance, order)
  std::vector<int> order;
  std::vector<int> roots;

  std::vector<std::pair<int, std::size_t>> stack;
  for (int root = 0; root < n; ++root) {
    if (pos[root] != -1)
      continue;
    roots.push_back(root);
    auto enter = [&](int v) {
      pos[v] = static_cast<int>(order.size());
      order.push_back(v);
      for (Neighbor nb: sorted[v]) {
        if (nb.bond != parent_bond[v] && pos[nb.atom] != -1)
          rings[v].emplace_back(pos[v] - pos[nb.atom] - 1,
                                graph.bond(nb.bond).order);
      }
      std::sort(rings[v].begin(), rings[v].end(), std::greater<>());
      stack.emplace_back(v, 0);
    };
    enter(root);
    while (!stack.empty()) {
      auto &[v, next] = stack.back();
      if (next == sorted[v].size()) {
        stack.pop_back();
        continue;
      }
      Neighbor nb = sorted[v][next++];
      if (pos[nb.atom] != -1)
        continue;
      int parent = v;
      parent_bond[nb.atom] = nb.bond;
      children[parent].push_back(nb.atom);
      enter(nb.atom);
    }
  }

  // Symbol count of each subtree, children before parents.
  std::vector<int> length(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    int len = 1;
    for (auto [q, o]: rings[v])
      len += 1 + digits_for(q);
    const auto &kids = children[v];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (k + 1 < kids.size())
        len += 1 + digits_for(length[kids[k]] - 1);
      len += length[kids[k]];
    }
    length[v] = len;
  }

  std::vector<SelfiesSymbol> out;
  auto push_number = [&](int value, int digits) {
    for (int i = digits - 1; i >= 0; --i) {
      int shift = 1;
      for (int j = 0; j < i; ++j)
        shift *= kRadix;
      out.push_back(alphabet.digit_symbol((value / shift) % kRadix));
    }
  };
  auto bond_order_to = [&](int v) {
    return parent_bond[v] == -1 ? 0 : graph.bond(parent_bond[v]).order;
  };

  // Non-negative entries are atoms; ~v opens the branch holding atom v.
  std::vector<int> tasks;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    if (r > 0)
      out.push_back(SelfiesSymbol::dot());
    tasks.push_back(roots[r]);
    while (!tasks.empty()) {
      int task = tasks.back();
      tasks.pop_back();
      if (task < 0) {
        int child = ~task;
        int o = bond_order_to(child);
        int q = length[child] - 1;
        int d = digits_for(q);
        out.push_back(SelfiesSymbol::make_branch(d, o > 1 ? o : 0));
        push_number(q, d);
        continue;
      }

      int v = task;
      Atom atom = graph.atom(v);
      out.push_back(SelfiesSymbol::make_atom(
          atom, clamp_core_prefix(atom, bond_order_to(v))));
      for (auto [q, o]: rings[v]) {
        int d = digits_for(q);
        out.push_back(SelfiesSymbol::make_ring(d, o > 1 ? o : 0));
        push_number(q, d);
      }

      const auto &kids = children[v];
      if (kids.empty())
        continue;
      tasks.push_back(kids.back());
      for (std::size_t k = kids.size() - 1; k-- > 0;) {
        tasks.push_back(kids[k]);
        tasks.push_back(~kids[k]);
      }
    }
  }
  return out;
}

}  // namespace smiself
