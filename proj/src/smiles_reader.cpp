//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/smiles_reader.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <utility>

#include "atom_spec.h"

namespace smiself {
namespace {

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

// Length of a "%nn" or "%(n...)" ring label starting at `pos`, or 0.
std::size_t percent_label_length(std::string_view s, std::size_t pos) {
  if (pos + 2 < s.size() && is_digit(s[pos + 1]) && is_digit(s[pos + 2]))
    return 3;
  if (pos + 1 < s.size() && s[pos + 1] == '(') {
    std::size_t i = pos + 2;
    while (i < s.size() && is_digit(s[i]) && i - pos - 2 < 5)
      ++i;
    if (i > pos + 2 && i < s.size() && s[i] == ')')
      return i - pos + 1;
  }
  return 0;
}

int ring_label_number(std::string_view lexeme) {
  if (lexeme.size() == 1)
    return lexeme[0] - '0';
  int value = 0;
  for (char c: lexeme) {
    if (is_digit(c))
      value = value * 10 + (c - '0');
  }
  return value;
}

std::string describe_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x21 && u < 0x7f)
    return std::string("'") + c + "'";
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%02x", u);
  return buf;
}

struct PendingBond {
  int order;
  bool aromatic;
  std::size_t position;
};

struct OpenRing {
  int atom;
  std::optional<PendingBond> bond;
  std::size_t position;
};

struct BranchFrame {
  std::optional<int> atom;
  std::size_t position;
  bool orphan;
};

class LenientParser {
public:
  LenientParser(std::string_view input, const ValenceTable &table)
      : input_(input), table_(table) { }

  ParseResult run();

private:
  void error(ErrorClass cls, std::size_t pos, std::string msg,
             std::string action) {
    diags_.push_back({ cls, pos, std::move(msg), std::move(action) });
  }

  void on_atom(Atom atom, std::size_t pos);
  void on_bond(const Token &tok);
  void on_ring_digit(const Token &tok);
  void on_open_paren(const Token &tok);
  void on_close_paren(const Token &tok);
  void on_dot(const Token &tok);
  void drop_pending(std::string_view why);
  void finish();

  std::string_view input_;
  const ValenceTable &table_;

  GraphBuilder builder_;
  std::vector<std::size_t> atom_pos_;
  std::vector<Diagnostic> diags_;
  std::vector<std::string> notes_;

  std::optional<int> prev_;
  std::optional<PendingBond> pending_;
  std::map<int, OpenRing> rings_;
  std::vector<BranchFrame> branches_;
  std::vector<int> aromatic_candidates_;
  std::optional<TokenKind> last_kind_;
};

void LenientParser::drop_pending(std::string_view why) {
  if (!pending_)
    return;
  error(ErrorClass::kSyntaxError, pending_->position,
        "bond symbol " + std::string(why), "dropped bond symbol");
  pending_.reset();
}

void LenientParser::on_atom(Atom atom, std::size_t pos) {
  bool aromatic = atom.aromatic;
  int idx = builder_.add_atom(std::move(atom));
  atom_pos_.push_back(pos);

  if (prev_) {
    if (pending_) {
      builder_.add_bond(*prev_, idx, pending_->order, pending_->aromatic);
    } else {
      int b = builder_.add_bond(*prev_, idx, 1);
      if (aromatic && builder_.atom(*prev_).aromatic)
        aromatic_candidates_.push_back(b);
    }
  }
  pending_.reset();
  prev_ = idx;
}

void LenientParser::on_bond(const Token &tok) {
  if (!prev_) {
    error(ErrorClass::kSyntaxError, tok.position,
          "bond symbol without a preceding atom", "dropped bond symbol");
    return;
  }
  drop_pending("followed by another bond symbol");

  PendingBond bond { 1, false, tok.position };
  switch (tok.lexeme[0]) {
  case '=':
    bond.order = 2;
    break;
  case '#':
    bond.order = 3;
    break;
  case ':':
    bond.aromatic = true;
    break;
  case '/':
  case '\\':
    notes_.push_back("discarded directional bond at "
                     + std::to_string(tok.position));
    break;
  default:
    break;
  }
  pending_ = bond;
}

void LenientParser::on_ring_digit(const Token &tok) {
  if (!prev_) {
    error(ErrorClass::kSyntaxError, tok.position,
          "ring bond label without a preceding atom", "dropped ring label");
    return;
  }

  int label = ring_label_number(tok.lexeme);
  auto it = rings_.find(label);
  if (it == rings_.end()) {
    rings_.emplace(label, OpenRing { *prev_, pending_, tok.position });
    pending_.reset();
    return;
  }

  OpenRing open = it->second;
  rings_.erase(it);
  std::optional<PendingBond> close = pending_;
  pending_.reset();

  if (open.atom == *prev_) {
    error(ErrorClass::kBondAlreadyExists, tok.position,
          "ring bond " + tok.lexeme + " bonds an atom to itself",
          "dropped ring bond");
    return;
  }
  if (builder_.has_bond(open.atom, *prev_)) {
    error(ErrorClass::kBondAlreadyExists, tok.position,
          "ring bond " + tok.lexeme + " duplicates an existing bond",
          "dropped ring bond");
    return;
  }

  std::optional<PendingBond> chosen = open.bond ? open.bond : close;
  if (open.bond && close
      && (open.bond->order != close->order
          || open.bond->aromatic != close->aromatic)) {
    error(ErrorClass::kSyntaxError, tok.position,
          "conflicting bond symbols on ring bond " + tok.lexeme,
          "kept the higher bond order");
    if (close->order > open.bond->order)
      chosen = close;
  }

  if (chosen) {
    builder_.add_bond(open.atom, *prev_, chosen->order, chosen->aromatic);
  } else {
    int b = builder_.add_bond(open.atom, *prev_, 1);
    if (builder_.atom(open.atom).aromatic && builder_.atom(*prev_).aromatic)
      aromatic_candidates_.push_back(b);
  }
}

void LenientParser::on_open_paren(const Token &tok) {
  drop_pending("directly before '('");

  if (!prev_) {
    error(ErrorClass::kSyntaxError, tok.position,
          "branch without a preceding atom", "ignored branch parentheses");
    branches_.push_back({ std::nullopt, tok.position, true });
    return;
  }
  if (last_kind_ == TokenKind::kOpenParen) {
    error(ErrorClass::kSyntaxError, tok.position, "branch opens a branch",
          "ignored branch parentheses");
    branches_.push_back({ std::nullopt, tok.position, true });
    return;
  }
  branches_.push_back({ prev_, tok.position, false });
}

void LenientParser::on_close_paren(const Token &tok) {
  drop_pending("directly before ')'");

  if (branches_.empty()) {
    error(ErrorClass::kParenthesesError, tok.position, "unmatched ')'",
          "skipped ')'");
    return;
  }

  BranchFrame frame = branches_.back();
  branches_.pop_back();
  if (frame.orphan)
    return;
  if (last_kind_ == TokenKind::kOpenParen) {
    error(ErrorClass::kSyntaxError, frame.position, "empty branch",
          "ignored branch parentheses");
  }
  prev_ = frame.atom;
}

void LenientParser::on_dot(const Token &tok) {
  drop_pending("directly before '.'");
  if (!prev_) {
    error(ErrorClass::kSyntaxError, tok.position,
          "'.' without a preceding atom", "skipped '.'");
  }
  prev_.reset();
}

void LenientParser::finish() {
  if (pending_)
    drop_pending("at end of input");

  if (last_kind_ == TokenKind::kDot && builder_.atom_count() > 0) {
    error(ErrorClass::kSyntaxError, input_.size() - 1, "trailing '.'",
          "skipped '.'");
  }

  struct Unclosed {
    std::size_t position;
    bool is_ring;
    int label;
  };
  std::vector<Unclosed> unclosed;
  for (const auto &f: branches_) {
    if (!f.orphan)
      unclosed.push_back({ f.position, false, 0 });
  }
  for (const auto &[label, ring]: rings_)
    unclosed.push_back({ ring.position, true, label });
  std::sort(unclosed.begin(), unclosed.end(),
            [](const Unclosed &a, const Unclosed &b) {
              return a.position < b.position;
            });
  for (const auto &u: unclosed) {
    if (u.is_ring) {
      error(ErrorClass::kUnclosedRing, u.position,
            "ring bond " + std::to_string(u.label) + " is never closed",
            "dropped ring bond");
    } else {
      error(ErrorClass::kParenthesesError, u.position, "unclosed '('",
            "closed branch at end of input");
    }
  }

  if (input_.empty()) {
    error(ErrorClass::kSyntaxError, 0, "empty input", "produced empty graph");
  } else if (builder_.atom_count() == 0 && diags_.empty()) {
    error(ErrorClass::kSyntaxError, 0, "no atoms", "produced empty graph");
  }
}

ParseResult LenientParser::run() {
  for (const Token &tok: tokenize(input_)) {
    switch (tok.kind) {
    case TokenKind::kOrganicAtom: {
      Atom atom;
      atom.element = tok.lexeme;
      if (std::islower(static_cast<unsigned char>(tok.lexeme[0]))) {
        atom.element[0] = static_cast<char>(std::toupper(tok.lexeme[0]));
        atom.aromatic = true;
      }
      on_atom(std::move(atom), tok.position);
      break;
    }
    case TokenKind::kBracketAtom: {
      auto spec = internal::parse_atom_spec(
          std::string_view(tok.lexeme).substr(1, tok.lexeme.size() - 2));
      if (!spec) {
        error(ErrorClass::kSyntaxError, tok.position,
              "malformed bracket atom " + tok.lexeme, "skipped atom");
        break;
      }
      if (spec->has_chirality) {
        notes_.push_back("discarded chirality at "
                         + std::to_string(tok.position));
      }
      on_atom(std::move(spec->atom), tok.position);
      break;
    }
    case TokenKind::kBond:
      on_bond(tok);
      break;
    case TokenKind::kRingDigit:
      on_ring_digit(tok);
      break;
    case TokenKind::kOpenParen:
      on_open_paren(tok);
      break;
    case TokenKind::kCloseParen:
      on_close_paren(tok);
      break;
    case TokenKind::kDot:
      on_dot(tok);
      break;
    case TokenKind::kGarbage:
      error(ErrorClass::kSyntaxError, tok.position,
            "unexpected character " + describe_byte(tok.lexeme[0]),
            "skipped character");
      break;
    }
    last_kind_ = tok.kind;
  }
  finish();

  MolecularGraph raw = std::move(builder_).build();
  if (!aromatic_candidates_.empty()) {
    auto in_ring = ring_bonds(raw);
    GraphBuilder flagged(raw);
    for (int b: aromatic_candidates_) {
      if (in_ring[b])
        flagged.bond(b).aromatic = true;
    }
    raw = std::move(flagged).build();
  }

  ParseResult result;
  KekulizeResult kek = kekulize(raw, table_);
  for (auto &d: kek.diagnostics) {
    d.position = atom_pos_[d.position];
    diags_.push_back(std::move(d));
  }
  result.graph = std::move(kek.graph);

  for (int i = 0; i < static_cast<int>(result.graph.size()); ++i) {
    const Atom &atom = result.graph.atom(i);
    try {
      int free = free_valence(result.graph, i, table_);
      if (free < 0) {
        error(ErrorClass::kValenceError, atom_pos_[i],
              "explicit valence " + std::to_string(used_valence(result.graph, i))
                  + " of " + atom.element + " exceeds the maximum of "
                  + std::to_string(table_.max_valence(atom.element,
                                                      atom.formal_charge)),
              "kept bonds");
      }
    } catch (const UnknownElementError &) {
      error(ErrorClass::kValenceError, atom_pos_[i],
            "element " + atom.element + " has no valence entry", "kept atom");
    }
  }

  result.diagnostics = std::move(diags_);
  result.notes = std::move(notes_);
  result.atom_positions = std::move(atom_pos_);
  return result;
}

// Edmonds' blossom algorithm for maximum cardinality matching.
class BlossomMatcher {
public:
  explicit BlossomMatcher(const std::vector<std::vector<int>> &adj)
      : adj_(adj), n_(static_cast<int>(adj.size())), match_(n_, -1) { }

  const std::vector<int> &solve() {
    // Greedy start; augmenting paths fix the rest.
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1)
        continue;
      for (int u: adj_[v]) {
        if (match_[u] == -1) {
          match_[u] = v;
          match_[v] = u;
          break;
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1)
        continue;
      int u = find_path(v);
      while (u != -1) {
        int pv = parent_[u];
        int ppv = match_[pv];
        match_[u] = pv;
        match_[pv] = u;
        u = ppv;
      }
    }
    return match_;
  }

private:
  int lca(int a, int b) {
    std::vector<char> seen(n_, 0);
    while (true) {
      a = base_[a];
      seen[a] = 1;
      if (match_[a] == -1)
        break;
      a = parent_[match_[a]];
    }
    while (true) {
      b = base_[b];
      if (seen[b])
        return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = in_blossom_[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  int find_path(int root) {
    used_.assign(n_, 0);
    parent_.assign(n_, -1);
    base_.resize(n_);
    std::iota(base_.begin(), base_.end(), 0);

    used_[root] = 1;
    std::vector<int> queue { root };
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int to: adj_[v]) {
        if (base_[v] == base_[to] || match_[v] == to)
          continue;
        if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
          int cur = lca(v, to);
          in_blossom_.assign(n_, 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                queue.push_back(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match_[to] == -1)
            return to;
          used_[match_[to]] = 1;
          queue.push_back(match_[to]);
        }
      }
    }
    return -1;
  }

  const std::vector<std::vector<int>> &adj_;
  int n_;
  std::vector<int> match_;
  std::vector<int> parent_, base_;
  std::vector<char> used_, in_blossom_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto emit = [&](TokenKind kind, std::size_t len) {
    out.push_back({ kind, std::string(s.substr(i, len)), i });
    i += len;
  };

  while (i < s.size()) {
    char c = s[i];
    char next = i + 1 < s.size() ? s[i + 1] : '\0';
    switch (c) {
    case '[': {
      auto close = s.find(']', i + 1);
      auto reopen = s.find('[', i + 1);
      if (close != std::string_view::npos && reopen > close)
        emit(TokenKind::kBracketAtom, close - i + 1);
      else
        emit(TokenKind::kGarbage, 1);
      break;
    }
    case 'C':
      emit(TokenKind::kOrganicAtom, next == 'l' ? 2 : 1);
      break;
    case 'B':
      emit(TokenKind::kOrganicAtom, next == 'r' ? 2 : 1);
      break;
    case 'N':
    case 'O':
    case 'P':
    case 'S':
    case 'F':
    case 'I':
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      emit(TokenKind::kOrganicAtom, 1);
      break;
    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\':
      emit(TokenKind::kBond, 1);
      break;
    case '%': {
      std::size_t len = percent_label_length(s, i);
      emit(len > 0 ? TokenKind::kRingDigit : TokenKind::kGarbage,
           len > 0 ? len : 1);
      break;
    }
    case '(':
      emit(TokenKind::kOpenParen, 1);
      break;
    case ')':
      emit(TokenKind::kCloseParen, 1);
      break;
    case '.':
      emit(TokenKind::kDot, 1);
      break;
    default:
      emit(is_digit(c) ? TokenKind::kRingDigit : TokenKind::kGarbage, 1);
      break;
    }
  }
  return out;
}

std::string_view to_string(ErrorClass c) {
  switch (c) {
  case ErrorClass::kValid:
    return "Valid";
  case ErrorClass::kSyntaxError:
    return "SyntaxError";
  case ErrorClass::kUnclosedRing:
    return "UnclosedRing";
  case ErrorClass::kParenthesesError:
    return "ParenthesesError";
  case ErrorClass::kBondAlreadyExists:
    return "BondAlreadyExists";
  case ErrorClass::kAromaticityError:
    return "AromaticityError";
  case ErrorClass::kValenceError:
    return "ValenceError";
  }
  return "Unknown";
}

std::optional<ErrorClass> error_class_from_string(std::string_view name) {
  for (ErrorClass c: kAllErrorClasses) {
    if (to_string(c) == name)
      return c;
  }
  return std::nullopt;
}

ParseResult parse_lenient(std::string_view input, const ValenceTable &table) {
  return LenientParser(input, table).run();
}

StrictParseResult parse_strict(std::string_view input,
                               const ValenceTable &table) {
  ParseResult parsed = parse_lenient(input, table);
  StrictParseResult out;
  if (parsed.ok())
    out.graph = std::move(parsed.graph);
  else
    out.error = std::move(parsed.diagnostics.front());
  return out;
}

ErrorClass classify_error(std::string_view input, const ValenceTable &table) {
  ParseResult parsed = parse_lenient(input, table);
  return parsed.ok() ? ErrorClass::kValid
                     : parsed.diagnostics.front().error_class;
}

std::vector<bool> ring_bonds(const MolecularGraph &graph) {
  const int n = static_cast<int>(graph.size());
  std::vector<bool> in_ring(graph.bonds().size(), true);
  std::vector<int> tin(n, -1), low(n, 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;

  for (int root = 0; root < n; ++root) {
    if (tin[root] != -1)
      continue;
    tin[root] = low[root] = timer++;
    stack.push_back({ root, -1, 0 });
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto nbrs = graph.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (tin[nb.atom] != -1) {
          low[f.atom] = std::min(low[f.atom], tin[nb.atom]);
        } else {
          tin[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        }
        continue;
      }

      Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        int parent = stack.back().atom;
        low[parent] = std::min(low[parent], low[done.atom]);
        if (low[done.atom] > tin[parent])
          in_ring[done.parent_bond] = false;
      }
    }
  }
  return in_ring;
}

KekulizeResult kekulize(const MolecularGraph &graph, const ValenceTable &table) {
  KekulizeResult result;
  if (graph.is_kekulized()) {
    result.graph = graph;
    return result;
  }

  const int n = static_cast<int>(graph.size());
  GraphBuilder builder(graph);
  std::vector<bool> in_ring = ring_bonds(graph);
  std::vector<bool> aromatic(n, false);
  for (int i = 0; i < n; ++i)
    aromatic[i] = graph.atom(i).aromatic;

  for (int i = 0; i < n; ++i) {
    if (!aromatic[i])
      continue;
    auto nbrs = graph.neighbors(i);
    bool ring = std::any_of(nbrs.begin(), nbrs.end(),
                            [&](Neighbor nb) { return in_ring[nb.bond]; });
    if (!ring) {
      aromatic[i] = false;
      result.diagnostics.push_back({ ErrorClass::kAromaticityError,
                                     static_cast<std::size_t>(i),
                                     "non-ring atom marked aromatic",
                                     "demoted atom to aliphatic" });
    }
  }

  auto is_aromatic_bond = [&](int b) {
    const Bond &bond = graph.bond(b);
    return bond.aromatic && aromatic[bond.begin] && aromatic[bond.end];
  };

  std::vector<bool> needs_double(n, false);
  for (int i = 0; i < n; ++i) {
    if (!aromatic[i])
      continue;
    const Atom &atom = graph.atom(i);
    int used = used_valence(graph, i);
    std::vector<int> allowed;
    try {
      allowed = table.allowed_valences(atom.element, atom.formal_charge);
    } catch (const UnknownElementError &) {
      continue;
    }
    auto fit = std::find_if(allowed.begin(), allowed.end(),
                            [&](int v) { return v >= used; });
    needs_double[i] = fit != allowed.end() && *fit - used >= 1;
  }

  // Aromatic systems: components over aromatic bonds.
  std::vector<int> component(n, -1);
  int n_components = 0;
  for (int i = 0; i < n; ++i) {
    if (!aromatic[i] || component[i] != -1)
      continue;
    std::vector<int> stack { i };
    component[i] = n_components;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto nb: graph.neighbors(v)) {
        if (is_aromatic_bond(nb.bond) && component[nb.atom] == -1) {
          component[nb.atom] = n_components;
          stack.push_back(nb.atom);
        }
      }
    }
    ++n_components;
  }

  std::vector<int> local(n, -1), members;
  for (int i = 0; i < n; ++i) {
    if (needs_double[i]) {
      local[i] = static_cast<int>(members.size());
      members.push_back(i);
    }
  }
  std::vector<std::vector<int>> adj(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (auto nb: graph.neighbors(members[k])) {
      if (is_aromatic_bond(nb.bond) && local[nb.atom] != -1)
        adj[k].push_back(local[nb.atom]);
    }
  }
  BlossomMatcher matcher(adj);
  const std::vector<int> &match = matcher.solve();

  std::vector<bool> failed(n_components, false);
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (match[k] == -1)
      failed[component[members[k]]] = true;
  }

  for (int b = 0; b < static_cast<int>(graph.bonds().size()); ++b) {
    Bond &bond = builder.bond(b);
    if (is_aromatic_bond(b)) {
      int lb = local[bond.begin], le = local[bond.end];
      bool matched = lb != -1 && le != -1 && match[lb] == le
                     && !failed[component[bond.begin]];
      bond.order = matched ? 2 : 1;
    } else if (bond.aromatic) {
      bond.order = 1;
    }
    bond.aromatic = false;
  }
  for (int i = 0; i < n; ++i)
    builder.atom(i).aromatic = false;

  for (int c = 0; c < n_components; ++c) {
    if (!failed[c])
      continue;
    int first = -1, count = 0;
    for (int i = 0; i < n; ++i) {
      if (component[i] == c) {
        if (first == -1)
          first = i;
        ++count;
      }
    }
    result.diagnostics.push_back(
        { ErrorClass::kAromaticityError, static_cast<std::size_t>(first),
          "cannot kekulize aromatic system",
          "demoted " + std::to_string(count)
              + " aromatic atoms to single bonds" });
  }

  result.graph = std::move(builder).build();
  return result;
}

}  // namespace smiself
