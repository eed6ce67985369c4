#include "cftg/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace cftg {

bool is_valid_symbol_name(const std::string& name) {
  if (name.empty()) return false;
  // A {digits,digits} group (as in S{2,3} or pi{1,3}) counts as part of the
  // name; outside such groups the structural characters are forbidden.
  static const std::string forbidden = "(),|#/:";
  int depth = 0;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '{') {
      ++depth;
      continue;
    }
    if (c == '}') {
      if (--depth < 0) return false;
      continue;
    }
    if (depth > 0) {
      if (c != ',' && !std::isdigit(static_cast<unsigned char>(c))) return false;
      continue;
    }
    if (forbidden.find(c) != std::string::npos) return false;
  }
  if (depth != 0) return false;
  // x followed by digits is reserved for variables.
  if (name[0] == 'x' && name.size() > 1 &&
      std::all_of(name.begin() + 1, name.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  return true;
}

RankedAlphabet RankedAlphabet::make(const std::vector<RankedSymbol>& entries) {
  if (entries.empty()) raise("EmptyAlphabet", "an alphabet needs at least one symbol");
  RankedAlphabet a;
  for (const auto& s : entries) {
    if (s.name.empty()) raise("EmptyName", "symbol with empty name");
    if (!is_valid_symbol_name(s.name))
      raise("InvalidName", "'" + s.name + "' is not a legal symbol name");
    if (s.rank < 0) raise("NegativeRank", "'" + s.name + "' has negative rank");
    if (a.index_.count(s.name))
      raise("DuplicateName", "symbol '" + s.name + "' declared twice");
    a.index_[s.name] = a.symbols_.size();
    a.symbols_.push_back(s);
  }
  return a;
}

bool RankedAlphabet::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

const RankedSymbol* RankedAlphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &symbols_[it->second];
}

const RankedSymbol& RankedAlphabet::at(const std::string& name) const {
  const RankedSymbol* s = find(name);
  if (!s) raise("UnknownSymbol", "'" + name + "' is not in the alphabet");
  return *s;
}

std::vector<RankedSymbol> RankedAlphabet::terminals() const {
  std::vector<RankedSymbol> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::Terminal) out.push_back(s);
  return out;
}

std::vector<RankedSymbol> RankedAlphabet::nonterminals() const {
  std::vector<RankedSymbol> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::Nonterminal) out.push_back(s);
  return out;
}

int RankedAlphabet::max_rank() const {
  int m = 0;
  for (const auto& s : symbols_) m = std::max(m, s.rank);
  return m;
}

int RankedAlphabet::max_rank(SymbolKind kind) const {
  int m = 0;
  for (const auto& s : symbols_)
    if (s.kind == kind) m = std::max(m, s.rank);
  return m;
}

RankedAlphabet make_alphabet(
    const std::vector<std::tuple<std::string, int, SymbolKind>>& entries) {
  std::vector<RankedSymbol> syms;
  syms.reserve(entries.size());
  for (const auto& [name, rank, kind] : entries)
    syms.push_back({name, rank, kind});
  return RankedAlphabet::make(syms);
}

std::vector<Diagnostic> validate_alphabet(const RankedAlphabet& alphabet) {
  std::vector<Diagnostic> out;
  bool nullary_terminal = false;
  for (const auto& s : alphabet.symbols())
    if (s.kind == SymbolKind::Terminal && s.rank == 0) nullary_terminal = true;
  if (!nullary_terminal)
    out.push_back({Diagnostic::Severity::Warning, "NoNullaryTerminal",
                   "no terminal of rank 0: every terminal tree language over this "
                   "alphabet is empty"});
  return out;
}

DerivedSort derived_sort(const DerivedSymbol& sym) {
  if (const auto* l = std::get_if<LiftedSym>(&sym)) return {{}, l->rank};
  if (const auto* p = std::get_if<ProjectionSym>(&sym)) return {{}, p->arity};
  const auto& s = std::get<SubstitutionSym>(sym);
  DerivedSort d;
  d.args.push_back(s.inner);
  d.args.insert(d.args.end(), static_cast<std::size_t>(s.inner), s.outer);
  d.result = s.outer;
  return d;
}

std::string derived_symbol_name(const DerivedSymbol& sym) {
  if (const auto* l = std::get_if<LiftedSym>(&sym)) return l->base;
  if (const auto* p = std::get_if<ProjectionSym>(&sym))
    return "pi{" + std::to_string(p->index) + "," + std::to_string(p->arity) + "}";
  const auto& s = std::get<SubstitutionSym>(sym);
  return "S{" + std::to_string(s.inner) + "," + std::to_string(s.outer) + "}";
}

bool DerivedAlphabet::member(const DerivedSymbol& sym) const {
  if (const auto* l = std::get_if<LiftedSym>(&sym)) {
    const RankedSymbol* s = base_.find(l->base);
    return s && s->rank == l->rank;
  }
  if (const auto* p = std::get_if<ProjectionSym>(&sym))
    return p->index >= 1 && p->index <= p->arity;
  const auto& s = std::get<SubstitutionSym>(sym);
  return s.inner >= 0 && s.outer >= 0;
}

}  // namespace cftg
