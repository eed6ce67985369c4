#pragma once

#include <map>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "cftg/error.hpp"

namespace cftg {

enum class SymbolKind { Terminal, Nonterminal };

/// A name with a fixed arity. Names are free-form identifiers: nonempty, no
/// whitespace, none of `( ) , | # / :`, and not of the reserved variable
/// shape x1, x2, ...
struct RankedSymbol {
  std::string name;
  int rank = 0;
  SymbolKind kind = SymbolKind::Terminal;
};

bool is_valid_symbol_name(const std::string& name);

/// Finite ranked alphabet, terminals and nonterminals sharing one namespace.
/// Insertion order is preserved so printed output stays stable.
class RankedAlphabet {
public:
  RankedAlphabet() = default;

  /// Validating constructor; throws EmptyAlphabet, EmptyName, InvalidName,
  /// DuplicateName, NegativeRank.
  static RankedAlphabet make(const std::vector<RankedSymbol>& entries);

  bool contains(const std::string& name) const;
  /// nullptr when absent.
  const RankedSymbol* find(const std::string& name) const;
  /// Throws UnknownSymbol when absent.
  const RankedSymbol& at(const std::string& name) const;

  const std::vector<RankedSymbol>& symbols() const { return symbols_; }
  std::vector<RankedSymbol> terminals() const;
  std::vector<RankedSymbol> nonterminals() const;

  /// Largest rank over all symbols (0 for an empty alphabet).
  int max_rank() const;
  int max_rank(SymbolKind kind) const;

private:
  std::vector<RankedSymbol> symbols_;
  std::map<std::string, std::size_t> index_;
};

/// Convenience used throughout the tests: entries as (name, rank, kind).
RankedAlphabet make_alphabet(
    const std::vector<std::tuple<std::string, int, SymbolKind>>& entries);

/// Soft checks (currently: a nonempty terminal language needs a rank-0
/// terminal). Warnings only; hard invariants live in RankedAlphabet::make.
std::vector<Diagnostic> validate_alphabet(const RankedAlphabet& alphabet);

// ---------------------------------------------------------------------------
// Derived alphabet D(Sigma).
//
// The base alphabet's symbols are demoted to constants (one per rank-n
// symbol, of sort n), joined by projection constants pi_i^n and substitution
// operators S_{n,k}. The projection and substitution families exist for all
// n, k; membership is a predicate, never an enumeration.
// ---------------------------------------------------------------------------

/// sigma of rank n, demoted to a constant of sort n.
struct LiftedSym {
  std::string base;
  int rank = 0;
  bool operator==(const LiftedSym&) const = default;
};

/// pi_i^n: constant of sort n, 1 <= i <= n.
struct ProjectionSym {
  int index = 0;
  int arity = 0;
  bool operator==(const ProjectionSym&) const = default;
};

/// S_{n,k}: one head of sort n, then n arguments of sort k, result sort k.
struct SubstitutionSym {
  int inner = 0;  // n
  int outer = 0;  // k
  bool operator==(const SubstitutionSym&) const = default;
};

using DerivedSymbol = std::variant<LiftedSym, ProjectionSym, SubstitutionSym>;

struct DerivedSort {
  std::vector<int> args;
  int result = 0;
  bool operator==(const DerivedSort&) const = default;
};

/// Argument and result sorts of a derived symbol:
///   Lifted(sigma,n) -> ([], n)
///   Projection(i,n) -> ([], n)
///   Substitution(n,k) -> ([n, k, ..., k], k)  with n trailing k's
DerivedSort derived_sort(const DerivedSymbol& sym);

/// Display name: the base name, "pi{i,n}", or "S{n,k}".
std::string derived_symbol_name(const DerivedSymbol& sym);

class DerivedAlphabet {
public:
  explicit DerivedAlphabet(RankedAlphabet base) : base_(std::move(base)) {}

  const RankedAlphabet& base() const { return base_; }

  /// Membership in D(base): Lifted(sigma,n) iff sigma/n is in the base;
  /// Projection(i,n) iff 1 <= i <= n; Substitution(n,k) for all n, k >= 0.
  bool member(const DerivedSymbol& sym) const;

private:
  RankedAlphabet base_;
};

}  // namespace cftg
