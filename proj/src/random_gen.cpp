#include "cftg/random_gen.hpp"

#include <algorithm>

namespace cftg {

namespace {

int pick(std::mt19937& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

Term random_term_impl(const RankedAlphabet& alphabet, int num_vars, int budget,
                      std::mt19937& rng) {
  // leaves: variables and rank-0 symbols; inner nodes any rank <= budget-1
  std::vector<const RankedSymbol*> usable;
  for (const auto& s : alphabet.symbols())
    if (s.rank + 1 <= budget) usable.push_back(&s);

  bool allow_var = num_vars > 0;
  int choices = static_cast<int>(usable.size()) + (allow_var ? 1 : 0);
  if (choices == 0) raise("Internal", "alphabet has no symbol fitting the node budget");
  int c = pick(rng, choices);
  if (allow_var && c == static_cast<int>(usable.size()))
    return Term::variable(1 + pick(rng, num_vars));

  const RankedSymbol& sym = *usable[static_cast<std::size_t>(c)];
  std::vector<Term> kids;
  int remaining = budget - 1;
  for (int i = 0; i < sym.rank; ++i) {
    int reserve = sym.rank - i - 1;  // one node minimum per later child
    int child_budget = 1 + (remaining - reserve > 1
                                ? pick(rng, remaining - reserve - 1) + 0
                                : 0);
    if (child_budget > remaining - reserve) child_budget = remaining - reserve;
    kids.push_back(random_term_impl(alphabet, num_vars, child_budget, rng));
    remaining -= kids.back().node_count();
  }
  return Term::symbol(sym.name, std::move(kids));
}

}  // namespace

Term random_term(const RankedAlphabet& alphabet, int num_vars, int max_nodes,
                 std::mt19937& rng) {
  if (max_nodes < 1) raise("Internal", "max_nodes must be at least 1");
  return random_term_impl(alphabet, num_vars, max_nodes, rng);
}

DerivedTerm random_derived_term(const RankedAlphabet& alphabet, int sort,
                                int max_depth, std::mt19937& rng) {
  std::vector<const RankedSymbol*> of_sort;
  for (const auto& s : alphabet.symbols())
    if (s.rank == sort) of_sort.push_back(&s);

  auto leaf = [&]() -> DerivedTerm {
    // projection (needs sort >= 1) or a base symbol of matching rank
    bool can_project = sort >= 1;
    int choices = static_cast<int>(of_sort.size()) + (can_project ? 1 : 0);
    if (choices == 0)
      raise("Internal", "no leaf of sort " + std::to_string(sort) + " available");
    int c = pick(rng, choices);
    if (can_project && c == static_cast<int>(of_sort.size()))
      return DerivedTerm(DerivedTerm::Projection{1 + pick(rng, sort), sort});
    const RankedSymbol& sym = *of_sort[static_cast<std::size_t>(c)];
    if (sym.kind == SymbolKind::Nonterminal)
      return DerivedTerm(DerivedTerm::Nonterminal{sym.name, sym.rank});
    return DerivedTerm(DerivedTerm::Constant{sym.name, sym.rank});
  };

  if (max_depth <= 0 || pick(rng, 3) == 0) return leaf();

  // substitution node: S{n,sort} with a random head sort n that has leaves
  int n = pick(rng, std::min(alphabet.max_rank(), 3) + 1);
  std::vector<DerivedTerm> kids;
  kids.push_back(random_derived_term(alphabet, n, max_depth - 1, rng));
  for (int i = 0; i < n; ++i)
    kids.push_back(random_derived_term(alphabet, sort, max_depth - 1, rng));
  return DerivedTerm(DerivedTerm::Substitution{n, sort}, std::move(kids));
}

}  // namespace cftg
