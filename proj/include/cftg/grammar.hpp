#pragma once

#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cftg/term.hpp"

namespace cftg {

/// F(x1,...,xm) -> rhs, with rhs over the full alphabet and X_m.
struct Production {
  std::string lhs;
  int arity = 0;
  Term rhs;
};

/// Context-free tree grammar <Sigma, F, S, P>. Regular tree grammars are the
/// special case where every nonterminal has rank 0.
struct Cftg {
  RankedAlphabet alphabet;  // terminals and nonterminals together
  std::string start;
  std::vector<Production> productions;
};

/// Enumeration cutoffs. max_steps is inclusive (derivations of up to that
/// many steps are explored); max_nodes is exclusive — any sentential form
/// with max_nodes or more nodes is pruned.
struct Bounds {
  int max_steps = std::numeric_limits<int>::max();
  int max_nodes = std::numeric_limits<int>::max();
};

struct DerivationStep {
  int production = 0;  // index into Cftg::productions
  Address at;
  Term before;
  Term after;
};

struct TermEnumeration {
  std::vector<Term> terms;  // shortlex order, deduplicated
  bool bounds_exhausted = false;
};

struct YieldEnumeration {
  std::vector<std::string> words;  // shortlex order, deduplicated
  bool bounds_exhausted = false;
};

/// Well-formedness: start is a rank-0 nonterminal, every production lhs is a
/// nonterminal with matching arity, every rhs is well-ranked with variables
/// within the lhs arity. Violations come back as diagnostics, not throws.
std::vector<Diagnostic> validate_grammar(const Cftg& g);

/// True iff every nonterminal has rank 0.
bool is_regular(const Cftg& g);

/// All inside-out steps from a sentential form: a redex F(t1,...,tm) may be
/// rewritten only when every t_i is a terminal tree. Steps are ordered by
/// redex address (preorder), then production index.
std::vector<DerivationStep> io_successors(const Cftg& g, const Term& t);

/// Terminal trees reachable from the start symbol within bounds.
/// Breadth-first over sentential forms, deduplicated; deterministic output.
TermEnumeration enumerate_io(const Cftg& g, const Bounds& bounds);

/// Same contract for regular grammars (where the inside-out restriction is
/// vacuous). Throws NotRegular otherwise.
TermEnumeration enumerate_regular(const Cftg& g, const Bounds& bounds);

/// Yields of enumerate_io(g, bounds), deduplicated and sorted.
YieldEnumeration yield_language(const Cftg& g, const Bounds& bounds,
                                const std::set<std::string>& empty_symbols);

/// A witness derivation start => ... => target (one step or more) within
/// bounds, or nullopt.
std::optional<std::vector<DerivationStep>> derivation_trace(const Cftg& g,
                                                            const Term& target,
                                                            const Bounds& bounds);

// ---------------------------------------------------------------------------
// Grammar files
//
//   # comment
//   terminals: cat/2 a/0 b/0 c/0
//   nonterminals: S/0 F/3
//   start: S
//   S -> F(a,b,c)
//   F(x1,x2,x3) -> F(cat(a,x1),cat(b,x2),cat(c,x3)) | cat(cat(x1,x2),x3)
// ---------------------------------------------------------------------------

Cftg parse_grammar(const std::string& text);
Cftg load_grammar(const std::string& path);
std::string print_grammar(const Cftg& g);

}  // namespace cftg
