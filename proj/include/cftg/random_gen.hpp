#pragma once

#include <random>

#include "cftg/lifting.hpp"
#include "cftg/term.hpp"

namespace cftg {

/// Seeded generators for the property suites. Only mt19937 outputs are used
/// (no distribution objects), so sequences are identical everywhere.

/// Random term over the alphabet and X_num_vars with at most max_nodes
/// nodes. Nonterminal symbols take part like any other ranked symbol.
Term random_term(const RankedAlphabet& alphabet, int num_vars, int max_nodes,
                 std::mt19937& rng);

/// Random well-sorted derived term over D(alphabet) of the given sort, depth
/// limited. Leaves may be lifted constants, nonterminal leaves, and (for
/// sort >= 1) projections; non-canonical shapes are produced on purpose.
DerivedTerm random_derived_term(const RankedAlphabet& alphabet, int sort,
                                int max_depth, std::mt19937& rng);

}  // namespace cftg
