#pragma once

#include <map>
#include <string>
#include <vector>

#include "cftg/mso.hpp"

namespace cftg {

/// Syntactic interpretation I = (A, A_Omega(x), A_{<_i}(x,y), A_{P_a}(x)):
/// a tuple of MSO formulas over the source vocabulary that carves a target
/// tree model out of a source tree model. Successor formulas run from 1 to
/// the max rank of the target alphabet; one label formula per target symbol.
struct Interpretation {
  RankedAlphabet source;
  RankedAlphabet target;
  MsoFormula domain_sentence;               // A, closed
  MsoFormula domain_formula;                // A_Omega(x)
  std::map<int, MsoFormula> successor;      // i -> A_{<_i}(x,y)
  std::map<std::string, MsoFormula> label;  // a -> A_{P_a}(x)
};

/// Interpretation files: named sections, one formula per line.
///
///   source: f/2 a/0
///   target: f/2 a/0
///   domain-sentence: true
///   domain: true
///   succ 1: (succ 1 x y)
///   succ 2: (succ 2 x y)
///   label f: (P f x)
///   label a: (P a x)
Interpretation parse_interpretation(const std::string& text);
Interpretation load_interpretation(const std::string& path);

struct TransductionResult {
  Term output;
  /// source element -> address in the output tree, for debugging.
  std::vector<std::pair<std::string, std::string>> placement;
};

/// def_I on one input tree. The derived relations must satisfy the tree
/// model conditions; otherwise:
///   DomainSentenceFails  input does not satisfy A
///   EmptyDomain          A_Omega selects nothing
///   LabelClash           an element with zero or several labels
///   RankMismatch         label rank differs from the successor count
///   NotATreeDomain       successors not functional/contiguous, no unique
///                        root, or the graph is not a tree
TransductionResult apply_interpretation(const Interpretation& I, const Term& input,
                                        const EvalOptions& opts = {});

}  // namespace cftg
