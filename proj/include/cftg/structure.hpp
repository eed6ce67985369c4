#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cftg/term.hpp"

namespace cftg {

/// Finite relational structure: the common shape of word models (B, <, P_a)
/// and labeled tree models (B, <_i, P_a). Elements are named by strings —
/// positions "1".."n" for words, addresses for trees — and the domain vector
/// fixes the canonical order.
struct Structure {
  std::vector<std::string> domain;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> binary;
  std::map<std::string, std::set<std::string>> unary;

  bool in_domain(const std::string& e) const;

  /// Line-based text dump, stable across runs; parse_structure inverts it.
  std::string to_text() const;
};

Structure parse_structure(const std::string& text);

/// Labeled tree model for a variable-free term: domain = addresses, <_i for
/// i = 1..max_rank (all present, possibly empty), one P_a per occurring or
/// declared label.
Structure term_to_structure(const Term& t, int max_rank);

/// Convenience: max_rank and the predicate name set come from the alphabet.
Structure term_to_structure(const Term& t, const RankedAlphabet& alphabet);

/// Word model: domain 1..|u|, "<" the strict total order, P_a per letter.
/// Tokens are whitespace-separated when the input contains whitespace;
/// otherwise each character is a letter. Unknown letters fail.
Structure string_to_structure(const std::string& u,
                              const std::set<std::string>& letters);

/// Letter sequence of a word input under the tokenization rule above.
std::vector<std::string> split_word(const std::string& u,
                                    const std::set<std::string>& letters);

}  // namespace cftg
