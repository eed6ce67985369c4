#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cftg/alphabet.hpp"

namespace cftg {

/// Finite ordered tree over ranked symbols, with variable leaves x1, x2, ...
/// Immutable after construction; plain value semantics.
class Term {
public:
  Term() = default;  // empty placeholder so containers work; not a valid term

  static Term symbol(std::string name, std::vector<Term> children = {});
  static Term variable(int index);  // index >= 1

  bool is_variable() const { return var_ > 0; }
  int variable_index() const { return var_; }
  const std::string& label() const { return name_; }
  const std::vector<Term>& children() const { return kids_; }
  int rank() const { return static_cast<int>(kids_.size()); }

  int node_count() const;
  /// Largest variable index occurring in the term (0 if none).
  int max_variable() const;
  bool contains_symbol(const std::string& name) const;

  /// Canonical serialization: `name`, `name(t1,...,tn)`, `xN`. No whitespace.
  std::string to_string() const;

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
  bool operator<(const Term& other) const { return compare(other) < 0; }

  /// Three-way structural comparison in one pass. (Defining operator< via
  /// vector<Term>::operator< would re-compare each child twice and go
  /// exponential in tree depth.)
  int compare(const Term& other) const;

private:
  std::string name_;
  int var_ = 0;
  std::vector<Term> kids_;
};

/// Shortlex on the canonical serialization; the order used for all printed
/// enumerations.
bool shortlex_less(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Addresses (tree domains)
// ---------------------------------------------------------------------------

/// Node address: child indices from the root. Stored 0-based, printed
/// 1-based ("ε" for the root, "12" for second child of first child).
struct Address {
  std::vector<int> path;

  std::string to_string() const;
  bool operator==(const Address&) const = default;
  bool operator<(const Address& other) const { return path < other.path; }
};

/// All addresses of t in depth-first preorder (root first).
std::vector<Address> addresses_of(const Term& t);

/// Subterm at address; throws InvalidAddress when the address does not exist.
const Term& subterm_at(const Term& t, const Address& a);

/// Copy of t with the subterm at the address replaced.
Term replace_at(const Term& t, const Address& a, const Term& replacement);

/// True iff the set is nonempty, prefix-closed and left-sibling-closed with
/// all child indices < max_branch.
bool validate_tree_domain(const std::vector<Address>& domain, int max_branch);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// First-order substitution: every variable x_i becomes args[i-1]. Structure
/// is otherwise unchanged. Throws ArityMismatch when the term mentions a
/// variable beyond args.size().
Term substitute(const Term& t, const std::vector<Term>& args);

/// String value of a terminal tree: rank-0 leaves contribute their label
/// (members of empty_symbols contribute nothing), rank-1 nodes contribute
/// their label followed by the value of their child, higher-rank nodes
/// concatenate their children's values. One map covers both word encodings:
/// frontier reading for rank >= 2, left-concatenation for monadic chains.
///
/// Variables always fail; when an alphabet is supplied, nonterminal symbols
/// fail as well (code NonTerminalLeaf).
std::string yield_of(const Term& t, const std::set<std::string>& empty_symbols = {},
                     const RankedAlphabet* alphabet = nullptr);

/// Parse `name`, `name(t1,...,tn)`, `xN` against an alphabet. Every symbol
/// must exist with matching rank and every variable index must lie in 1..k.
/// Errors cite line and column.
Term parse_term(const std::string& text, const RankedAlphabet& alphabet, int k);

/// Parse without an alphabet: ranks are taken from the child counts and any
/// identifier is accepted. Variables are not allowed.
Term parse_term_lenient(const std::string& text);

}  // namespace cftg
