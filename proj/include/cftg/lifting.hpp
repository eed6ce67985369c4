#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cftg/grammar.hpp"
#include "cftg/term.hpp"

namespace cftg {

/// Sort-annotated tree over the derived alphabet D(Sigma u F). Four label
/// kinds:
///   Constant     lifted base symbol (terminal kind), a leaf of its rank's sort
///   Nonterminal  lifted nonterminal, a leaf of its rank's sort ("F:3")
///   Projection   pi_i^n, a leaf of sort n
///   Substitution S_{n,k}, one head child of sort n then n children of sort k
/// Well-sortedness is checked at construction (code SortError).
class DerivedTerm {
public:
  struct Constant {
    std::string name;
    int sort = 0;
    bool operator==(const Constant&) const = default;
  };
  struct Nonterminal {
    std::string name;
    int sort = 0;
    bool operator==(const Nonterminal&) const = default;
  };
  struct Projection {
    int index = 0;
    int arity = 0;
    bool operator==(const Projection&) const = default;
  };
  struct Substitution {
    int inner = 0;  // n
    int outer = 0;  // k
    bool operator==(const Substitution&) const = default;
  };
  using Label = std::variant<Constant, Nonterminal, Projection, Substitution>;

  // placeholder so containers work; not a valid derived term
  DerivedTerm() : label_(Constant{}) {}
  DerivedTerm(Label label, std::vector<DerivedTerm> children = {});

  const Label& label() const { return label_; }
  const std::vector<DerivedTerm>& children() const { return kids_; }
  int sort() const { return sort_; }
  bool contains_nonterminal() const;

  /// `S{n,k}(head,arg,...)`, `pi{i,n}`, `F:3`; lifted constants print bare
  /// in head position and as `lift(name)` elsewhere. No whitespace.
  std::string to_string() const;

  bool operator==(const DerivedTerm& other) const;
  bool operator!=(const DerivedTerm& other) const { return !(*this == other); }

private:
  std::string to_string_impl(bool head_position) const;

  Label label_;
  std::vector<DerivedTerm> kids_;
  int sort_ = 0;
};

// ---------------------------------------------------------------------------
// LIFT and beta
// ---------------------------------------------------------------------------

/// The lift of a term over (alphabet, X_k) to an explicit derived term of
/// sort k:
///   x_i           ->  pi_i^k
///   sigma (rank 0) -> S{0,k}(sigma)
///   sigma(t1..tn)  -> S{n,k}(sigma, lift(t1), ..., lift(tn))
/// Base symbols of nonterminal kind become Nonterminal leaves, everything
/// else a Constant leaf; the tupling layer is never materialized.
DerivedTerm lift_term(const Term& t, int k, const RankedAlphabet& alphabet);

/// Evaluation in the tree substitution algebra:
///   Constant(sigma,n) -> sigma(x1,...,xn)
///   Projection(i,n)   -> x_i
///   S{n,k}(h,a1..an)  -> beta(h)[beta(a1),...,beta(an)]
/// Nonterminal leaves are an error (UnevaluatedNonterminal).
Term beta(const DerivedTerm& d);

/// beta extended to nonterminal leaves by F -> F(x1,...,xm), i.e. beta over
/// D(Sigma u F) with the nonterminals read as ordinary base constants.
Term beta_with_nonterminals(const DerivedTerm& d);

// ---------------------------------------------------------------------------
// Encoding as plain ranked terms
//
// Treating D(Sigma u F) as a ranked alphabet: S{n,k} has rank n+1, every
// other derived symbol rank 0. This is the form lifted grammars and the
// production homomorphisms work on.
// ---------------------------------------------------------------------------

Term encode_derived(const DerivedTerm& d);

/// Inverse of encode_derived; sorts are reconstructed from the S{n,k} /
/// pi{i,n} names and base ranks, and checked (SortError). Base symbols of
/// nonterminal kind decode to Nonterminal leaves.
DerivedTerm decode_derived(const Term& t, const RankedAlphabet& base);

/// Parser for derived-term syntax. Accepts the explicit forms S{n,k}(...),
/// pi{i,n}, lift(name), name:sort — and, when sorts are inferable, the
/// schematic shorthands bare S(...), pi1, and bare constants (which are
/// normalized to S{0,k}(name)). `base` may be null when the text is fully
/// annotated; `expected_sort` is required for schematic input and checked
/// otherwise.
DerivedTerm parse_derived_term(const std::string& text, const RankedAlphabet* base,
                               std::optional<int> expected_sort);

// ---------------------------------------------------------------------------
// Lifted grammars
// ---------------------------------------------------------------------------

/// The derived regular grammar G_D: each nonterminal F/m becomes a rank-0
/// nonterminal (of sort m), each production F(x1..xm) -> t becomes
/// F -> LIFT_m(t) encoded over the derived alphabet; the start symbol is
/// unchanged. The result always satisfies is_regular.
Cftg lift_grammar(const Cftg& g);

// ---------------------------------------------------------------------------
// Tree homomorphisms
// ---------------------------------------------------------------------------

/// Family h_n: Sigma_n -> T(Omega, X_n); the image of a rank-n symbol may
/// use x1..xn only. With identity_fallback, symbols missing from the map are
/// fixed (sigma -> sigma(x1..xn)), which stands in for totality on the
/// infinite derived alphabet.
struct HomFamily {
  std::map<std::string, std::pair<int, Term>> images;
  bool identity_fallback = false;
};

/// Induced homomorphism: h(sigma(t1..tn)) = images[sigma][h(t1),...,h(tn)];
/// variables are fixed. Throws UnknownSymbol / RankMismatch.
Term hom_apply(const HomFamily& h, const Term& t);

/// p as a homomorphism on T(Sigma u F, X): lhs F goes to the rhs, every
/// other symbol g/n of the signature to g(x1,...,xn).
HomFamily production_hom(const Production& p, const RankedAlphabet& signature);

/// The lifted simulation p_D on encoded derived terms: the rank-0 constant F
/// goes to the encoded LIFT of the rhs, every other symbol is fixed.
HomFamily lifted_production_hom(const Production& p, const RankedAlphabet& signature);

/// One instance of the commuting square from the simulation lemma:
///   beta(p_D(d))  ==  p(beta(d))
/// with beta extended to nonterminal leaves on both sides. `signature` is
/// the base alphabet Sigma u F of the grammar owning p.
bool check_diagram(const Production& p, const DerivedTerm& d,
                   const RankedAlphabet& signature);

}  // namespace cftg
