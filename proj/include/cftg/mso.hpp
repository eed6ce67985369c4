#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cftg/grammar.hpp"
#include "cftg/structure.hpp"

namespace cftg {

/// Monadic second-order formulas over a relational vocabulary. Node
/// variables start with a lowercase letter, set variables with an uppercase
/// one; the convention decides which kind a quantifier binds.
class MsoFormula {
public:
  enum class Kind {
    True, False,
    Eq,       // v1 = v2
    Rel,      // name(v1, v2), e.g. "<" or "<_2"
    Pred,     // name(v1), a label predicate
    In,       // v1 in v2 (set variable)
    Not, And, Or, Implies, Iff,
    Exists, Forall,        // node quantifiers, name = bound variable
    ExistsSet, ForallSet,  // set quantifiers
  };

  static MsoFormula truth(bool value);
  static MsoFormula eq(std::string x, std::string y);
  static MsoFormula rel(std::string name, std::string x, std::string y);
  static MsoFormula pred(std::string name, std::string x);
  static MsoFormula in(std::string x, std::string X);
  static MsoFormula negation(MsoFormula f);
  static MsoFormula conjunction(std::vector<MsoFormula> fs);
  static MsoFormula disjunction(std::vector<MsoFormula> fs);
  static MsoFormula implies(MsoFormula a, MsoFormula b);
  static MsoFormula iff(MsoFormula a, MsoFormula b);
  static MsoFormula quantifier(Kind kind, std::string var, MsoFormula body);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // rel/pred name, bound var
  const std::string& v1() const { return v1_; }
  const std::string& v2() const { return v2_; }
  const std::vector<MsoFormula>& kids() const { return kids_; }

  /// Parenthesized prefix syntax; see parse_formula.
  std::string to_text() const;

  /// (node variables, set variables) occurring free.
  std::pair<std::set<std::string>, std::set<std::string>> free_variables() const;

private:
  Kind kind_ = Kind::True;
  std::string name_, v1_, v2_;
  std::vector<MsoFormula> kids_;
};

/// True iff the variable name denotes a set variable (uppercase first char).
bool is_set_variable(const std::string& name);

struct Vocabulary {
  std::set<std::string> unary;   // predicate names (node labels)
  std::set<std::string> binary;  // relation names ("<", "<_1", ...)
};

Vocabulary word_vocabulary(const std::set<std::string>& letters);
Vocabulary tree_vocabulary(const RankedAlphabet& alphabet);
Vocabulary vocabulary_of(const Structure& s);

/// Prefix syntax:
///   true | false
///   (= x y)  (< x y)  (succ 2 x y)  (P a x)  (in x X)
///   (not f)  (and f g ...)  (or f g ...)  (-> f g)  (<-> f g)
///   (exists x f)  (forall X f)
/// When a vocabulary is given, predicate/relation names are checked against
/// it (UnknownRelation). Syntax errors cite line and column.
MsoFormula parse_formula(const std::string& text,
                         const std::optional<Vocabulary>& vocabulary = std::nullopt);

struct Assignment {
  std::map<std::string, std::string> node;
  std::map<std::string, std::set<std::string>> set;
};

/// Brute-force guards; exceeding one raises BoundTooLarge unless unguarded.
struct EvalOptions {
  int max_subset_domain = 14;   // set quantification enumerates 2^|B| subsets
  int max_set_depth = 3;        // nested set quantifiers
  int max_word_length = 12;     // models_of_words
  int max_tree_nodes = 14;      // models_of_trees
  bool unguarded = false;
};

/// Standard satisfaction; set quantifiers range over all subsets of the
/// domain. Unassigned variables in atoms raise UnboundVariable.
bool eval(const Structure& m, const MsoFormula& f, const Assignment& g = {},
          const EvalOptions& opts = {});

/// All words over `letters` of length <= max_len whose word model satisfies
/// the closed formula; shortlex order.
std::vector<std::string> models_of_words(const MsoFormula& f,
                                         const std::vector<std::string>& letters,
                                         int max_len, const EvalOptions& opts = {});

/// All terminal trees over the alphabet with <= max_nodes nodes whose tree
/// model satisfies the closed formula; shortlex order.
std::vector<Term> models_of_trees(const MsoFormula& f, const RankedAlphabet& alphabet,
                                  int max_nodes, const EvalOptions& opts = {});

/// Every terminal tree with at most max_nodes nodes (enumeration backend of
/// models_of_trees, exposed for grammar/formula comparisons).
std::vector<Term> all_terminal_trees(const RankedAlphabet& alphabet, int max_nodes);

// ---------------------------------------------------------------------------
// Desk-scale definability checks (Elgot / Doner-Thatcher-Wright)
// ---------------------------------------------------------------------------

struct DefinabilityReport {
  std::vector<std::string> only_grammar;  // generated but not a model
  std::vector<std::string> only_formula;  // model but not generated
  bool agree() const { return only_grammar.empty() && only_formula.empty(); }
  std::string to_text() const;
};

/// Words: yields of the regular grammar (restricted to length <= max_len)
/// against word models of the sentence over the given letters.
DefinabilityReport check_definability_words(const Cftg& g, const MsoFormula& f,
                                            const std::vector<std::string>& letters,
                                            int max_len,
                                            const std::set<std::string>& empty_symbols,
                                            const Bounds& grammar_bounds,
                                            const EvalOptions& opts = {});

/// Trees: the regular tree language (restricted to <= max_nodes nodes)
/// against tree models of the sentence.
DefinabilityReport check_definability_trees(const Cftg& g, const MsoFormula& f,
                                            int max_nodes, const Bounds& grammar_bounds,
                                            const EvalOptions& opts = {});

}  // namespace cftg
