#include "cftg/lemma.hpp"

#include <algorithm>
#include <set>

#include "cftg/lifting.hpp"
#include "cftg/random_gen.hpp"

namespace cftg {

std::string LemmaReport::to_text() const {
  std::string out;
  out += "identity: " + std::to_string(identity_pass) + "/" +
         std::to_string(identity_total) + " pass\n";
  out += "diagram: " + std::to_string(diagram_pass) + "/" +
         std::to_string(diagram_total) + " pass\n";
  out += "language: " +
         std::string(language_equal ? "equal" : "DIFFERENT") + " at steps <= " +
         std::to_string(language_steps) + " (" + std::to_string(language_terms) +
         " terms)\n";
  out += std::string("overall: ") + (all_pass() ? "PASS" : "FAIL") + "\n";
  return out;
}

LemmaReport run_lemma_suites(const Cftg& g, const LemmaOptions& options) {
  LemmaReport r;
  r.language_steps = options.language_steps;
  std::mt19937 rng(options.seed);

  // beta . LIFT identity on random terms over Sigma u F with variables
  for (int i = 0; i < options.samples; ++i) {
    int k = static_cast<int>(rng() % static_cast<unsigned>(options.max_vars + 1));
    Term t = random_term(g.alphabet, k, options.max_term_nodes, rng);
    ++r.identity_total;
    if (beta_with_nonterminals(lift_term(t, k, g.alphabet)) == t) ++r.identity_pass;
  }

  // diagram commutation per production on random well-sorted derived terms
  int max_sort = std::max(g.alphabet.max_rank(), 1);
  for (const Production& p : g.productions) {
    for (int i = 0; i < options.samples; ++i) {
      int sort = static_cast<int>(rng() % static_cast<unsigned>(max_sort + 1));
      DerivedTerm d =
          random_derived_term(g.alphabet, sort, options.derived_depth, rng);
      ++r.diagram_total;
      if (check_diagram(p, d, g.alphabet)) ++r.diagram_pass;
    }
  }

  // bounded language correspondence: beta-images of the lifted grammar's
  // terminal trees against the inside-out language, equal step bounds (one
  // lifted step per original step)
  Bounds bounds{options.language_steps, options.language_max_nodes};
  TermEnumeration io = enumerate_io(g, bounds);
  Cftg gd = lift_grammar(g);
  TermEnumeration reg = enumerate_regular(gd, bounds);
  std::set<Term> via_beta;
  for (const Term& t : reg.terms)
    via_beta.insert(beta(decode_derived(t, g.alphabet)));
  std::set<Term> direct(io.terms.begin(), io.terms.end());
  r.language_equal = via_beta == direct;
  r.language_terms = static_cast<int>(direct.size());
  return r;
}

}  // namespace cftg
