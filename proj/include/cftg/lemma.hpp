#pragma once

#include <string>

#include "cftg/grammar.hpp"

namespace cftg {

/// Results of the three simulation-lemma suites run against one grammar:
/// the beta-after-lift identity, diagram commutation per production, and
/// bounded language correspondence between the grammar and its lift.
struct LemmaReport {
  int identity_pass = 0, identity_total = 0;
  int diagram_pass = 0, diagram_total = 0;
  bool language_equal = false;
  int language_terms = 0;  // size of the agreed term set
  int language_steps = 0;

  bool all_pass() const {
    return identity_pass == identity_total && diagram_pass == diagram_total &&
           language_equal;
  }
  std::string to_text() const;
};

struct LemmaOptions {
  int samples = 100;       // identity checks; each production gets `samples`
                           // diagram checks as well
  unsigned seed = 1;
  int max_term_nodes = 30;
  int max_vars = 4;
  int derived_depth = 3;
  int language_steps = 5;  // equal step bounds on both sides
  int language_max_nodes = 4000;
};

LemmaReport run_lemma_suites(const Cftg& g, const LemmaOptions& options);

}  // namespace cftg
