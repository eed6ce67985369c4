// Acceptance suite: reproduces the worked examples and property contracts at
// desk scale, one pass/fail line per criterion. Exits nonzero when any
// criterion fails.

#include <algorithm>
#include <cctype>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cftg/grammar.hpp"
#include "cftg/lifting.hpp"
#include "cftg/mso.hpp"
#include "cftg/random_gen.hpp"
#include "cftg/structure.hpp"
#include "cftg/transduction.hpp"
#include "support/fixtures.hpp"
#include "support/formula_gen.hpp"
#include "support/mso_oracle.hpp"
#include "support/oracles.hpp"

using namespace cftg;
using testutil::load;
using testutil::read_file;

namespace {

int failures = 0;

void run(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    std::cout << name << ": PASS" << (detail.empty() ? "" : " — " + detail) << "\n";
  } catch (const std::exception& e) {
    std::cout << name << ": FAIL — " << e.what() << "\n";
    ++failures;
  }
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::set<std::string> word_set(const YieldEnumeration& y) {
  return {y.words.begin(), y.words.end()};
}

std::string show_difference(const std::set<std::string>& got,
                            const std::set<std::string>& want) {
  std::ostringstream out;
  for (const auto& w : got)
    if (!want.count(w)) out << " unexpected \"" << w << "\"";
  for (const auto& w : want)
    if (!got.count(w)) out << " missing \"" << w << "\"";
  return out.str();
}

// criterion 1: exact yield languages against direct string-set generators
std::string criterion_yields() {
  YieldEnumeration gpp = yield_language(load("gpp.grammar"), Bounds{6, 400}, {"eps"});
  std::set<std::string> want_gpp = oracle::anbn(5);
  require(word_set(gpp) == want_gpp,
          "gpp yields differ:" + show_difference(word_set(gpp), want_gpp));

  YieldEnumeration cross =
      yield_language(load("cross_serial.grammar"), Bounds{5, 400}, {"eps"});
  std::set<std::string> want_cross = oracle::cross_serial(4);
  require(word_set(cross) == want_cross,
          "cross-serial yields differ:" + show_difference(word_set(cross), want_cross));

  YieldEnumeration abc = yield_language(load("anbncn.grammar"), Bounds{5, 400}, {});
  std::set<std::string> want_abc = oracle::anbncn(1, 4);
  require(word_set(abc) == want_abc,
          "anbncn yields differ:" + show_difference(word_set(abc), want_abc));
  return "three yield languages, exact set equality";
}

// criterion 2: figure replay through derivation_trace
std::string criterion_figures() {
  Cftg g = load("anbncn.grammar");

  Term first = parse_term("cat(cat(a,b),c)", g.alphabet, 0);
  auto t1 = derivation_trace(g, first, Bounds{6, 2000});
  require(t1.has_value() && t1->size() == 2, "two-step derivation not found");
  require((*t1)[0].after.to_string() == "F(a,b,c)", "intermediate form differs");
  require((*t1)[1].after.to_string() == "cat(cat(a,b),c)", "final form differs");

  Term second = parse_term("cat(cat(cat(a,a),cat(b,b)),cat(c,c))", g.alphabet, 0);
  auto t2 = derivation_trace(g, second, Bounds{6, 2000});
  require(t2.has_value() && t2->size() == 3, "three-step derivation not found");
  require((*t2)[0].after.to_string() == "F(a,b,c)", "first form differs");
  require((*t2)[1].after.to_string() == "F(cat(a,a),cat(b,b),cat(c,c))",
          "second form differs");
  require((*t2)[2].after.to_string() == "cat(cat(cat(a,a),cat(b,b)),cat(c,c))",
          "third form differs");
  return "2-step and 3-step traces match the figures";
}

// criterion 3: the derived grammar against the transcribed table
std::string criterion_derived_grammar() {
  Cftg g = load("anbncn.grammar");
  Cftg gd = lift_grammar(g);
  require(is_regular(gd), "lifted grammar is not regular");
  require(gd.start == g.start, "start symbol changed");

  // parse the transcription, normalizing the schematic notation
  std::map<std::string, std::vector<DerivedTerm>> expected;
  std::istringstream table(read_file("gd_expected.txt"));
  std::string line;
  while (std::getline(table, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto arrow = line.find("->");
    if (arrow == std::string::npos) continue;
    std::string lhs = line.substr(0, arrow);
    lhs.erase(std::remove_if(lhs.begin(), lhs.end(),
                             [](unsigned char c) { return std::isspace(c); }),
              lhs.end());
    int sort = g.alphabet.at(lhs).rank;
    std::istringstream alts(line.substr(arrow + 2));
    std::string alt;
    while (std::getline(alts, alt, '|'))
      expected[lhs].push_back(parse_derived_term(alt, &g.alphabet, sort));
  }

  std::map<std::string, std::vector<DerivedTerm>> actual;
  for (const Production& p : gd.productions)
    actual[p.lhs].push_back(decode_derived(p.rhs, g.alphabet));

  require(expected.size() == actual.size(), "nonterminal sets differ");
  for (const auto& [lhs, alts] : expected) {
    require(actual.count(lhs), "missing productions for " + lhs);
    const auto& got = actual.at(lhs);
    require(got.size() == alts.size(), "alternative count differs for " + lhs);
    for (const auto& want : alts) {
      bool found = false;
      for (const auto& have : got) found = found || have == want;
      require(found, "production for " + lhs + " not produced: " + want.to_string());
    }
  }
  return "G_D matches the transcribed table after normalization";
}

// criterion 4: beta after LIFT is the identity on 1000 random terms
std::string criterion_beta_lift_identity() {
  Cftg g = load("anbncn.grammar");
  std::mt19937 rng(20240811);
  int pass = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    int k = static_cast<int>(rng() % 5);  // k <= 4
    Term t = random_term(g.alphabet, k, 30, rng);
    if (beta_with_nonterminals(lift_term(t, k, g.alphabet)) == t) ++pass;
  }
  require(pass == total, std::to_string(pass) + "/" + std::to_string(total));
  return "1000/1000 identities";
}

// criterion 5: the commuting square on every production of three grammars
std::string criterion_diagram() {
  std::mt19937 rng(5);
  int checked = 0;
  for (const char* name : {"anbncn.grammar", "copying.grammar", "gpp.grammar"}) {
    Cftg g = load(name);
    int max_sort = std::max(1, g.alphabet.max_rank());
    for (const Production& p : g.productions) {
      for (int i = 0; i < 200; ++i) {
        int sort = static_cast<int>(rng() % static_cast<unsigned>(max_sort + 1));
        DerivedTerm d = random_derived_term(g.alphabet, sort, 3, rng);
        require(check_diagram(p, d, g.alphabet),
                std::string("diagram failed for ") + name + " production " + p.lhs +
                    " on " + d.to_string());
        ++checked;
      }
    }
  }
  return std::to_string(checked) + " commuting squares";
}

// criterion 6: bounded language correspondence, with an independent
// inside-out enumerator vouching for the copying grammar
std::string criterion_language_correspondence() {
  for (const char* name : {"anbncn.grammar", "copying.grammar"}) {
    Cftg g = load(name);
    Bounds bounds{5, 4000};
    TermEnumeration io = enumerate_io(g, bounds);
    TermEnumeration reg = enumerate_regular(lift_grammar(g), bounds);
    std::set<Term> via_beta;
    for (const Term& t : reg.terms) via_beta.insert(beta(decode_derived(t, g.alphabet)));
    std::set<Term> direct(io.terms.begin(), io.terms.end());
    require(via_beta == direct, std::string("correspondence failed for ") + name);
  }

  // oracle check on the copying grammar: independent enumerator, and every
  // tree duplicates its subterm
  Cftg copying = load("copying.grammar");
  std::set<Term> direct = oracle::io_language(copying, 5);
  TermEnumeration io = enumerate_io(copying, Bounds{5, 4000});
  require(std::set<Term>(io.terms.begin(), io.terms.end()) == direct,
          "independent enumerator disagrees on the copying grammar");
  for (const Term& t : direct)
    require(t.rank() == 2 && t.children()[0] == t.children()[1],
            "copying grammar produced unequal halves: " + t.to_string());
  return "beta images equal the inside-out languages at steps <= 5";
}

// criterion 7: Elgot and Doner-Thatcher-Wright at desk scale
std::string criterion_definability() {
  MsoFormula all_a = parse_formula(read_file("all_a.msof"));
  DefinabilityReport elgot = check_definability_words(
      load("astar.grammar"), all_a, {"a", "b"}, 6, {"eps"}, Bounds{8, 60});
  require(elgot.agree(), "Elgot comparison differs: " + elgot.to_text());

  // regex-style oracle: words over {a,b} of only a's, length <= 6
  std::set<std::string> expect = oracle::a_star(6);
  std::vector<std::string> ms = models_of_words(all_a, {"a", "b"}, 6);
  require(std::set<std::string>(ms.begin(), ms.end()) == expect,
          "model set differs from the a* oracle");

  RankedAlphabet fa = make_alphabet(
      {{"f", 2, SymbolKind::Terminal}, {"a", 0, SymbolKind::Terminal}});
  MsoFormula root_f = parse_formula(read_file("root_f.msof"), tree_vocabulary(fa));
  DefinabilityReport dtw =
      check_definability_trees(load("rootf.grammar"), root_f, 7, Bounds{8, 60});
  require(dtw.agree(), "DTW comparison differs: " + dtw.to_text());

  // brute-force oracle: all trees over {f/2,a/0} with <= 7 nodes and f root
  std::set<std::string> oracle_side;
  for (const Term& t : oracle::all_trees({{"f", 2}, {"a", 0}}, 7))
    if (t.label() == "f") oracle_side.insert(t.to_string());
  std::set<std::string> model_side;
  for (const Term& t : models_of_trees(root_f, fa, 7)) model_side.insert(t.to_string());
  require(model_side == oracle_side, "tree model set differs from the oracle");
  return "word sets to length 6 and tree sets to 7 nodes, zero difference";
}

// criterion 8: transduction properties and error fixtures
std::string criterion_transductions() {
  Interpretation id = parse_interpretation(read_file("identity_fgab.interp"));
  std::mt19937 rng(88);
  for (int i = 0; i < 100; ++i) {
    Term t = random_term(id.source, 0, 12, rng);
    require(apply_interpretation(id, t).output == t,
            "identity interpretation moved " + t.to_string());
  }

  Interpretation re = parse_interpretation(read_file("relabel_a_to_b.interp"));
  for (int i = 0; i < 100; ++i) {
    Term t = random_term(re.source, 0, 12, rng);
    require(apply_interpretation(re, t).output == oracle::relabel(t, "a", "b"),
            "relabeling differs from the oracle on " + t.to_string());
  }

  Interpretation empty = parse_interpretation(read_file("empty_domain.interp"));
  bool saw_empty = false;
  try {
    apply_interpretation(empty, parse_term("f(a,a)", empty.source, 0));
  } catch (const Error& e) {
    saw_empty = e.code() == "EmptyDomain";
  }
  require(saw_empty, "EmptyDomain fixture did not trigger");

  Interpretation loop = parse_interpretation(read_file("not_tree.interp"));
  bool saw_not_tree = false;
  try {
    apply_interpretation(loop, parse_term("f(a,a)", loop.source, 0));
  } catch (const Error& e) {
    saw_not_tree = e.code() == "NotATreeDomain";
  }
  require(saw_not_tree, "NotATreeDomain fixture did not trigger");
  return "identity and relabeling on 100 terms each; both error fixtures fire";
}

// criterion 9: evaluator semantics against the naive oracle, plus
// equivalence-preserving rewrites
std::string criterion_mso_semantics() {
  std::mt19937 rng(909);
  std::vector<Structure> structures;
  for (const char* w : {"", "a", "ab", "bba", "aabab", "babba"})
    structures.push_back(string_to_structure(w, {"a", "b"}));

  int agree = 0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    MsoFormula f = testgen::random_formula(rng);
    const Structure& m = structures[i % structures.size()];
    bool lhs = eval(m, f);
    if (lhs == oracle::mso_eval(m, f)) ++agree;
    MsoFormula g = testgen::rewrite_equivalent(f, rng);
    require(eval(m, g) == lhs, "rewrite changed satisfaction at sample " +
                                   std::to_string(i) + ": " + f.to_text());
  }
  require(agree == total, std::to_string(agree) + "/" + std::to_string(total) +
                              " oracle agreements");
  return "200/200 oracle agreements; rewrites preserve satisfaction";
}

}  // namespace

int main() {
  run("criterion 1 (yield languages)", criterion_yields);
  run("criterion 2 (figure replay)", criterion_figures);
  run("criterion 3 (derived grammar)", criterion_derived_grammar);
  run("criterion 4 (beta after lift)", criterion_beta_lift_identity);
  run("criterion 5 (commuting diagram)", criterion_diagram);
  run("criterion 6 (language correspondence)", criterion_language_correspondence);
  run("criterion 7 (Elgot and DTW)", criterion_definability);
  run("criterion 8 (transductions)", criterion_transductions);
  run("criterion 9 (evaluator semantics)", criterion_mso_semantics);
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
