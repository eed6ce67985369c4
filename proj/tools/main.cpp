// cftg: a workbench for context-free tree grammars and their lifted
// regular presentations.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cftg/grammar.hpp"
#include "cftg/lemma.hpp"
#include "cftg/lifting.hpp"
#include "cftg/mso.hpp"
#include "cftg/structure.hpp"
#include "cftg/transduction.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) cftg::raise("FileNotFound", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

cftg::RankedAlphabet parse_alphabet_flag(const std::string& spec) {
  std::vector<cftg::RankedSymbol> syms;
  for (const std::string& tok : split_commas(spec)) {
    auto slash = tok.rfind('/');
    if (slash == std::string::npos)
      syms.push_back({tok, 0, cftg::SymbolKind::Terminal});
    else
      syms.push_back({tok.substr(0, slash), std::stoi(tok.substr(slash + 1)),
                      cftg::SymbolKind::Terminal});
  }
  return cftg::RankedAlphabet::make(syms);
}

struct EnumerateArgs {
  std::string grammar_file;
  std::string mode = "io";
  int max_steps = 6;
  int max_nodes = 60;
  bool yields = false;
  std::string empty_list;
};

int cmd_enumerate(const EnumerateArgs& a) {
  cftg::Cftg g = cftg::load_grammar(a.grammar_file);
  cftg::Bounds bounds{a.max_steps, a.max_nodes};
  cftg::TermEnumeration e = a.mode == "regular" ? cftg::enumerate_regular(g, bounds)
                                                : cftg::enumerate_io(g, bounds);
  if (a.yields) {
    std::set<std::string> empty;
    for (const auto& s : split_commas(a.empty_list)) empty.insert(s);
    std::set<std::string> words;
    for (const cftg::Term& t : e.terms) words.insert(cftg::yield_of(t, empty));
    std::vector<std::string> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
      return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    for (const auto& w : sorted) std::cout << w << "\n";
  } else {
    for (const cftg::Term& t : e.terms) std::cout << t.to_string() << "\n";
  }
  if (e.bounds_exhausted) std::cerr << "note: bounds exhausted, listing is partial\n";
  return 0;
}

int cmd_validate(const std::string& grammar_file) {
  cftg::Cftg g = cftg::load_grammar(grammar_file);
  auto ds = cftg::validate_grammar(g);
  for (const auto& d : ds) {
    const char* sev = d.severity == cftg::Diagnostic::Severity::Error ? "error" : "warning";
    std::cout << sev << ": " << d.code << ": " << d.message << "\n";
  }
  if (cftg::has_errors(ds)) return 1;
  std::cout << "ok\n";
  return 0;
}

int cmd_lift(const std::string& grammar_file) {
  cftg::Cftg g = cftg::load_grammar(grammar_file);
  cftg::Cftg gd = cftg::lift_grammar(g);
  std::cout << "# nonterminal sorts:";
  for (const auto& s : g.alphabet.nonterminals())
    std::cout << " " << s.name << ":" << s.rank;
  std::cout << "\n" << cftg::print_grammar(gd);
  return 0;
}

int cmd_beta(const std::string& term_file, const std::string& grammar_file,
             std::optional<int> sort) {
  std::optional<cftg::Cftg> g;
  if (!grammar_file.empty()) g = cftg::load_grammar(grammar_file);
  std::string text = slurp(term_file);
  cftg::DerivedTerm d =
      cftg::parse_derived_term(text, g ? &g->alphabet : nullptr, sort);
  std::cout << cftg::beta(d).to_string() << "\n";
  return 0;
}

int cmd_lift_term(const std::string& term, const std::string& grammar_file, int k) {
  cftg::Cftg g = cftg::load_grammar(grammar_file);
  cftg::Term t = cftg::parse_term(term, g.alphabet, k);
  std::cout << cftg::lift_term(t, k, g.alphabet).to_string() << "\n";
  return 0;
}

int cmd_trace(const std::string& grammar_file, const std::string& target, int max_steps,
              int max_nodes) {
  cftg::Cftg g = cftg::load_grammar(grammar_file);
  cftg::Term t = cftg::parse_term(target, g.alphabet, 0);
  auto trace = cftg::derivation_trace(g, t, cftg::Bounds{max_steps, max_nodes});
  if (!trace) {
    std::cerr << "error: NotFound: no derivation within bounds\n";
    return 1;
  }
  std::cout << "0: " << g.start << "\n";
  int n = 0;
  for (const cftg::DerivationStep& s : *trace) {
    std::cout << ++n << ": p" << (s.production + 1) << " @ " << s.at.to_string()
              << " : " << s.after.to_string() << "\n";
  }
  return 0;
}

int cmd_lemma_check(const std::string& grammar_file, int samples, unsigned seed,
                    int steps) {
  cftg::Cftg g = cftg::load_grammar(grammar_file);
  cftg::LemmaOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  opt.language_steps = steps;
  cftg::LemmaReport r = cftg::run_lemma_suites(g, opt);
  std::cout << r.to_text();
  return r.all_pass() ? 0 : 1;
}

struct MsoEvalArgs {
  std::vector<std::string> positionals;  // [structure-file,] formula-file
  std::string word;
  bool word_set = false;
  std::string tree;
  std::string alphabet;
  std::string formula_file;
  bool no_guard = false;
};

int cmd_mso_eval(MsoEvalArgs a) {
  std::string structure_file;
  if (a.positionals.size() == 2) {
    structure_file = a.positionals[0];
    a.formula_file = a.positionals[1];
  } else if (a.positionals.size() == 1) {
    a.formula_file = a.positionals[0];
  } else {
    cftg::raise("UsageError", "mso eval takes [structure-file] formula-file");
  }
  cftg::Structure m;
  if (!structure_file.empty()) {
    m = cftg::parse_structure(slurp(structure_file));
  } else if (a.word_set) {
    if (a.alphabet.empty())
      cftg::raise("UsageError", "--word needs --alphabet");
    auto letters_alpha = parse_alphabet_flag(a.alphabet);
    std::set<std::string> letters;
    for (const auto& s : letters_alpha.symbols()) letters.insert(s.name);
    m = cftg::string_to_structure(a.word, letters);
  } else if (!a.tree.empty()) {
    cftg::Term t = cftg::parse_term_lenient(a.tree);
    if (a.alphabet.empty()) {
      int max_rank = 0;
      for (const auto& addr : cftg::addresses_of(t))
        max_rank = std::max(max_rank, cftg::subterm_at(t, addr).rank());
      m = cftg::term_to_structure(t, max_rank);
    } else {
      m = cftg::term_to_structure(t, parse_alphabet_flag(a.alphabet));
    }
  } else {
    cftg::raise("UsageError", "need a structure file, --word or --tree");
  }
  cftg::MsoFormula f =
      cftg::parse_formula(slurp(a.formula_file), cftg::vocabulary_of(m));
  cftg::EvalOptions opts;
  opts.unguarded = a.no_guard;
  std::cout << (cftg::eval(m, f, {}, opts) ? "true" : "false") << "\n";
  return 0;
}

struct MsoModelsArgs {
  std::string formula_file;
  std::string kind;
  std::string alphabet;
  std::string grammar_file;
  int bound = 10;
  bool no_guard = false;
};

int cmd_mso_models(const MsoModelsArgs& a) {
  cftg::RankedAlphabet alpha;
  if (!a.grammar_file.empty()) {
    cftg::Cftg g = cftg::load_grammar(a.grammar_file);
    std::vector<cftg::RankedSymbol> ts;
    for (const auto& s : g.alphabet.symbols())
      if (s.kind == cftg::SymbolKind::Terminal) ts.push_back(s);
    alpha = cftg::RankedAlphabet::make(ts);
  } else if (!a.alphabet.empty()) {
    alpha = parse_alphabet_flag(a.alphabet);
  } else {
    cftg::raise("UsageError", "need --alphabet or --grammar");
  }
  cftg::EvalOptions opts;
  opts.unguarded = a.no_guard;
  if (a.kind == "word") {
    std::set<std::string> letters;
    std::vector<std::string> letter_list;
    for (const auto& s : alpha.symbols()) {
      letters.insert(s.name);
      letter_list.push_back(s.name);
    }
    cftg::MsoFormula f =
        cftg::parse_formula(slurp(a.formula_file), cftg::word_vocabulary(letters));
    for (const auto& w : cftg::models_of_words(f, letter_list, a.bound, opts))
      std::cout << w << "\n";
  } else if (a.kind == "tree") {
    cftg::MsoFormula f =
        cftg::parse_formula(slurp(a.formula_file), cftg::tree_vocabulary(alpha));
    for (const auto& t : cftg::models_of_trees(f, alpha, a.bound, opts))
      std::cout << t.to_string() << "\n";
  } else {
    cftg::raise("UsageError", "--kind must be word or tree");
  }
  return 0;
}

int cmd_transduce(const std::string& interp_file, const std::string& term,
                  bool no_guard, bool show_placement) {
  cftg::Interpretation I = cftg::load_interpretation(interp_file);
  cftg::Term t = cftg::parse_term(term, I.source, 0);
  cftg::EvalOptions opts;
  opts.unguarded = no_guard;
  cftg::TransductionResult r = cftg::apply_interpretation(I, t, opts);
  std::cout << r.output.to_string() << "\n";
  if (show_placement)
    for (const auto& [elem, addr] : r.placement)
      std::cerr << elem << " -> " << addr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for context-free tree grammars and their lifted"
               " regular presentations"};
  app.require_subcommand(1);

  // validate
  std::string validate_grammar_file;
  auto* validate = app.add_subcommand("validate", "check a grammar file");
  validate->add_option("grammar", validate_grammar_file)->required();

  // enumerate
  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "list derivable terminal trees");
  enumerate->add_option("grammar", en.grammar_file)->required();
  enumerate->add_option("--mode", en.mode)->check(CLI::IsMember({"io", "regular"}));
  enumerate->add_option("--max-steps", en.max_steps);
  enumerate->add_option("--max-nodes", en.max_nodes);
  enumerate->add_flag("--yield", en.yields, "print yields instead of trees");
  enumerate->add_option("--empty", en.empty_list, "symbols with empty yield");

  // lift
  std::string lift_grammar_file;
  auto* lift = app.add_subcommand("lift", "print the derived regular grammar");
  lift->add_option("grammar", lift_grammar_file)->required();

  // beta
  std::string beta_file, beta_grammar;
  int beta_sort = 0;
  auto* beta = app.add_subcommand("beta", "evaluate a derived term file");
  beta->add_option("term-file", beta_file)->required();
  beta->add_option("--grammar", beta_grammar);
  auto* beta_sort_opt = beta->add_option("--sort", beta_sort,
                                         "expected sort (needed for schematic input)");

  // lift-term
  std::string lt_term, lt_grammar;
  int lt_k = 0;
  auto* lift_term = app.add_subcommand("lift-term", "lift a term to a derived term");
  lift_term->add_option("term", lt_term)->required();
  lift_term->add_option("--grammar", lt_grammar)->required();
  lift_term->add_option("-k", lt_k);

  // trace
  std::string trace_grammar, trace_target;
  int trace_steps = 6, trace_nodes = 60;
  auto* trace = app.add_subcommand("trace", "find a derivation of a target term");
  trace->add_option("grammar", trace_grammar)->required();
  trace->add_option("target", trace_target)->required();
  trace->add_option("--max-steps", trace_steps);
  trace->add_option("--max-nodes", trace_nodes);

  // lemma-check
  std::string lemma_grammar;
  int lemma_samples = 100, lemma_steps = 5;
  unsigned lemma_seed = 1;
  auto* lemma = app.add_subcommand("lemma-check", "run the simulation suites");
  lemma->add_option("grammar", lemma_grammar)->required();
  lemma->add_option("--samples", lemma_samples);
  lemma->add_option("--seed", lemma_seed);
  lemma->add_option("--steps", lemma_steps);

  // mso
  auto* mso = app.add_subcommand("mso", "model checking on word and tree models");
  mso->require_subcommand(1);
  MsoEvalArgs me;
  auto* mso_eval = mso->add_subcommand("eval", "evaluate a sentence on one model");
  mso_eval->add_option("files", me.positionals,
                       "[structure-file] formula-file (structure may instead come"
                       " from --word or --tree)")
      ->expected(1, 2);
  auto* word_opt = mso_eval->add_option("--word", me.word, "word model input");
  mso_eval->add_option("--tree", me.tree, "tree model input");
  mso_eval->add_option("--alphabet", me.alphabet, "letters, e.g. a,b or f/2,a/0");
  mso_eval->add_flag("--no-guard", me.no_guard);

  MsoModelsArgs mm;
  auto* mso_models = mso->add_subcommand("models", "enumerate models of a sentence");
  mso_models->add_option("formula", mm.formula_file)->required();
  mso_models->add_option("--kind", mm.kind)->required()
      ->check(CLI::IsMember({"word", "tree"}));
  mso_models->add_option("--alphabet", mm.alphabet);
  mso_models->add_option("--grammar", mm.grammar_file);
  mso_models->add_option("--bound", mm.bound);
  mso_models->add_flag("--no-guard", mm.no_guard);

  // transduce
  std::string tr_interp, tr_term;
  bool tr_no_guard = false, tr_placement = false;
  auto* transduce = app.add_subcommand("transduce", "apply a definable transduction");
  transduce->add_option("interpretation", tr_interp)->required();
  transduce->add_option("term", tr_term)->required();
  transduce->add_flag("--no-guard", tr_no_guard);
  transduce->add_flag("--placement", tr_placement, "dump element placement to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return cmd_validate(validate_grammar_file);
    if (*enumerate) return cmd_enumerate(en);
    if (*lift) return cmd_lift(lift_grammar_file);
    if (*beta)
      return cmd_beta(beta_file, beta_grammar,
                      beta_sort_opt->count() ? std::optional<int>(beta_sort)
                                             : std::nullopt);
    if (*lift_term) return cmd_lift_term(lt_term, lt_grammar, lt_k);
    if (*trace) return cmd_trace(trace_grammar, trace_target, trace_steps, trace_nodes);
    if (*lemma) return cmd_lemma_check(lemma_grammar, lemma_samples, lemma_seed,
                                       lemma_steps);
    if (*mso) {
      me.word_set = word_opt->count() > 0;
      if (*mso_eval) return cmd_mso_eval(me);
      if (*mso_models) return cmd_mso_models(mm);
    }
    if (*transduce) return cmd_transduce(tr_interp, tr_term, tr_no_guard, tr_placement);
  } catch (const cftg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == "UsageError" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
