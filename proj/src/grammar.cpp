#include "cftg/grammar.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace cftg {

std::vector<Diagnostic> validate_grammar(const Cftg& g) {
  std::vector<Diagnostic> out = validate_alphabet(g.alphabet);
  auto error = [&](std::string code, std::string msg) {
    out.push_back({Diagnostic::Severity::Error, std::move(code), std::move(msg)});
  };

  const RankedSymbol* start = g.alphabet.find(g.start);
  if (!start) {
    error("StartMissing", "start symbol '" + g.start + "' is not declared");
  } else {
    if (start->kind != SymbolKind::Nonterminal)
      error("StartKind", "start symbol '" + g.start + "' is not a nonterminal");
    if (start->rank != 0)
      error("StartRank", "start symbol '" + g.start + "' has rank " +
                             std::to_string(start->rank) + ", expected 0");
  }

  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    const Production& p = g.productions[i];
    std::string where = "production " + std::to_string(i + 1) + " (" + p.lhs + ")";
    const RankedSymbol* lhs = g.alphabet.find(p.lhs);
    if (!lhs) {
      error("UnknownSymbol", where + ": lhs is not declared");
      continue;
    }
    if (lhs->kind != SymbolKind::Nonterminal)
      error("LhsNotNonterminal", where + ": lhs is a terminal");
    if (lhs->rank != p.arity)
      error("RankMismatch", where + ": lhs arity " + std::to_string(p.arity) +
                                " does not match declared rank " +
                                std::to_string(lhs->rank));

    // rhs well-rankedness and variable range
    struct Walker {
      const Cftg& g;
      const std::string& where;
      int arity;
      std::vector<Diagnostic>& out;
      void walk(const Term& t) {
        if (t.is_variable()) {
          if (t.variable_index() > arity)
            out.push_back({Diagnostic::Severity::Error, "VariableOutOfRange",
                           where + ": rhs uses x" + std::to_string(t.variable_index()) +
                               " but lhs has arity " + std::to_string(arity)});
          return;
        }
        const RankedSymbol* s = g.alphabet.find(t.label());
        if (!s) {
          out.push_back({Diagnostic::Severity::Error, "UnknownSymbol",
                         where + ": rhs uses undeclared '" + t.label() + "'"});
        } else if (s->rank != t.rank()) {
          out.push_back({Diagnostic::Severity::Error, "RankMismatch",
                         where + ": '" + t.label() + "' has rank " +
                             std::to_string(s->rank) + " but " +
                             std::to_string(t.rank()) + " arguments"});
        }
        for (const Term& k : t.children()) walk(k);
      }
    } w{g, where, p.arity, out};
    w.walk(p.rhs);
  }
  return out;
}

bool is_regular(const Cftg& g) {
  for (const auto& s : g.alphabet.symbols())
    if (s.kind == SymbolKind::Nonterminal && s.rank != 0) return false;
  return true;
}

static void require_valid(const Cftg& g) {
  auto ds = validate_grammar(g);
  if (has_errors(ds)) {
    for (const auto& d : ds)
      if (d.severity == Diagnostic::Severity::Error)
        raise(d.code, d.message);
  }
}

static bool is_terminal_tree(const Cftg& g, const Term& t) {
  if (t.is_variable()) return false;
  const RankedSymbol* s = g.alphabet.find(t.label());
  if (!s || s->kind == SymbolKind::Nonterminal) return false;
  for (const Term& k : t.children())
    if (!is_terminal_tree(g, k)) return false;
  return true;
}

std::vector<DerivationStep> io_successors(const Cftg& g, const Term& t) {
  std::vector<DerivationStep> steps;
  for (const Address& addr : addresses_of(t)) {
    const Term& node = subterm_at(t, addr);
    if (node.is_variable()) continue;
    const RankedSymbol* sym = g.alphabet.find(node.label());
    if (!sym || sym->kind != SymbolKind::Nonterminal) continue;
    bool args_terminal = true;
    for (const Term& arg : node.children())
      if (!is_terminal_tree(g, arg)) {
        args_terminal = false;
        break;
      }
    if (!args_terminal) continue;
    for (std::size_t pi = 0; pi < g.productions.size(); ++pi) {
      const Production& p = g.productions[pi];
      if (p.lhs != node.label()) continue;
      Term contractum = substitute(p.rhs, node.children());
      steps.push_back(DerivationStep{static_cast<int>(pi), addr, t,
                                     replace_at(t, addr, contractum)});
    }
  }
  return steps;
}

namespace {

struct SearchResult {
  std::set<Term> terminal;
  bool exhausted = false;
  // parent chain for trace reconstruction (only filled when tracing)
  std::map<Term, DerivationStep> parent;
};

// Breadth-first derivation search shared by the enumerators and the tracer.
// Forms with >= max_nodes nodes are pruned (and flag exhaustion); levels run
// until max_steps. When `until` is set the search stops early once that form
// is reached.
SearchResult derive_bfs(const Cftg& g, const Bounds& bounds, const Term* until,
                        bool track_parents) {
  SearchResult r;
  Term start = Term::symbol(g.start);
  std::set<Term> seen;
  std::deque<Term> frontier;

  auto admit = [&](const Term& t) { return t.node_count() < bounds.max_nodes; };

  if (!admit(start)) {
    r.exhausted = true;
    return r;
  }
  seen.insert(start);
  frontier.push_back(start);

  for (int step = 1; step <= bounds.max_steps && !frontier.empty(); ++step) {
    std::deque<Term> next;
    for (const Term& form : frontier) {
      for (DerivationStep& s : io_successors(g, form)) {
        if (!admit(s.after)) {
          r.exhausted = true;
          continue;
        }
        if (!seen.insert(s.after).second) continue;
        if (track_parents) r.parent.emplace(s.after, s);
        if (is_terminal_tree(g, s.after)) {
          r.terminal.insert(s.after);
        } else {
          next.push_back(s.after);
        }
        if (until && s.after == *until) return r;
      }
    }
    frontier = std::move(next);
  }
  if (!frontier.empty()) r.exhausted = true;
  return r;
}

TermEnumeration to_enumeration(SearchResult&& r) {
  TermEnumeration e;
  e.terms.assign(r.terminal.begin(), r.terminal.end());
  std::sort(e.terms.begin(), e.terms.end(), shortlex_less);
  e.bounds_exhausted = r.exhausted;
  return e;
}

}  // namespace

TermEnumeration enumerate_io(const Cftg& g, const Bounds& bounds) {
  require_valid(g);
  return to_enumeration(derive_bfs(g, bounds, nullptr, false));
}

TermEnumeration enumerate_regular(const Cftg& g, const Bounds& bounds) {
  if (!is_regular(g))
    raise("NotRegular", "grammar has a nonterminal of rank > 0");
  // At rank 0 every redex has (vacuously) terminal arguments, so the
  // inside-out engine already performs unrestricted rewriting.
  return enumerate_io(g, bounds);
}

YieldEnumeration yield_language(const Cftg& g, const Bounds& bounds,
                                const std::set<std::string>& empty_symbols) {
  TermEnumeration terms = enumerate_io(g, bounds);
  std::set<std::string> words;
  for (const Term& t : terms.terms) words.insert(yield_of(t, empty_symbols));
  YieldEnumeration y;
  y.words.assign(words.begin(), words.end());
  std::sort(y.words.begin(), y.words.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  y.bounds_exhausted = terms.bounds_exhausted;
  return y;
}

std::optional<std::vector<DerivationStep>> derivation_trace(const Cftg& g,
                                                            const Term& target,
                                                            const Bounds& bounds) {
  require_valid(g);
  SearchResult r = derive_bfs(g, bounds, &target, true);
  Term start = Term::symbol(g.start);
  // a trace is a nonempty derivation: the bare start symbol is NotFound
  auto it = r.parent.find(target);
  if (it == r.parent.end()) return std::nullopt;
  std::vector<DerivationStep> chain;
  Term cur = target;
  while (cur != start) {
    auto p = r.parent.find(cur);
    if (p == r.parent.end()) return std::nullopt;  // unreachable in practice
    chain.push_back(p->second);
    cur = p->second.before;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

namespace {

std::vector<RankedSymbol> parse_symbol_list(const std::string& rest, SymbolKind kind,
                                            int lineno) {
  std::vector<RankedSymbol> out;
  std::istringstream in(rest);
  std::string tok;
  while (in >> tok) {
    auto slash = tok.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= tok.size())
      raise("SyntaxError", "line " + std::to_string(lineno) + ": expected name/rank, got '" +
                               tok + "'");
    std::string name = tok.substr(0, slash);
    int rank = 0;
    try {
      rank = std::stoi(tok.substr(slash + 1));
    } catch (const std::exception&) {
      raise("SyntaxError",
            "line " + std::to_string(lineno) + ": bad rank in '" + tok + "'");
    }
    out.push_back({name, rank, kind});
  }
  return out;
}

// Rewrites a term-parse error (positions relative to a one-line fragment)
// into file coordinates.
[[noreturn]] void rethrow_at(const Error& e, int file_line, int col_offset) {
  std::string w = e.what();
  std::string prefix = e.code() + ": line 1, col ";
  if (w.rfind(prefix, 0) == 0) {
    std::size_t p = prefix.size(), q = p;
    while (q < w.size() && std::isdigit(static_cast<unsigned char>(w[q]))) ++q;
    if (q > p) {
      int col = std::stoi(w.substr(p, q - p));
      raise(e.code(), "line " + std::to_string(file_line) + ", col " +
                          std::to_string(col_offset + col) + w.substr(q));
    }
  }
  raise(e.code(), "line " + std::to_string(file_line) + ": " + w);
}

// "F(x1,x2,x3)" or plain "F"; variables must be exactly x1..xm in order.
std::pair<std::string, int> parse_lhs(const std::string& text, int lineno) {
  auto fail = [&](const std::string& msg) {
    raise("SyntaxError", "line " + std::to_string(lineno) + ": " + msg);
  };
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
          s.end());
  auto paren = s.find('(');
  if (paren == std::string::npos) {
    if (s.empty()) fail("empty production lhs");
    return {s, 0};
  }
  if (s.back() != ')') fail("unterminated lhs parameter list");
  std::string name = s.substr(0, paren);
  std::string params = s.substr(paren + 1, s.size() - paren - 2);
  int arity = 0;
  std::istringstream in(params);
  std::string v;
  while (std::getline(in, v, ',')) {
    ++arity;
    if (v != "x" + std::to_string(arity))
      fail("lhs parameters must be x1,...,xm in order (got '" + v + "')");
  }
  if (arity == 0) fail("empty lhs parameter list");
  return {name, arity};
}

}  // namespace

Cftg parse_grammar(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  std::vector<RankedSymbol> symbols;
  bool saw_terminals = false, saw_nonterminals = false;
  std::string start;
  struct RawProduction {
    std::string lhs;
    int arity;
    std::string rhs;
    int lineno;
    int col;  // 0-based offset of the fragment within its line
  };
  std::vector<RawProduction> raw;

  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      continue;

    auto starts_with = [&](const std::string& p) { return line.rfind(p, 0) == 0; };
    if (starts_with("terminals:")) {
      auto syms = parse_symbol_list(line.substr(10), SymbolKind::Terminal, lineno);
      symbols.insert(symbols.end(), syms.begin(), syms.end());
      saw_terminals = true;
    } else if (starts_with("nonterminals:")) {
      auto syms = parse_symbol_list(line.substr(13), SymbolKind::Nonterminal, lineno);
      symbols.insert(symbols.end(), syms.begin(), syms.end());
      saw_nonterminals = true;
    } else if (starts_with("start:")) {
      std::istringstream ls(line.substr(6));
      if (!(ls >> start))
        raise("SyntaxError", "line " + std::to_string(lineno) + ": empty start line");
    } else {
      auto arrow = line.find("->");
      if (arrow == std::string::npos)
        raise("SyntaxError",
              "line " + std::to_string(lineno) + ": expected a production (no '->')");
      auto [lhs, arity] = parse_lhs(line.substr(0, arrow), lineno);
      std::string rhs_all = line.substr(arrow + 2);
      std::size_t base = arrow + 2, from = 0;
      while (true) {
        std::size_t bar = rhs_all.find('|', from);
        std::string alt = bar == std::string::npos
                              ? rhs_all.substr(from)
                              : rhs_all.substr(from, bar - from);
        if (std::all_of(alt.begin(), alt.end(), [](char c) {
              return std::isspace(static_cast<unsigned char>(c));
            }))
          raise("SyntaxError", "line " + std::to_string(lineno) + ": empty alternative");
        raw.push_back({lhs, arity, alt, lineno, static_cast<int>(base + from)});
        if (bar == std::string::npos) break;
        from = bar + 1;
      }
    }
  }

  if (!saw_terminals) raise("SyntaxError", "missing 'terminals:' line");
  if (!saw_nonterminals) raise("SyntaxError", "missing 'nonterminals:' line");
  if (start.empty()) raise("SyntaxError", "missing 'start:' line");

  Cftg g;
  g.alphabet = RankedAlphabet::make(symbols);
  g.start = start;
  for (const auto& r : raw) {
    Term rhs;
    try {
      rhs = parse_term(r.rhs, g.alphabet, r.arity);
    } catch (const Error& e) {
      rethrow_at(e, r.lineno, r.col);
    }
    g.productions.push_back({r.lhs, r.arity, rhs});
  }
  return g;
}

Cftg load_grammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise("FileNotFound", "cannot open grammar file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar(buf.str());
}

std::string print_grammar(const Cftg& g) {
  std::string out = "terminals:";
  for (const auto& s : g.alphabet.symbols())
    if (s.kind == SymbolKind::Terminal)
      out += " " + s.name + "/" + std::to_string(s.rank);
  out += "\nnonterminals:";
  for (const auto& s : g.alphabet.symbols())
    if (s.kind == SymbolKind::Nonterminal)
      out += " " + s.name + "/" + std::to_string(s.rank);
  out += "\nstart: " + g.start + "\n";

  // group consecutive same-lhs productions with '|'
  for (std::size_t i = 0; i < g.productions.size();) {
    const Production& p = g.productions[i];
    std::string lhs = p.lhs;
    if (p.arity > 0) {
      lhs += "(";
      for (int v = 1; v <= p.arity; ++v) {
        if (v > 1) lhs += ",";
        lhs += "x" + std::to_string(v);
      }
      lhs += ")";
    }
    out += lhs + " -> " + p.rhs.to_string();
    std::size_t j = i + 1;
    while (j < g.productions.size() && g.productions[j].lhs == p.lhs) {
      out += " | " + g.productions[j].rhs.to_string();
      ++j;
    }
    out += "\n";
    i = j;
  }
  return out;
}

}  // namespace cftg
