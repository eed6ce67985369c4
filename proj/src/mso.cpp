#include "cftg/mso.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>

namespace cftg {

// ---------------------------------------------------------------------------
// Formula construction
// ---------------------------------------------------------------------------

MsoFormula MsoFormula::truth(bool value) {
  MsoFormula f;
  f.kind_ = value ? Kind::True : Kind::False;
  return f;
}

MsoFormula MsoFormula::eq(std::string x, std::string y) {
  MsoFormula f;
  f.kind_ = Kind::Eq;
  f.v1_ = std::move(x);
  f.v2_ = std::move(y);
  return f;
}

MsoFormula MsoFormula::rel(std::string name, std::string x, std::string y) {
  MsoFormula f;
  f.kind_ = Kind::Rel;
  f.name_ = std::move(name);
  f.v1_ = std::move(x);
  f.v2_ = std::move(y);
  return f;
}

MsoFormula MsoFormula::pred(std::string name, std::string x) {
  MsoFormula f;
  f.kind_ = Kind::Pred;
  f.name_ = std::move(name);
  f.v1_ = std::move(x);
  return f;
}

MsoFormula MsoFormula::in(std::string x, std::string X) {
  MsoFormula f;
  f.kind_ = Kind::In;
  f.v1_ = std::move(x);
  f.v2_ = std::move(X);
  return f;
}

MsoFormula MsoFormula::negation(MsoFormula f) {
  MsoFormula g;
  g.kind_ = Kind::Not;
  g.kids_.push_back(std::move(f));
  return g;
}

MsoFormula MsoFormula::conjunction(std::vector<MsoFormula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  MsoFormula g;
  g.kind_ = Kind::And;
  g.kids_ = std::move(fs);
  return g;
}

MsoFormula MsoFormula::disjunction(std::vector<MsoFormula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  MsoFormula g;
  g.kind_ = Kind::Or;
  g.kids_ = std::move(fs);
  return g;
}

MsoFormula MsoFormula::implies(MsoFormula a, MsoFormula b) {
  MsoFormula g;
  g.kind_ = Kind::Implies;
  g.kids_.push_back(std::move(a));
  g.kids_.push_back(std::move(b));
  return g;
}

MsoFormula MsoFormula::iff(MsoFormula a, MsoFormula b) {
  MsoFormula g;
  g.kind_ = Kind::Iff;
  g.kids_.push_back(std::move(a));
  g.kids_.push_back(std::move(b));
  return g;
}

MsoFormula MsoFormula::quantifier(Kind kind, std::string var, MsoFormula body) {
  MsoFormula g;
  g.kind_ = kind;
  g.name_ = std::move(var);
  g.kids_.push_back(std::move(body));
  return g;
}

bool is_set_variable(const std::string& name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

std::string MsoFormula::to_text() const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Eq: return "(= " + v1_ + " " + v2_ + ")";
    case Kind::Rel:
      if (name_.rfind("<_", 0) == 0)
        return "(succ " + name_.substr(2) + " " + v1_ + " " + v2_ + ")";
      return "(" + name_ + " " + v1_ + " " + v2_ + ")";
    case Kind::Pred: return "(P " + name_ + " " + v1_ + ")";
    case Kind::In: return "(in " + v1_ + " " + v2_ + ")";
    case Kind::Not: return "(not " + kids_[0].to_text() + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out = kind_ == Kind::And ? "(and" : "(or";
      for (const auto& k : kids_) out += " " + k.to_text();
      return out + ")";
    }
    case Kind::Implies: return "(-> " + kids_[0].to_text() + " " + kids_[1].to_text() + ")";
    case Kind::Iff: return "(<-> " + kids_[0].to_text() + " " + kids_[1].to_text() + ")";
    case Kind::Exists:
    case Kind::ExistsSet: return "(exists " + name_ + " " + kids_[0].to_text() + ")";
    case Kind::Forall:
    case Kind::ForallSet: return "(forall " + name_ + " " + kids_[0].to_text() + ")";
  }
  return "?";
}

static void collect_free(const MsoFormula& f, std::set<std::string>& bound,
                         std::set<std::string>& nodes, std::set<std::string>& sets) {
  using K = MsoFormula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return;
    case K::Eq:
    case K::Rel:
      if (!bound.count(f.v1())) nodes.insert(f.v1());
      if (!bound.count(f.v2())) nodes.insert(f.v2());
      return;
    case K::Pred:
      if (!bound.count(f.v1())) nodes.insert(f.v1());
      return;
    case K::In:
      if (!bound.count(f.v1())) nodes.insert(f.v1());
      if (!bound.count(f.v2())) sets.insert(f.v2());
      return;
    case K::Exists:
    case K::Forall:
    case K::ExistsSet:
    case K::ForallSet: {
      bool fresh = bound.insert(f.name()).second;
      collect_free(f.kids()[0], bound, nodes, sets);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      for (const auto& k : f.kids()) collect_free(k, bound, nodes, sets);
  }
}

std::pair<std::set<std::string>, std::set<std::string>> MsoFormula::free_variables()
    const {
  std::set<std::string> bound, nodes, sets;
  collect_free(*this, bound, nodes, sets);
  return {nodes, sets};
}

// ---------------------------------------------------------------------------
// Vocabularies
// ---------------------------------------------------------------------------

Vocabulary word_vocabulary(const std::set<std::string>& letters) {
  Vocabulary v;
  v.unary = letters;
  v.binary.insert("<");
  return v;
}

Vocabulary tree_vocabulary(const RankedAlphabet& alphabet) {
  Vocabulary v;
  for (const auto& s : alphabet.symbols()) v.unary.insert(s.name);
  for (int i = 1; i <= alphabet.max_rank(); ++i)
    v.binary.insert("<_" + std::to_string(i));
  return v;
}

Vocabulary vocabulary_of(const Structure& s) {
  Vocabulary v;
  for (const auto& [name, _] : s.unary) v.unary.insert(name);
  for (const auto& [name, _] : s.binary) v.binary.insert(name);
  return v;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct FCursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit FCursor(const std::string& t) : text(t) {}
  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') { ++line; col = 1; } else { ++col; }
    ++pos;
  }
  void skip_ws() {
    while (!eof()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) { advance(); continue; }
      if (peek() == ';' || peek() == '#') {  // comment to end of line
        while (!eof() && peek() != '\n') advance();
        continue;
      }
      break;
    }
  }
  [[noreturn]] void fail(const std::string& code, const std::string& msg) const {
    raise(code, "line " + std::to_string(line) + ", col " + std::to_string(col) +
                    ": " + msg);
  }
};

std::string read_atom(FCursor& c) {
  std::string out;
  while (!c.eof() && !std::isspace(static_cast<unsigned char>(c.peek())) &&
         c.peek() != '(' && c.peek() != ')') {
    out += c.peek();
    c.advance();
  }
  if (out.empty()) c.fail("SyntaxError", "expected an atom");
  return out;
}

void check_pred(const std::optional<Vocabulary>& voc, const std::string& name,
                FCursor& c) {
  if (voc && !voc->unary.count(name))
    c.fail("UnknownRelation", "no predicate '" + name + "' in the vocabulary");
}

void check_rel(const std::optional<Vocabulary>& voc, const std::string& name,
               FCursor& c) {
  if (voc && !voc->binary.count(name))
    c.fail("UnknownRelation", "no relation '" + name + "' in the vocabulary");
}

MsoFormula parse_expr(FCursor& c, const std::optional<Vocabulary>& voc) {
  c.skip_ws();
  if (c.eof()) c.fail("SyntaxError", "expected a formula, found end of input");
  if (c.peek() != '(') {
    std::string atom = read_atom(c);
    if (atom == "true") return MsoFormula::truth(true);
    if (atom == "false") return MsoFormula::truth(false);
    c.fail("SyntaxError", "unexpected atom '" + atom + "' (formulas are parenthesized)");
  }
  c.advance();  // '('
  c.skip_ws();
  std::string head = read_atom(c);

  auto finish = [&](MsoFormula f) {
    c.skip_ws();
    if (c.eof() || c.peek() != ')') c.fail("SyntaxError", "expected ')'");
    c.advance();
    return f;
  };
  auto read_var = [&] {
    c.skip_ws();
    return read_atom(c);
  };
  auto read_node_var = [&] {
    std::string v = read_var();
    if (is_set_variable(v))
      c.fail("SyntaxError", "'" + v + "' must be a node variable here");
    return v;
  };

  if (head == "=") {
    std::string x = read_node_var(), y = read_node_var();
    return finish(MsoFormula::eq(x, y));
  }
  if (head == "<") {
    check_rel(voc, "<", c);
    std::string x = read_node_var(), y = read_node_var();
    return finish(MsoFormula::rel("<", x, y));
  }
  if (head == "succ") {
    std::string i = read_var();
    if (i.empty() || !std::all_of(i.begin(), i.end(), [](char ch) {
          return std::isdigit(static_cast<unsigned char>(ch));
        }))
      c.fail("SyntaxError", "succ needs a numeric index");
    check_rel(voc, "<_" + i, c);
    std::string x = read_node_var(), y = read_node_var();
    return finish(MsoFormula::rel("<_" + i, x, y));
  }
  if (head == "P") {
    std::string name = read_var();
    check_pred(voc, name, c);
    std::string x = read_node_var();
    return finish(MsoFormula::pred(name, x));
  }
  if (head == "in") {
    std::string x = read_var(), X = read_var();
    if (is_set_variable(x)) c.fail("SyntaxError", "'" + x + "' must be a node variable");
    if (!is_set_variable(X)) c.fail("SyntaxError", "'" + X + "' must be a set variable");
    return finish(MsoFormula::in(x, X));
  }
  if (head == "not") return finish(MsoFormula::negation(parse_expr(c, voc)));
  if (head == "and" || head == "or") {
    std::vector<MsoFormula> kids;
    while (true) {
      c.skip_ws();
      if (c.eof()) c.fail("SyntaxError", "expected ')'");
      if (c.peek() == ')') break;
      kids.push_back(parse_expr(c, voc));
    }
    if (kids.empty()) c.fail("SyntaxError", head + " needs at least one operand");
    c.advance();  // ')'
    return head == "and" ? MsoFormula::conjunction(std::move(kids))
                         : MsoFormula::disjunction(std::move(kids));
  }
  if (head == "->" || head == "<->") {
    MsoFormula a = parse_expr(c, voc);
    MsoFormula b = parse_expr(c, voc);
    return finish(head == "->" ? MsoFormula::implies(std::move(a), std::move(b))
                               : MsoFormula::iff(std::move(a), std::move(b)));
  }
  if (head == "exists" || head == "forall") {
    std::string var = read_var();
    MsoFormula body = parse_expr(c, voc);
    MsoFormula::Kind kind;
    if (head == "exists")
      kind = is_set_variable(var) ? MsoFormula::Kind::ExistsSet : MsoFormula::Kind::Exists;
    else
      kind = is_set_variable(var) ? MsoFormula::Kind::ForallSet : MsoFormula::Kind::Forall;
    return finish(MsoFormula::quantifier(kind, var, std::move(body)));
  }
  c.fail("SyntaxError", "unknown operator '" + head + "'");
}

}  // namespace

MsoFormula parse_formula(const std::string& text,
                         const std::optional<Vocabulary>& vocabulary) {
  FCursor c(text);
  MsoFormula f = parse_expr(c, vocabulary);
  c.skip_ws();
  if (!c.eof()) c.fail("SyntaxError", "trailing input after formula");
  return f;
}

// ---------------------------------------------------------------------------
// Satisfaction
// ---------------------------------------------------------------------------

namespace {

struct Evaluator {
  const Structure& m;
  const EvalOptions& opts;

  const std::string& lookup_node(const Assignment& g, const std::string& v) const {
    auto it = g.node.find(v);
    if (it == g.node.end())
      raise("UnboundVariable", "node variable '" + v + "' is unassigned");
    return it->second;
  }

  const std::set<std::string>& lookup_set(const Assignment& g,
                                          const std::string& v) const {
    auto it = g.set.find(v);
    if (it == g.set.end())
      raise("UnboundVariable", "set variable '" + v + "' is unassigned");
    return it->second;
  }

  bool run(const MsoFormula& f, Assignment& g, int set_depth) const {
    using K = MsoFormula::Kind;
    switch (f.kind()) {
      case K::True: return true;
      case K::False: return false;
      case K::Eq: return lookup_node(g, f.v1()) == lookup_node(g, f.v2());
      case K::Rel: {
        auto it = m.binary.find(f.name());
        if (it == m.binary.end()) return false;  // relation absent = empty
        return it->second.count({lookup_node(g, f.v1()), lookup_node(g, f.v2())}) > 0;
      }
      case K::Pred: {
        auto it = m.unary.find(f.name());
        if (it == m.unary.end()) return false;
        return it->second.count(lookup_node(g, f.v1())) > 0;
      }
      case K::In: return lookup_set(g, f.v2()).count(lookup_node(g, f.v1())) > 0;
      case K::Not: return !run(f.kids()[0], g, set_depth);
      case K::And:
        for (const auto& k : f.kids())
          if (!run(k, g, set_depth)) return false;
        return true;
      case K::Or:
        for (const auto& k : f.kids())
          if (run(k, g, set_depth)) return true;
        return false;
      case K::Implies:
        return !run(f.kids()[0], g, set_depth) || run(f.kids()[1], g, set_depth);
      case K::Iff:
        return run(f.kids()[0], g, set_depth) == run(f.kids()[1], g, set_depth);
      case K::Exists:
      case K::Forall: {
        bool exists = f.kind() == K::Exists;
        auto saved = g.node.find(f.name()) != g.node.end()
                         ? std::optional<std::string>(g.node[f.name()])
                         : std::nullopt;
        bool result = !exists;
        for (const auto& e : m.domain) {
          g.node[f.name()] = e;
          bool v = run(f.kids()[0], g, set_depth);
          if (exists && v) { result = true; break; }
          if (!exists && !v) { result = false; break; }
        }
        if (saved) g.node[f.name()] = *saved; else g.node.erase(f.name());
        return result;
      }
      case K::ExistsSet:
      case K::ForallSet: {
        if (!opts.unguarded) {
          if (set_depth + 1 > opts.max_set_depth)
            raise("BoundTooLarge", "more than " + std::to_string(opts.max_set_depth) +
                                       " nested set quantifiers");
          if (static_cast<int>(m.domain.size()) > opts.max_subset_domain)
            raise("BoundTooLarge",
                  "set quantification over a domain of " +
                      std::to_string(m.domain.size()) + " elements");
        }
        bool exists = f.kind() == K::ExistsSet;
        auto saved = g.set.find(f.name()) != g.set.end()
                         ? std::optional<std::set<std::string>>(g.set[f.name()])
                         : std::nullopt;
        std::size_t n = m.domain.size();
        if (n >= 40)  // 2^40 subsets will never finish, guarded or not
          raise("BoundTooLarge", "set quantification over " + std::to_string(n) +
                                     " elements is not enumerable");
        bool result = !exists;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          std::set<std::string> subset;
          for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) subset.insert(m.domain[i]);
          g.set[f.name()] = std::move(subset);
          bool v = run(f.kids()[0], g, set_depth + 1);
          if (exists && v) { result = true; break; }
          if (!exists && !v) { result = false; break; }
        }
        if (saved) g.set[f.name()] = *saved; else g.set.erase(f.name());
        return result;
      }
    }
    raise("Internal", "unhandled formula kind");
  }
};

}  // namespace

bool eval(const Structure& m, const MsoFormula& f, const Assignment& g,
          const EvalOptions& opts) {
  for (const auto& [var, e] : g.node)
    if (!m.in_domain(e))
      raise("InvalidAssignment", "'" + var + "' is bound to '" + e +
                                     "', which is outside the domain");
  for (const auto& [var, elems] : g.set)
    for (const auto& e : elems)
      if (!m.in_domain(e))
        raise("InvalidAssignment", "'" + var + "' contains '" + e +
                                       "', which is outside the domain");
  Assignment scratch = g;
  return Evaluator{m, opts}.run(f, scratch, 0);
}

// ---------------------------------------------------------------------------
// Model enumeration
// ---------------------------------------------------------------------------

std::vector<std::string> models_of_words(const MsoFormula& f,
                                         const std::vector<std::string>& letters,
                                         int max_len, const EvalOptions& opts) {
  if (!opts.unguarded && max_len > opts.max_word_length)
    raise("BoundTooLarge", "word bound " + std::to_string(max_len) +
                               " exceeds the guard of " +
                               std::to_string(opts.max_word_length));
  auto [free_nodes, free_sets] = f.free_variables();
  if (!free_nodes.empty() || !free_sets.empty())
    raise("NotClosed", "models_of needs a closed formula");

  std::set<std::string> letter_set(letters.begin(), letters.end());
  std::vector<std::string> out;
  std::vector<std::string> level = {""};
  for (int len = 0; len <= max_len; ++len) {
    for (const auto& w : level)
      if (eval(string_to_structure(w, letter_set), f, {}, opts)) out.push_back(w);
    if (len == max_len) break;
    std::vector<std::string> next;
    next.reserve(level.size() * letters.size());
    for (const auto& w : level)
      for (const auto& l : letters) next.push_back(w + l);
    level = std::move(next);
  }
  return out;  // built in shortlex order already
}

std::vector<Term> all_terminal_trees(const RankedAlphabet& alphabet, int max_nodes) {
  // trees_by_size[n] = all terminal trees with exactly n nodes
  std::vector<std::vector<Term>> by_size(static_cast<std::size_t>(max_nodes) + 1);
  std::size_t total = 0;
  for (int n = 1; n <= max_nodes; ++n) {
    for (const auto& sym : alphabet.symbols()) {
      if (sym.kind != SymbolKind::Terminal) continue;
      if (sym.rank == 0) {
        if (n == 1) by_size[1].push_back(Term::symbol(sym.name));
        continue;
      }
      if (n < sym.rank + 1) continue;
      // distribute n-1 nodes over sym.rank children
      std::vector<int> parts(static_cast<std::size_t>(sym.rank), 1);
      std::vector<Term> kids;
      std::function<void(int, int)> assign = [&](int child, int remaining) {
        if (child == sym.rank) {
          if (remaining != 0) return;
          std::vector<std::vector<Term>::const_iterator> iters;
          std::function<void(int)> pick = [&](int c) {
            if (c == sym.rank) {
              by_size[static_cast<std::size_t>(n)].push_back(
                  Term::symbol(sym.name, kids));
              return;
            }
            for (const Term& t : by_size[static_cast<std::size_t>(parts[static_cast<std::size_t>(c)])]) {
              kids.push_back(t);
              pick(c + 1);
              kids.pop_back();
            }
          };
          pick(0);
          return;
        }
        for (int sz = 1; sz <= remaining - (sym.rank - child - 1); ++sz) {
          parts[static_cast<std::size_t>(child)] = sz;
          assign(child + 1, remaining - sz);
        }
      };
      assign(0, n - 1);
    }
    total += by_size[static_cast<std::size_t>(n)].size();
    if (total > 2'000'000)
      raise("BoundTooLarge", "tree enumeration explodes before node bound " +
                                 std::to_string(max_nodes));
  }
  std::vector<Term> out;
  out.reserve(total);
  for (const auto& level : by_size)
    for (const Term& t : level) out.push_back(t);
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

std::vector<Term> models_of_trees(const MsoFormula& f, const RankedAlphabet& alphabet,
                                  int max_nodes, const EvalOptions& opts) {
  if (!opts.unguarded && max_nodes > opts.max_tree_nodes)
    raise("BoundTooLarge", "tree bound " + std::to_string(max_nodes) +
                               " exceeds the guard of " +
                               std::to_string(opts.max_tree_nodes));
  auto [free_nodes, free_sets] = f.free_variables();
  if (!free_nodes.empty() || !free_sets.empty())
    raise("NotClosed", "models_of needs a closed formula");

  std::vector<Term> out;
  for (const Term& t : all_terminal_trees(alphabet, max_nodes))
    if (eval(term_to_structure(t, alphabet), f, {}, opts)) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// Definability checks
// ---------------------------------------------------------------------------

std::string DefinabilityReport::to_text() const {
  if (agree()) return "agree: symmetric difference empty\n";
  std::string out;
  for (const auto& s : only_grammar) out += "only-grammar: " + s + "\n";
  for (const auto& s : only_formula) out += "only-formula: " + s + "\n";
  return out;
}

DefinabilityReport check_definability_words(const Cftg& g, const MsoFormula& f,
                                            const std::vector<std::string>& letters,
                                            int max_len,
                                            const std::set<std::string>& empty_symbols,
                                            const Bounds& grammar_bounds,
                                            const EvalOptions& opts) {
  if (!is_regular(g)) raise("NotRegular", "Elgot comparison needs a regular grammar");
  YieldEnumeration ys = yield_language(g, grammar_bounds, empty_symbols);
  std::set<std::string> grammar_side;
  for (const auto& w : ys.words)
    if (static_cast<int>(split_word(w, {letters.begin(), letters.end()}).size()) <=
        max_len)
      grammar_side.insert(w);
  std::vector<std::string> ms = models_of_words(f, letters, max_len, opts);
  std::set<std::string> formula_side(ms.begin(), ms.end());

  DefinabilityReport r;
  std::set_difference(grammar_side.begin(), grammar_side.end(), formula_side.begin(),
                      formula_side.end(), std::back_inserter(r.only_grammar));
  std::set_difference(formula_side.begin(), formula_side.end(), grammar_side.begin(),
                      grammar_side.end(), std::back_inserter(r.only_formula));
  return r;
}

DefinabilityReport check_definability_trees(const Cftg& g, const MsoFormula& f,
                                            int max_nodes, const Bounds& grammar_bounds,
                                            const EvalOptions& opts) {
  if (!is_regular(g)) raise("NotRegular", "tree comparison needs a regular grammar");
  TermEnumeration ts = enumerate_regular(g, grammar_bounds);
  std::set<std::string> grammar_side;
  for (const Term& t : ts.terms)
    if (t.node_count() <= max_nodes) grammar_side.insert(t.to_string());

  // restrict the shared alphabet to terminals for model enumeration
  std::vector<RankedSymbol> terms_only;
  for (const auto& s : g.alphabet.symbols())
    if (s.kind == SymbolKind::Terminal) terms_only.push_back(s);
  RankedAlphabet sigma = RankedAlphabet::make(terms_only);

  std::set<std::string> formula_side;
  for (const Term& t : models_of_trees(f, sigma, max_nodes, opts))
    formula_side.insert(t.to_string());

  DefinabilityReport r;
  std::set_difference(grammar_side.begin(), grammar_side.end(), formula_side.begin(),
                      formula_side.end(), std::back_inserter(r.only_grammar));
  std::set_difference(formula_side.begin(), formula_side.end(), grammar_side.begin(),
                      grammar_side.end(), std::back_inserter(r.only_formula));
  return r;
}

}  // namespace cftg
