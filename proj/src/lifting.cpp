#include "cftg/lifting.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace cftg {

// ---------------------------------------------------------------------------
// DerivedTerm
// ---------------------------------------------------------------------------

DerivedTerm::DerivedTerm(Label label, std::vector<DerivedTerm> children)
    : label_(std::move(label)), kids_(std::move(children)) {
  if (const auto* c = std::get_if<Constant>(&label_)) {
    if (c->sort < 0) raise("SortError", "negative sort on '" + c->name + "'");
    if (!kids_.empty()) raise("SortError", "lifted constant '" + c->name + "' with children");
    sort_ = c->sort;
  } else if (const auto* nt = std::get_if<Nonterminal>(&label_)) {
    if (nt->sort < 0) raise("SortError", "negative sort on '" + nt->name + "'");
    if (!kids_.empty())
      raise("SortError", "nonterminal leaf '" + nt->name + "' with children");
    sort_ = nt->sort;
  } else if (const auto* p = std::get_if<Projection>(&label_)) {
    if (p->index < 1 || p->index > p->arity)
      raise("SortError", "projection pi{" + std::to_string(p->index) + "," +
                             std::to_string(p->arity) + "} is out of range");
    if (!kids_.empty()) raise("SortError", "projection with children");
    sort_ = p->arity;
  } else {
    const auto& s = std::get<Substitution>(label_);
    if (s.inner < 0 || s.outer < 0) raise("SortError", "negative substitution sort");
    if (static_cast<int>(kids_.size()) != s.inner + 1)
      raise("SortError", "S{" + std::to_string(s.inner) + "," + std::to_string(s.outer) +
                             "} needs " + std::to_string(s.inner + 1) + " children, got " +
                             std::to_string(kids_.size()));
    if (kids_[0].sort() != s.inner)
      raise("SortError", "substitution head has sort " + std::to_string(kids_[0].sort()) +
                             ", expected " + std::to_string(s.inner));
    for (std::size_t i = 1; i < kids_.size(); ++i)
      if (kids_[i].sort() != s.outer)
        raise("SortError", "substitution argument " + std::to_string(i) + " has sort " +
                               std::to_string(kids_[i].sort()) + ", expected " +
                               std::to_string(s.outer));
    sort_ = s.outer;
  }
}

bool DerivedTerm::contains_nonterminal() const {
  if (std::holds_alternative<Nonterminal>(label_)) return true;
  for (const auto& k : kids_)
    if (k.contains_nonterminal()) return true;
  return false;
}

std::string DerivedTerm::to_string_impl(bool head_position) const {
  if (const auto* c = std::get_if<Constant>(&label_))
    return head_position ? c->name : "lift(" + c->name + ")";
  if (const auto* nt = std::get_if<Nonterminal>(&label_))
    return nt->name + ":" + std::to_string(nt->sort);
  if (const auto* p = std::get_if<Projection>(&label_))
    return "pi{" + std::to_string(p->index) + "," + std::to_string(p->arity) + "}";
  const auto& s = std::get<Substitution>(label_);
  std::string out =
      "S{" + std::to_string(s.inner) + "," + std::to_string(s.outer) + "}(";
  out += kids_[0].to_string_impl(true);
  for (std::size_t i = 1; i < kids_.size(); ++i) out += "," + kids_[i].to_string_impl(false);
  return out + ")";
}

std::string DerivedTerm::to_string() const { return to_string_impl(false); }

bool DerivedTerm::operator==(const DerivedTerm& other) const {
  return label_ == other.label_ && kids_ == other.kids_;
}

// ---------------------------------------------------------------------------
// LIFT and beta
// ---------------------------------------------------------------------------

DerivedTerm lift_term(const Term& t, int k, const RankedAlphabet& alphabet) {
  if (t.is_variable()) {
    int i = t.variable_index();
    if (i > k)
      raise("VariableOutOfRange",
            "x" + std::to_string(i) + " not in X_" + std::to_string(k));
    return DerivedTerm(DerivedTerm::Projection{i, k});
  }
  const RankedSymbol& sym = alphabet.at(t.label());
  if (sym.rank != t.rank())
    raise("RankMismatch", "'" + t.label() + "' has rank " + std::to_string(sym.rank) +
                              " but " + std::to_string(t.rank()) + " children");
  DerivedTerm head =
      sym.kind == SymbolKind::Nonterminal
          ? DerivedTerm(DerivedTerm::Nonterminal{sym.name, sym.rank})
          : DerivedTerm(DerivedTerm::Constant{sym.name, sym.rank});
  std::vector<DerivedTerm> kids;
  kids.push_back(std::move(head));
  for (const Term& c : t.children()) kids.push_back(lift_term(c, k, alphabet));
  return DerivedTerm(DerivedTerm::Substitution{sym.rank, k}, std::move(kids));
}

static std::vector<Term> first_variables(int n) {
  std::vector<Term> vars;
  vars.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) vars.push_back(Term::variable(i));
  return vars;
}

static Term beta_impl(const DerivedTerm& d, bool allow_nonterminals) {
  if (const auto* c = std::get_if<DerivedTerm::Constant>(&d.label()))
    return Term::symbol(c->name, first_variables(c->sort));
  if (const auto* nt = std::get_if<DerivedTerm::Nonterminal>(&d.label())) {
    if (!allow_nonterminals)
      raise("UnevaluatedNonterminal",
            "derived term still contains nonterminal '" + nt->name + "'");
    return Term::symbol(nt->name, first_variables(nt->sort));
  }
  if (const auto* p = std::get_if<DerivedTerm::Projection>(&d.label()))
    return Term::variable(p->index);
  std::vector<Term> args;
  for (std::size_t i = 1; i < d.children().size(); ++i)
    args.push_back(beta_impl(d.children()[i], allow_nonterminals));
  return substitute(beta_impl(d.children()[0], allow_nonterminals), args);
}

Term beta(const DerivedTerm& d) { return beta_impl(d, false); }

Term beta_with_nonterminals(const DerivedTerm& d) { return beta_impl(d, true); }

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

Term encode_derived(const DerivedTerm& d) {
  if (const auto* c = std::get_if<DerivedTerm::Constant>(&d.label()))
    return Term::symbol(c->name);
  if (const auto* nt = std::get_if<DerivedTerm::Nonterminal>(&d.label()))
    return Term::symbol(nt->name);
  if (const auto* p = std::get_if<DerivedTerm::Projection>(&d.label()))
    return Term::symbol(derived_symbol_name(ProjectionSym{p->index, p->arity}));
  const auto& s = std::get<DerivedTerm::Substitution>(d.label());
  std::vector<Term> kids;
  for (const auto& k : d.children()) kids.push_back(encode_derived(k));
  return Term::symbol(derived_symbol_name(SubstitutionSym{s.inner, s.outer}),
                      std::move(kids));
}

namespace {

// "S{n,k}" / "pi{i,n}" recognizers for encoded names.
std::optional<std::pair<int, int>> match_braced(const std::string& name,
                                                const std::string& prefix) {
  if (name.size() < prefix.size() + 5) return std::nullopt;
  if (name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (name[prefix.size()] != '{' || name.back() != '}') return std::nullopt;
  std::string body = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string::npos) return std::nullopt;
  std::string a = body.substr(0, comma), b = body.substr(comma + 1);
  auto all_digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
  };
  if (!all_digits(a) || !all_digits(b)) return std::nullopt;
  return std::make_pair(std::stoi(a), std::stoi(b));
}

}  // namespace

DerivedTerm decode_derived(const Term& t, const RankedAlphabet& base) {
  if (t.is_variable()) raise("SortError", "variables cannot occur in derived terms");
  if (auto sk = match_braced(t.label(), "S")) {
    std::vector<DerivedTerm> kids;
    for (const Term& k : t.children()) kids.push_back(decode_derived(k, base));
    return DerivedTerm(DerivedTerm::Substitution{sk->first, sk->second},
                       std::move(kids));
  }
  if (auto in = match_braced(t.label(), "pi")) {
    if (t.rank() != 0) raise("SortError", "projection with children");
    return DerivedTerm(DerivedTerm::Projection{in->first, in->second});
  }
  const RankedSymbol& sym = base.at(t.label());
  if (t.rank() != 0)
    raise("SortError", "lifted symbol '" + t.label() + "' must be a leaf");
  if (sym.kind == SymbolKind::Nonterminal)
    return DerivedTerm(DerivedTerm::Nonterminal{sym.name, sym.rank});
  return DerivedTerm(DerivedTerm::Constant{sym.name, sym.rank});
}

// ---------------------------------------------------------------------------
// Derived-term parser
// ---------------------------------------------------------------------------

namespace {

struct RawNode {
  enum class Kind { Subst, SubstExplicit, Proj, ProjExplicit, Lift, Name };
  Kind kind = Kind::Name;
  std::string name;
  int a = 0, b = 0;                 // explicit {a,b} parameters or proj index
  std::optional<int> declared_sort; // from "name:sort"
  std::vector<RawNode> kids;
};

struct DCursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit DCursor(const std::string& t) : text(t) {}
  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') { ++line; col = 1; } else { ++col; }
    ++pos;
  }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    raise("SyntaxError", "line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + msg);
  }
};

bool dname_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  return std::string("(),:").find(c) == std::string::npos;
}

std::string read_dname(DCursor& c) {
  c.skip_ws();
  if (c.eof()) c.fail("expected a derived symbol, found end of input");
  std::string name;
  while (!c.eof() && (dname_char(c.peek()) || c.peek() == '{')) {
    if (c.peek() == '{') {  // brace group: part of the name, commas included
      while (!c.eof() && c.peek() != '}') {
        name += c.peek();
        c.advance();
      }
      if (c.eof()) c.fail("unterminated '{' in derived symbol");
      name += '}';
      c.advance();
      continue;
    }
    name += c.peek();
    c.advance();
  }
  if (name.empty()) c.fail(std::string("unexpected '") + c.peek() + "'");
  return name;
}

std::optional<int> trailing_number(const std::string& s, const std::string& prefix) {
  if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0)
    return std::nullopt;
  std::string digits = s.substr(prefix.size());
  if (!digits.empty() && digits[0] == '_') digits.erase(0, 1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    return std::nullopt;
  return std::stoi(digits);
}

std::vector<RawNode> parse_raw_args(DCursor& c);

RawNode parse_raw(DCursor& c) {
  std::string name = read_dname(c);
  c.skip_ws();
  RawNode n;

  if (auto sk = match_braced(name, "S")) {
    n.kind = RawNode::Kind::SubstExplicit;
    n.a = sk->first;
    n.b = sk->second;
    if (c.eof() || c.peek() != '(') c.fail("'" + name + "' needs an argument list");
    n.kids = parse_raw_args(c);
    return n;
  }
  if (auto in = match_braced(name, "pi")) {
    n.kind = RawNode::Kind::ProjExplicit;
    n.a = in->first;
    n.b = in->second;
    return n;
  }
  if (name == "S" && !c.eof() && c.peek() == '(') {
    n.kind = RawNode::Kind::Subst;
    n.kids = parse_raw_args(c);
    return n;
  }
  if (auto i = trailing_number(name, "pi")) {
    n.kind = RawNode::Kind::Proj;
    n.a = *i;
    return n;
  }
  if (name == "lift" && !c.eof() && c.peek() == '(') {
    c.advance();
    n.kind = RawNode::Kind::Lift;
    n.name = read_dname(c);
    c.skip_ws();
    if (c.eof() || c.peek() != ')') c.fail("unterminated lift(...)");
    c.advance();
    return n;
  }

  n.kind = RawNode::Kind::Name;
  n.name = name;
  if (!c.eof() && c.peek() == ':') {
    c.advance();
    std::string digits = read_dname(c);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) {
          return std::isdigit(static_cast<unsigned char>(ch));
        }))
      c.fail("expected a sort after ':'");
    n.declared_sort = std::stoi(digits);
  }
  if (!c.eof() && c.peek() == '(')
    c.fail("'" + name + "' cannot take arguments in a derived term");
  return n;
}

std::vector<RawNode> parse_raw_args(DCursor& c) {
  // caller guarantees peek() == '('
  c.advance();
  std::vector<RawNode> kids;
  while (true) {
    kids.push_back(parse_raw(c));
    c.skip_ws();
    if (c.eof()) c.fail("unterminated argument list");
    if (c.peek() == ',') {
      c.advance();
      continue;
    }
    if (c.peek() == ')') {
      c.advance();
      return kids;
    }
    c.fail(std::string("expected ',' or ')', found '") + c.peek() + "'");
  }
}

DerivedTerm leaf_for(const std::string& name, int sort, const RankedAlphabet* base) {
  if (base) {
    const RankedSymbol& sym = base->at(name);
    if (sym.rank != sort)
      raise("SortError", "'" + name + "' has rank " + std::to_string(sym.rank) +
                             " but sort " + std::to_string(sort) + " is required here");
    if (sym.kind == SymbolKind::Nonterminal)
      return DerivedTerm(DerivedTerm::Nonterminal{name, sort});
  }
  return DerivedTerm(DerivedTerm::Constant{name, sort});
}

int required(const std::optional<int>& sort, const std::string& what) {
  if (!sort)
    raise("SortError", "cannot infer the sort of " + what +
                           "; annotate it or supply an expected sort");
  return *sort;
}

DerivedTerm type_raw(const RawNode& n, const RankedAlphabet* base,
                     std::optional<int> expected, bool head_position) {
  switch (n.kind) {
    case RawNode::Kind::SubstExplicit:
    case RawNode::Kind::Subst: {
      int inner, outer;
      if (n.kind == RawNode::Kind::SubstExplicit) {
        inner = n.a;
        outer = n.b;
        if (static_cast<int>(n.kids.size()) != inner + 1)
          raise("SortError", "S{" + std::to_string(inner) + "," + std::to_string(outer) +
                                 "} needs " + std::to_string(inner + 1) + " children");
        if (expected && *expected != outer)
          raise("SortError", "S{...," + std::to_string(outer) + "} found where sort " +
                                 std::to_string(*expected) + " is required");
      } else {
        inner = static_cast<int>(n.kids.size()) - 1;
        outer = required(expected, "a schematic S(...) node");
      }
      std::vector<DerivedTerm> kids;
      kids.push_back(type_raw(n.kids[0], base, inner, true));
      for (std::size_t i = 1; i < n.kids.size(); ++i)
        kids.push_back(type_raw(n.kids[i], base, outer, false));
      return DerivedTerm(DerivedTerm::Substitution{inner, outer}, std::move(kids));
    }
    case RawNode::Kind::ProjExplicit:
      if (expected && *expected != n.b)
        raise("SortError", "pi{" + std::to_string(n.a) + "," + std::to_string(n.b) +
                               "} found where sort " + std::to_string(*expected) +
                               " is required");
      return DerivedTerm(DerivedTerm::Projection{n.a, n.b});
    case RawNode::Kind::Proj: {
      int arity = required(expected, "a schematic projection");
      return DerivedTerm(DerivedTerm::Projection{n.a, arity});
    }
    case RawNode::Kind::Lift: {
      int sort;
      if (base)
        sort = base->at(n.name).rank;
      else
        sort = required(expected, "lift(" + n.name + ") without an alphabet");
      if (expected && *expected != sort)
        raise("SortError", "lift(" + n.name + ") has sort " + std::to_string(sort) +
                               " but sort " + std::to_string(*expected) +
                               " is required here");
      return leaf_for(n.name, sort, base);
    }
    case RawNode::Kind::Name: {
      if (n.declared_sort) {
        if (expected && *expected != *n.declared_sort)
          raise("SortError", n.name + ":" + std::to_string(*n.declared_sort) +
                                 " found where sort " + std::to_string(*expected) +
                                 " is required");
        if (base) return leaf_for(n.name, *n.declared_sort, base);
        return DerivedTerm(DerivedTerm::Nonterminal{n.name, *n.declared_sort});
      }
      if (head_position) {
        int sort = required(expected, "'" + n.name + "' in head position");
        return leaf_for(n.name, sort, base);
      }
      // Bare constant in argument or root position: normalize to the
      // canonical S{0,k}(name) wrapping.
      int outer = required(expected, "bare constant '" + n.name + "'");
      if (base && base->at(n.name).rank != 0)
        raise("SortError", "bare '" + n.name + "' has rank " +
                               std::to_string(base->at(n.name).rank) +
                               "; only rank-0 symbols may appear unwrapped");
      std::vector<DerivedTerm> kids;
      kids.push_back(leaf_for(n.name, 0, base));
      return DerivedTerm(DerivedTerm::Substitution{0, outer}, std::move(kids));
    }
  }
  raise("SyntaxError", "unreachable");
}

}  // namespace

DerivedTerm parse_derived_term(const std::string& text, const RankedAlphabet* base,
                               std::optional<int> expected_sort) {
  DCursor c(text);
  RawNode raw = parse_raw(c);
  c.skip_ws();
  if (!c.eof()) c.fail("trailing input after derived term");
  return type_raw(raw, base, expected_sort, false);
}

// ---------------------------------------------------------------------------
// Lifted grammars
// ---------------------------------------------------------------------------

namespace {

void collect_operator_symbols(const Term& t, std::set<std::pair<std::string, int>>& out) {
  if (match_braced(t.label(), "S") || match_braced(t.label(), "pi"))
    out.insert({t.label(), t.rank()});
  for (const Term& k : t.children()) collect_operator_symbols(k, out);
}

}  // namespace

Cftg lift_grammar(const Cftg& g) {
  {
    auto ds = validate_grammar(g);
    if (has_errors(ds)) raise(ds.front().code, ds.front().message);
  }

  std::vector<Production> lifted;
  std::set<std::pair<std::string, int>> operators;
  for (const Production& p : g.productions) {
    Term rhs = encode_derived(lift_term(p.rhs, p.arity, g.alphabet));
    collect_operator_symbols(rhs, operators);
    lifted.push_back({p.lhs, 0, rhs});
  }

  std::vector<RankedSymbol> symbols;
  for (const auto& s : g.alphabet.symbols())
    if (s.kind == SymbolKind::Terminal)
      symbols.push_back({s.name, 0, SymbolKind::Terminal});
  for (const auto& [name, rank] : operators)
    symbols.push_back({name, rank, SymbolKind::Terminal});
  for (const auto& s : g.alphabet.symbols())
    if (s.kind == SymbolKind::Nonterminal)
      symbols.push_back({s.name, 0, SymbolKind::Nonterminal});

  Cftg out;
  out.alphabet = RankedAlphabet::make(symbols);
  out.start = g.start;
  out.productions = std::move(lifted);
  return out;
}

// ---------------------------------------------------------------------------
// Tree homomorphisms
// ---------------------------------------------------------------------------

Term hom_apply(const HomFamily& h, const Term& t) {
  if (t.is_variable()) return t;
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (const Term& k : t.children()) kids.push_back(hom_apply(h, k));
  auto it = h.images.find(t.label());
  if (it == h.images.end()) {
    if (!h.identity_fallback)
      raise("UnknownSymbol", "homomorphism undefined on '" + t.label() + "'");
    return Term::symbol(t.label(), std::move(kids));
  }
  const auto& [arity, image] = it->second;
  if (arity != t.rank())
    raise("RankMismatch", "homomorphism image of '" + t.label() + "' expects rank " +
                              std::to_string(arity));
  return substitute(image, kids);
}

HomFamily production_hom(const Production& p, const RankedAlphabet& signature) {
  if (!signature.contains(p.lhs))
    raise("UnknownSymbol", "production lhs '" + p.lhs + "' not in the signature");
  HomFamily h;
  for (const auto& s : signature.symbols()) {
    if (s.name == p.lhs)
      h.images[s.name] = {p.arity, p.rhs};
    else
      h.images[s.name] = {s.rank, Term::symbol(s.name, first_variables(s.rank))};
  }
  return h;
}

HomFamily lifted_production_hom(const Production& p, const RankedAlphabet& signature) {
  if (!signature.contains(p.lhs))
    raise("UnknownSymbol", "production lhs '" + p.lhs + "' not in the signature");
  HomFamily h;
  h.identity_fallback = true;
  h.images[p.lhs] = {0, encode_derived(lift_term(p.rhs, p.arity, signature))};
  return h;
}

bool check_diagram(const Production& p, const DerivedTerm& d,
                   const RankedAlphabet& signature) {
  Term encoded = encode_derived(d);
  Term simulated = hom_apply(lifted_production_hom(p, signature), encoded);
  Term down_then_across =
      hom_apply(production_hom(p, signature), beta_with_nonterminals(d));
  Term across_then_down = beta_with_nonterminals(decode_derived(simulated, signature));
  return across_then_down == down_then_across;
}

}  // namespace cftg
