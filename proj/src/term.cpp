#include "cftg/term.hpp"

#include <algorithm>
#include <cctype>

namespace cftg {

Term Term::symbol(std::string name, std::vector<Term> children) {
  Term t;
  t.name_ = std::move(name);
  t.kids_ = std::move(children);
  return t;
}

Term Term::variable(int index) {
  if (index < 1) raise("VariableOutOfRange", "variable index must be >= 1");
  Term t;
  t.var_ = index;
  return t;
}

int Term::node_count() const {
  int n = 1;
  for (const Term& k : kids_) n += k.node_count();
  return n;
}

int Term::max_variable() const {
  int m = var_;
  for (const Term& k : kids_) m = std::max(m, k.max_variable());
  return m;
}

bool Term::contains_symbol(const std::string& name) const {
  if (!is_variable() && name_ == name) return true;
  for (const Term& k : kids_)
    if (k.contains_symbol(name)) return true;
  return false;
}

std::string Term::to_string() const {
  if (is_variable()) return "x" + std::to_string(var_);
  if (kids_.empty()) return name_;
  std::string out = name_;
  out += '(';
  for (std::size_t i = 0; i < kids_.size(); ++i) {
    if (i) out += ',';
    out += kids_[i].to_string();
  }
  out += ')';
  return out;
}

bool Term::operator==(const Term& other) const {
  return var_ == other.var_ && name_ == other.name_ && kids_ == other.kids_;
}

int Term::compare(const Term& other) const {
  if (var_ != other.var_) return var_ < other.var_ ? -1 : 1;
  if (int c = name_.compare(other.name_); c != 0) return c < 0 ? -1 : 1;
  std::size_t n = std::min(kids_.size(), other.kids_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = kids_[i].compare(other.kids_[i]); c != 0) return c;
  if (kids_.size() != other.kids_.size())
    return kids_.size() < other.kids_.size() ? -1 : 1;
  return 0;
}

bool shortlex_less(const Term& a, const Term& b) {
  std::string sa = a.to_string(), sb = b.to_string();
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  return sa < sb;
}

// ---------------------------------------------------------------------------

std::string Address::to_string() const {
  if (path.empty()) return "\xce\xb5";  // ε
  std::string out;
  for (int i : path) out += std::to_string(i + 1);
  return out;
}

static void collect_addresses(const Term& t, std::vector<int>& here,
                              std::vector<Address>& out) {
  out.push_back(Address{here});
  for (int i = 0; i < t.rank(); ++i) {
    here.push_back(i);
    collect_addresses(t.children()[static_cast<std::size_t>(i)], here, out);
    here.pop_back();
  }
}

std::vector<Address> addresses_of(const Term& t) {
  std::vector<Address> out;
  std::vector<int> here;
  collect_addresses(t, here, out);
  return out;
}

const Term& subterm_at(const Term& t, const Address& a) {
  const Term* cur = &t;
  for (int i : a.path) {
    if (i < 0 || i >= cur->rank())
      raise("InvalidAddress", "address " + a.to_string() + " not in term");
    cur = &cur->children()[static_cast<std::size_t>(i)];
  }
  return *cur;
}

Term replace_at(const Term& t, const Address& a, const Term& replacement) {
  if (a.path.empty()) return replacement;
  if (t.is_variable() || a.path.front() < 0 || a.path.front() >= t.rank())
    raise("InvalidAddress", "address " + a.to_string() + " not in term");
  std::vector<Term> kids = t.children();
  Address rest{std::vector<int>(a.path.begin() + 1, a.path.end())};
  std::size_t i = static_cast<std::size_t>(a.path.front());
  kids[i] = replace_at(kids[i], rest, replacement);
  return Term::symbol(t.label(), std::move(kids));
}

bool validate_tree_domain(const std::vector<Address>& domain, int max_branch) {
  if (domain.empty()) return false;
  std::set<std::vector<int>> present;
  for (const Address& a : domain) present.insert(a.path);
  for (const auto& p : present) {
    for (int i : p)
      if (i < 0 || i >= max_branch) return false;
    if (!p.empty()) {
      // prefix closure
      std::vector<int> parent(p.begin(), p.end() - 1);
      if (!present.count(parent)) return false;
      // left siblings
      std::vector<int> sib = p;
      for (int j = 0; j < p.back(); ++j) {
        sib.back() = j;
        if (!present.count(sib)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

static Term substitute_impl(const Term& t, const std::vector<Term>& args) {
  if (t.is_variable()) {
    int i = t.variable_index();
    if (i > static_cast<int>(args.size()))
      raise("ArityMismatch", "term mentions x" + std::to_string(i) + " but only " +
                                 std::to_string(args.size()) + " arguments given");
    return args[static_cast<std::size_t>(i - 1)];
  }
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (const Term& k : t.children()) kids.push_back(substitute_impl(k, args));
  return Term::symbol(t.label(), std::move(kids));
}

Term substitute(const Term& t, const std::vector<Term>& args) {
  return substitute_impl(t, args);
}

static void yield_impl(const Term& t, const std::set<std::string>& empty,
                       const RankedAlphabet* alphabet, std::string& out) {
  if (t.is_variable())
    raise("NonTerminalLeaf", "variable x" + std::to_string(t.variable_index()) +
                                 " has no yield");
  if (alphabet) {
    const RankedSymbol& s = alphabet->at(t.label());
    if (s.kind == SymbolKind::Nonterminal)
      raise("NonTerminalLeaf", "nonterminal '" + t.label() + "' has no yield");
  }
  if (t.rank() == 0) {
    if (!empty.count(t.label())) out += t.label();
    return;
  }
  if (t.rank() == 1 && !empty.count(t.label())) out += t.label();
  for (const Term& k : t.children()) yield_impl(k, empty, alphabet, out);
}

std::string yield_of(const Term& t, const std::set<std::string>& empty_symbols,
                     const RankedAlphabet* alphabet) {
  std::string out;
  yield_impl(t, empty_symbols, alphabet, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Cursor(const std::string& t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void fail(const std::string& code, const std::string& msg) const {
    raise(code, "line " + std::to_string(line) + ", col " + std::to_string(col) +
                    ": " + msg);
  }
};

bool is_name_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  return std::string("(),|#").find(c) == std::string::npos;
}

std::string read_name(Cursor& c) {
  c.skip_ws();
  if (c.eof()) c.fail("SyntaxError", "expected a symbol, found end of input");
  std::string name;
  while (!c.eof() && (is_name_char(c.peek()) || c.peek() == '{')) {
    if (c.peek() == '{') {  // brace group: part of the name, commas included
      while (!c.eof() && c.peek() != '}') {
        name += c.peek();
        c.advance();
      }
      if (c.eof()) c.fail("SyntaxError", "unterminated '{' in symbol name");
      name += '}';
      c.advance();
      continue;
    }
    name += c.peek();
    c.advance();
  }
  if (name.empty()) c.fail("SyntaxError", std::string("unexpected '") + c.peek() + "'");
  return name;
}

std::optional<int> variable_index_of(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return std::nullopt;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  return std::stoi(name.substr(1));
}

Term parse_node(Cursor& c, const RankedAlphabet* alphabet, int k, bool lenient) {
  int at_line = 0, at_col = 0;
  c.skip_ws();
  at_line = c.line;
  at_col = c.col;
  std::string name = read_name(c);

  auto fail_at = [&](const std::string& code, const std::string& msg) {
    raise(code, "line " + std::to_string(at_line) + ", col " + std::to_string(at_col) +
                    ": " + msg);
  };

  if (auto vi = variable_index_of(name)) {
    if (lenient) fail_at("SyntaxError", "variables are not allowed here");
    if (*vi < 1 || *vi > k) {
      if (k == 0)
        fail_at("VariableOutOfRange", name + " used where no variables are in scope");
      fail_at("VariableOutOfRange", name + " not in x1..x" + std::to_string(k));
    }
    return Term::variable(*vi);
  }

  std::vector<Term> kids;
  c.skip_ws();
  if (!c.eof() && c.peek() == '(') {
    c.advance();
    c.skip_ws();
    if (!c.eof() && c.peek() == ')') {
      c.fail("SyntaxError", "empty argument list");
    }
    while (true) {
      kids.push_back(parse_node(c, alphabet, k, lenient));
      c.skip_ws();
      if (c.eof()) c.fail("SyntaxError", "unterminated argument list");
      if (c.peek() == ',') {
        c.advance();
        continue;
      }
      if (c.peek() == ')') {
        c.advance();
        break;
      }
      c.fail("SyntaxError", std::string("expected ',' or ')', found '") + c.peek() + "'");
    }
  }

  if (!lenient) {
    const RankedSymbol* sym = alphabet->find(name);
    if (!sym) fail_at("UnknownSymbol", "'" + name + "' is not in the alphabet");
    if (sym->rank != static_cast<int>(kids.size()))
      fail_at("RankMismatch", "'" + name + "' has rank " + std::to_string(sym->rank) +
                                  " but " + std::to_string(kids.size()) +
                                  " arguments were given");
  }
  return Term::symbol(name, std::move(kids));
}

Term parse_whole(const std::string& text, const RankedAlphabet* alphabet, int k,
                 bool lenient) {
  Cursor c(text);
  Term t = parse_node(c, alphabet, k, lenient);
  c.skip_ws();
  if (!c.eof()) c.fail("SyntaxError", "trailing input after term");
  return t;
}

}  // namespace

Term parse_term(const std::string& text, const RankedAlphabet& alphabet, int k) {
  return parse_whole(text, &alphabet, k, false);
}

Term parse_term_lenient(const std::string& text) {
  return parse_whole(text, nullptr, 0, true);
}

}  // namespace cftg
