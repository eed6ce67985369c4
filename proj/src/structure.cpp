#include "cftg/structure.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cftg {

bool Structure::in_domain(const std::string& e) const {
  return std::find(domain.begin(), domain.end(), e) != domain.end();
}

std::string Structure::to_text() const {
  std::string out = "domain:";
  for (const auto& e : domain) out += " " + e;
  out += "\n";
  for (const auto& [name, pairs] : binary) {
    out += "rel " + name + ":";
    for (const auto& [u, v] : pairs) out += " (" + u + "," + v + ")";
    out += "\n";
  }
  for (const auto& [name, elems] : unary) {
    out += "pred " + name + ":";
    for (const auto& e : elems) out += " " + e;
    out += "\n";
  }
  return out;
}

Structure parse_structure(const std::string& text) {
  Structure s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_domain = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto where = [&] { return "line " + std::to_string(lineno); };
    if (head == "domain:") {
      std::string e;
      while (ls >> e) s.domain.push_back(e);
      saw_domain = true;
    } else if (head == "rel" || head == "pred") {
      std::string name;
      if (!(ls >> name) || name.back() != ':')
        raise("SyntaxError", where() + ": expected '" + head + " NAME:'");
      name.pop_back();
      std::string tok;
      while (ls >> tok) {
        if (head == "rel") {
          if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
            raise("SyntaxError", where() + ": expected pair (u,v), got '" + tok + "'");
          auto comma = tok.find(',');
          if (comma == std::string::npos)
            raise("SyntaxError", where() + ": expected pair (u,v), got '" + tok + "'");
          s.binary[name].insert(
              {tok.substr(1, comma - 1), tok.substr(comma + 1, tok.size() - comma - 2)});
        } else {
          s.unary[name].insert(tok);
        }
      }
      if (head == "rel") s.binary[name];  // keep empty relations
      else s.unary[name];
    } else {
      raise("SyntaxError", where() + ": expected 'domain:', 'rel' or 'pred'");
    }
  }
  if (!saw_domain) raise("SyntaxError", "structure file has no 'domain:' line");
  for (const auto& [name, pairs] : s.binary)
    for (const auto& [u, v] : pairs)
      if (!s.in_domain(u) || !s.in_domain(v))
        raise("UnknownElement", "relation " + name + " mentions an element outside the domain");
  for (const auto& [name, elems] : s.unary)
    for (const auto& e : elems)
      if (!s.in_domain(e))
        raise("UnknownElement", "predicate " + name + " mentions an element outside the domain");
  return s;
}

static void walk_tree(const Term& t, const Address& here, Structure& s) {
  if (t.is_variable())
    raise("VariableInStructure", "term with variables has no tree model");
  std::string me = here.to_string();
  s.domain.push_back(me);
  s.unary[t.label()].insert(me);
  for (int i = 0; i < t.rank(); ++i) {
    Address child = here;
    child.path.push_back(i);
    s.binary["<_" + std::to_string(i + 1)].insert({me, child.to_string()});
    walk_tree(t.children()[static_cast<std::size_t>(i)], child, s);
  }
}

Structure term_to_structure(const Term& t, int max_rank) {
  Structure s;
  for (int i = 1; i <= max_rank; ++i) s.binary["<_" + std::to_string(i)];
  walk_tree(t, Address{}, s);
  return s;
}

Structure term_to_structure(const Term& t, const RankedAlphabet& alphabet) {
  Structure s = term_to_structure(t, alphabet.max_rank());
  for (const auto& sym : alphabet.symbols()) s.unary[sym.name];
  return s;
}

std::vector<std::string> split_word(const std::string& u,
                                    const std::set<std::string>& letters) {
  std::vector<std::string> toks;
  bool has_ws = std::any_of(u.begin(), u.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
  if (has_ws) {
    std::istringstream in(u);
    std::string t;
    while (in >> t) toks.push_back(t);
  } else if (!u.empty()) {
    // A single multi-character letter is accepted as-is; otherwise one
    // letter per character.
    if (letters.count(u) && u.size() > 1) {
      toks.push_back(u);
    } else {
      for (char c : u) toks.push_back(std::string(1, c));
    }
  }
  for (const auto& t : toks)
    if (!letters.count(t)) raise("UnknownLetter", "'" + t + "' is not in the alphabet");
  return toks;
}

Structure string_to_structure(const std::string& u,
                              const std::set<std::string>& letters) {
  std::vector<std::string> toks = split_word(u, letters);
  Structure s;
  s.binary["<"];
  for (const auto& l : letters) s.unary[l];
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::string id = std::to_string(i + 1);
    s.domain.push_back(id);
    s.unary[toks[i]].insert(id);
    for (std::size_t j = i + 1; j < toks.size(); ++j)
      s.binary["<"].insert({id, std::to_string(j + 1)});
  }
  return s;
}

}  // namespace cftg
