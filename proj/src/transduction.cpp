#include "cftg/transduction.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace cftg {

namespace {

std::vector<RankedSymbol> parse_alpha_line(const std::string& rest, int lineno) {
  std::vector<RankedSymbol> out;
  std::istringstream in(rest);
  std::string tok;
  while (in >> tok) {
    auto slash = tok.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= tok.size())
      raise("SyntaxError",
            "line " + std::to_string(lineno) + ": expected name/rank, got '" + tok + "'");
    out.push_back({tok.substr(0, slash), std::stoi(tok.substr(slash + 1)),
                   SymbolKind::Terminal});
  }
  if (out.empty())
    raise("SyntaxError", "line " + std::to_string(lineno) + ": empty alphabet line");
  return out;
}

void check_free(const MsoFormula& f, const std::set<std::string>& allowed,
                const std::string& section) {
  auto [nodes, sets] = f.free_variables();
  for (const auto& v : nodes)
    if (!allowed.count(v))
      raise("FreeVariable", section + ": unexpected free variable '" + v + "'");
  if (!sets.empty())
    raise("FreeVariable", section + ": free set variable '" + *sets.begin() + "'");
}

}  // namespace

Interpretation parse_interpretation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  std::optional<RankedAlphabet> source, target;
  std::optional<MsoFormula> domain_sentence, domain_formula;
  std::map<int, MsoFormula> successor;
  std::map<std::string, MsoFormula> label;

  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      raise("SyntaxError", "line " + std::to_string(lineno) + ": expected 'section: ...'");
    std::string head = line.substr(0, colon);
    std::string rest = line.substr(colon + 1);
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back())))
      head.pop_back();

    auto parse_body = [&](const char* what) {
      try {
        return parse_formula(rest);
      } catch (const Error& e) {
        raise(e.code(), "line " + std::to_string(lineno) + " (" + what + "): " + e.what());
      }
    };

    if (head == "source") {
      source = RankedAlphabet::make(parse_alpha_line(rest, lineno));
    } else if (head == "target") {
      target = RankedAlphabet::make(parse_alpha_line(rest, lineno));
    } else if (head == "domain-sentence") {
      domain_sentence = parse_body("domain-sentence");
    } else if (head == "domain") {
      domain_formula = parse_body("domain");
    } else if (head.rfind("succ ", 0) == 0) {
      int i = 0;
      try {
        i = std::stoi(head.substr(5));
      } catch (const std::exception&) {
        raise("SyntaxError", "line " + std::to_string(lineno) + ": bad succ index");
      }
      successor[i] = parse_body("succ");
    } else if (head.rfind("label ", 0) == 0) {
      label[head.substr(6)] = parse_body("label");
    } else {
      raise("SyntaxError",
            "line " + std::to_string(lineno) + ": unknown section '" + head + "'");
    }
  }

  if (!source) raise("SyntaxError", "interpretation file has no 'source:' line");
  if (!target) raise("SyntaxError", "interpretation file has no 'target:' line");
  if (!domain_sentence) raise("SyntaxError", "missing 'domain-sentence:' section");
  if (!domain_formula) raise("SyntaxError", "missing 'domain:' section");

  Interpretation I;
  I.source = *source;
  I.target = *target;
  I.domain_sentence = *domain_sentence;
  I.domain_formula = *domain_formula;
  I.successor = std::move(successor);
  I.label = std::move(label);

  check_free(I.domain_sentence, {}, "domain-sentence");
  check_free(I.domain_formula, {"x"}, "domain");
  for (int i = 1; i <= I.target.max_rank(); ++i)
    if (!I.successor.count(i))
      raise("SyntaxError", "missing 'succ " + std::to_string(i) + ":' section");
  for (const auto& [i, f] : I.successor) {
    if (i < 1 || i > I.target.max_rank())
      raise("SyntaxError", "succ " + std::to_string(i) + " outside 1..max rank");
    check_free(f, {"x", "y"}, "succ " + std::to_string(i));
  }
  for (const auto& s : I.target.symbols())
    if (!I.label.count(s.name))
      raise("SyntaxError", "missing 'label " + s.name + ":' section");
  for (const auto& [a, f] : I.label) {
    if (!I.target.contains(a))
      raise("UnknownSymbol", "label section for '" + a + "' not in the target alphabet");
    check_free(f, {"x"}, "label " + a);
  }
  return I;
}

Interpretation load_interpretation(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise("FileNotFound", "cannot open interpretation file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_interpretation(buf.str());
}

TransductionResult apply_interpretation(const Interpretation& I, const Term& input,
                                        const EvalOptions& opts) {
  Structure m = term_to_structure(input, I.source);

  if (!eval(m, I.domain_sentence, {}, opts))
    raise("DomainSentenceFails", "input does not satisfy the domain sentence");

  std::vector<std::string> D;
  for (const auto& e : m.domain) {
    Assignment g;
    g.node["x"] = e;
    if (eval(m, I.domain_formula, g, opts)) D.push_back(e);
  }
  if (D.empty()) raise("EmptyDomain", "the domain formula selects no element");

  // label per element: exactly one
  std::map<std::string, std::string> labels;
  for (const auto& e : D) {
    std::vector<std::string> mine;
    for (const auto& [a, f] : I.label) {
      Assignment g;
      g.node["x"] = e;
      if (eval(m, f, g, opts)) mine.push_back(a);
    }
    if (mine.size() != 1)
      raise("LabelClash", "element " + e + " has " + std::to_string(mine.size()) +
                              " labels");
    labels[e] = mine.front();
  }

  // successor relations, functional per index and restricted to D
  std::map<std::string, std::map<int, std::string>> succ;
  std::map<std::string, int> indegree;
  for (const auto& e : D) indegree[e] = 0;
  for (const auto& [i, f] : I.successor) {
    for (const auto& u : D)
      for (const auto& v : D) {
        Assignment g;
        g.node["x"] = u;
        g.node["y"] = v;
        if (!eval(m, f, g, opts)) continue;
        auto [it, fresh] = succ[u].emplace(i, v);
        if (!fresh)
          raise("NotATreeDomain",
                "element " + u + " has two " + std::to_string(i) + "-successors");
        ++indegree[v];
      }
  }

  // contiguity and rank agreement
  for (const auto& e : D) {
    const auto& s = succ[e];
    int count = static_cast<int>(s.size());
    for (int i = 1; i <= count; ++i)
      if (!s.count(i))
        raise("NotATreeDomain", "element " + e + " has a gap in its successors");
    int rank = I.target.at(labels[e]).rank;
    if (rank != count)
      raise("RankMismatch", "element " + e + " is labeled '" + labels[e] +
                                "' of rank " + std::to_string(rank) + " but has " +
                                std::to_string(count) + " successors");
  }

  // unique root, and the successor graph must be a tree on D
  std::vector<std::string> roots;
  for (const auto& e : D)
    if (indegree[e] == 0) roots.push_back(e);
  if (roots.size() != 1)
    raise("NotATreeDomain",
          std::to_string(roots.size()) + " root candidates in the derived graph");

  std::set<std::string> visited;
  TransductionResult result;
  struct Builder {
    const std::map<std::string, std::map<int, std::string>>& succ;
    const std::map<std::string, std::string>& labels;
    std::set<std::string>& visited;
    TransductionResult& result;
    Term build(const std::string& e, const Address& at) {
      if (!visited.insert(e).second)
        raise("NotATreeDomain", "element " + e + " is reached twice");
      result.placement.emplace_back(e, at.to_string());
      std::vector<Term> kids;
      const auto& s = succ.at(e);
      for (int i = 1; i <= static_cast<int>(s.size()); ++i) {
        Address child = at;
        child.path.push_back(i - 1);
        kids.push_back(build(s.at(i), child));
      }
      return Term::symbol(labels.at(e), std::move(kids));
    }
  } builder{succ, labels, visited, result};

  result.output = builder.build(roots.front(), Address{});
  if (visited.size() != D.size())
    raise("NotATreeDomain", "derived graph is not connected");
  return result;
}

}  // namespace cftg
