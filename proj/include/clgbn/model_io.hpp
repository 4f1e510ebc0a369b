#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clgbn/error.hpp"
#include "clgbn/network.hpp"

// Line-oriented text model format:
//
//   variable <name> discrete <arity>
//   variable <name> continuous
//   parents <name> : <p1> <p2> ...
//   cpt <name> <config-j> <p0> <p1> ...
//   clg <name> <config-j> <alpha> <beta...> <sigma2>
//
// Variables are indexed in declaration order. Blank lines and lines starting
// with '#' are ignored.

namespace clgbn {

// Shortest text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view token, std::size_t line) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  }
  return v;
}

inline std::size_t parse_count(std::string_view token, std::size_t line) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return v;
}

inline void write_model(std::ostream& os, const BayesianNetwork& bn) {
  const auto& dag = bn.dag();
  for (const auto& ps : dag.parent_sets()) {
    const auto& v = ps.main_var;
    os << "variable " << v.name();
    if (v.is_discrete()) {
      os << " discrete " << v.arity() << '\n';
    } else {
      os << " continuous\n";
    }
  }
  for (const auto& ps : dag.parent_sets()) {
    os << "parents " << ps.main_var.name() << " :";
    for (const auto& p : ps.parents) os << ' ' << p.name();
    os << '\n';
  }
  for (const auto& dist : bn.distributions()) {
    if (const auto* t = std::get_if<MultinomialTable>(&dist)) {
      for (std::size_t j = 0; j < t->configurations().count(); ++j) {
        os << "cpt " << t->variable().name() << ' ' << j;
        for (double p : t->row(j)) os << ' ' << format_double(p);
        os << '\n';
      }
    } else {
      const auto& c = std::get<ClgDistribution>(dist);
      for (std::size_t j = 0; j < c.parameters().size(); ++j) {
        const auto& p = c.parameters(j);
        os << "clg " << c.variable().name() << ' ' << j << ' ' << format_double(p.alpha);
        for (double b : p.beta) os << ' ' << format_double(b);
        os << ' ' << format_double(p.variance) << '\n';
      }
    }
  }
}

inline std::string model_to_string(const BayesianNetwork& bn) {
  std::ostringstream os;
  write_model(os, bn);
  return os.str();
}

namespace detail {

struct ParsedModel {
  std::vector<Variable> variables;
  std::map<std::string, std::size_t, std::less<>> index;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<bool> parents_seen;
  // variable index -> config -> (line, numbers)
  std::vector<std::map<std::size_t, std::pair<std::size_t, std::vector<double>>>> params;
  std::vector<std::size_t> param_kind_line;  // first parameter line per variable
};

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline ParsedModel parse_model_text(std::istream& is) {
  ParsedModel m;
  std::string raw;
  std::size_t line = 0;
  auto lookup = [&](std::string_view name, std::size_t ln) -> std::size_t {
    auto it = m.index.find(name);
    if (it == m.index.end()) throw ParseError(ln, "unknown variable '" + std::string(name) + "'");
    return it->second;
  };
  while (std::getline(is, raw)) {
    ++line;
    auto tok = split_ws(raw);
    if (tok.empty() || tok[0].front() == '#') continue;
    const auto kw = tok[0];
    if (kw == "variable") {
      if (tok.size() < 3) throw ParseError(line, "variable needs a name and a kind");
      std::string name(tok[1]);
      if (m.index.count(name)) throw ParseError(line, "duplicate variable '" + name + "'");
      const std::size_t idx = m.variables.size();
      if (tok[2] == "discrete" && tok.size() == 4) {
        const std::size_t arity = parse_count(tok[3], line);
        if (arity < 2) throw ParseError(line, "arity must be >= 2");
        m.variables.push_back(Variable::discrete(name, idx, arity));
      } else if (tok[2] == "continuous" && tok.size() == 3) {
        m.variables.push_back(Variable::continuous(name, idx));
      } else {
        throw ParseError(line, "expected 'discrete <arity>' or 'continuous'");
      }
      m.index.emplace(name, idx);
      m.parents.emplace_back();
      m.parents_seen.push_back(false);
      m.params.emplace_back();
      m.param_kind_line.push_back(0);
    } else if (kw == "parents") {
      if (tok.size() < 3 || tok[2] != ":") throw ParseError(line, "expected 'parents <name> : ...'");
      const std::size_t v = lookup(tok[1], line);
      if (m.parents_seen[v]) throw ParseError(line, "parents of '" + std::string(tok[1]) + "' given twice");
      m.parents_seen[v] = true;
      for (std::size_t k = 3; k < tok.size(); ++k) {
        const std::size_t p = lookup(tok[k], line);
        if (p == v) throw ParseError(line, "'" + std::string(tok[1]) + "' cannot be its own parent");
        for (std::size_t q : m.parents[v]) {
          if (q == p) throw ParseError(line, "duplicate parent '" + std::string(tok[k]) + "'");
        }
        m.parents[v].push_back(p);
      }
    } else if (kw == "cpt" || kw == "clg") {
      if (tok.size() < 4) throw ParseError(line, "parameter line is too short");
      const std::size_t v = lookup(tok[1], line);
      if ((kw == "cpt") != m.variables[v].is_discrete()) {
        throw ParseError(line, std::string(kw) + " line for a " +
                                   (m.variables[v].is_discrete() ? "discrete" : "continuous") +
                                   " variable");
      }
      const std::size_t j = parse_count(tok[2], line);
      std::vector<double> values;
      for (std::size_t k = 3; k < tok.size(); ++k) values.push_back(parse_double(tok[k], line));
      if (!m.params[v].emplace(j, std::make_pair(line, std::move(values))).second) {
        throw ParseError(line, "configuration " + std::to_string(j) + " given twice");
      }
      if (m.param_kind_line[v] == 0) m.param_kind_line[v] = line;
    } else {
      throw ParseError(line, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  return m;
}

}  // namespace detail

namespace detail {

inline void reject_violations(const std::vector<Violation>& violations) {
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += " [" + v.kind + "] " + v.variable + ": " + v.message + ";";
  throw DataError(msg);
}

}  // namespace detail

// Reads only variables and parents; parameter lines are accepted and ignored.
// The structure must be acyclic and respect the CLG restriction.
inline ParentSetDag read_structure(std::istream& is) {
  auto m = detail::parse_model_text(is);
  if (m.variables.empty()) throw DataError("model declares no variables");
  ParentSetDag dag(m.variables, m.parents);
  detail::reject_violations(validate(BayesianNetwork::with_default_parameters(dag)));
  return dag;
}

// Reads a complete model and rejects it unless validate() is clean.
inline BayesianNetwork read_model(std::istream& is) {
  auto m = detail::parse_model_text(is);
  if (m.variables.empty()) throw DataError("model declares no variables");
  ParentSetDag dag(m.variables, m.parents);
  std::vector<ConditionalDistribution> dists;
  for (const auto& ps : dag.parent_sets()) {
    const auto& v = ps.main_var;
    const auto& given = m.params[v.index()];
    const ParentConfigurations configs(ps.parents);
    for (const auto& [j, entry] : given) {
      if (j >= configs.count()) {
        throw ParseError(entry.first, "configuration " + std::to_string(j) + " out of range for '" +
                                          v.name() + "'");
      }
    }
    if (given.size() != configs.count()) {
      throw DataError("'" + v.name() + "' needs parameters for " + std::to_string(configs.count()) +
                      " configurations, found " + std::to_string(given.size()));
    }
    if (v.is_discrete()) {
      std::vector<double> probs;
      for (const auto& [j, entry] : given) {
        if (entry.second.size() != v.arity()) {
          throw ParseError(entry.first, "expected " + std::to_string(v.arity()) + " probabilities");
        }
        probs.insert(probs.end(), entry.second.begin(), entry.second.end());
      }
      dists.emplace_back(MultinomialTable(v, ps.parents, std::move(probs)));
    } else {
      std::size_t k = 0;
      for (const auto& p : ps.parents) k += p.is_continuous() ? 1 : 0;
      std::vector<ClgParameters> params;
      for (const auto& [j, entry] : given) {
        const auto& x = entry.second;
        if (x.size() != k + 2) {
          throw ParseError(entry.first, "expected alpha, " + std::to_string(k) +
                                            " coefficients and a variance");
        }
        params.push_back(ClgParameters{x.front(), std::vector<double>(x.begin() + 1, x.end() - 1),
                                       x.back()});
      }
      dists.emplace_back(ClgDistribution(v, ps.parents, std::move(params)));
    }
  }
  BayesianNetwork bn(std::move(dag), std::move(dists));
  detail::reject_violations(validate(bn));
  return bn;
}

inline BayesianNetwork model_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_model(is);
}

inline BayesianNetwork load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open model file '" + path + "'");
  return read_model(is);
}

inline ParentSetDag load_structure(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open structure file '" + path + "'");
  return read_structure(is);
}

inline void save_model(const std::string& path, const BayesianNetwork& bn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write model file '" + path + "'");
  write_model(os, bn);
  if (!os) throw DataError("failed writing model file '" + path + "'");
}

}  // namespace clgbn
