#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "clgbn/error.hpp"
#include "clgbn/network.hpp"
#include "clgbn/sampling.hpp"

// Query strings accepted by the `is` command:
//   P(name=v)  P(name<t)  P(name<=t)  P(name>t)  P(name>=t)  E(name)
// Evidence: name=value,name=value,...

namespace clgbn {

enum class Comparison { eq, lt, le, gt, ge };

struct Query {
  std::string text;
  bool expectation = false;  // E(...) rather than P(...)
  std::size_t target = 0;
  Comparison op = Comparison::eq;
  double threshold = 0.0;

  bool holds(double v) const {
    switch (op) {
      case Comparison::eq: return v == threshold;
      case Comparison::lt: return v < threshold;
      case Comparison::le: return v <= threshold;
      case Comparison::gt: return v > threshold;
      case Comparison::ge: return v >= threshold;
    }
    return false;
  }
};

namespace detail {

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::size_t lookup_variable(const BayesianNetwork& bn, std::string_view name) {
  auto found = bn.dag().find(std::string(name));
  if (!found) throw InvalidArgument("unknown variable '" + std::string(name) + "'");
  return found->index();
}

inline double query_number(std::string_view token) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || end != token.data() + token.size() || token.empty()) {
    throw InvalidArgument("expected a number, got '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace detail

inline Query parse_query(const BayesianNetwork& bn, std::string_view text) {
  text = detail::strip(text);
  Query q;
  q.text = std::string(text);
  if (text.size() < 4 || (text[0] != 'P' && text[0] != 'E') || text[1] != '(' || text.back() != ')') {
    throw InvalidArgument("malformed query '" + q.text + "'");
  }
  q.expectation = text[0] == 'E';
  std::string_view body = text.substr(2, text.size() - 3);
  if (q.expectation) {
    q.target = detail::lookup_variable(bn, detail::strip(body));
    return q;
  }
  const std::size_t at = body.find_first_of("=<>");
  if (at == std::string_view::npos) throw InvalidArgument("query '" + q.text + "' has no comparison");
  std::size_t len = 1;
  if (body[at] == '=') {
    q.op = Comparison::eq;
  } else if (at + 1 < body.size() && body[at + 1] == '=') {
    q.op = body[at] == '<' ? Comparison::le : Comparison::ge;
    len = 2;
  } else {
    q.op = body[at] == '<' ? Comparison::lt : Comparison::gt;
  }
  q.target = detail::lookup_variable(bn, detail::strip(body.substr(0, at)));
  q.threshold = detail::query_number(detail::strip(body.substr(at + len)));
  const Variable& v = bn.dag().variable(q.target);
  if (q.op == Comparison::eq && v.is_discrete()) discrete_state(v, q.threshold);
  return q;
}

inline Evidence parse_evidence(const BayesianNetwork& bn, std::string_view text) {
  Evidence ev;
  text = detail::strip(text);
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string_view item = detail::strip(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("evidence item '" + std::string(item) + "' is not name=value");
    }
    const std::size_t index = detail::lookup_variable(bn, detail::strip(item.substr(0, eq)));
    const double value = detail::query_number(detail::strip(item.substr(eq + 1)));
    if (!ev.emplace(index, value).second) {
      throw InvalidArgument("variable '" + bn.dag().variable(index).name() + "' observed twice");
    }
  }
  check_evidence(bn, ev);
  return ev;
}

inline ImportanceEstimate answer_query(const BayesianNetwork& bn, const Query& q, const Evidence& ev,
                                       std::size_t m, std::uint64_t seed, std::size_t workers = 1) {
  if (q.expectation) {
    return estimate_expectation(bn, ev, q.target, [](double v) { return v; }, m, seed, workers);
  }
  return estimate_event(bn, ev, q.target, [&q](double v) { return q.holds(v); }, m, seed, workers);
}

}  // namespace clgbn
