#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clgbn/error.hpp"
#include "clgbn/parallel.hpp"

namespace clgbn {

template <class Payload>
struct Candidate {
  Payload payload;
  double score = -std::numeric_limits<double>::infinity();
  std::size_t ordinal = 0;  // position in this iteration's candidate list

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// A forward greedy search problem.
//   initial_state()            the empty solution
//   candidates(state)          finite list of moves from `state`
//   evaluate(state, payload)   score of applying the move; must be pure
//   accept(state, candidate)   apply the chosen move
template <class P>
concept GreedyProblem = requires(P& p, const P& cp, typename P::State& s,
                                 const typename P::State& cs,
                                 const typename P::Payload& payload,
                                 const Candidate<typename P::Payload>& c) {
  { cp.initial_state() } -> std::convertible_to<typename P::State>;
  { cp.candidates(cs) } -> std::convertible_to<std::vector<typename P::Payload>>;
  { cp.evaluate(cs, payload) } -> std::convertible_to<double>;
  { p.accept(s, c) };
};

// Evaluation of one candidate failed; the search was aborted.
class GreedyEvaluationError : public Error {
 public:
  GreedyEvaluationError(std::size_t iteration, std::size_t ordinal, const std::string& what)
      : Error("candidate " + std::to_string(ordinal) + " of iteration " + std::to_string(iteration) +
              " failed: " + what),
        iteration_(iteration), ordinal_(ordinal) {}

  std::size_t iteration() const noexcept { return iteration_; }
  std::size_t ordinal() const noexcept { return ordinal_; }

 private:
  std::size_t iteration_;
  std::size_t ordinal_;
};

// Highest score wins, ties go to the lowest ordinal; accepted only if it beats
// the incumbent by strictly more than `threshold`.
template <class Payload>
std::optional<Candidate<Payload>> select_best(std::span<const Candidate<Payload>> evaluated,
                                              double incumbent_score, double threshold) {
  if (threshold < 0.0) throw InvalidArgument("threshold must be >= 0");
  const Candidate<Payload>* best = nullptr;
  for (const auto& c : evaluated) {
    if (!best || c.score > best->score || (c.score == best->score && c.ordinal < best->ordinal)) {
      best = &c;
    }
  }
  if (!best || !(best->score > incumbent_score + threshold)) return std::nullopt;
  return *best;
}

template <class Payload>
std::optional<Candidate<Payload>> select_best(const std::vector<Candidate<Payload>>& evaluated,
                                              double incumbent_score, double threshold) {
  return select_best(std::span<const Candidate<Payload>>(evaluated), incumbent_score, threshold);
}

template <class State, class Payload>
struct GreedyResult {
  State state;
  std::vector<Candidate<Payload>> trace;  // accepted candidates, in order
  double score = -std::numeric_limits<double>::infinity();
};

// Sequential outer loop; every iteration scores all candidates on `workers`
// threads, then picks with select_best. The outcome does not depend on the
// worker count.
template <GreedyProblem P>
GreedyResult<typename P::State, typename P::Payload> greedy_search(
    P& problem, double threshold, std::size_t workers,
    double initial_score = -std::numeric_limits<double>::infinity()) {
  using Payload = typename P::Payload;
  GreedyResult<typename P::State, Payload> result{problem.initial_state(), {}, initial_score};
  for (std::size_t iteration = 0;; ++iteration) {
    std::vector<Payload> moves = problem.candidates(result.state);
    std::vector<Candidate<Payload>> evaluated(moves.size());
    const auto& state = result.state;
    parallel_for(moves.size(), workers, [&](std::size_t i) {
      double score;
      try {
        score = problem.evaluate(state, moves[i]);
      } catch (const std::exception& e) {
        throw GreedyEvaluationError(iteration, i, e.what());
      }
      if (!std::isfinite(score)) throw GreedyEvaluationError(iteration, i, "non-finite score");
      evaluated[i] = Candidate<Payload>{moves[i], score, i};
    });
    auto best = select_best(evaluated, result.score, threshold);
    if (!best) break;
    problem.accept(result.state, *best);
    result.score = best->score;
    result.trace.push_back(std::move(*best));
  }
  return result;
}

}  // namespace clgbn
