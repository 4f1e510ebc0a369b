#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clgbn/distribution.hpp"
#include "clgbn/error.hpp"
#include "clgbn/network.hpp"
#include "clgbn/parallel.hpp"
#include "clgbn/random.hpp"

namespace clgbn {

// Partial assignment: variable index -> observed value.
using Evidence = std::map<std::size_t, double>;

struct WeightedSample {
  DataInstance assignment;
  double weight = 1.0;

  friend bool operator==(const WeightedSample&, const WeightedSample&) = default;
};

inline void check_evidence(const BayesianNetwork& bn, const Evidence& evidence) {
  for (const auto& [index, value] : evidence) {
    if (index >= bn.size()) {
      throw InvalidArgument("evidence on unknown variable index " + std::to_string(index));
    }
    const Variable& v = bn.dag().variable(index);
    if (v.is_discrete()) {
      discrete_state(v, value);
    } else if (!std::isfinite(value)) {
      throw InvalidArgument("evidence on '" + v.name() + "' must be finite");
    }
  }
}

// Likelihood weighting: the proposal is the network with evidence variables
// clamped. Non-evidence variables are drawn in topological order from
// p(X | pa); the weight is the product of p(e | pa(e)) over the evidence.
// Continuous evidence contributes density values, so weights may exceed 1.
class LikelihoodWeighting {
 public:
  LikelihoodWeighting(const BayesianNetwork& bn, Evidence evidence)
      : bn_(&bn), evidence_(std::move(evidence)), order_(bn.dag().topological_order()),
        clamped_(bn.size(), false) {
    check_evidence(bn, evidence_);
    for (const auto& [index, value] : evidence_) clamped_[index] = true;
  }

  const BayesianNetwork& network() const noexcept { return *bn_; }
  const Evidence& evidence() const noexcept { return evidence_; }

  // Fills `x` (size = number of variables) and returns the weight.
  template <class Rng>
  double sample_into(Rng& rng, std::span<double> x) const {
    for (const auto& [index, value] : evidence_) x[index] = value;
    double weight = 1.0;
    const InstanceView view(x.data(), x.size());
    for (std::size_t i : order_) {
      const auto& dist = bn_->distribution(i);
      if (clamped_[i]) {
        weight *= conditional_density(dist, view);
        continue;
      }
      if (const auto* t = std::get_if<MultinomialTable>(&dist)) {
        const std::size_t j = t->configurations().index_of(view);
        x[i] = static_cast<double>(categorical(rng, t->row(j)));
      } else {
        const auto& c = std::get<ClgDistribution>(dist);
        const std::size_t j = c.configurations().index_of(view);
        x[i] = c.mean(j, view) + std::sqrt(c.parameters(j).variance) * standard_normal(rng);
      }
    }
    return weight;
  }

  template <class Rng>
  WeightedSample sample(Rng& rng) const {
    WeightedSample s;
    s.assignment.assign(bn_->size(), 0.0);
    s.weight = sample_into(rng, s.assignment);
    return s;
  }

 private:
  const BayesianNetwork* bn_;
  Evidence evidence_;
  std::vector<std::size_t> order_;
  std::vector<bool> clamped_;
};

template <class Rng>
WeightedSample weighted_sample(const BayesianNetwork& bn, const Evidence& evidence, Rng& rng) {
  return LikelihoodWeighting(bn, evidence).sample(rng);
}

// Sample i is drawn from SplitMix64(derive_task_seed(seed, i)), whichever
// worker produces it.
inline std::vector<WeightedSample> draw_weighted_samples(const BayesianNetwork& bn,
                                                         const Evidence& evidence, std::size_t m,
                                                         std::uint64_t seed, std::size_t workers = 1) {
  const LikelihoodWeighting sampler(bn, evidence);
  std::vector<WeightedSample> out(m);
  parallel_ranges(m, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng(derive_task_seed(seed, i));
      out[i] = sampler.sample(rng);
    }
  });
  return out;
}

struct ImportanceEstimate {
  double value = 0.0;           // sum f(x_i) w_i / sum w_i
  double standard_error = 0.0;  // delta-method error of the ratio estimator
  double weight_sum = 0.0;
  std::size_t samples = 0;
};

// Self-normalized importance sampling estimate of E[f(X_target) | evidence].
// Sums are taken pairwise in sample-index order, so the estimate is
// bit-identical for any worker count.
inline ImportanceEstimate estimate_expectation(const BayesianNetwork& bn, const Evidence& evidence,
                                               std::size_t target,
                                               const std::function<double(double)>& f,
                                               std::size_t m, std::uint64_t seed,
                                               std::size_t workers = 1) {
  if (m == 0) throw InvalidArgument("need at least one sample");
  if (target >= bn.size()) throw InvalidArgument("unknown target variable index");
  const LikelihoodWeighting sampler(bn, evidence);
  std::vector<double> fw(m), w(m), fx(m);
  parallel_ranges(m, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(bn.size());
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng(derive_task_seed(seed, i));
      w[i] = sampler.sample_into(rng, x);
      fx[i] = f(x[target]);
      fw[i] = fx[i] * w[i];
    }
  });
  const double numerator = pairwise_sum(fw);
  const double denominator = pairwise_sum(w);
  if (!(denominator > 0.0)) throw Error("all samples rejected by evidence");

  ImportanceEstimate est;
  est.samples = m;
  est.weight_sum = denominator;
  est.value = numerator / denominator;
  std::vector<double> sq(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = w[i] * (fx[i] - est.value);
    sq[i] = d * d;
  }
  est.standard_error = std::sqrt(pairwise_sum(sq)) / denominator;
  return est;
}

inline double expected_value(const BayesianNetwork& bn, const Evidence& evidence, std::size_t target,
                             const std::function<double(double)>& f, std::size_t m,
                             std::uint64_t seed, std::size_t workers = 1) {
  return estimate_expectation(bn, evidence, target, f, m, seed, workers).value;
}

inline ImportanceEstimate estimate_event(const BayesianNetwork& bn, const Evidence& evidence,
                                         std::size_t target, const std::function<bool(double)>& pred,
                                         std::size_t m, std::uint64_t seed, std::size_t workers = 1) {
  return estimate_expectation(
      bn, evidence, target, [&](double v) { return pred(v) ? 1.0 : 0.0; }, m, seed, workers);
}

inline double event_probability(const BayesianNetwork& bn, const Evidence& evidence,
                                std::size_t target, const std::function<bool(double)>& pred,
                                std::size_t m, std::uint64_t seed, std::size_t workers = 1) {
  return estimate_event(bn, evidence, target, pred, m, seed, workers).value;
}

}  // namespace clgbn
