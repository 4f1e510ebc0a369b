#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "clgbn/dag.hpp"
#include "clgbn/error.hpp"
#include "clgbn/variable.hpp"

namespace clgbn {

// A fully observed assignment, indexed by variable index. Discrete entries hold
// the integral state id.
using DataInstance = std::vector<double>;
using InstanceView = std::span<const double>;

inline constexpr double kVarianceFloor = 1e-6;

// Validated state id of a discrete variable.
inline std::size_t discrete_state(const Variable& v, double value) {
  if (!(value >= 0.0) || value != std::floor(value) ||
      value >= static_cast<double>(v.arity())) {
    throw DataError("value " + std::to_string(value) + " out of range for '" + v.name() +
                    "' (arity " + std::to_string(v.arity()) + ")");
  }
  return static_cast<std::size_t>(value);
}

// Mixed-radix enumeration of the joint states of the discrete parents, first
// listed parent most significant.
class ParentConfigurations {
 public:
  ParentConfigurations() = default;

  explicit ParentConfigurations(const std::vector<Variable>& parents) {
    for (const auto& p : parents) {
      if (p.is_discrete()) {
        discrete_.push_back(p);
        count_ *= p.arity();
      }
    }
  }

  std::size_t count() const noexcept { return count_; }
  const std::vector<Variable>& discrete_parents() const noexcept { return discrete_; }

  std::size_t index_of(InstanceView x) const {
    std::size_t j = 0;
    for (const auto& p : discrete_) {
      j = j * p.arity() + discrete_state(p, x[p.index()]);
    }
    return j;
  }

  // Parent states of configuration j, in listed order.
  std::vector<std::size_t> states(std::size_t j) const {
    std::vector<std::size_t> out(discrete_.size());
    for (std::size_t k = discrete_.size(); k-- > 0;) {
      out[k] = j % discrete_[k].arity();
      j /= discrete_[k].arity();
    }
    return out;
  }

  friend bool operator==(const ParentConfigurations&, const ParentConfigurations&) = default;

 private:
  std::vector<Variable> discrete_;
  std::size_t count_ = 1;
};

// p(X | discrete parents) as one probability row per parent configuration.
class MultinomialTable {
 public:
  // `probabilities` is row-major: configuration j occupies [j*arity, (j+1)*arity).
  MultinomialTable(Variable var, std::vector<Variable> parents, std::vector<double> probabilities)
      : var_(std::move(var)), parents_(std::move(parents)), configs_(parents_),
        probs_(std::move(probabilities)) {
    if (!var_.is_discrete()) {
      throw InvalidArgument("multinomial table for continuous variable '" + var_.name() + "'");
    }
    if (probs_.size() != configs_.count() * var_.arity()) {
      throw InvalidArgument("multinomial table for '" + var_.name() + "' needs " +
                            std::to_string(configs_.count() * var_.arity()) + " entries");
    }
  }

  // Every row set to the uniform distribution.
  static MultinomialTable uniform(Variable var, std::vector<Variable> parents) {
    ParentConfigurations c(parents);
    std::vector<double> probs(c.count() * var.arity(), 1.0 / static_cast<double>(var.arity()));
    return MultinomialTable(std::move(var), std::move(parents), std::move(probs));
  }

  const Variable& variable() const noexcept { return var_; }
  const std::vector<Variable>& parents() const noexcept { return parents_; }
  const ParentConfigurations& configurations() const noexcept { return configs_; }
  std::size_t arity() const noexcept { return var_.arity(); }
  const std::vector<double>& probabilities() const noexcept { return probs_; }

  std::span<const double> row(std::size_t j) const {
    return std::span<const double>(probs_).subspan(j * arity(), arity());
  }

  double probability(std::size_t j, std::size_t state) const { return probs_[j * arity() + state]; }

  friend bool operator==(const MultinomialTable&, const MultinomialTable&) = default;

 private:
  Variable var_;
  std::vector<Variable> parents_;
  ParentConfigurations configs_;
  std::vector<double> probs_;
};

struct ClgParameters {
  double alpha = 0.0;
  std::vector<double> beta;
  double variance = 1.0;

  friend bool operator==(const ClgParameters&, const ClgParameters&) = default;
};

// Conditional linear Gaussian: for discrete-parent configuration j,
// X | z ~ N(alpha_j + beta_j . z, variance_j), z the continuous parents in
// listed order.
class ClgDistribution {
 public:
  ClgDistribution(Variable var, std::vector<Variable> parents, std::vector<ClgParameters> params)
      : var_(std::move(var)), parents_(std::move(parents)), configs_(parents_),
        params_(std::move(params)) {
    if (!var_.is_continuous()) {
      throw InvalidArgument("CLG distribution for discrete variable '" + var_.name() + "'");
    }
    for (const auto& p : parents_) {
      if (p.is_continuous()) continuous_.push_back(p);
    }
    if (params_.size() != configs_.count()) {
      throw InvalidArgument("CLG distribution for '" + var_.name() + "' needs " +
                            std::to_string(configs_.count()) + " parameter blocks");
    }
    for (const auto& p : params_) {
      if (p.beta.size() != continuous_.size()) {
        throw InvalidArgument("CLG distribution for '" + var_.name() + "': beta must have " +
                              std::to_string(continuous_.size()) + " coefficients");
      }
    }
  }

  // alpha = 0, beta = 0, variance = 1 in every configuration.
  static ClgDistribution standard(Variable var, std::vector<Variable> parents) {
    ParentConfigurations c(parents);
    std::size_t k = 0;
    for (const auto& p : parents) k += p.is_continuous() ? 1 : 0;
    std::vector<ClgParameters> params(c.count(), ClgParameters{0.0, std::vector<double>(k, 0.0), 1.0});
    return ClgDistribution(std::move(var), std::move(parents), std::move(params));
  }

  const Variable& variable() const noexcept { return var_; }
  const std::vector<Variable>& parents() const noexcept { return parents_; }
  const ParentConfigurations& configurations() const noexcept { return configs_; }
  const std::vector<Variable>& continuous_parents() const noexcept { return continuous_; }
  const std::vector<ClgParameters>& parameters() const noexcept { return params_; }
  const ClgParameters& parameters(std::size_t j) const { return params_.at(j); }

  double mean(std::size_t j, InstanceView x) const {
    const auto& p = params_[j];
    double mu = p.alpha;
    for (std::size_t k = 0; k < continuous_.size(); ++k) {
      mu += p.beta[k] * x[continuous_[k].index()];
    }
    return mu;
  }

  friend bool operator==(const ClgDistribution&, const ClgDistribution&) = default;

 private:
  Variable var_;
  std::vector<Variable> parents_;
  ParentConfigurations configs_;
  std::vector<Variable> continuous_;
  std::vector<ClgParameters> params_;
};

using ConditionalDistribution = std::variant<MultinomialTable, ClgDistribution>;

inline const Variable& main_variable(const ConditionalDistribution& d) {
  return std::visit([](const auto& x) -> const Variable& { return x.variable(); }, d);
}

inline const std::vector<Variable>& parents_of(const ConditionalDistribution& d) {
  return std::visit([](const auto& x) -> const std::vector<Variable>& { return x.parents(); }, d);
}

// Uniform CPT or standard CLG matching the parent set's variable kind.
inline ConditionalDistribution default_distribution(const ParentSet& ps) {
  if (ps.main_var.is_discrete()) return MultinomialTable::uniform(ps.main_var, ps.parents);
  return ClgDistribution::standard(ps.main_var, ps.parents);
}

inline double gaussian_log_density(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

// log p(x_i | pa(x_i)) for the distribution's main variable.
inline double log_conditional(const ConditionalDistribution& dist, InstanceView x) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        const std::size_t j = d.configurations().index_of(x);
        if constexpr (std::is_same_v<T, MultinomialTable>) {
          return std::log(d.probability(j, discrete_state(d.variable(), x[d.variable().index()])));
        } else {
          return gaussian_log_density(x[d.variable().index()], d.mean(j, x),
                                      d.parameters(j).variance);
        }
      },
      dist);
}

// p(x_i | pa(x_i)); a density for continuous variables.
inline double conditional_density(const ConditionalDistribution& dist, InstanceView x) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        const std::size_t j = d.configurations().index_of(x);
        if constexpr (std::is_same_v<T, MultinomialTable>) {
          return d.probability(j, discrete_state(d.variable(), x[d.variable().index()]));
        } else {
          return std::exp(gaussian_log_density(x[d.variable().index()], d.mean(j, x),
                                               d.parameters(j).variance));
        }
      },
      dist);
}

}  // namespace clgbn
