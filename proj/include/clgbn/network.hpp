#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "clgbn/dag.hpp"
#include "clgbn/distribution.hpp"
#include "clgbn/error.hpp"

namespace clgbn {

// DAG plus one conditional distribution per variable, aligned by index.
// Construction only checks alignment; validate() checks the modelling rules.
class BayesianNetwork {
 public:
  BayesianNetwork() = default;

  BayesianNetwork(ParentSetDag dag, std::vector<ConditionalDistribution> distributions)
      : dag_(std::move(dag)), dists_(std::move(distributions)) {
    if (dists_.size() != dag_.size()) {
      throw InvalidArgument("need exactly one distribution per variable");
    }
  }

  // Network over `dag` with uniform CPTs and standard CLGs.
  static BayesianNetwork with_default_parameters(const ParentSetDag& dag) {
    std::vector<ConditionalDistribution> dists;
    dists.reserve(dag.size());
    for (const auto& ps : dag.parent_sets()) dists.push_back(default_distribution(ps));
    return BayesianNetwork(dag, std::move(dists));
  }

  const ParentSetDag& dag() const noexcept { return dag_; }
  std::size_t size() const noexcept { return dists_.size(); }
  const std::vector<ConditionalDistribution>& distributions() const noexcept { return dists_; }
  const ConditionalDistribution& distribution(std::size_t index) const { return dists_.at(index); }

  friend bool operator==(const BayesianNetwork& a, const BayesianNetwork& b) {
    return a.dag_ == b.dag_ && a.dists_ == b.dists_;
  }

 private:
  ParentSetDag dag_;
  std::vector<ConditionalDistribution> dists_;
};

struct Violation {
  // One of: "structure", "acyclic", "clg-restriction", "row-sum",
  // "negative-probability", "variance-floor", "non-finite".
  std::string kind;
  std::string variable;
  std::string message;
};

inline std::vector<Violation> validate(const BayesianNetwork& bn) {
  std::vector<Violation> out;
  const auto& dag = bn.dag();
  if (!dag.is_acyclic()) out.push_back({"acyclic", "", "the graph contains a directed cycle"});

  for (std::size_t i = 0; i < bn.size(); ++i) {
    const auto& dist = bn.distribution(i);
    const auto& ps = dag.parent_set(i);
    const Variable& var = main_variable(dist);
    if (var != ps.main_var || parents_of(dist) != ps.parents) {
      out.push_back({"structure", ps.main_var.name(),
                     "distribution does not match the DAG's parent set"});
      continue;
    }
    if (const auto* table = std::get_if<MultinomialTable>(&dist)) {
      for (const auto& p : ps.parents) {
        if (p.is_continuous()) {
          out.push_back({"clg-restriction", var.name(),
                         "discrete variable has continuous parent '" + p.name() + "'"});
        }
      }
      for (std::size_t j = 0; j < table->configurations().count(); ++j) {
        double sum = 0.0;
        bool negative = false, finite = true;
        for (double p : table->row(j)) {
          sum += p;
          negative |= p < 0.0;
          finite &= std::isfinite(p);
        }
        if (!finite) {
          out.push_back({"non-finite", var.name(), "row " + std::to_string(j) + " is not finite"});
        } else if (negative) {
          out.push_back({"negative-probability", var.name(),
                         "row " + std::to_string(j) + " has a negative entry"});
        }
        if (finite && std::abs(sum - 1.0) > 1e-9) {
          out.push_back({"row-sum", var.name(),
                         "row " + std::to_string(j) + " sums to " + std::to_string(sum)});
        }
      }
    } else {
      const auto& clg = std::get<ClgDistribution>(dist);
      for (std::size_t j = 0; j < clg.parameters().size(); ++j) {
        const auto& p = clg.parameters(j);
        bool finite = std::isfinite(p.alpha) && std::isfinite(p.variance);
        for (double b : p.beta) finite &= std::isfinite(b);
        if (!finite) {
          out.push_back({"non-finite", var.name(),
                         "configuration " + std::to_string(j) + " has non-finite parameters"});
        } else if (p.variance < kVarianceFloor) {
          out.push_back({"variance-floor", var.name(),
                         "configuration " + std::to_string(j) + " variance below floor"});
        }
      }
    }
  }
  return out;
}

inline bool is_valid(const BayesianNetwork& bn) { return validate(bn).empty(); }

// Sum of log p(x_i | pa(x_i)); -inf when a discrete entry has probability zero.
inline double log_density(const BayesianNetwork& bn, InstanceView x) {
  if (x.size() != bn.size()) {
    throw InvalidArgument("instance has " + std::to_string(x.size()) + " values, network has " +
                          std::to_string(bn.size()) + " variables");
  }
  double total = 0.0;
  for (const auto& dist : bn.distributions()) total += log_conditional(dist, x);
  return total;
}

}  // namespace clgbn
