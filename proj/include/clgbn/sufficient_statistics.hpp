#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "clgbn/compound_vector.hpp"
#include "clgbn/distribution.hpp"
#include "clgbn/network.hpp"

namespace clgbn {

inline constexpr double kRidge = 1e-8;

// Per-configuration block of a CLG node with k continuous parents:
//   [1, z_1..z_k, x, x*z_1..x*z_k, x^2, z_a*z_b for a <= b (row-major)]
inline constexpr std::size_t clg_block_length(std::size_t k) {
  return 2 * k + 3 + k * (k + 1) / 2;
}

inline std::size_t local_statistics_length(const ConditionalDistribution& dist) {
  return std::visit(
      [](const auto& d) -> std::size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, MultinomialTable>) {
          return d.configurations().count() * d.arity();
        } else {
          return d.configurations().count() * clg_block_length(d.continuous_parents().size());
        }
      },
      dist);
}

// Adds s(x) for one distribution into `out` (length local_statistics_length).
// Only the block of the observed parent configuration is touched.
template <class T>
void accumulate_local(const ConditionalDistribution& dist, InstanceView x, std::span<T> out) {
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        const std::size_t j = d.configurations().index_of(x);
        if constexpr (std::is_same_v<D, MultinomialTable>) {
          const std::size_t s = discrete_state(d.variable(), x[d.variable().index()]);
          out[j * d.arity() + s] += 1.0;
        } else {
          const auto& z = d.continuous_parents();
          const std::size_t k = z.size();
          const double xv = x[d.variable().index()];
          T* block = out.data() + j * clg_block_length(k);
          block[0] += 1.0;
          for (std::size_t a = 0; a < k; ++a) block[1 + a] += x[z[a].index()];
          block[k + 1] += xv;
          for (std::size_t a = 0; a < k; ++a) block[k + 2 + a] += xv * x[z[a].index()];
          block[2 * k + 2] += xv * xv;
          std::size_t pos = 2 * k + 3;
          for (std::size_t a = 0; a < k; ++a) {
            const double za = x[z[a].index()];
            for (std::size_t b = a; b < k; ++b) block[pos++] += za * x[z[b].index()];
          }
        }
      },
      dist);
}

inline std::vector<double> local_sufficient_statistics(const ConditionalDistribution& dist,
                                                       InstanceView x) {
  std::vector<double> out(local_statistics_length(dist), 0.0);
  accumulate_local<double>(dist, x, out);
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> statistics_skeleton(const BayesianNetwork& bn) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(bn.size());
  for (const auto& dist : bn.distributions()) {
    out.emplace_back(main_variable(dist).index(), local_statistics_length(dist));
  }
  return out;
}

template <class T = double>
BasicCompoundVector<T> zero_like(const BayesianNetwork& bn) {
  return BasicCompoundVector<T>::zeros(statistics_skeleton(bn));
}

// acc += s(x), where acc has the skeleton of zero_like(bn).
template <class T>
void accumulate_global(const BayesianNetwork& bn, InstanceView x, BasicCompoundVector<T>& acc) {
  if (x.size() != bn.size()) {
    throw DataError("instance has " + std::to_string(x.size()) + " values, network has " +
                    std::to_string(bn.size()) + " variables");
  }
  const auto& dists = bn.distributions();
  for (std::size_t i = 0; i < dists.size(); ++i) {
    accumulate_local<T>(dists[i], x, std::span<T>(acc[i].local));
  }
}

inline CompoundVector global_sufficient_statistics(const BayesianNetwork& bn, InstanceView x) {
  auto out = zero_like(bn);
  accumulate_global(bn, x, out);
  return out;
}

namespace detail {

inline void require_finite(std::span<const double> values, const std::string& name) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("non-finite sufficient statistics for '" + name + "'");
  }
}

inline ClgParameters fit_clg_block(std::span<const double> m, std::size_t k) {
  const double weight = m[0];
  if (weight <= 0.0) return ClgParameters{0.0, std::vector<double>(k, 0.0), 1.0};

  Eigen::VectorXd z_mean(static_cast<Eigen::Index>(k));
  Eigen::VectorXd xz(static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    z_mean[static_cast<Eigen::Index>(a)] = m[1 + a] / weight;
    xz[static_cast<Eigen::Index>(a)] = m[k + 2 + a] / weight;
  }
  const double x_mean = m[k + 1] / weight;
  const double xx = m[2 * k + 2] / weight;

  Eigen::MatrixXd zz(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  std::size_t pos = 2 * k + 3;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      zz(ia, ib) = zz(ib, ia) = m[pos++] / weight;
    }
  }

  const Eigen::MatrixXd cov_zz = zz - z_mean * z_mean.transpose();
  const Eigen::VectorXd cov_zx = xz - z_mean * x_mean;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  if (k > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov_zz);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
      beta = llt.solve(cov_zx);
    } else {
      const Eigen::MatrixXd ridged =
          cov_zz + kRidge * Eigen::MatrixXd::Identity(cov_zz.rows(), cov_zz.cols());
      beta = ridged.ldlt().solve(cov_zx);
    }
  }

  ClgParameters p;
  p.beta.assign(beta.data(), beta.data() + beta.size());
  p.alpha = x_mean - beta.dot(z_mean);
  const double residual = (xx - x_mean * x_mean) - beta.dot(cov_zx);
  p.variance = std::isfinite(residual) ? std::max(residual, kVarianceFloor) : residual;
  return p;
}

}  // namespace detail

// Maximum likelihood parameters from averaged sufficient statistics
// (sum over the data divided by n).
inline BayesianNetwork moments_to_parameters(const ParentSetDag& dag, const CompoundVector& expected,
                                             std::size_t n) {
  if (n == 0) throw InvalidArgument("moments_to_parameters needs n >= 1");
  std::vector<ConditionalDistribution> dists;
  dists.reserve(dag.size());
  for (const auto& ps : dag.parent_sets()) {
    const auto& local = expected.element_for(ps.main_var.index()).local;
    const std::string& name = ps.main_var.name();
    detail::require_finite(local, name);
    const ParentConfigurations configs(ps.parents);
    if (ps.main_var.is_discrete()) {
      const std::size_t r = ps.main_var.arity();
      if (local.size() != configs.count() * r) {
        throw InvalidArgument("sufficient statistics for '" + name + "' have the wrong length");
      }
      std::vector<double> probs(local.size());
      for (std::size_t j = 0; j < configs.count(); ++j) {
        double total = 0.0;
        for (std::size_t s = 0; s < r; ++s) total += local[j * r + s];
        for (std::size_t s = 0; s < r; ++s) {
          probs[j * r + s] = total > 0.0 ? local[j * r + s] / total : 1.0 / static_cast<double>(r);
        }
      }
      dists.emplace_back(MultinomialTable(ps.main_var, ps.parents, std::move(probs)));
    } else {
      std::size_t k = 0;
      for (const auto& p : ps.parents) k += p.is_continuous() ? 1 : 0;
      const std::size_t len = clg_block_length(k);
      if (local.size() != configs.count() * len) {
        throw InvalidArgument("sufficient statistics for '" + name + "' have the wrong length");
      }
      std::vector<ClgParameters> params;
      params.reserve(configs.count());
      for (std::size_t j = 0; j < configs.count(); ++j) {
        params.push_back(detail::fit_clg_block(std::span<const double>(local).subspan(j * len, len), k));
        if (!std::isfinite(params.back().variance)) {
          throw DataError("non-finite moments for '" + name + "'");
        }
      }
      dists.emplace_back(ClgDistribution(ps.main_var, ps.parents, std::move(params)));
    }
  }
  return BayesianNetwork(dag, std::move(dists));
}

}  // namespace clgbn
