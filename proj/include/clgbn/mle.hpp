#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "clgbn/compound_vector.hpp"
#include "clgbn/data_stream.hpp"
#include "clgbn/network.hpp"
#include "clgbn/sufficient_statistics.hpp"

namespace clgbn {

struct MleConfig {
  std::size_t batch_size = kDefaultBatchSize;
  std::size_t workers = 1;
  // Accumulate exactly and fold batches in split order: the learned network is
  // then bit-identical for every worker count and batch size.
  bool deterministic_reduce = true;
};

// Left-to-right sum of s(x) over the batch. With T = ExactSum the result does
// not depend on the order of the terms at all.
template <class T = double>
BasicCompoundVector<T> sum_batch(const BayesianNetwork& skeleton, const DataBatch& batch) {
  auto acc = zero_like<T>(skeleton);
  for (std::size_t i = 0; i < batch.size(); ++i) accumulate_global(skeleton, batch[i], acc);
  return acc;
}

// Dataset columns must be the DAG's variables, in index order.
inline void require_matching_schema(const DataSchema& schema, const ParentSetDag& dag) {
  if (schema.size() != dag.size()) {
    throw DataError("dataset has " + std::to_string(schema.size()) + " columns, structure has " +
                    std::to_string(dag.size()) + " variables");
  }
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (!(schema.column(i) == dag.variable(i))) {
      throw DataError("dataset column " + std::to_string(i) + " ('" + schema.column(i).name() +
                      "') does not match variable '" + dag.variable(i).name() + "'");
    }
  }
}

struct MleResult {
  BayesianNetwork network;
  CompoundVector statistic_sums;  // sum of s(x) over the data
  std::size_t instances = 0;
  StreamStats stream;
};

// Uses the source's own batch size; config.batch_size is ignored here.
inline MleResult compute_mle_detailed(BatchSource& source, const ParentSetDag& dag,
                                      const MleConfig& config) {
  if (config.workers == 0) throw InvalidArgument("workers must be >= 1");
  require_matching_schema(source.schema(), dag);
  const auto skeleton = BayesianNetwork::with_default_parameters(dag);

  MleResult result;
  if (config.deterministic_reduce) {
    auto exact = reduce_batches(
        source, config.workers, zero_like<ExactSum>(skeleton),
        [&](const DataBatch& b) { return sum_batch<ExactSum>(skeleton, b); },
        [](ExactCompoundVector& acc, ExactCompoundVector&& part) { acc += part; }, true,
        &result.stream);
    result.statistic_sums = rounded(exact);
  } else {
    result.statistic_sums = reduce_batches(
        source, config.workers, zero_like<double>(skeleton),
        [&](const DataBatch& b) { return sum_batch<double>(skeleton, b); },
        [](CompoundVector& acc, CompoundVector&& part) { acc += part; }, false, &result.stream);
  }
  result.instances = result.stream.records;
  if (result.instances == 0) throw DataError("dataset '" + source.path() + "' has no records");
  const auto expected =
      vector_scale(result.statistic_sums, 1.0 / static_cast<double>(result.instances));
  result.network = moments_to_parameters(dag, expected, result.instances);
  return result;
}

inline BayesianNetwork compute_mle(BatchSource& source, const ParentSetDag& dag,
                                   const MleConfig& config) {
  return compute_mle_detailed(source, dag, config).network;
}

inline BayesianNetwork compute_mle(const std::string& path, const ParentSetDag& dag,
                                   const MleConfig& config) {
  BatchSource source(path, config.batch_size);
  return compute_mle(source, dag, config);
}

}  // namespace clgbn
