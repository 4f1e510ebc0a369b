#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "clgbn/data_stream.hpp"
#include "clgbn/greedy.hpp"
#include "clgbn/network.hpp"
#include "clgbn/sufficient_statistics.hpp"

namespace clgbn {

// Whole dataset held in memory, row-major.
class InMemoryDataset {
 public:
  InMemoryDataset() = default;
  InMemoryDataset(DataSchema schema, std::vector<double> values)
      : schema_(std::move(schema)), values_(std::move(values)) {
    if (values_.size() % schema_.size() != 0) {
      throw InvalidArgument("value count is not a multiple of the column count");
    }
  }

  const DataSchema& schema() const noexcept { return schema_; }
  std::size_t size() const noexcept { return values_.size() / schema_.size(); }
  std::size_t width() const noexcept { return schema_.size(); }
  InstanceView row(std::size_t i) const {
    return InstanceView(values_).subspan(i * width(), width());
  }

 private:
  DataSchema schema_;
  std::vector<double> values_;
};

inline InMemoryDataset load_dataset(const std::string& path) {
  BatchSource source(path, 4096);
  std::vector<double> values;
  while (auto batch = source.try_split()) {
    values.insert(values.end(), batch->values.begin(), batch->values.end());
  }
  return InMemoryDataset(source.schema(), std::move(values));
}

inline constexpr std::size_t kFssFolds = 5;
inline constexpr double kLaplaceAlpha = 1.0;

namespace detail {

// Naive Bayes over (class, features): the class is variable 0, feature k is
// variable k + 1 and has the class as its only parent.
inline ParentSetDag naive_bayes_structure(const DataSchema& schema, std::size_t class_col,
                                          const std::vector<std::size_t>& features) {
  std::vector<Variable> vars;
  const auto& cls = schema.column(class_col);
  vars.push_back(Variable::discrete(cls.name(), 0, cls.arity()));
  std::vector<std::vector<std::size_t>> parents(1);
  for (std::size_t k = 0; k < features.size(); ++k) {
    const auto& col = schema.column(features[k]);
    vars.push_back(col.is_discrete() ? Variable::discrete(col.name(), k + 1, col.arity())
                                     : Variable::continuous(col.name(), k + 1));
    parents.push_back({0});
  }
  return ParentSetDag(std::move(vars), parents);
}

}  // namespace detail

// Cross-validated accuracy of a naive Bayes classifier that uses only
// `features` to predict the discrete column `class_col`. Instance r belongs to
// fold r mod 5. Multinomial counts get Laplace smoothing (alpha = 1);
// Gaussian features use per-class maximum likelihood with the variance floor.
// Predictions break ties toward the lowest class state.
inline double fss_score(const InMemoryDataset& data, const std::vector<std::size_t>& features,
                        std::size_t class_col) {
  const auto& schema = data.schema();
  if (class_col >= schema.size() || !schema.column(class_col).is_discrete()) {
    throw InvalidArgument("class column must be a discrete column of the dataset");
  }
  for (std::size_t k = 0; k < features.size(); ++k) {
    if (features[k] >= schema.size()) throw InvalidArgument("feature column out of range");
    if (features[k] == class_col) throw InvalidArgument("the class cannot be a feature");
    if (std::find(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(k), features[k]) !=
        features.begin() + static_cast<std::ptrdiff_t>(k)) {
      throw InvalidArgument("duplicate feature column");
    }
  }
  const std::size_t n = data.size();
  if (n < kFssFolds) {
    throw DataError("cross-validation needs at least " + std::to_string(kFssFolds) + " instances");
  }

  const ParentSetDag dag = detail::naive_bayes_structure(schema, class_col, features);
  const auto skeleton = BayesianNetwork::with_default_parameters(dag);
  const std::size_t classes = schema.column(class_col).arity();

  std::vector<double> projected(features.size() + 1);
  auto project = [&](InstanceView row) {
    projected[0] = row[class_col];
    for (std::size_t k = 0; k < features.size(); ++k) projected[k + 1] = row[features[k]];
  };

  std::size_t correct = 0;
  for (std::size_t fold = 0; fold < kFssFolds; ++fold) {
    auto sums = zero_like(skeleton);
    std::size_t train = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r % kFssFolds == fold) continue;
      project(data.row(r));
      accumulate_global(skeleton, projected, sums);
      ++train;
    }
    for (std::size_t v = 0; v < dag.size(); ++v) {
      if (dag.variable(v).is_discrete()) {
        for (double& c : sums[v].local) c += kLaplaceAlpha;
      }
    }
    const auto model =
        moments_to_parameters(dag, vector_scale(sums, 1.0 / static_cast<double>(train)), train);

    for (std::size_t r = fold; r < n; r += kFssFolds) {
      project(data.row(r));
      const auto truth = static_cast<std::size_t>(projected[0]);
      std::size_t best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < classes; ++c) {
        projected[0] = static_cast<double>(c);
        const double s = log_density(model, projected);
        if (c == 0 || s > best_score) {
          best = c;
          best_score = s;
        }
      }
      correct += best == truth ? 1 : 0;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

// Wrapper forward feature selection scored by fss_score.
class FeatureSelectionProblem {
 public:
  using Payload = std::size_t;  // feature column
  struct State {
    std::vector<std::size_t> selected;
  };

  FeatureSelectionProblem(const InMemoryDataset& data, std::size_t class_col)
      : data_(&data), class_col_(class_col) {
    if (class_col >= data.schema().size() || !data.schema().column(class_col).is_discrete()) {
      throw InvalidArgument("class column must be a discrete column of the dataset");
    }
  }

  State initial_state() const { return {}; }

  std::vector<std::size_t> candidates(const State& s) const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < data_->schema().size(); ++c) {
      if (c == class_col_) continue;
      if (std::find(s.selected.begin(), s.selected.end(), c) != s.selected.end()) continue;
      out.push_back(c);
    }
    return out;
  }

  double evaluate(const State& s, std::size_t feature) const {
    auto features = s.selected;
    features.push_back(feature);
    return fss_score(*data_, features, class_col_);
  }

  void accept(State& s, const Candidate<std::size_t>& c) const { s.selected.push_back(c.payload); }

 private:
  const InMemoryDataset* data_;
  std::size_t class_col_;
};

inline constexpr double kDefaultFssThreshold = 1e-4;

inline GreedyResult<FeatureSelectionProblem::State, std::size_t> select_features(
    const InMemoryDataset& data, std::size_t class_col, double threshold = kDefaultFssThreshold,
    std::size_t workers = 1) {
  FeatureSelectionProblem problem(data, class_col);
  return greedy_search(problem, threshold, workers);
}

}  // namespace clgbn
