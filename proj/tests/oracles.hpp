#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library code paths they check: plain loops, no
// sufficient-statistics vectors, no parallelism.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <tuple>
#include <string>
#include <vector>

#include <unistd.h>

#include "clgbn/clgbn.hpp"

namespace oracle {

// ---------------------------------------------------------------- graphs

struct RandomDag {
  std::size_t n = 0;
  std::vector<std::vector<bool>> edge;  // edge[u][v]: u -> v
  clgbn::ParentSetDag dag;
};

// Random DAG: a random topological order, each forward pair linked with
// probability `density`; parents are listed in random order.
inline RandomDag random_dag(std::size_t n, double density, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  RandomDag out;
  out.n = n;
  out.edge.assign(n, std::vector<bool>(n, false));
  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng)) {
        out.edge[order[a]][order[b]] = true;
        parents[order[b]].push_back(order[a]);
      }
    }
  }
  for (auto& p : parents) std::shuffle(p.begin(), p.end(), rng);
  std::vector<clgbn::Variable> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back(clgbn::Variable::discrete("V" + std::to_string(i), i, 2));
  out.dag = clgbn::ParentSetDag(vars, parents);
  return out;
}

inline std::size_t count_edges(const RandomDag& g) {
  std::size_t c = 0;
  for (std::size_t u = 0; u < g.n; ++u)
    for (std::size_t v = 0; v < g.n; ++v) c += g.edge[u][v] ? 1 : 0;
  return c;
}

inline std::vector<std::size_t> children(const RandomDag& g, std::size_t u) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.n; ++v)
    if (g.edge[u][v]) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------- networks

// X1 -> X2, X1 -> X3, {X2, X3} -> X4, X3 -> X5, all discrete.
inline clgbn::ParentSetDag five_node_dag(std::size_t arity = 2) {
  std::vector<clgbn::Variable> vars;
  for (std::size_t i = 0; i < 5; ++i) {
    vars.push_back(clgbn::Variable::discrete("X" + std::to_string(i + 1), i, arity));
  }
  return clgbn::ParentSetDag(vars, {{}, {0}, {0}, {1, 2}, {2}});
}

// Probability of one full discrete assignment, multiplying table entries.
// The configuration index is recomputed here: parents in listed order,
// first one most significant.
inline double joint_probability(const clgbn::BayesianNetwork& bn, const std::vector<std::size_t>& x) {
  double p = 1.0;
  for (std::size_t i = 0; i < bn.size(); ++i) {
    const auto& table = std::get<clgbn::MultinomialTable>(bn.distribution(i));
    const auto& ps = bn.dag().parent_set(i);
    std::size_t j = 0;
    for (const auto& parent : ps.parents) j = j * parent.arity() + x[parent.index()];
    p *= table.probability(j, x[i]);
  }
  return p;
}

// Calls fn(assignment) for every joint state of a discrete network.
inline void for_each_state(const clgbn::BayesianNetwork& bn,
                           const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> x(bn.size(), 0);
  for (;;) {
    fn(x);
    std::size_t i = 0;
    while (i < x.size()) {
      if (++x[i] < bn.dag().variable(i).arity()) break;
      x[i] = 0;
      ++i;
    }
    if (i == x.size()) return;
  }
}

// E[f(X_target) | evidence] and p(evidence) by full enumeration.
struct Exact {
  double value = 0.0;
  double evidence_probability = 0.0;
};

inline Exact enumerate(const clgbn::BayesianNetwork& bn, const std::map<std::size_t, double>& evidence,
                       std::size_t target, const std::function<double(double)>& f) {
  double num = 0.0, den = 0.0;
  for_each_state(bn, [&](const std::vector<std::size_t>& x) {
    for (const auto& [i, v] : evidence) {
      if (static_cast<double>(x[i]) != v) return;
    }
    const double p = joint_probability(bn, x);
    num += p * f(static_cast<double>(x[target]));
    den += p;
  });
  return {num / den, den};
}

// ---------------------------------------------------------------- naive Bayes

// Cross-validated naive Bayes accuracy written with explicit loops: class
// prior and discrete features with add-one smoothing, Gaussian features with
// per-class sample mean and (biased) variance floored at 1e-6.
inline double naive_bayes_cv_accuracy(const clgbn::InMemoryDataset& data,
                                      const std::vector<std::size_t>& features, std::size_t cls) {
  const std::size_t n = data.size();
  const std::size_t K = data.schema().column(cls).arity();
  std::size_t correct = 0;
  for (std::size_t fold = 0; fold < 5; ++fold) {
    std::vector<double> class_count(K, 0.0);
    std::size_t train = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r % 5 == fold) continue;
      class_count[static_cast<std::size_t>(data.row(r)[cls])] += 1.0;
      ++train;
    }
    struct Feature {
      bool discrete = true;
      std::vector<std::vector<double>> counts;  // [class][state]
      std::vector<double> mean, var;            // per class
    };
    std::vector<Feature> model(features.size());
    for (std::size_t k = 0; k < features.size(); ++k) {
      const auto& col = data.schema().column(features[k]);
      Feature& m = model[k];
      m.discrete = col.is_discrete();
      if (m.discrete) {
        m.counts.assign(K, std::vector<double>(col.arity(), 0.0));
        for (std::size_t r = 0; r < n; ++r) {
          if (r % 5 == fold) continue;
          const auto c = static_cast<std::size_t>(data.row(r)[cls]);
          m.counts[c][static_cast<std::size_t>(data.row(r)[features[k]])] += 1.0;
        }
      } else {
        m.mean.assign(K, 0.0);
        m.var.assign(K, 0.0);
        for (std::size_t c = 0; c < K; ++c) {
          if (class_count[c] == 0.0) {
            m.mean[c] = 0.0;
            m.var[c] = 1.0;
            continue;
          }
          double s = 0.0;
          for (std::size_t r = 0; r < n; ++r) {
            if (r % 5 != fold && static_cast<std::size_t>(data.row(r)[cls]) == c) s += data.row(r)[features[k]];
          }
          const double mu = s / class_count[c];
          double ss = 0.0;
          for (std::size_t r = 0; r < n; ++r) {
            if (r % 5 != fold && static_cast<std::size_t>(data.row(r)[cls]) == c) {
              const double d = data.row(r)[features[k]] - mu;
              ss += d * d;
            }
          }
          m.mean[c] = mu;
          m.var[c] = std::max(ss / class_count[c], 1e-6);
        }
      }
    }
    for (std::size_t r = fold; r < n; r += 5) {
      std::size_t best = 0;
      double best_score = -INFINITY;
      for (std::size_t c = 0; c < K; ++c) {
        double s = std::log((class_count[c] + 1.0) / (static_cast<double>(train) + static_cast<double>(K)));
        for (std::size_t k = 0; k < features.size(); ++k) {
          const double v = data.row(r)[features[k]];
          const Feature& m = model[k];
          if (m.discrete) {
            const double total = class_count[c] + static_cast<double>(m.counts[c].size());
            s += std::log((m.counts[c][static_cast<std::size_t>(v)] + 1.0) / total);
          } else {
            const double d = v - m.mean[c];
            s += -0.5 * std::log(2.0 * std::numbers::pi * m.var[c]) - d * d / (2.0 * m.var[c]);
          }
        }
        if (c == 0 || s > best_score) {
          best = c;
          best_score = s;
        }
      }
      correct += best == static_cast<std::size_t>(data.row(r)[cls]) ? 1 : 0;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

// ---------------------------------------------------------------- pipeline

// Event-driven model of the batch pipeline: `workers` workers each repeatedly
// load a batch over one shared I/O channel (FIFO, one load at a time, taking
// `load`) and then process it (taking `process`). Returns the largest number
// of batches in their processing phase at any instant, processing intervals
// taken as closed.
inline std::size_t simulate_peak_processing(std::int64_t process, std::int64_t load,
                                            std::size_t workers, std::size_t batches) {
  struct Event {
    std::int64_t time;
    int kind;  // 0 = processing ends, 1 = load ends; ends are handled first
    std::size_t worker;
    bool operator>(const Event& o) const { return std::tie(time, kind, worker) > std::tie(o.time, o.kind, o.worker); }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::queue<std::size_t> waiting;  // workers queued for the channel
  bool channel_busy = false;
  std::size_t issued = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;

  auto start_load = [&](std::int64_t now) {
    if (channel_busy || waiting.empty() || issued == batches) return;
    const std::size_t w = waiting.front();
    waiting.pop();
    channel_busy = true;
    ++issued;
    events.push({now + load, 1, w});
  };
  for (std::size_t w = 0; w < workers; ++w) waiting.push(w);
  start_load(0);
  while (!events.empty()) {
    const Event e = events.top();
    events.pop();
    if (e.kind == 1) {
      channel_busy = false;
      intervals.emplace_back(e.time, e.time + process);
      events.push({e.time + process, 0, e.worker});
    } else {
      waiting.push(e.worker);
    }
    start_load(e.time);
  }
  std::size_t peak = 0;
  for (const auto& [s, t] : intervals) {
    // Concurrency at the start of each interval is the maximum over time.
    std::size_t active = 0;
    for (const auto& [a, b] : intervals) active += (a <= s && s <= b) ? 1 : 0;
    peak = std::max(peak, active);
  }
  return peak;
}

// ---------------------------------------------------------------- files

// Per-process scratch directory, removed at exit.
struct ScratchDir {
  std::filesystem::path path = std::filesystem::temp_directory_path() /
                               ("clgbn_tests_" + std::to_string(::getpid()));
  ScratchDir() { std::filesystem::create_directories(path); }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline std::string temp_path(const std::string& name) {
  static ScratchDir dir;
  return (dir.path / name).string();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace oracle
