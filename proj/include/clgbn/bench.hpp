#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "clgbn/error.hpp"
#include "clgbn/mle.hpp"
#include "clgbn/model_io.hpp"

namespace clgbn {

// Most batches that can be in the processing phase at once when loading a
// batch takes L and is serialized on one channel while processing takes P.
inline std::size_t parallel_limit(double process_time, double load_time) {
  if (!(load_time > 0.0)) throw InvalidArgument("load time must be > 0");
  if (!(process_time >= 0.0)) throw InvalidArgument("process time must be >= 0");
  return static_cast<std::size_t>(std::floor(process_time / load_time)) + 1;
}

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string parameter_hash(const BayesianNetwork& bn) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(model_to_string(bn))));
  return buf;
}

enum class SweepKind { workers, batch_size };

inline std::string_view to_string(SweepKind k) {
  return k == SweepKind::workers ? "workers" : "batch_size";
}

inline SweepKind parse_sweep_kind(std::string_view s) {
  if (s == "workers" || s == "cores") return SweepKind::workers;
  if (s == "batch_size" || s == "batch-size" || s == "batch") return SweepKind::batch_size;
  throw InvalidArgument("unknown sweep '" + std::string(s) + "' (expected workers or batch_size)");
}

struct BenchRow {
  SweepKind sweep = SweepKind::workers;
  std::size_t value = 0;
  double median_ms = 0.0;
  std::size_t workers = 1;
  std::size_t batch_size = kDefaultBatchSize;
  std::size_t instances = 0;
  std::string param_hash;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  static constexpr std::string_view kHeader = "sweep,value,median_ms,workers,batch_size,n,param_hash";

  void write_csv(std::ostream& os) const {
    os << kHeader << '\n';
    for (const auto& r : rows) {
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", r.median_ms);
      os << to_string(r.sweep) << ',' << r.value << ',' << ms << ',' << r.workers << ','
         << r.batch_size << ',' << r.instances << ',' << r.param_hash << '\n';
    }
  }

  bool hashes_agree() const {
    return std::all_of(rows.begin(), rows.end(),
                       [&](const BenchRow& r) { return r.param_hash == rows.front().param_hash; });
  }
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("median of nothing");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Runs compute_mle once per repetition for every value of the swept
// parameter; the other parameter stays at its value in `base`. Runs are
// strictly one after another.
inline BenchReport bench_sweep(const std::string& path, const ParentSetDag& dag, SweepKind sweep,
                               const std::vector<std::size_t>& values, std::size_t repetitions,
                               MleConfig base = {}) {
  if (repetitions == 0) throw InvalidArgument("need at least one repetition");
  BenchReport report;
  for (std::size_t value : values) {
    MleConfig cfg = base;
    (sweep == SweepKind::workers ? cfg.workers : cfg.batch_size) = value;
    std::vector<double> times;
    BenchRow row{sweep, value, 0.0, cfg.workers, cfg.batch_size, 0, {}};
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      BatchSource source(path, cfg.batch_size);
      auto result = compute_mle_detailed(source, dag, cfg);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
      const std::string hash = parameter_hash(result.network);
      if (rep == 0) {
        row.param_hash = hash;
        row.instances = result.instances;
      } else if (hash != row.param_hash) {
        row.param_hash = "nondeterministic";
      }
    }
    row.median_ms = median(times);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace clgbn
