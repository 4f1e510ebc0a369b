#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "clgbn/distribution.hpp"
#include "clgbn/error.hpp"
#include "clgbn/variable.hpp"

// Dataset text format: line 1 is a comma-separated header of `name:disc(arity)`
// or `name:cont` columns; every following line is one fully observed record of
// comma-separated values. Discrete values are base-10 state ids. LF or CRLF.

namespace clgbn {

inline constexpr std::size_t kDefaultBatchSize = 1000;

// Ordered column list; column i becomes variable index i.
class DataSchema {
 public:
  DataSchema() = default;

  explicit DataSchema(std::vector<Variable> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw InvalidArgument("a schema needs at least one column");
    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i].index() != i) throw InvalidArgument("schema column indices must be 0..n-1");
      if (!names.insert(columns_[i].name()).second) {
        throw InvalidArgument("duplicate column name '" + columns_[i].name() + "'");
      }
    }
  }

  static DataSchema parse_header(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<Variable> cols;
    std::unordered_set<std::string> names;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string_view::npos) end = line.size();
      std::string_view field = trim(line.substr(start, end - start));
      const auto colon = field.rfind(':');
      if (colon == std::string_view::npos || colon == 0) {
        throw ParseError(1, "malformed header field '" + std::string(field) + "'");
      }
      std::string name(trim(field.substr(0, colon)));
      std::string_view type = trim(field.substr(colon + 1));
      if (!names.insert(name).second) throw ParseError(1, "duplicate column name '" + name + "'");
      if (type == "cont") {
        cols.push_back(Variable::continuous(name, cols.size()));
      } else if (type.starts_with("disc(") && type.ends_with(")")) {
        std::string_view digits = type.substr(5, type.size() - 6);
        std::size_t arity = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
        if (ec != std::errc{} || p != digits.data() + digits.size()) {
          throw ParseError(1, "malformed arity in '" + std::string(field) + "'");
        }
        if (arity < 2) throw ParseError(1, "column '" + name + "': arity must be >= 2");
        cols.push_back(Variable::discrete(name, cols.size(), arity));
      } else {
        throw ParseError(1, "unknown column type '" + std::string(type) + "'");
      }
      start = end + 1;
    }
    return DataSchema(std::move(cols));
  }

  std::string header() const {
    std::string out;
    for (const auto& c : columns_) {
      if (!out.empty()) out += ',';
      out += c.name();
      out += c.is_discrete() ? ":disc(" + std::to_string(c.arity()) + ")" : ":cont";
    }
    return out;
  }

  std::size_t size() const noexcept { return columns_.size(); }
  const std::vector<Variable>& columns() const noexcept { return columns_; }
  const Variable& column(std::size_t i) const { return columns_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (const auto& c : columns_) {
      if (c.name() == name) return c.index();
    }
    return std::nullopt;
  }

  friend bool operator==(const DataSchema&, const DataSchema&) = default;

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

 private:
  std::vector<Variable> columns_;
};

// Consecutive records, stored row-major.
struct DataBatch {
  std::size_t origin = 0;    // ordinal of the first record in the file
  std::size_t sequence = 0;  // position of this batch in split order
  std::size_t width = 0;
  std::vector<double> values;

  std::size_t size() const noexcept { return width == 0 ? 0 : values.size() / width; }
  bool empty() const noexcept { return values.empty(); }
  InstanceView operator[](std::size_t i) const {
    return InstanceView(values).subspan(i * width, width);
  }
};

// Lazily reads a dataset file one record or one batch at a time. All cursor
// movement happens under an internal lock, so one task at a time advances it.
class BatchSource {
 public:
  BatchSource(const std::string& path, std::size_t batch_size = kDefaultBatchSize)
      : path_(path), in_(path, std::ios::binary), batch_size_(batch_size) {
    if (batch_size_ == 0) throw InvalidArgument("batch size must be >= 1");
    if (!in_) throw DataError("cannot open dataset '" + path + "'");
    std::string header;
    if (!std::getline(in_, header)) throw ParseError(1, "missing header in '" + path + "'");
    schema_ = DataSchema::parse_header(header);
    line_ = 1;
  }

  BatchSource(const BatchSource&) = delete;
  BatchSource& operator=(const BatchSource&) = delete;

  const DataSchema& schema() const noexcept { return schema_; }
  std::size_t batch_size() const noexcept { return batch_size_; }
  const std::string& path() const noexcept { return path_; }

  std::size_t records_read() const {
    std::lock_guard lock(mutex_);
    return next_record_;
  }

  // Parses one record and hands it to `action`; false at end of file.
  template <class Action>
  bool try_advance(Action&& action) {
    DataInstance x;
    {
      std::lock_guard lock(mutex_);
      CursorGuard guard(*this);
      if (!read_record(x)) return false;
    }
    std::invoke(std::forward<Action>(action), InstanceView(x));
    return true;
  }

  // Up to batch_size consecutive records; nullopt at end of file.
  std::optional<DataBatch> try_split() {
    std::lock_guard lock(mutex_);
    CursorGuard guard(*this);
    DataBatch batch;
    batch.origin = next_record_;
    batch.width = schema_.size();
    batch.values.reserve(std::min<std::size_t>(batch_size_, 4096) * schema_.size());
    std::size_t count = 0;
    DataInstance x;
    while (count < batch_size_ && read_record(x)) {
      batch.values.insert(batch.values.end(), x.begin(), x.end());
      ++count;
    }
    if (count == 0) return std::nullopt;
    batch.sequence = batches_split_++;
    return batch;
  }

  std::size_t batches_split() const {
    std::lock_guard lock(mutex_);
    return batches_split_;
  }

  // Highest number of tasks ever observed inside the cursor at once.
  int max_cursor_concurrency() const noexcept { return max_in_cursor_.load(); }

 private:
  struct CursorGuard {
    explicit CursorGuard(BatchSource& s) : src(s) {
      int now = ++src.in_cursor_;
      int prev = src.max_in_cursor_.load();
      while (now > prev && !src.max_in_cursor_.compare_exchange_weak(prev, now)) {
      }
    }
    ~CursorGuard() { --src.in_cursor_; }
    BatchSource& src;
  };

  bool read_record(DataInstance& x) {
    if (failed_) throw DataError("dataset stream aborted after an earlier error");
    if (!std::getline(in_, buf_)) return false;
    ++line_;
    try {
      parse_record(buf_, x);
    } catch (...) {
      failed_ = true;
      throw;
    }
    ++next_record_;
    return true;
  }

  void parse_record(std::string_view line, DataInstance& x) const {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto& cols = schema_.columns();
    x.resize(cols.size());
    std::size_t start = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::size_t end = line.find(',', start);
      if (end == std::string_view::npos) {
        if (c + 1 != cols.size()) {
          throw ParseError(line_, "expected " + std::to_string(cols.size()) + " values, got " +
                                      std::to_string(c + 1));
        }
        end = line.size();
      } else if (c + 1 == cols.size()) {
        throw ParseError(line_, "more than " + std::to_string(cols.size()) + " values");
      }
      std::string_view tok = DataSchema::trim(line.substr(start, end - start));
      x[c] = parse_value(cols[c], tok);
      start = end + 1;
    }
  }

  double parse_value(const Variable& col, std::string_view tok) const {
    if (tok.empty()) throw ParseError(line_, "empty value for '" + col.name() + "'");
    if (col.is_discrete()) {
      long long v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size()) {
        throw ParseError(line_, "'" + std::string(tok) + "' is not an integer state of '" +
                                    col.name() + "'");
      }
      if (v < 0 || static_cast<unsigned long long>(v) >= col.arity()) {
        throw ParseError(line_, "state " + std::string(tok) + " out of range for '" + col.name() +
                                    "' (arity " + std::to_string(col.arity()) + ")");
      }
      return static_cast<double>(v);
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || !std::isfinite(v)) {
      throw ParseError(line_, "'" + std::string(tok) + "' is not a finite number for '" +
                                  col.name() + "'");
    }
    return v;
  }

  std::string path_;
  std::ifstream in_;
  std::size_t batch_size_;
  DataSchema schema_;
  std::string buf_;
  std::size_t line_ = 0;
  std::size_t next_record_ = 0;
  std::size_t batches_split_ = 0;
  bool failed_ = false;
  mutable std::mutex mutex_;
  std::atomic<int> in_cursor_{0};
  std::atomic<int> max_in_cursor_{0};
};

inline BatchSource open_dataset(const std::string& path, std::size_t batch_size = kDefaultBatchSize) {
  return BatchSource(path, batch_size);
}

struct StreamStats {
  std::size_t batches = 0;
  std::size_t records = 0;
  std::size_t peak_batches_in_flight = 0;
};

// Map every batch of `source` on `workers` threads and fold the results with
// `combine(accumulator, partial)`.
//
// Splitting is serialized by the source; mapping runs concurrently. With
// `ordered`, partials are folded strictly in split order through a small
// reorder buffer, so the fold sequence does not depend on scheduling; workers
// stop splitting while the buffer holds workers + 2 partials. Without it,
// partials are folded as they complete.
//
// On failure the error of the earliest failing batch is rethrown after all
// workers stop; splitting is sequential, so that batch is always reached.
template <class Partial, class Map, class Combine>
Partial reduce_batches(BatchSource& source, std::size_t workers, Partial identity, Map&& map,
                       Combine&& combine, bool ordered = true, StreamStats* stats = nullptr) {
  if (workers == 0) throw InvalidArgument("workers must be >= 1");
  std::mutex mutex;
  std::condition_variable cv;
  std::map<std::size_t, Partial> pending;
  std::size_t next = 0;
  Partial total = std::move(identity);
  bool stop = false;
  std::size_t error_at = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
  std::size_t in_flight = 0;
  StreamStats local_stats;
  const std::size_t buffer_limit = workers + 2;

  auto fail = [&](std::size_t at, std::exception_ptr e) {
    std::lock_guard lock(mutex);
    if (at < error_at) {
      error_at = at;
      error = e;
    }
    stop = true;
    cv.notify_all();
  };

  auto work = [&] {
    for (;;) {
      {
        std::unique_lock lock(mutex);
        if (ordered) cv.wait(lock, [&] { return stop || pending.size() < buffer_limit; });
        if (stop) return;
      }
      std::optional<DataBatch> batch;
      try {
        batch = source.try_split();
      } catch (...) {
        fail(source.batches_split(), std::current_exception());
        return;
      }
      if (!batch) return;
      const std::size_t seq = batch->sequence;
      {
        std::lock_guard lock(mutex);
        ++local_stats.batches;
        local_stats.records += batch->size();
        local_stats.peak_batches_in_flight = std::max(local_stats.peak_batches_in_flight, ++in_flight);
      }
      std::optional<Partial> partial;
      try {
        partial.emplace(map(static_cast<const DataBatch&>(*batch)));
      } catch (...) {
        {
          std::lock_guard lock(mutex);
          --in_flight;
        }
        fail(seq, std::current_exception());
        return;
      }
      batch.reset();
      std::lock_guard lock(mutex);
      --in_flight;
      if (ordered) {
        pending.emplace(seq, std::move(*partial));
        while (!pending.empty() && pending.begin()->first == next) {
          combine(total, std::move(pending.begin()->second));
          pending.erase(pending.begin());
          ++next;
        }
        cv.notify_all();
      } else {
        combine(total, std::move(*partial));
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  if (stats) *stats = local_stats;
  return total;
}

// Delivers every batch exactly once to `consumer`, concurrently on `workers`
// threads. With one worker, delivery follows file order.
template <class Consumer>
StreamStats batch_stream(BatchSource& source, std::size_t workers, Consumer&& consumer) {
  StreamStats stats;
  reduce_batches(
      source, workers, 0,
      [&](const DataBatch& b) {
        consumer(b);
        return 0;
      },
      [](int&, int) {}, false, &stats);
  return stats;
}

}  // namespace clgbn
