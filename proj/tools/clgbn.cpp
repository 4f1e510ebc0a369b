// clgbn: command-line front end.
//
//   clgbn gen   --spec 10,10 --n 100000 --seed 1 --out data.csv [--model-out gen.model]
//   clgbn mle   --data data.csv --structure net.model --batch-size 1000 --workers 4 --out-model fit.model
//   clgbn is    --model fit.model --query "P(C=1)" --evidence "SPM=2" --samples 100000 --seed 7
//   clgbn fss   --data data.csv --class C --threshold 1e-4 --workers 4
//   clgbn bench --data data.csv --structure net.model --sweep workers --values 1,2,4 --reps 3
//   clgbn limit --process 3 --load 1
//
// Exit status: 0 success, 1 usage error, 2 data or model error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clgbn/clgbn.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view tok = rest.substr(0, comma);
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || end != tok.data() + tok.size() || tok.empty()) {
      throw UsageError(std::string("bad ") + what + " list '" + text + "'");
    }
    out.push_back(v);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

int run_gen(const std::string& spec_text, const std::string& model_in, std::size_t n,
            std::uint64_t seed, const std::string& out, const std::string& model_out,
            std::size_t workers) {
  clgbn::BayesianNetwork bn;
  if (!model_in.empty()) {
    bn = clgbn::load_model(model_in);
  } else {
    const auto counts = parse_list(spec_text, "spec");
    if (counts.size() != 2) throw UsageError("--spec expects <m_children>,<g_children>");
    clgbn::SyntheticSpec spec;
    spec.m_children = counts[0];
    spec.g_children = counts[1];
    spec.seed = seed;
    bn = clgbn::build_super_parent_network(spec);
  }
  if (!model_out.empty()) clgbn::save_model(model_out, bn);
  clgbn::generate_data(bn, n, seed, out, workers);
  std::cout << "wrote " << n << " records over " << bn.size() << " variables to " << out << '\n';
  return 0;
}

int run_mle(const std::string& data, const std::string& structure, std::size_t batch_size,
            std::size_t workers, bool unordered, const std::string& out_model) {
  const auto dag = clgbn::load_structure(structure);
  clgbn::MleConfig cfg{batch_size, workers, !unordered};
  clgbn::BatchSource source(data, batch_size);
  const auto result = clgbn::compute_mle_detailed(source, dag, cfg);
  if (out_model.empty()) {
    clgbn::write_model(std::cout, result.network);
  } else {
    clgbn::save_model(out_model, result.network);
    std::cout << "learned " << result.network.size() << " distributions from " << result.instances
              << " instances in " << result.stream.batches << " batches\n";
  }
  return 0;
}

int run_is(const std::string& model, const std::vector<std::string>& queries,
           const std::string& evidence_text, std::size_t samples, std::uint64_t seed,
           std::size_t workers, bool show_error) {
  const auto bn = clgbn::load_model(model);
  clgbn::Evidence evidence;
  try {
    evidence = clgbn::parse_evidence(bn, evidence_text);
  } catch (const clgbn::InvalidArgument& e) {
    throw UsageError(e.what());
  }
  for (const auto& text : queries) {
    clgbn::Query q;
    try {
      q = clgbn::parse_query(bn, text);
    } catch (const clgbn::InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const auto est = clgbn::answer_query(bn, q, evidence, samples, seed, workers);
    std::cout << q.text << " = " << clgbn::format_double(est.value);
    if (show_error) std::cout << " (se " << clgbn::format_double(est.standard_error) << ')';
    std::cout << '\n';
  }
  return 0;
}

int run_fss(const std::string& data, const std::string& class_name, double threshold,
            std::size_t workers) {
  const auto dataset = clgbn::load_dataset(data);
  const auto class_col = dataset.schema().find(class_name);
  if (!class_col) throw UsageError("no column named '" + class_name + "'");
  const auto result = clgbn::select_features(dataset, *class_col, threshold, workers);
  std::string selected;
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const auto& c = result.trace[k];
    const auto& name = dataset.schema().column(c.payload).name();
    std::cout << "step " << k + 1 << ": +" << name << " score=" << clgbn::format_double(c.score)
              << '\n';
    if (k) selected += ',';
    selected += name;
  }
  std::cout << "selected: " << selected << '\n';
  return 0;
}

int run_bench(const std::string& data, const std::string& structure, const std::string& sweep,
              const std::string& values, std::size_t reps, std::size_t workers,
              std::size_t batch_size, const std::string& out_csv) {
  clgbn::SweepKind kind;
  try {
    kind = clgbn::parse_sweep_kind(sweep);
  } catch (const clgbn::InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto list = parse_list(values, "values");
  const auto dag = clgbn::load_structure(structure);
  clgbn::MleConfig base{batch_size, workers, true};
  const auto report = clgbn::bench_sweep(data, dag, kind, list, reps, base);
  if (out_csv.empty()) {
    report.write_csv(std::cout);
  } else {
    std::ofstream out(out_csv);
    if (!out) throw clgbn::Error("cannot open '" + out_csv + "' for writing");
    report.write_csv(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel learning and inference for conditional linear Gaussian Bayesian networks"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::size_t workers = 1;
  auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("gen", "Sample a synthetic dataset");
  std::string spec_text = "10,10", model_in, gen_out, model_out;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  gen->add_option("--spec", spec_text, "Super-parent family as <m_children>,<g_children>");
  gen->add_option("--model", model_in, "Sample from this model instead of a generated one")
      ->check(CLI::ExistingFile);
  gen->add_option("--n", n, "Number of records");
  gen->add_option("--seed", seed, "Seed for parameters and records");
  gen->add_option("--out", gen_out, "Dataset file to write")->required();
  gen->add_option("--model-out", model_out, "Also write the generating model here");
  add_workers(gen);

  auto* mle = app.add_subcommand("mle", "Maximum likelihood parameters from a dataset");
  std::string data, structure, out_model;
  std::size_t batch_size = clgbn::kDefaultBatchSize;
  bool unordered = false;
  mle->add_option("--data", data, "Dataset file")->required();
  mle->add_option("--structure", structure, "Model file; only its structure is used")->required();
  mle->add_option("--batch-size", batch_size, "Records per batch")->check(CLI::PositiveNumber);
  mle->add_flag("--unordered", unordered, "Plain floating-point reduction in completion order");
  mle->add_option("--out-model", out_model, "Where to write the learned model (default stdout)");
  add_workers(mle);

  auto* is = app.add_subcommand("is", "Importance sampling queries");
  std::string model;
  std::vector<std::string> queries;
  std::string evidence;
  std::size_t samples = 100000;
  bool show_error = false;
  is->add_option("--model", model, "Model file")->required();
  is->add_option("--query", queries, "P(name=v), P(name<t), P(name>=t), E(name), ...")->required();
  is->add_option("--evidence", evidence, "name=value,...");
  is->add_option("--samples", samples, "Samples per query")->check(CLI::PositiveNumber);
  is->add_option("--seed", seed, "Base seed");
  is->add_flag("--show-error", show_error, "Append the standard error of each estimate");
  add_workers(is);

  auto* fss = app.add_subcommand("fss", "Greedy wrapper feature subset selection");
  std::string class_name;
  double threshold = clgbn::kDefaultFssThreshold;
  fss->add_option("--data", data, "Dataset file")->required();
  fss->add_option("--class", class_name, "Discrete class column")->required();
  fss->add_option("--threshold", threshold, "Minimum improvement to accept a feature")
      ->check(CLI::NonNegativeNumber);
  add_workers(fss);

  auto* bench = app.add_subcommand("bench", "Time MLE over a sweep of workers or batch sizes");
  std::string sweep = "workers", values = "1", out_csv;
  std::size_t reps = 3;
  bench->add_option("--data", data, "Dataset file")->required();
  bench->add_option("--structure", structure, "Model file; only its structure is used")->required();
  bench->add_option("--sweep", sweep, "workers or batch_size");
  bench->add_option("--values", values, "Comma-separated values of the swept parameter");
  bench->add_option("--reps", reps, "Repetitions per value")->check(CLI::PositiveNumber);
  bench->add_option("--batch-size", batch_size, "Batch size when sweeping workers")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out-csv", out_csv, "CSV report (default stdout)");
  add_workers(bench);

  auto* limit = app.add_subcommand("limit", "Most cores busy at once for batch process/load times");
  double process = 0.0, load = 1.0;
  limit->add_option("--process", process, "Batch processing time P")->required();
  limit->add_option("--load", load, "Batch loading time L")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) return run_gen(spec_text, model_in, n, seed, gen_out, model_out, workers);
    if (*mle) return run_mle(data, structure, batch_size, workers, unordered, out_model);
    if (*is) return run_is(model, queries, evidence, samples, seed, workers, show_error);
    if (*fss) return run_fss(data, class_name, threshold, workers);
    if (*bench) return run_bench(data, structure, sweep, values, reps, workers, batch_size, out_csv);
    if (*limit) {
      try {
        std::cout << clgbn::parallel_limit(process, load) << '\n';
      } catch (const clgbn::InvalidArgument& e) {
        throw UsageError(e.what());
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const clgbn::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
