#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "clgbn/clgbn.hpp"
#include "oracles.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// stderr is folded into the captured text.
Run run(const std::string& args) {
  const std::string cmd = std::string(CLGBN_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, k);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST(Cli, MissingRequiredOptionIsUsageError) {
  const auto r = run("mle --structure x.model");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("--data"), std::string::npos);
  EXPECT_NE(r.out.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownFlagAndNoSubcommand) {
  EXPECT_EQ(run("limit --process 1 --load 1 --frobnicate").status, 1);
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("limit --process 1 --load 0").status, 1);
}

TEST(Cli, BadDataIsDataError) {
  const auto model = oracle::temp_path("cli_bad.model");
  const auto data = oracle::temp_path("cli_bad.csv");
  clgbn::save_model(model, clgbn::build_super_parent_network({1, 1, 2, 3, 2, 1}));
  oracle::write_file(data, "C:disc(2),SPM:disc(3),SPG1:cont,SPG2:cont,M1:disc(2),G1:cont\n0,1,0.5,0.5,3,1\n");
  const auto r = run("mle --data " + quote(data) + " --structure " + quote(model));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
  EXPECT_EQ(run("mle --data " + quote(oracle::temp_path("nope.csv")) + " --structure " + quote(model)).status, 2);
}

TEST(Cli, Limit) {
  const auto r = run("limit --process 3 --load 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "4\n");
}

TEST(Cli, GenLearnQueryPipeline) {
  const auto data = oracle::temp_path("cli_data.csv");
  const auto truth = oracle::temp_path("cli_truth.model");
  const auto fit = oracle::temp_path("cli_fit.model");
  auto r = run("gen --spec 2,2 --n 20000 --seed 3 --out " + quote(data) + " --model-out " + quote(truth) +
               " --workers 2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(clgbn::load_dataset(data).size(), 20000u);

  r = run("mle --data " + quote(data) + " --structure " + quote(truth) + " --batch-size 500 --workers 3 --out-model " +
          quote(fit));
  ASSERT_EQ(r.status, 0) << r.out;
  const auto learned = clgbn::load_model(fit);
  const auto direct = clgbn::compute_mle(data, clgbn::load_structure(truth), {500, 1, true});
  EXPECT_EQ(clgbn::model_to_string(learned), clgbn::model_to_string(direct));

  r = run("mle --data " + quote(data) + " --structure " + quote(truth));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, clgbn::model_to_string(direct));

  r = run("is --model " + quote(fit) + " --query 'P(C=1)' --query 'E(G1)' --evidence 'SPM=2' --samples 5000 --seed 7");
  ASSERT_EQ(r.status, 0) << r.out;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("P(C=1) = ", 0), 0u) << line;
  const double p = std::stod(line.substr(9));
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
  const auto bn = clgbn::load_model(fit);
  const auto expected = clgbn::answer_query(bn, clgbn::parse_query(bn, "P(C=1)"), clgbn::parse_evidence(bn, "SPM=2"),
                                            5000, 7, 1);
  EXPECT_EQ(p, expected.value);
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("E(G1) = ", 0), 0u);

  EXPECT_EQ(run("is --model " + quote(fit) + " --query 'P(Nope=1)'").status, 1);
  EXPECT_EQ(run("is --model " + quote(fit) + " --query 'P(C=7)'").status, 2);
}

TEST(Cli, FssOutput) {
  std::ostringstream csv;
  csv << "C:disc(2),N:cont,F:disc(2)\n";
  clgbn::SplitMix64 rng(4);
  for (int r = 0; r < 300; ++r) {
    const int c = clgbn::uniform01(rng) < 0.5 ? 0 : 1;
    csv << c << ',' << clgbn::format_double(clgbn::standard_normal(rng)) << ',' << c << '\n';
  }
  const auto data = oracle::temp_path("cli_fss.csv");
  oracle::write_file(data, csv.str());
  const auto r = run("fss --data " + quote(data) + " --class C --workers 2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.rfind("step 1: +F score=1\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("selected: F"), std::string::npos);
  EXPECT_EQ(run("fss --data " + quote(data) + " --class Z").status, 1);
  EXPECT_EQ(run("fss --data " + quote(data) + " --class N").status, 1);
}

TEST(Cli, BenchCsv) {
  const auto data = oracle::temp_path("cli_bench.csv");
  const auto model = oracle::temp_path("cli_bench.model");
  ASSERT_EQ(run("gen --spec 1,1 --n 2000 --out " + quote(data) + " --model-out " + quote(model)).status, 0);
  const auto report = oracle::temp_path("cli_report.csv");
  const auto r = run("bench --data " + quote(data) + " --structure " + quote(model) +
                     " --sweep batch_size --values 10,1000 --reps 1 --workers 2 --out-csv " + quote(report));
  ASSERT_EQ(r.status, 0) << r.out;
  std::istringstream in(oracle::read_file(report));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sweep,value,median_ms,workers,batch_size,n,param_hash");
  std::vector<std::string> hashes;
  while (std::getline(in, line)) hashes.push_back(line.substr(line.rfind(',') + 1));
  ASSERT_EQ(hashes.size(), 2u);
  EXPECT_EQ(hashes[0], hashes[1]);
  EXPECT_EQ(run("bench --data " + quote(data) + " --structure " + quote(model) + " --sweep colour").status, 1);
  EXPECT_EQ(run("bench --data " + quote(data) + " --structure " + quote(model) + " --values 1,x").status, 1);
}
