// Five binary variables, X1 -> X2, X1 -> X3, {X2, X3} -> X4, X3 -> X5.
// Samples a dataset from random parameters, learns them back with four
// workers and asks a few queries of the learned network.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "clgbn/clgbn.hpp"

int main() {
  using namespace clgbn;
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < 5; ++i) vars.push_back(Variable::discrete("X" + std::to_string(i + 1), i, 2));
  const ParentSetDag dag(vars, {{}, {0}, {0}, {1, 2}, {2}});
  std::cout << "links: " << number_of_links(dag) << "\n";

  const auto truth = random_parameters(dag, 42);
  const auto path = (std::filesystem::temp_directory_path() / "clgbn_sample.csv").string();
  generate_data(truth, 50000, 7, path);

  MleConfig cfg;
  cfg.workers = 4;
  const auto learned = compute_mle(path, dag, cfg);
  std::filesystem::remove(path);
  write_model(std::cout, learned);

  for (const char* text : {"P(X4=1)", "P(X5=0)", "E(X2)"}) {
    const auto q = parse_query(learned, text);
    const auto ev = parse_evidence(learned, "X1=0");
    const auto est = answer_query(learned, q, ev, 100000, 1, 4);
    std::printf("%s | X1=0 = %.4f (se %.4f)\n", text, est.value, est.standard_error);
  }
}
