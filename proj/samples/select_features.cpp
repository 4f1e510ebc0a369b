// Greedy feature selection on the super-parent family: the class C should
// be predicted from a handful of its children.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "clgbn/clgbn.hpp"

int main() {
  using namespace clgbn;
  SyntheticSpec spec;
  spec.m_children = 6;
  spec.g_children = 6;
  spec.seed = 3;
  const auto bn = build_super_parent_network(spec);

  const auto path = (std::filesystem::temp_directory_path() / "clgbn_fss.csv").string();
  generate_data(bn, 2000, 11, path);
  const auto data = load_dataset(path);
  std::filesystem::remove(path);

  const auto result = select_features(data, 0, kDefaultFssThreshold, 4);
  for (const auto& step : result.trace) {
    std::cout << "+" << data.schema().column(step.payload).name() << " accuracy " << step.score << "\n";
  }
}
