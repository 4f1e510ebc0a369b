#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "clgbn/data_stream.hpp"
#include "clgbn/model_io.hpp"
#include "clgbn/network.hpp"
#include "clgbn/parallel.hpp"
#include "clgbn/random.hpp"
#include "clgbn/sampling.hpp"

namespace clgbn {

// Super-parent family: roots C, SPM (discrete) and SPG1, SPG2 (continuous);
// M_i <- {C, SPM} and G_i <- {C, SPM, SPG1, SPG2}.
struct SyntheticSpec {
  std::size_t m_children = 10;
  std::size_t g_children = 10;
  std::size_t class_arity = 2;         // C
  std::size_t super_parent_arity = 3;  // SPM
  std::size_t child_arity = 2;         // M_i
  std::uint64_t seed = 1;
};

inline ParentSetDag super_parent_structure(const SyntheticSpec& spec) {
  std::vector<Variable> vars;
  vars.push_back(Variable::discrete("C", 0, spec.class_arity));
  vars.push_back(Variable::discrete("SPM", 1, spec.super_parent_arity));
  vars.push_back(Variable::continuous("SPG1", 2));
  vars.push_back(Variable::continuous("SPG2", 3));
  std::vector<std::vector<std::size_t>> parents(4);
  for (std::size_t i = 0; i < spec.m_children; ++i) {
    vars.push_back(Variable::discrete("M" + std::to_string(i + 1), vars.size(), spec.child_arity));
    parents.push_back({0, 1});
  }
  for (std::size_t i = 0; i < spec.g_children; ++i) {
    vars.push_back(Variable::continuous("G" + std::to_string(i + 1), vars.size()));
    parents.push_back({0, 1, 2, 3});
  }
  return ParentSetDag(std::move(vars), parents);
}

// CPT rows from a flat Dirichlet (normalized unit exponentials); CLG
// alpha, beta ~ U(-1, 1) and variance ~ U(0.5, 1.5). Draws are taken in
// variable order from one generator seeded with `seed`.
inline BayesianNetwork random_parameters(const ParentSetDag& dag, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<ConditionalDistribution> dists;
  for (const auto& ps : dag.parent_sets()) {
    auto d = default_distribution(ps);
    if (auto* t = std::get_if<MultinomialTable>(&d)) {
      const std::size_t arity = t->arity();
      std::vector<double> probs;
      for (std::size_t j = 0; j < t->configurations().count(); ++j) {
        std::vector<double> row(arity);
        double total = 0.0;
        for (double& e : row) {
          e = -std::log(1.0 - uniform01(rng));
          total += e;
        }
        for (double e : row) probs.push_back(e / total);
      }
      dists.emplace_back(MultinomialTable(ps.main_var, ps.parents, std::move(probs)));
    } else {
      const auto& c = std::get<ClgDistribution>(d);
      const std::size_t k = c.continuous_parents().size();
      std::vector<ClgParameters> params;
      for (std::size_t j = 0; j < c.configurations().count(); ++j) {
        ClgParameters p;
        p.alpha = uniform(rng, -1.0, 1.0);
        for (std::size_t b = 0; b < k; ++b) p.beta.push_back(uniform(rng, -1.0, 1.0));
        p.variance = uniform(rng, 0.5, 1.5);
        params.push_back(std::move(p));
      }
      dists.emplace_back(ClgDistribution(ps.main_var, ps.parents, std::move(params)));
    }
  }
  return BayesianNetwork(dag, std::move(dists));
}

inline BayesianNetwork build_super_parent_network(const SyntheticSpec& spec) {
  return random_parameters(super_parent_structure(spec), spec.seed);
}

inline DataSchema schema_of(const ParentSetDag& dag) { return DataSchema(dag.variables()); }

// Writes n forward samples in the dataset format. Instance i is drawn from
// SplitMix64(derive_task_seed(seed, i)), so the bytes depend only on
// (bn, n, seed), not on `workers`.
inline std::size_t generate_data(const BayesianNetwork& bn, std::size_t n, std::uint64_t seed,
                                 std::ostream& os, std::size_t workers = 1) {
  const LikelihoodWeighting sampler(bn, {});
  const std::size_t width = bn.size();
  os << schema_of(bn.dag()).header() << '\n';
  constexpr std::size_t kChunk = 8192;
  std::vector<std::string> lines;
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t count = std::min(kChunk, n - start);
    lines.assign(count, {});
    parallel_ranges(count, workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> x(width);
      for (std::size_t r = begin; r < end; ++r) {
        SplitMix64 rng(derive_task_seed(seed, start + r));
        sampler.sample_into(rng, x);
        std::string& line = lines[r];
        for (std::size_t c = 0; c < width; ++c) {
          if (c) line += ',';
          line += format_double(x[c]);
        }
      }
    });
    for (const auto& line : lines) os << line << '\n';
  }
  if (!os) throw Error("failed writing dataset");
  return n;
}

inline std::size_t generate_data(const BayesianNetwork& bn, std::size_t n, std::uint64_t seed,
                                 const std::string& path, std::size_t workers = 1) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  generate_data(bn, n, seed, out, workers);
  out.close();
  if (!out) throw Error("failed writing '" + path + "'");
  return n;
}

}  // namespace clgbn
