#include <gtest/gtest.h>

#include <cmath>
#include <unordered_set>

#include "clgbn/clgbn.hpp"
#include "oracles.hpp"

using namespace clgbn;

namespace {

BayesianNetwork bernoulli(double p1) {
  const ParentSetDag dag({Variable::discrete("X", 0, 2)});
  return BayesianNetwork(dag, {MultinomialTable(dag.variable(0), {}, {1 - p1, p1})});
}

BayesianNetwork chain() {
  const std::vector<Variable> vars{Variable::discrete("A", 0, 2), Variable::discrete("B", 1, 3)};
  return random_parameters(ParentSetDag(vars, {{}, {0}}), 12);
}

}  // namespace

TEST(Seeds, PureAndCollisionFree) {
  EXPECT_EQ(derive_task_seed(7, 3), derive_task_seed(7, 3));
  EXPECT_NE(derive_task_seed(7, 3), derive_task_seed(8, 3));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1100000);
  for (std::uint64_t i = 0; i <= 1000000; ++i) seen.insert(derive_task_seed(12345, i));
  EXPECT_EQ(seen.size(), 1000001u);
}

TEST(Random, UniformAndNormalMoments) {
  SplitMix64 rng(3);
  double s = 0, s2 = 0, n1 = 0, n2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
    const double z = standard_normal(rng);
    n1 += z;
    n2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.5, 0.005);
  EXPECT_NEAR(s2 / n - 0.25, 1.0 / 12, 0.005);
  EXPECT_NEAR(n1 / n, 0.0, 0.01);
  EXPECT_NEAR(n2 / n, 1.0, 0.02);
  const std::vector<double> probs{0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(categorical(rng, probs), 1u);
}

TEST(WeightedSample, NoEvidenceMeansUnitWeight) {
  const auto bn = build_super_parent_network({2, 2, 2, 3, 2, 1});
  SplitMix64 rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(weighted_sample(bn, {}, rng).weight, 1.0);
}

TEST(WeightedSample, ClampsEvidence) {
  const auto bn = bernoulli(0.3);
  SplitMix64 rng(2);
  const auto s = weighted_sample(bn, {{0, 1.0}}, rng);
  EXPECT_EQ(s.assignment[0], 1.0);
  EXPECT_DOUBLE_EQ(s.weight, 0.3);
  const auto never = bernoulli(0.0);
  EXPECT_EQ(weighted_sample(never, {{0, 1.0}}, rng).weight, 0.0);
  EXPECT_THROW(weighted_sample(bn, {{0, 2.0}}, rng), DataError);
  EXPECT_THROW(weighted_sample(bn, {{3, 0.0}}, rng), InvalidArgument);
}

TEST(WeightedSample, ChainWeightEqualsConditional) {
  const auto bn = chain();
  const auto& tb = std::get<MultinomialTable>(bn.distribution(1));
  SplitMix64 rng(5);
  double sum = 0, sum2 = 0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    const auto s = weighted_sample(bn, {{1, 2.0}}, rng);
    EXPECT_EQ(s.weight, tb.probability(static_cast<std::size_t>(s.assignment[0]), 2));
    sum += s.weight;
    sum2 += s.weight * s.weight;
  }
  const double mean = sum / m;
  const double se = std::sqrt((sum2 / m - mean * mean) / m);
  const double exact = oracle::enumerate(bn, {{1, 2.0}}, 0, [](double) { return 1.0; }).evidence_probability;
  EXPECT_NEAR(mean, exact, 3 * se);
}

TEST(Estimate, BernoulliIndicator) {
  const auto est = estimate_event(bernoulli(0.3), {}, 0, [](double v) { return v == 1.0; }, 100000, 9);
  EXPECT_NEAR(est.value, 0.3, 0.0044);
  EXPECT_NEAR(est.standard_error, std::sqrt(0.3 * 0.7 / 1e5), 1e-4);
  EXPECT_EQ(event_probability(bernoulli(0.3), {}, 0, [](double) { return true; }, 1000, 1), 1.0);
}

TEST(Estimate, ConstantFunctionIsExactlyOne) {
  const auto bn = random_parameters(oracle::five_node_dag(), 4);
  for (std::size_t m : {1u, 7u, 1000u}) {
    EXPECT_EQ(expected_value(bn, {{3, 1.0}}, 4, [](double) { return 1.0; }, m, 3), 1.0);
  }
}

TEST(Estimate, GaussianSymmetry) {
  const ParentSetDag g({Variable::continuous("G", 0)});
  const auto bn = BayesianNetwork::with_default_parameters(g);
  const auto est = estimate_event(bn, {}, 0, [](double v) { return v < 0.0; }, 100000, 21);
  EXPECT_NEAR(est.value, 0.5, 3 * est.standard_error);
  const auto mean = estimate_expectation(bn, {}, 0, [](double v) { return v; }, 100000, 21);
  EXPECT_NEAR(mean.value, 0.0, 3 * mean.standard_error);
}

TEST(Estimate, ContinuousEvidenceWeightsAreDensities) {
  // D -> Y with Y observed: the posterior of D is proportional to p(D) N(y; mu_D, var_D).
  const std::vector<Variable> vars{Variable::discrete("D", 0, 2), Variable::continuous("Y", 1)};
  const ParentSetDag dag(vars, {{}, {0}});
  const BayesianNetwork bn(
      dag, {MultinomialTable(vars[0], {}, {0.4, 0.6}),
            ClgDistribution(vars[1], {vars[0]}, {ClgParameters{-1.0, {}, 0.25}, ClgParameters{1.0, {}, 0.25}})});
  const double y = 0.2;
  const double a = 0.4 * std::exp(gaussian_log_density(y, -1.0, 0.25));
  const double b = 0.6 * std::exp(gaussian_log_density(y, 1.0, 0.25));
  const auto est = estimate_event(bn, {{1, y}}, 0, [](double d) { return d == 1.0; }, 100000, 77);
  EXPECT_NEAR(est.value, b / (a + b), 3 * est.standard_error);
  SplitMix64 rng(1);
  const auto s = weighted_sample(bn, {{1, y}}, rng);
  EXPECT_GT(s.weight, 0.0);
}

TEST(Estimate, MatchesEnumerationOnFiveNodeNet) {
  const auto bn = random_parameters(oracle::five_node_dag(), 31);
  const Evidence ev{{0, 0.0}};
  const auto exact = oracle::enumerate(bn, ev, 4, [](double v) { return v; });
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto est = estimate_expectation(bn, ev, 4, [](double v) { return v; }, 20000, seed);
    inside += std::abs(est.value - exact.value) <= 3 * est.standard_error ? 1 : 0;
  }
  EXPECT_GE(inside, 19);
}

TEST(EstimateProperty, NumeratorIsUnbiasedForEvidenceProbability) {
  // 2 * 3 * 2 = 12 joint states.
  const std::vector<Variable> vars{Variable::discrete("A", 0, 2), Variable::discrete("B", 1, 3),
                                   Variable::discrete("C", 2, 2)};
  const auto bn = random_parameters(ParentSetDag(vars, {{}, {0}, {0, 1}}), 8);
  const Evidence ev{{1, 1.0}, {2, 0.0}};
  const auto samples = draw_weighted_samples(bn, ev, 100000, 5, 4);
  double s = 0, s2 = 0;
  for (const auto& w : samples) {
    s += w.weight;
    s2 += w.weight * w.weight;
    EXPECT_EQ(w.assignment[1], 1.0);
    EXPECT_EQ(w.assignment[2], 0.0);
  }
  const double m = static_cast<double>(samples.size());
  const double mean = s / m;
  const double se = std::sqrt((s2 / m - mean * mean) / m);
  EXPECT_NEAR(mean, oracle::enumerate(bn, ev, 0, [](double) { return 1.0; }).evidence_probability, 3 * se);
}

TEST(EstimateProperty, IndependentOfWorkerCount) {
  const auto bn = build_super_parent_network({3, 3, 2, 3, 2, 6});
  const Evidence ev{{1, 2.0}, {7, 0.5}};
  const auto one = draw_weighted_samples(bn, ev, 3000, 44, 1);
  const auto eight = draw_weighted_samples(bn, ev, 3000, 44, 8);
  EXPECT_EQ(one, eight);
  const auto a = estimate_expectation(bn, ev, 0, [](double v) { return v; }, 30000, 44, 1);
  const auto b = estimate_expectation(bn, ev, 0, [](double v) { return v; }, 30000, 44, 8);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(Estimate, AllRejectedIsAnError) {
  try {
    estimate_event(bernoulli(0.0), {{0, 1.0}}, 0, [](double) { return true; }, 100, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()), "all samples rejected by evidence");
  }
  EXPECT_THROW(expected_value(bernoulli(0.5), {}, 0, [](double v) { return v; }, 0, 1), InvalidArgument);
}

TEST(Query, ParsesGrammar) {
  const auto bn = build_super_parent_network({1, 1, 2, 3, 2, 1});
  const auto q = parse_query(bn, "P(SPM=2)");
  EXPECT_FALSE(q.expectation);
  EXPECT_EQ(q.target, 1u);
  EXPECT_TRUE(q.holds(2.0));
  EXPECT_FALSE(q.holds(1.0));
  const auto lt = parse_query(bn, " P( G1 < 0.7 ) ");
  EXPECT_EQ(lt.op, Comparison::lt);
  EXPECT_EQ(lt.threshold, 0.7);
  EXPECT_EQ(parse_query(bn, "P(G1<=-1)").op, Comparison::le);
  EXPECT_EQ(parse_query(bn, "P(G1>=1e-3)").op, Comparison::ge);
  EXPECT_EQ(parse_query(bn, "P(G1>3)").op, Comparison::gt);
  EXPECT_TRUE(parse_query(bn, "E(SPG1)").expectation);
  EXPECT_THROW(parse_query(bn, "P(SPM=3)"), DataError);
  EXPECT_THROW(parse_query(bn, "P(Nope=1)"), InvalidArgument);
  EXPECT_THROW(parse_query(bn, "Q(SPM=1)"), InvalidArgument);
  EXPECT_THROW(parse_query(bn, "P(SPM)"), InvalidArgument);
  EXPECT_THROW(parse_query(bn, "P(G1<abc)"), InvalidArgument);

  const auto ev = parse_evidence(bn, "C=1, SPG1=0.25");
  EXPECT_EQ(ev.at(0), 1.0);
  EXPECT_EQ(ev.at(2), 0.25);
  EXPECT_TRUE(parse_evidence(bn, "").empty());
  EXPECT_THROW(parse_evidence(bn, "C=1,C=0"), InvalidArgument);
  EXPECT_THROW(parse_evidence(bn, "C"), InvalidArgument);
  EXPECT_THROW(parse_evidence(bn, "C=5"), DataError);
}
