#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "fragsim/error.hpp"
#include "fragsim/measures.hpp"
#include "fragsim/partitions.hpp"
#include "fragsim/simulator.hpp"
#include "fragsim/stats.hpp"

using namespace fragsim;

namespace {

FinitePartition P(std::vector<Block> blocks) { return FinitePartition::from_blocks(std::move(blocks)); }

MassState mass(std::initializer_list<double> x) {
  const std::vector<double> m = x;
  return MassState::from_masses(m, 0.0, 1.0);
}

// Exact law of paintbox(s, n): enumerate every label vector (labels 0..K-1
// plus dust) with its probability.
std::map<std::vector<Block>, double> enumerate_paintbox(const std::vector<double>& s, int n) {
  const int K = static_cast<int>(s.size());
  const double dust = 1.0 - std::accumulate(s.begin(), s.end(), 0.0);
  std::vector<int> elements(static_cast<std::size_t>(n));
  std::iota(elements.begin(), elements.end(), 1);
  std::map<std::vector<Block>, double> law;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  const int choices = K + 1;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= choices;
  for (int code = 0; code < total; ++code) {
    int c = code;
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      const int l = c % choices;
      c /= choices;
      labels[static_cast<std::size_t>(i)] = l == K ? kDustLabel : l;
      prob *= l == K ? dust : s[static_cast<std::size_t>(l)];
    }
    if (prob == 0.0) continue;
    law[partition_from_labels(elements, labels).blocks()] += prob;
  }
  return law;
}

}  // namespace

TEST_CASE("canonical least-element order") {
  const FinitePartition p = P({{4, 2}, {3, 1}});
  CHECK(p.blocks() == std::vector<Block>{{1, 3}, {2, 4}});
  CHECK(p.n() == 4);
  CHECK_THROWS_AS(P({{1, 2}, {2, 3}}), Error);
  CHECK_THROWS_AS(P({{1}, {}}), Error);
}

TEST_CASE("paintbox examples") {
  Rng rng(1);
  CHECK(paintbox(mass({1.0}), 5, rng) == FinitePartition::trivial(5));
  CHECK(paintbox(MassState::from_masses(std::vector<double>{}, 1.0, 1.0), 4, rng) == FinitePartition::singletons(4));
}

TEST_CASE("paintbox single-block probability matches enumeration") {
  // 0.5^3 + 0.3^3 = 0.152
  const auto law = enumerate_paintbox({0.5, 0.3}, 3);
  const double exact = law.at(std::vector<Block>{{1, 2, 3}});
  CHECK(exact == doctest::Approx(0.152).epsilon(1e-12));

  // Monte Carlo law of all partitions of {1,2,3} against the enumeration.
  Rng rng(77);
  constexpr int N = 20000;
  std::map<std::vector<Block>, std::uint64_t> counts;
  for (int i = 0; i < N; ++i) ++counts[paintbox(mass({0.5, 0.3}), 3, rng).blocks()];
  std::vector<std::uint64_t> observed;
  std::vector<double> probs;
  for (const auto& [blocks, p] : law) {
    observed.push_back(counts[blocks]);
    probs.push_back(p);
  }
  CHECK(stats::chi_square_test(observed, probs).p_value > 0.001);
}

TEST_CASE("paintbox is exchangeable (exact, n <= 4)") {
  const std::vector<std::vector<double>> masses = {{0.5, 0.3}, {0.6, 0.4}, {0.45, 0.25, 0.1}};
  for (const auto& s : masses) {
    for (int n = 2; n <= 4; ++n) {
      const auto law = enumerate_paintbox(s, n);
      std::vector<int> sigma(static_cast<std::size_t>(n));
      std::iota(sigma.begin(), sigma.end(), 1);
      do {
        std::map<std::vector<Block>, double> permuted;
        for (const auto& [blocks, p] : law) permuted[apply_permutation(P(blocks), sigma).blocks()] += p;
        REQUIRE(permuted.size() == law.size());
        for (const auto& [blocks, p] : law) CHECK(permuted.at(blocks) == doctest::Approx(p).epsilon(1e-12));
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
  }
}

TEST_CASE("paintbox frequencies recover the mass vector") {
  // Binomial(10^4, 1/2): P(|X/n - 1/2| > 0.03) is below 1e-8.
  Rng rng(3);
  const MassState f = frequencies(paintbox(mass({0.5, 0.5}), 10000, rng));
  CHECK(f.rank(1) >= 0.47);
  CHECK(f.rank(1) <= 0.53);
  CHECK(f.rank(2) >= 0.47);
  CHECK(f.rank(2) <= 0.53);
}

TEST_CASE("frequencies") {
  CHECK(frequencies(FinitePartition::trivial(3)).parts() == std::vector<double>{1.0});
  CHECK(frequencies(P({{1, 3}, {2, 4}})).parts() == std::vector<double>{0.5, 0.5});
  const MassState f = frequencies(P({{1, 2, 3}, {4}, {5}}));
  CHECK(f.parts() == std::vector<double>{0.6, 0.2, 0.2});
  CHECK(f.dust() == 0.0);
}

TEST_CASE("induced") {
  const FinitePartition p = P({{1, 3, 5}, {2, 4}});
  const std::vector<int> c = {2, 3, 4};
  CHECK(induced(p, c) == P({{2, 4}, {3}}));
  const std::vector<int> all = {1, 2, 3, 4, 5};
  CHECK(induced(p, all) == p);
  CHECK(induced(FinitePartition::singletons(5), c) == P({{2}, {3}, {4}}));
  CHECK_THROWS_AS(induced(p, std::vector<int>{}), Error);
}

TEST_CASE("compose") {
  const FinitePartition p = P({{1, 3}, {2}});
  const std::vector<FinitePartition> full = {P({{1}, {3}}), P({{2}})};
  CHECK(compose(p, full) == FinitePartition::singletons(3));
  const std::vector<FinitePartition> pass = {P({{1, 2}, {3, 4}})};
  CHECK(compose(FinitePartition::trivial(4), pass) == P({{1, 2}, {3, 4}}));
  const FinitePartition q = P({{1, 2}, {3, 4}});
  const std::vector<FinitePartition> identity = {P({{1, 2}}), P({{3, 4}})};
  CHECK(compose(q, identity) == q);
  const std::vector<FinitePartition> wrong = {P({{1, 2}}), P({{3}})};
  try {
    compose(q, wrong);
    FAIL("expected RefinementMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RefinementMismatch);
  }
}

TEST_CASE("compose output refines its input") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const FinitePartition p = paintbox(mass({0.5, 0.3}), 20, rng);
    std::vector<FinitePartition> refinements;
    for (const auto& b : p.blocks()) refinements.push_back(paintbox(mass({0.6, 0.2}), b, rng));
    const FinitePartition r = compose(p, refinements);
    CHECK(r.refines(p));
    CHECK(r.n() == p.n());
  }
}

TEST_CASE("apply_permutation") {
  const FinitePartition p = P({{1, 2}, {3}});
  CHECK(apply_permutation(p, std::vector<int>{1, 2, 3}) == p);
  CHECK(apply_permutation(p, std::vector<int>{3, 2, 1}) == P({{1}, {2, 3}}));
  Rng rng(4);
  const FinitePartition q = paintbox(mass({0.4, 0.3, 0.1}), 30, rng);
  std::vector<int> sigma(30);
  std::iota(sigma.begin(), sigma.end(), 1);
  std::reverse(sigma.begin(), sigma.end());
  std::rotate(sigma.begin(), sigma.begin() + 7, sigma.end());
  CHECK(apply_permutation(q, sigma).size_profile() == q.size_profile());
  try {
    apply_permutation(p, std::vector<int>{1, 1, 3});
    FAIL("expected NotAPermutation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAPermutation);
  }
}

TEST_CASE("partition_step trivial cases") {
  Rng rng(8);
  const FinitePartition p = P({{1, 4}, {2, 3, 5}});
  int calls = 0;
  const FragmentationKernel identity = [&](double, double, Rng&) {
    ++calls;
    return MassState::single(1.0);
  };
  CHECK(partition_step(p, 0.0, identity, rng) == p);
  CHECK(calls == 0);
  CHECK(partition_step(p, 1.0, identity, rng) == p);
  CHECK(calls == 2);
}

TEST_CASE("partition_step agrees with the ranked simulator") {
  // The block holding element 1 has mean frequency E[sum lambda_i^2].
  SimConfig sim;
  sim.law = DislocationLaw::atomic({WeightedAtom{1.0, {0.6, 0.4}}});
  sim.t_end = 0.3;
  sim.obs_times = {0.3};
  const FragmentationKernel kernel = ranked_kernel(sim);
  constexpr int N = 2000;
  Rng a(100);
  Rng b(200);
  std::vector<double> ranked(N);
  std::vector<double> blocks(N);
  std::vector<double> ranked_top(N);
  std::vector<double> blocks_top(N);
  for (int i = 0; i < N; ++i) {
    const MassState s = simulate(sim, a).snapshots.back();
    double sq = 0.0;
    for (double m : s.parts()) sq += m * m;
    ranked[static_cast<std::size_t>(i)] = sq;
    ranked_top[static_cast<std::size_t>(i)] = s.rank(1);
    const FinitePartition p = partition_step(FinitePartition::trivial(1000), 0.3, kernel, b);
    blocks[static_cast<std::size_t>(i)] = static_cast<double>(p.blocks().front().size()) / 1000.0;
    blocks_top[static_cast<std::size_t>(i)] = frequencies(p).rank(1);
  }
  const auto mean_var = [](const std::vector<double>& x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double v = 0.0;
    for (double e : x) v += (e - m) * (e - m);
    return std::pair{m, v / static_cast<double>(x.size() - 1)};
  };
  const auto [m1, v1] = mean_var(ranked);
  const auto [m2, v2] = mean_var(blocks);
  CHECK(std::abs(m1 - m2) < 4.0 * std::sqrt(v1 / N + v2 / N));
  const auto [t1, w1] = mean_var(ranked_top);
  const auto [t2, w2] = mean_var(blocks_top);
  CHECK(std::abs(t1 - t2) < 3.0 * std::sqrt(w1 / N + w2 / N));
}
