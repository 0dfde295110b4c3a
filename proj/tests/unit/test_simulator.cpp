#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "fragsim/error.hpp"
#include "fragsim/simulator.hpp"
#include "fragsim/stats.hpp"

using namespace fragsim;

namespace {

DislocationLaw atom(double w, std::vector<double> s) { return DislocationLaw::atomic({WeightedAtom{w, std::move(s)}}); }

MassState mass(std::initializer_list<double> x) {
  const std::vector<double> m = x;
  return MassState::from_masses(m, 0.0, 1.0);
}

SimConfig config(DislocationLaw law, double t, std::uint64_t seed = 0) {
  SimConfig c;
  c.law = std::move(law);
  c.t_end = t;
  c.obs_times = {t};
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("next_event examples") {
  const DislocationLaw law = atom(1.0, {0.6, 0.4});
  Rng rng(1);
  std::vector<double> waits(10000);
  for (auto& w : waits) {
    const NextEvent e = next_event(MassState::single(1.0), law, 0.0, 1e-9, rng);
    CHECK(e.target_rank == 1);
    w = e.wait;
  }
  CHECK(stats::ks_stat(waits, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); }) <
        stats::ks_threshold(waits.size(), 0.001));

  int first = 0;
  for (int i = 0; i < 10000; ++i) first += next_event(mass({0.6, 0.4}), law, 0.0, 1e-9, rng).target_rank == 1;
  CHECK(std::abs(first / 1e4 - 0.5) <= 0.015);

  first = 0;
  for (int i = 0; i < 10000; ++i) first += next_event(mass({0.6, 0.4}), law, 1.0, 1e-9, rng).target_rank == 1;
  CHECK(std::abs(first / 1e4 - 0.6) <= 0.015);
}

TEST_CASE("next_event errors") {
  Rng rng(1);
  const MassState dead = MassState::from_masses(std::vector<double>{}, 1.0, 1.0);
  CHECK_THROWS_AS(next_event(dead, atom(1.0, {0.6, 0.4}), 0.0, 1e-9, rng), Error);
  try {
    next_event(MassState::single(1.0), atom(1.0, {0.9, 0.1}), 0.0, 0.5, rng);
    FAIL("expected EmptyTruncation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTruncation);
  }
}

TEST_CASE("pure erosion") {
  SimConfig c = config(DislocationLaw{}, 0.5);
  c.c = 1.0;
  const Trajectory t = run(c);
  REQUIRE(t.snapshots.size() == 1);
  CHECK(t.snapshots[0].parts() == std::vector<double>{std::exp(-0.5)});
  CHECK(t.events.empty());
}

TEST_CASE("config validation") {
  SimConfig c = config(atom(1.0, {0.6, 0.4}), 1.0);
  c.c = 1.0;
  c.alpha = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  SimConfig d = config(DislocationLaw::binary_power(0.5), 1.0);
  d.eps = 0.0;
  CHECK_THROWS_AS(d.validate(), Error);
  SimConfig e = config(atom(1.0, {0.6, 0.4}), 1.0);
  e.obs_times = {0.5, 0.2};
  CHECK_THROWS_AS(e.validate(), Error);
}

TEST_CASE("two events at alpha 0 reach exactly two states") {
  // After two events the state is (0.36, 0.24, 0.4) or (0.6, 0.24, 0.16),
  // each with probability 1/2.
  const DislocationLaw law = atom(1.0, {0.6, 0.4});
  std::map<std::vector<double>, int> seen;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    SimConfig c = config(law, 3.0, seed);
    const Trajectory t = run(c);
    if (t.events.size() < 2) continue;
    MassState s = MassState::single(1.0);
    for (std::size_t i = 0; i < 2; ++i) s = dislocate(s, t.events[i].target_rank, t.events[i].s);
    std::vector<double> key;
    for (double x : s.parts()) key.push_back(std::round(x * 1e12) / 1e12);
    ++seen[key];
  }
  REQUIRE(seen.size() == 2);
  const std::vector<double> a = {0.4, 0.36, 0.24};
  const std::vector<double> b = {0.6, 0.24, 0.16};
  REQUIRE(seen.contains(a));
  REQUIRE(seen.contains(b));
  const double n = seen[a] + seen[b];
  CHECK(std::abs(seen[a] / n - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("trajectory invariants") {
  const std::vector<DislocationLaw> laws = {atom(1.0, {0.6, 0.4}), DislocationLaw::binary_power(0.5),
                                            DislocationLaw::brennan_durrett(2.0, 2.0),
                                            DislocationLaw::atomic({WeightedAtom{2.0, {0.5, 0.3, 0.1}}})};
  for (const auto& law : laws) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      // Fragment counts grow like exp(nu(1 - s1 >= eps) t), so keep t short
      // for the infinite-activity law.
      const double t_end = law.infinite_activity() ? 0.1 : 1.0;
      SimConfig c = config(law, t_end, seed);
      c.eps = 1e-3;
      c.obs_times = {0.25 * t_end, 0.5 * t_end, t_end};
      std::size_t violations = 0;
      const auto observer = [&](const EventAtom&, const MassState& before, const MassState& after) {
        const double b = before.total_parts() + before.dust();
        const double a = after.total_parts() + after.dust();
        if (std::abs(a - b) > kConservationTolerance * std::max(1.0, b)) ++violations;
        for (std::size_t k = 1; k <= 10; ++k)
          if (prefix_mass(after, k) > prefix_mass(before, k) + 1e-12) ++violations;
      };
      const Trajectory t = run(c, observer);
      CHECK(violations == 0);
      for (std::size_t i = 1; i < t.record_trace.size(); ++i) CHECK(t.record_trace[i].value >= t.record_trace[i - 1].value);
      for (std::size_t i = 0; i < t.chi_trace.size(); ++i) {
        CHECK(t.chi_trace[i].value > 0.0);
        CHECK(t.chi_trace[i].value <= 1.0);
        if (i > 0) CHECK(t.chi_trace[i].value <= t.chi_trace[i - 1].value);
      }
      for (std::size_t i = 1; i < t.snapshots.size(); ++i)
        for (std::size_t k = 1; k <= 10; ++k) CHECK(prefix_mass(t.snapshots[i], k) <= prefix_mass(t.snapshots[i - 1], k) + 1e-12);
      for (const auto& s : t.snapshots) CHECK(std::is_sorted(s.parts().rbegin(), s.parts().rend()));
    }
  }
}

TEST_CASE("erosion factorizes pathwise") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SimConfig base = config(atom(1.0, {0.6, 0.4}), 1.0, seed);
    base.obs_times = {0.3, 0.7, 1.0};
    SimConfig eroded = base;
    eroded.c = 0.8;
    const Trajectory a = run(base);
    const Trajectory b = run(eroded);
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
      const double f = std::exp(-0.8 * a.obs_times[i]);
      REQUIRE(a.snapshots[i].size() == b.snapshots[i].size());
      for (std::size_t k = 1; k <= a.snapshots[i].size(); ++k)
        CHECK(std::abs(b.snapshots[i].rank(k) - f * a.snapshots[i].rank(k)) <= 1e-12);
    }
  }
}

TEST_CASE("rank-1 events form a Poisson stream at alpha 0") {
  // First arrival is Exp(M) censored at t_end; counts on [0, t_end] are
  // Poisson(M t_end).
  const DislocationLaw law = DislocationLaw::atomic({WeightedAtom{1.0, {0.6, 0.4}}, WeightedAtom{0.5, {0.7, 0.2}}});
  const double m = truncated_mass(law, 1e-9);
  SimConfig c = config(law, 1.0);
  Rng rng(5);
  constexpr int N = 10000;
  std::vector<double> first(N);
  std::vector<std::uint64_t> counts(40, 0);
  for (auto& f : first) {
    const Trajectory t = simulate(c, rng);
    f = 1.0;
    std::size_t n = 0;
    for (const auto& e : t.events) {
      if (e.target_rank != 1) continue;
      if (n == 0) f = e.time;
      ++n;
    }
    ++counts[std::min<std::size_t>(n, counts.size() - 1)];
  }
  CHECK(stats::ks_stat(first, [&](double x) { return x <= 0 ? 0.0 : x >= 1.0 ? 1.0 : 1.0 - std::exp(-m * x); }) <
        stats::ks_threshold(N, 0.001));
  CHECK(stats::poisson_pmf_test(counts, m) > 0.001);
}

TEST_CASE("continuity at zero") {
  // P(lambda_1(t) = 1) = exp(-M t) for total weight M.
  const DislocationLaw law = DislocationLaw::atomic({WeightedAtom{1.5, {0.6, 0.4}}, WeightedAtom{0.5, {0.9, 0.1}}});
  for (double t : {0.01, 0.1, 0.5}) {
    SimConfig c = config(law, t);
    Rng rng(6);
    int unchanged = 0;
    constexpr int N = 10000;
    for (int i = 0; i < N; ++i) unchanged += simulate(c, rng).snapshots.back().rank(1) == 1.0;
    const double p = std::exp(-2.0 * t);
    CHECK(std::abs(unchanged / double(N) - p) <= 3.0 * std::sqrt(p * (1 - p) / N) + 1e-12);
  }
}

TEST_CASE("self-similar scaling") {
  SimConfig from_r = config(atom(1.0, {0.6, 0.4}), 0.4);
  from_r.alpha = 1.0;
  from_r.initial_mass = 0.5;
  SimConfig from_1 = config(atom(1.0, {0.6, 0.4}), 0.5 * 0.4);
  from_1.alpha = 1.0;
  Rng a(7);
  Rng b(8);
  std::vector<double> lhs(5000);
  std::vector<double> rhs(5000);
  for (auto& x : lhs) x = simulate(from_r, a).snapshots.back().rank(1);
  for (auto& x : rhs) x = 0.5 * simulate(from_1, b).snapshots.back().rank(1);
  CHECK(stats::ks_two_sample(lhs, rhs) < 0.03);
}

TEST_CASE("sandwich on every conditioned replica") {
  SimConfig c = config(atom(1.0, {0.9, 0.1}), 0.3);
  Rng rng(9);
  int conditioned = 0;
  for (int i = 0; i < 10000; ++i) {
    const Trajectory t = simulate(c, rng);
    const MassState& s = t.snapshots.back();
    if (s.rank(1) < 0.5) continue;
    ++conditioned;
    const double r = record_value(t, 0.3);
    const double chi = chi_value(t, 0.3);
    CHECK(chi * r <= s.rank(2) + 1e-12);
    CHECK(s.rank(2) <= r + 1e-12);
  }
  CHECK(conditioned > 9900);
}

TEST_CASE("record_value and chi_value") {
  Trajectory t;
  CHECK(record_value(t, 1.0) == 0.0);
  CHECK(chi_value(t, 1.0) == 1.0);
  // rank-1 events with s2 = 0.1, 0.3, 0.2 at times 0.1, 0.2, 0.3
  t.record_trace = {{0.1, 0.1}, {0.2, 0.3}};
  CHECK(record_value(t, 0.05) == 0.0);
  CHECK(record_value(t, 0.1) == 0.1);
  CHECK(record_value(t, 0.2) == 0.3);
  CHECK(record_value(t, 0.3) == 0.3);
  // rank-1 events with s1 = 0.9, 0.8 at times 0.1, 0.2
  t.chi_trace = {{0.1, 0.9}, {0.2, 0.9 * 0.8}};
  CHECK(chi_value(t, 1.0) == doctest::Approx(0.72).epsilon(1e-15));
  CHECK(chi_value(t, 0.2) == 0.9);
  CHECK(chi_value(t, 0.1) == 1.0);
}

TEST_CASE("traces agree with the event log") {
  SimConfig c = config(DislocationLaw::binary_power(0.5), 0.05);
  c.eps = 1e-4;
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const Trajectory t = simulate(c, rng);
    double record = 0.0;
    double chi = 1.0;
    for (const auto& e : t.events) {
      CHECK(chi_value(t, e.time) == doctest::Approx(chi).epsilon(1e-14));
      if (e.target_rank == 1) record = std::max(record, e.s.size() > 1 ? e.s[1] : 0.0);
      if (e.target_rank <= 2) chi *= e.s[0];
      CHECK(record_value(t, e.time) == record);
    }
    CHECK(record_value(t, 0.05) == record);
    CHECK(chi_value(t, 0.05 + 1e-12) == doctest::Approx(chi).epsilon(1e-14));
  }
}

TEST_CASE("fragment cap moves mass to dust and flags the path") {
  SimConfig c = config(atom(1.0, {0.5, 0.3, 0.2}), 3.0, 1);
  c.max_fragments = 4;
  const Trajectory t = run(c);
  CHECK(t.cap_hit);
  for (const auto& s : t.snapshots) {
    CHECK(s.size() <= 4);
    CHECK(s.total_parts() + s.dust() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("runs are reproducible") {
  SimConfig c = config(DislocationLaw::binary_power(0.5), 0.1, 42);
  c.eps = 1e-4;
  const Trajectory a = run(c);
  const Trajectory b = run(c);
  CHECK(a.snapshots == b.snapshots);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) CHECK(a.events[i].s == b.events[i].s);
}
