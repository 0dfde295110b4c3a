#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fragsim/measures.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/simulator.hpp"

namespace fragsim {

struct JumpAtom {
  double size;
  double rate;
};

/// Drift, killing rate and a finite jump measure of a subordinator.
/// Jumps come from an explicit atom list and, for continuous dislocation
/// laws, from a truncated source re-weighted by s1.
struct SubordinatorSpec {
  double drift = 0.0;
  double killing_rate = 0.0;
  std::vector<JumpAtom> atoms;
  double sampled_rate = 0.0;
  std::optional<TruncatedDislocations> source;
  std::string provenance;

  double total_jump_rate() const;
  /// One jump size from the normalized jump measure.
  double sample_jump(Rng& rng) const;
};

/// Subordinator for -log of the largest fragment: drift c, jumps at
/// -log s1 with intensity s1 nu(ds) restricted to {1 - s1 >= eps}, killing
/// at rate equal to the dust integral. Throws EmptyTruncation.
SubordinatorSpec sub_levy_transform(const DislocationLaw& law, double c, double eps);

/// A sampled path on [0, horizon]: jump times with cumulative jump sums
/// and an independent exponential killing time.
struct SubordinatorPath {
  double drift = 0.0;
  std::vector<double> jump_times;
  std::vector<double> cumulative;  // sum of jumps up to and including jump i
  double kill_time = 0.0;

  /// Path value at t, frozen at the killing time once killed.
  double value_at(double t) const;
  bool alive_at(double t) const { return kill_time > t; }
};

SubordinatorPath sample_subordinator_path(const SubordinatorSpec& spec, double horizon, Rng& rng);

struct SubordinatorSample {
  double value;
  bool alive;
};

SubordinatorSample run_subordinator(const SubordinatorSpec& spec, double t, Rng& rng);

/// P(R(t) <= x) = exp(-t nu(s2 > x)).
double record_cdf(const DislocationLaw& law, double t, double x);

/// exp(-x^{-a}).
double extreme_cdf(double x, double a);

/// sum_{i < k} exp(-x^{-a}) x^{-a i} / i!.
double frechet_k_cdf(int k, double a, double x);

/// value / f(1/t). Throws DegenerateNormalizer when f(1/t) = 0.
double normalize_lambda2(const DislocationLaw& law, double t, double value);

/// k-th largest s2 over rank-1 events up to time t (0 if fewer than k).
double kth_record(const Trajectory& traj, std::size_t k, double t);

}  // namespace fragsim
