#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fragsim/measures.hpp"
#include "fragsim/partitions.hpp"
#include "fragsim/ranked_state.hpp"
#include "fragsim/rng.hpp"

namespace fragsim {

struct SimConfig {
  DislocationLaw law;
  double alpha = 0.0;
  double c = 0.0;
  double eps = 1e-9;
  double t_end = 1.0;
  std::vector<double> obs_times{1.0};
  std::size_t max_fragments = 1'000'000;
  double mass_floor = 0.0;
  double initial_mass = 1.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// One atom of the dislocation point process.
struct EventAtom {
  double time = 0.0;
  std::size_t target_rank = 0;  // rank at time t-
  RelativeMasses s;
  double parent_mass = 0.0;
  bool capped = false;  // fragment cap forced mass into dust at this event
};

struct TracePoint {
  double time;
  double value;
};

struct Trajectory {
  std::vector<double> obs_times;
  std::vector<MassState> snapshots;  // erosion applied
  std::vector<EventAtom> events;
  std::vector<TracePoint> record_trace;  // running max of s2 over rank-1 events
  std::vector<TracePoint> chi_trace;     // running product of s1 over rank-1/2 events
  double t_end = 0.0;
  bool cap_hit = false;
};

struct NextEvent {
  double wait;
  std::size_t target_rank;
  RelativeMasses s;
};

/// Per-fragment clocks with rate mass^alpha * nu(1 - s1 >= eps).
/// Throws DeadState on an empty state, EmptyTruncation on a zero rate.
NextEvent next_event(const MassState& state, const TruncatedDislocations& dislocations, double alpha,
                     Rng& rng);
NextEvent next_event(const MassState& state, const DislocationLaw& law, double alpha, double eps,
                     Rng& rng);

/// Called after every applied event with the states around it.
using EventObserver =
    std::function<void(const EventAtom& event, const MassState& before, const MassState& after)>;

/// Simulates on the supplied stream (config.seed is ignored).
Trajectory simulate(const SimConfig& config, Rng& rng, const EventObserver& observer = {});

/// Simulates on the stream derived from config.seed.
Trajectory run(const SimConfig& config, const EventObserver& observer = {});

/// max s2 over rank-1 events at times <= t; 0 if none.
double record_value(const Trajectory& traj, double t);

/// Product of s1 over rank-1 and rank-2 events at times < t; 1 if none.
double chi_value(const Trajectory& traj, double t);

/// Ranked-simulator kernel for partition_step: a block of mass m evolves as
/// the fragmentation started from m, reported relative to m.
FragmentationKernel ranked_kernel(SimConfig base);

}  // namespace fragsim
