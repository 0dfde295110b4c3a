#include "fragsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fragsim/error.hpp"

namespace fragsim {

void SimConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be finite and >= 0");
  if (!(c >= 0.0)) fail("erosion rate c must be >= 0");
  if (c > 0.0 && alpha != 0.0) fail("erosion (c > 0) is only supported for alpha = 0");
  if (law.infinite_activity() && !(eps > 0.0)) fail("eps must be > 0 for an infinite-activity measure");
  if (!(eps >= 0.0)) fail("eps must be >= 0");
  if (!(initial_mass > 0.0 && initial_mass <= 1.0)) fail("initial_mass must lie in (0, 1]");
  if (!(mass_floor >= 0.0)) fail("mass_floor must be >= 0");
  if (max_fragments < 1) fail("max_fragments must be >= 1");
  if (!std::is_sorted(obs_times.begin(), obs_times.end())) fail("obs_times must be sorted");
  for (double t : obs_times) {
    if (t < 0.0 || t > t_end) fail("obs_times must lie in [0, t_end]");
  }
}

NextEvent next_event(const MassState& state, const TruncatedDislocations& dislocations, double alpha,
                     Rng& rng) {
  if (state.empty()) throw Error(ErrorCode::DeadState, "no fragments left");
  const double unit_rate = dislocations.mass();
  if (!(unit_rate > 0.0)) throw Error(ErrorCode::EmptyTruncation, "zero event rate");
  const auto& parts = state.parts();
  const std::size_t n = parts.size();

  NextEvent ev{};
  if (alpha == 0.0) {
    ev.wait = rng.exponential(unit_rate * static_cast<double>(n));
    ev.target_rank = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))) + 1;
  } else {
    std::vector<double> cumulative(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::pow(parts[i], alpha);
      cumulative[i] = acc;
    }
    ev.wait = rng.exponential(unit_rate * acc);
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ev.target_rank = static_cast<std::size_t>(it - cumulative.begin()) + 1;
  }
  ev.s = dislocations.sample(rng);
  return ev;
}

NextEvent next_event(const MassState& state, const DislocationLaw& law, double alpha, double eps,
                     Rng& rng) {
  return next_event(state, TruncatedDislocations(law, eps), alpha, rng);
}

Trajectory simulate(const SimConfig& config, Rng& rng, const EventObserver& observer) {
  config.validate();
  const TruncatedDislocations dislocations(config.law, config.eps);

  Trajectory traj;
  traj.obs_times = config.obs_times;
  traj.t_end = config.t_end;
  traj.snapshots.reserve(config.obs_times.size());

  MassState state = MassState::single(config.initial_mass);
  std::size_t next_obs = 0;
  const auto observe_until = [&](double horizon, bool inclusive) {
    while (next_obs < config.obs_times.size() &&
           (config.obs_times[next_obs] < horizon || (inclusive && config.obs_times[next_obs] <= horizon))) {
      const double tau = config.obs_times[next_obs];
      traj.snapshots.push_back(config.c > 0.0 ? erode(state, std::exp(-config.c * tau)) : state);
      ++next_obs;
    }
  };

  double now = 0.0;
  double record = 0.0;
  double chi = 1.0;
  while (!state.empty() && dislocations.mass() > 0.0) {
    NextEvent ev = next_event(state, dislocations, config.alpha, rng);
    const double when = now + ev.wait;
    if (when > config.t_end) break;
    observe_until(when, false);

    EventAtom atom{when, ev.target_rank, std::move(ev.s), state.rank(ev.target_rank), false};
    MassState after = dislocate(state, atom.target_rank, atom.s, config.mass_floor);
    if (after.size() > config.max_fragments) {
      after = cap_fragments(after, config.max_fragments);
      atom.capped = true;
      traj.cap_hit = true;
    }
    if (observer) observer(atom, state, after);

    if (atom.target_rank == 1) {
      const double s2 = atom.s.size() > 1 ? atom.s[1] : 0.0;
      if (s2 > record) {
        record = s2;
        traj.record_trace.push_back({when, record});
      }
    }
    if (atom.target_rank <= 2) {
      chi *= atom.s.front();
      traj.chi_trace.push_back({when, chi});
    }
    traj.events.push_back(std::move(atom));
    state = std::move(after);
    now = when;
  }
  observe_until(config.t_end, true);
  return traj;
}

Trajectory run(const SimConfig& config, const EventObserver& observer) {
  Rng rng(config.seed);
  return simulate(config, rng, observer);
}

double record_value(const Trajectory& traj, double t) {
  auto it = std::upper_bound(traj.record_trace.begin(), traj.record_trace.end(), t,
                             [](double x, const TracePoint& p) { return x < p.time; });
  return it == traj.record_trace.begin() ? 0.0 : std::prev(it)->value;
}

double chi_value(const Trajectory& traj, double t) {
  auto it = std::lower_bound(traj.chi_trace.begin(), traj.chi_trace.end(), t,
                             [](const TracePoint& p, double x) { return p.time < x; });
  return it == traj.chi_trace.begin() ? 1.0 : std::prev(it)->value;
}

FragmentationKernel ranked_kernel(SimConfig base) {
  return [base = std::move(base)](double mass, double duration, Rng& rng) {
    SimConfig cfg = base;
    cfg.initial_mass = mass;
    cfg.t_end = duration;
    cfg.obs_times = {duration};
    const Trajectory traj = simulate(cfg, rng);
    const MassState& end = traj.snapshots.back();
    std::vector<double> relative;
    relative.reserve(end.size());
    for (double p : end.parts()) relative.push_back(p / mass);
    return MassState::from_masses(relative, std::max(0.0, 1.0 - end.total_parts() / mass), 1.0);
  };
}

}  // namespace fragsim
