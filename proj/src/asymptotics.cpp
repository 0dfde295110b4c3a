#include "fragsim/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fragsim/error.hpp"
#include "fragsim/text.hpp"

namespace fragsim {

double SubordinatorSpec::total_jump_rate() const {
  double sum = sampled_rate;
  for (const auto& a : atoms) sum += a.rate;
  return sum;
}

double SubordinatorSpec::sample_jump(Rng& rng) const {
  double atom_rate = 0.0;
  for (const auto& a : atoms) atom_rate += a.rate;
  const double u = rng.uniform() * (atom_rate + sampled_rate);
  if (u < atom_rate || !source) {
    double acc = 0.0;
    for (const auto& a : atoms) {
      acc += a.rate;
      if (u < acc) return a.size;
    }
    return atoms.back().size;
  }
  // Re-weight the truncated law by s1 (acceptance probability s1 >= 1/2
  // for binary laws).
  while (true) {
    const RelativeMasses s = source->sample(rng);
    if (rng.uniform() < s.front()) return -std::log(s.front());
  }
}

SubordinatorSpec sub_levy_transform(const DislocationLaw& law, double c, double eps) {
  SubordinatorSpec spec;
  spec.drift = c;
  spec.killing_rate = dust_integral(law);
  spec.provenance = law.describe() + "; c = " + text::format_shortest(c) + "; eps = " + text::format_shortest(eps);
  if (law.is_zero()) return spec;
  if (law.infinite_activity() && !(eps > 0.0)) {
    throw Error(ErrorCode::EmptyTruncation, "infinite-activity law needs eps > 0");
  }
  if (truncated_mass(law, eps) <= 0.0) throw Error(ErrorCode::EmptyTruncation, "truncation removes every atom");

  if (const auto* f = std::get_if<FiniteAtomic>(&law.family())) {
    for (const auto& atom : f->atoms) {
      const double s1 = atom.s.front();
      if (1.0 - s1 >= eps && s1 > 0.0) spec.atoms.push_back({-std::log(s1), atom.weight * s1});
    }
    return spec;
  }
  // Binary families: s1 = 1 - s2 on {s2 >= eps}; rate = nu2bar(eps) - int s2 dnu.
  const double mass = truncated_mass(law, eps);
  double second_moment = 0.0;
  if (const auto* b = std::get_if<BinaryPowerLaw>(&law.family())) {
    const double lo = std::min(eps, 0.5);
    second_moment = b->a / (1.0 - b->a) * (std::pow(0.5, 1.0 - b->a) - std::pow(lo, 1.0 - b->a));
  } else {
    // int_{s2 >= eps} s2 dnu = eps nu2bar(eps) + int_eps^{1/2} nu2bar(x) dx
    const double lo = std::min(eps, 0.5);
    second_moment = lo * mass + boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                    [&](double x) { return tail_nu2(law, x); }, lo, 0.5, 15, 1e-13);
  }
  spec.sampled_rate = std::max(0.0, mass - second_moment);
  spec.source.emplace(law, eps);
  return spec;
}

double SubordinatorPath::value_at(double t) const {
  const double horizon = std::min(t, kill_time);
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), horizon);
  const double jumps = it == jump_times.begin() ? 0.0 : cumulative[static_cast<std::size_t>(it - jump_times.begin()) - 1];
  return drift * horizon + jumps;
}

SubordinatorPath sample_subordinator_path(const SubordinatorSpec& spec, double horizon, Rng& rng) {
  SubordinatorPath path;
  path.drift = spec.drift;
  path.kill_time = spec.killing_rate > 0.0 ? rng.exponential(spec.killing_rate) : HUGE_VAL;
  const double rate = spec.total_jump_rate();
  if (rate <= 0.0) return path;
  const double stop = std::min(horizon, path.kill_time);
  double now = 0.0;
  double sum = 0.0;
  while (true) {
    now += rng.exponential(rate);
    if (now > stop) break;
    sum += spec.sample_jump(rng);
    path.jump_times.push_back(now);
    path.cumulative.push_back(sum);
  }
  return path;
}

SubordinatorSample run_subordinator(const SubordinatorSpec& spec, double t, Rng& rng) {
  const SubordinatorPath path = sample_subordinator_path(spec, t, rng);
  return {path.value_at(t), path.alive_at(t)};
}

double record_cdf(const DislocationLaw& law, double t, double x) {
  if (t <= 0.0) return 1.0;
  return std::exp(-t * tail_nu2_strict(law, x));
}

double extreme_cdf(double x, double a) { return std::exp(-std::pow(x, -a)); }

double frechet_k_cdf(int k, double a, double x) {
  const double u = std::pow(x, -a);
  if (u == 0.0) return 1.0;
  const double log_u = std::log(u);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    sum += std::exp(-u + i * log_u - std::lgamma(i + 1.0));
  }
  return std::min(1.0, sum);
}

double normalize_lambda2(const DislocationLaw& law, double t, double value) {
  if (!(t > 0.0)) throw Error(ErrorCode::DegenerateNormalizer, "t must be positive");
  const double f = gen_inverse_f(law, 1.0 / t);
  if (!(f > 0.0)) throw Error(ErrorCode::DegenerateNormalizer, "f(1/t) = 0");
  return value / f;
}

double kth_record(const Trajectory& traj, std::size_t k, double t) {
  std::vector<double> seconds;
  for (const auto& ev : traj.events) {
    if (ev.time > t) break;
    if (ev.target_rank == 1) seconds.push_back(ev.s.size() > 1 ? ev.s[1] : 0.0);
  }
  if (k == 0 || seconds.size() < k) return 0.0;
  std::nth_element(seconds.begin(), seconds.begin() + static_cast<std::ptrdiff_t>(k - 1), seconds.end(),
                   std::greater<>());
  return seconds[k - 1];
}

}  // namespace fragsim
