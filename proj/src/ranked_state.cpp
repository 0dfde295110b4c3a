#include "fragsim/ranked_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "fragsim/error.hpp"

namespace fragsim {

namespace {

// Inserts `value` after every existing element >= value.
void stable_insert(std::vector<double>& parts, double value) {
  auto pos = std::upper_bound(parts.begin(), parts.end(), value, std::greater<>());
  parts.insert(pos, value);
}

}  // namespace

MassState MassState::from_masses(std::span<const double> masses, double dust, double nominal) {
  if (!(nominal > 0.0)) throw Error(ErrorCode::MassBudgetExceeded, "nominal mass must be positive");
  if (dust < 0.0) throw Error(ErrorCode::NegativeMass, "dust " + std::to_string(dust));
  std::vector<double> parts;
  parts.reserve(masses.size());
  double sum = 0.0;
  for (double m : masses) {
    if (m < 0.0 || std::isnan(m)) throw Error(ErrorCode::NegativeMass, "mass " + std::to_string(m));
    if (m > 0.0) parts.push_back(m);
    sum += m;
  }
  if (sum + dust > nominal * (1.0 + kBudgetTolerance)) {
    throw Error(ErrorCode::MassBudgetExceeded,
                "parts + dust = " + std::to_string(sum + dust) + " > " + std::to_string(nominal));
  }
  std::stable_sort(parts.begin(), parts.end(), std::greater<>());
  return MassState(std::move(parts), dust, nominal);
}

MassState MassState::single(double r) { return from_masses(std::span<const double>(&r, 1), 0.0, r); }

double MassState::total_parts() const noexcept {
  return std::accumulate(parts_.begin(), parts_.end(), 0.0);
}

MassState scale(const MassState& state, double l) {
  if (!(l >= 0.0 && l <= 1.0)) throw Error(ErrorCode::ScaleOutOfRange, std::to_string(l));
  std::vector<double> parts;
  parts.reserve(state.parts_.size());
  for (double p : state.parts_) {
    if (p * l > 0.0) parts.push_back(p * l);
  }
  return MassState(std::move(parts), state.dust_ * l, state.nominal_ * l);
}

void validate_relative(std::span<const double> s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0)) throw Error(ErrorCode::InvalidFragmentVector, "negative entry");
    if (i > 0 && s[i] > s[i - 1]) throw Error(ErrorCode::InvalidFragmentVector, "not sorted");
    sum += s[i];
  }
  if (sum > 1.0 + kBudgetTolerance) {
    throw Error(ErrorCode::InvalidFragmentVector, "sum " + std::to_string(sum) + " > 1");
  }
}

MassState dislocate(const MassState& state, std::size_t rank, std::span<const double> s,
                    double mass_floor) {
  if (rank < 1 || rank > state.parts_.size()) {
    throw Error(ErrorCode::RankOutOfRange,
                std::to_string(rank) + " of " + std::to_string(state.parts_.size()));
  }
  validate_relative(s);
  const double sum_s = std::accumulate(s.begin(), s.end(), 0.0);
  const double renorm = sum_s > 1.0 ? 1.0 / sum_s : 1.0;

  std::vector<double> parts = state.parts_;
  const double parent = parts[rank - 1];
  parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(rank - 1));

  double kept = 0.0;
  for (double si : s) {
    const double piece = parent * si * renorm;
    if (piece <= 0.0) continue;
    if (piece < mass_floor) continue;
    stable_insert(parts, piece);
    kept += piece;
  }
  const double lost = std::max(0.0, parent - kept);
  return MassState(std::move(parts), state.dust_ + lost, state.nominal_);
}

MassState erode(const MassState& state, double factor) {
  if (!(factor >= 0.0 && factor <= 1.0)) throw Error(ErrorCode::ScaleOutOfRange, std::to_string(factor));
  std::vector<double> parts;
  parts.reserve(state.parts_.size());
  double removed = 0.0;
  for (double p : state.parts_) {
    const double q = p * factor;
    removed += p - q;
    if (q > 0.0) parts.push_back(q);
  }
  return MassState(std::move(parts), state.dust_ + removed, state.nominal_);
}

MassState cap_fragments(const MassState& state, std::size_t max_fragments) {
  if (state.parts_.size() <= max_fragments) return state;
  std::vector<double> parts(state.parts_.begin(),
                            state.parts_.begin() + static_cast<std::ptrdiff_t>(max_fragments));
  double moved = 0.0;
  for (std::size_t i = max_fragments; i < state.parts_.size(); ++i) moved += state.parts_[i];
  return MassState(std::move(parts), state.dust_ + moved, state.nominal_);
}

double uniform_dist(const MassState& a, const MassState& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double best = 0.0;
  for (std::size_t k = 1; k <= n; ++k) best = std::max(best, std::abs(a.rank(k) - b.rank(k)));
  return best;
}

double prefix_mass(const MassState& state, std::size_t k) {
  const auto& p = state.parts();
  const std::size_t m = std::min(k, p.size());
  return std::accumulate(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
}

}  // namespace fragsim
