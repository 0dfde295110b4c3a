#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fragsim {

/// Relative sizes produced by one dislocation: an element of the ranked
/// simplex (non-increasing, non-negative, sum <= 1).
using RelativeMasses = std::vector<double>;

inline constexpr double kBudgetTolerance = 1e-9;
inline constexpr double kConservationTolerance = 1e-12;

/// A finite element of the ranked mass space: fragment masses in
/// non-increasing order plus a dust ledger for mass that is no longer
/// carried by any tracked fragment.
class MassState {
 public:
  /// The unit state (1, 0, 0, ...).
  MassState() : parts_{1.0}, dust_(0.0), nominal_(1.0) {}

  /// Canonicalizes arbitrary non-negative masses: zeros stripped, stable
  /// non-increasing sort. Throws NegativeMass / MassBudgetExceeded.
  static MassState from_masses(std::span<const double> masses, double dust = 0.0,
                               double nominal = 1.0);

  /// The state (r, 0, 0, ...).
  static MassState single(double r);

  const std::vector<double>& parts() const noexcept { return parts_; }
  double dust() const noexcept { return dust_; }
  double nominal() const noexcept { return nominal_; }
  std::size_t size() const noexcept { return parts_.size(); }
  bool empty() const noexcept { return parts_.empty(); }

  /// k-th largest mass, 1-based; zero past the end.
  double rank(std::size_t k) const noexcept {
    return (k >= 1 && k <= parts_.size()) ? parts_[k - 1] : 0.0;
  }

  double total_parts() const noexcept;

  friend MassState scale(const MassState& state, double l);
  friend MassState dislocate(const MassState& state, std::size_t rank, std::span<const double> s,
                             double mass_floor);
  friend MassState erode(const MassState& state, double factor);
  friend MassState cap_fragments(const MassState& state, std::size_t max_fragments);

  friend bool operator==(const MassState&, const MassState&) = default;

 private:
  MassState(std::vector<double> parts, double dust, double nominal)
      : parts_(std::move(parts)), dust_(dust), nominal_(nominal) {}

  std::vector<double> parts_;
  double dust_;
  double nominal_;
};

/// Multiplies every part, the dust and the nominal mass by l in [0, 1].
MassState scale(const MassState& state, double l);

/// Replaces the fragment of the given 1-based rank by its pieces
/// parent * s_i. Mass not covered by s, and any piece below mass_floor,
/// goes to dust. Stable insertion: existing fragments precede new ones on
/// exact ties.
MassState dislocate(const MassState& state, std::size_t rank, std::span<const double> s,
                    double mass_floor = 0.0);

/// Multiplies the parts by `factor` and books the removed mass as dust;
/// the nominal mass is unchanged.
MassState erode(const MassState& state, double factor);

/// Keeps the largest `max_fragments` parts; the rest moves to dust.
MassState cap_fragments(const MassState& state, std::size_t max_fragments);

/// Sup-norm distance, missing entries read as zero.
double uniform_dist(const MassState& a, const MassState& b);

/// Sum of the k largest masses.
double prefix_mass(const MassState& state, std::size_t k);

/// Throws InvalidFragmentVector unless s is non-increasing, non-negative
/// and sums to at most 1 (within the budget tolerance).
void validate_relative(std::span<const double> s);

}  // namespace fragsim
