#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fragsim/ranked_state.hpp"
#include "fragsim/rng.hpp"

namespace fragsim {

struct WeightedAtom {
  double weight;
  RelativeMasses s;
};

/// Finitely many weighted dislocation vectors.
struct FiniteAtomic {
  std::vector<WeightedAtom> atoms;
};

/// Binary splits (1 - x, x) with x on (0, 1/2] of density a x^{-a-1}.
struct BinaryPowerLaw {
  double a;
};

/// Unit-rate binary splits (max(V, 1-V), min(V, 1-V)), V ~ Beta(p, q).
struct BrennanDurrett {
  double p;
  double q;
};

/// A dislocation measure on the ranked simplex with finite dust integral
/// and no atom at (1, 0, ...). Immutable once built.
class DislocationLaw {
 public:
  using Family = std::variant<FiniteAtomic, BinaryPowerLaw, BrennanDurrett>;

  /// Zero measure.
  DislocationLaw() : family_(FiniteAtomic{}) {}

  /// Throws InvalidMeasure for weights <= 0, atoms outside the simplex or
  /// equal to (1, 0, ...).
  static DislocationLaw atomic(std::vector<WeightedAtom> atoms);
  /// Throws DivergentMeasure for a >= 1, InvalidMeasure for a <= 0.
  static DislocationLaw binary_power(double a);
  /// Throws InvalidMeasure unless p, q > 0.
  static DislocationLaw brennan_durrett(double p, double q);

  const Family& family() const noexcept { return family_; }

  /// Every split is (s1, s2, 0, ...).
  bool is_binary() const;
  /// nu(s2 > 0) is infinite.
  bool infinite_activity() const;
  /// True for the zero measure.
  bool is_zero() const;

  /// Canonical text in the measure grammar, e.g. "measure = binary_power; a = 0.5".
  std::string describe() const;

 private:
  explicit DislocationLaw(Family f) : family_(std::move(f)) {}
  Family family_;
};

/// nu(s2 >= x); zero for x > 1/2.
double tail_nu2(const DislocationLaw& law, double x);
/// nu(s2 > x); differs from tail_nu2 only at atoms.
double tail_nu2_strict(const DislocationLaw& law, double x);
/// Integral of (1 - s1) against nu.
double dust_integral(const DislocationLaw& law);
/// nu(1 - s1 >= eps).
double truncated_mass(const DislocationLaw& law, double eps);
/// Generalized inverse inf{x > 0 : tail_nu2(x) <= y}.
double gen_inverse_f(const DislocationLaw& law, double y);

/// The normalized restriction of nu to {1 - s1 >= eps}, prepared for
/// repeated sampling.
class TruncatedDislocations {
 public:
  TruncatedDislocations(DislocationLaw law, double eps);

  const DislocationLaw& law() const noexcept { return law_; }
  double eps() const noexcept { return eps_; }
  /// nu(1 - s1 >= eps); zero means nothing can be sampled.
  double mass() const noexcept { return mass_; }

  /// Throws EmptyTruncation when mass() == 0.
  RelativeMasses sample(Rng& rng) const;

 private:
  DislocationLaw law_;
  double eps_;
  double mass_;
  std::vector<double> cumulative_;     // atomic: running weights of kept atoms
  std::vector<std::size_t> kept_;      // atomic: indices of kept atoms
  double ibeta_lo_ = 0.0;              // Brennan-Durrett: I_eps(p, q)
  double ibeta_hi_ = 0.0;              // Brennan-Durrett: I_{1-eps}(p, q)
};

/// One draw from nu( . | 1 - s1 >= eps). Throws EmptyTruncation.
RelativeMasses sample_dislocation(const DislocationLaw& law, double eps, Rng& rng);

/// Parses the measure grammar. Accepts either a one-line form with ';'
/// separators ("measure = atomic; atoms = 1:0.6,0.4; 0.5:0.9,0.1") or
/// key/value pairs already split by the config reader.
DislocationLaw parse_measure(std::string_view text);
DislocationLaw law_from_keys(const std::map<std::string, std::string>& keys);

}  // namespace fragsim
