#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fragsim/ranked_state.hpp"
#include "fragsim/rng.hpp"

namespace fragsim {

using Block = std::vector<int>;

/// Partition of a finite set of positive integers. Blocks are sorted
/// internally and listed by increasing least element.
class FinitePartition {
 public:
  FinitePartition() = default;

  /// Validates (non-empty, pairwise disjoint, positive labels) and
  /// canonicalizes. Throws InvalidPartition.
  static FinitePartition from_blocks(std::vector<Block> blocks);

  /// {{1, ..., n}}
  static FinitePartition trivial(int n);
  /// {{1}, {2}, ..., {n}}
  static FinitePartition singletons(int n);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  /// Number of elements in the ground set.
  std::size_t n() const noexcept { return n_; }
  /// Sorted ground set.
  std::vector<int> ground() const;

  /// Block sizes, largest first.
  std::vector<std::size_t> size_profile() const;

  /// True if every block of *this is contained in a block of `coarser`.
  bool refines(const FinitePartition& coarser) const;

  friend bool operator==(const FinitePartition&, const FinitePartition&) = default;

 private:
  explicit FinitePartition(std::vector<Block> canonical);

  std::vector<Block> blocks_;
  std::size_t n_ = 0;
};

/// Label meaning "dust": the element forms its own singleton block.
inline constexpr int kDustLabel = -1;

/// Groups elements by equal labels; dust-labelled elements become singletons.
FinitePartition partition_from_labels(std::span<const int> elements, std::span<const int> labels);

/// Kingman paintbox over {1, ..., n}: element i gets label k with
/// probability s_k and is dust with the remaining probability.
FinitePartition paintbox(const MassState& s, int n, Rng& rng);

/// Paintbox over an explicit element list, drawing labels in list order.
FinitePartition paintbox(const MassState& s, std::span<const int> elements, Rng& rng);

/// Ranked block frequencies |B| / n; sums to one, no dust.
MassState frequencies(const FinitePartition& p);

/// Restriction to `subset` (original labels kept). Throws EmptyRestriction.
FinitePartition induced(const FinitePartition& p, std::span<const int> subset);

/// Replaces block i of p by the blocks of refinements[i].
/// Throws RefinementMismatch when element sets disagree.
FinitePartition compose(const FinitePartition& p, std::span<const FinitePartition> refinements);

/// sigma[i-1] is the image of i; the result has i ~ j iff sigma(i) ~ sigma(j)
/// in p. Requires p to live on {1, ..., n}. Throws NotAPermutation.
FinitePartition apply_permutation(const FinitePartition& p, std::span<const int> sigma);

/// Relative mass vector of a fragment of mass `mass` after `duration`.
using FragmentationKernel = std::function<MassState(double mass, double duration, Rng& rng)>;

/// One transition of the partition-valued fragmentation: every block B (in
/// canonical order) draws a relative vector from the kernel at the
/// estimated frequency |B| / n, then is cut by a paintbox of that vector.
FinitePartition partition_step(const FinitePartition& p, double duration,
                               const FragmentationKernel& kernel, Rng& rng);

}  // namespace fragsim
