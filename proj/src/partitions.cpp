#include "fragsim/partitions.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "fragsim/error.hpp"

namespace fragsim {

namespace {

void canonicalize(std::vector<Block>& blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.front() < b.front(); });
}

std::size_t count_elements(const std::vector<Block>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

}  // namespace

FinitePartition::FinitePartition(std::vector<Block> canonical)
    : blocks_(std::move(canonical)), n_(count_elements(blocks_)) {}

FinitePartition FinitePartition::from_blocks(std::vector<Block> blocks) {
  for (const auto& b : blocks) {
    if (b.empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
  }
  canonicalize(blocks);
  std::vector<int> all;
  for (const auto& b : blocks) {
    for (int e : b) {
      if (e < 1) throw Error(ErrorCode::InvalidPartition, "label " + std::to_string(e));
      all.push_back(e);
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error(ErrorCode::InvalidPartition, "blocks overlap");
  }
  return FinitePartition(std::move(blocks));
}

FinitePartition FinitePartition::trivial(int n) {
  Block b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = i + 1;
  return FinitePartition(std::vector<Block>{std::move(b)});
}

FinitePartition FinitePartition::singletons(int n) {
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) blocks.push_back({i});
  return FinitePartition(std::move(blocks));
}

std::vector<int> FinitePartition::ground() const {
  std::vector<int> all;
  all.reserve(n_);
  for (const auto& b : blocks_) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<std::size_t> FinitePartition::size_profile() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(blocks_.size());
  for (const auto& b : blocks_) sizes.push_back(b.size());
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

bool FinitePartition::refines(const FinitePartition& coarser) const {
  std::unordered_map<int, std::size_t> owner;
  for (std::size_t i = 0; i < coarser.blocks_.size(); ++i) {
    for (int e : coarser.blocks_[i]) owner[e] = i;
  }
  for (const auto& b : blocks_) {
    auto first = owner.find(b.front());
    if (first == owner.end()) return false;
    for (int e : b) {
      auto it = owner.find(e);
      if (it == owner.end() || it->second != first->second) return false;
    }
  }
  return true;
}

FinitePartition partition_from_labels(std::span<const int> elements, std::span<const int> labels) {
  std::vector<Block> blocks;
  std::unordered_map<int, std::size_t> slot;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (labels[i] == kDustLabel) {
      blocks.push_back({elements[i]});
      continue;
    }
    auto [it, inserted] = slot.try_emplace(labels[i], blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(elements[i]);
  }
  return FinitePartition::from_blocks(std::move(blocks));
}

FinitePartition paintbox(const MassState& s, std::span<const int> elements, Rng& rng) {
  const auto& parts = s.parts();
  std::vector<double> cumulative(parts.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    acc += parts[k];
    cumulative[k] = acc;
  }
  std::vector<int> labels(elements.size());
  for (auto& label : labels) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    label = it == cumulative.end() ? kDustLabel : static_cast<int>(it - cumulative.begin());
  }
  return partition_from_labels(elements, labels);
}

FinitePartition paintbox(const MassState& s, int n, Rng& rng) {
  std::vector<int> elements(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) elements[static_cast<std::size_t>(i)] = i + 1;
  return paintbox(s, elements, rng);
}

MassState frequencies(const FinitePartition& p) {
  const double n = static_cast<double>(p.n());
  std::vector<double> freq;
  freq.reserve(p.block_count());
  for (const auto& b : p.blocks()) freq.push_back(static_cast<double>(b.size()) / n);
  return MassState::from_masses(freq, 0.0, 1.0);
}

FinitePartition induced(const FinitePartition& p, std::span<const int> subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptyRestriction, "empty subset");
  std::vector<int> keep(subset.begin(), subset.end());
  std::sort(keep.begin(), keep.end());
  std::vector<Block> blocks;
  for (const auto& b : p.blocks()) {
    Block part;
    std::set_intersection(b.begin(), b.end(), keep.begin(), keep.end(), std::back_inserter(part));
    if (!part.empty()) blocks.push_back(std::move(part));
  }
  if (blocks.empty()) throw Error(ErrorCode::EmptyRestriction, "subset misses the ground set");
  return FinitePartition::from_blocks(std::move(blocks));
}

FinitePartition compose(const FinitePartition& p, std::span<const FinitePartition> refinements) {
  if (refinements.size() != p.block_count()) {
    throw Error(ErrorCode::RefinementMismatch, "need one refinement per block");
  }
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < refinements.size(); ++i) {
    if (refinements[i].ground() != p.blocks()[i]) {
      throw Error(ErrorCode::RefinementMismatch, "refinement " + std::to_string(i) +
                                                     " does not cover its block");
    }
    const auto& rb = refinements[i].blocks();
    blocks.insert(blocks.end(), rb.begin(), rb.end());
  }
  return FinitePartition::from_blocks(std::move(blocks));
}

FinitePartition apply_permutation(const FinitePartition& p, std::span<const int> sigma) {
  const std::size_t n = sigma.size();
  std::vector<int> inverse(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int image = sigma[i];
    if (image < 1 || static_cast<std::size_t>(image) > n || inverse[static_cast<std::size_t>(image)] != 0) {
      throw Error(ErrorCode::NotAPermutation, "not a bijection on {1..n}");
    }
    inverse[static_cast<std::size_t>(image)] = static_cast<int>(i) + 1;
  }
  if (p.n() != n || p.ground().back() != static_cast<int>(n)) {
    throw Error(ErrorCode::NotAPermutation, "partition does not live on {1..n}");
  }
  std::vector<Block> blocks;
  blocks.reserve(p.block_count());
  for (const auto& b : p.blocks()) {
    Block pre;
    pre.reserve(b.size());
    for (int e : b) pre.push_back(inverse[static_cast<std::size_t>(e)]);
    blocks.push_back(std::move(pre));
  }
  return FinitePartition::from_blocks(std::move(blocks));
}

FinitePartition partition_step(const FinitePartition& p, double duration,
                               const FragmentationKernel& kernel, Rng& rng) {
  if (duration <= 0.0) return p;
  const double n = static_cast<double>(p.n());
  std::vector<FinitePartition> refinements;
  refinements.reserve(p.block_count());
  for (const auto& b : p.blocks()) {
    const double mass = static_cast<double>(b.size()) / n;
    const MassState relative = kernel(mass, duration, rng);
    refinements.push_back(paintbox(relative, b, rng));
  }
  return compose(p, refinements);
}

}  // namespace fragsim
