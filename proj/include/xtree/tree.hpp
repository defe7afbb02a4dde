#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xtree/dataset.hpp"
#include "xtree/gev.hpp"

namespace xtree {

/// Left child receives x[dim] <= threshold, right child x[dim] > threshold.
struct SplitRule {
  std::size_t dim = 0;
  double threshold = 0.0;

  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

struct TreeConfig {
  std::size_t min_partition_size = 30;
  double t_crit = 0.01;
  std::size_t max_grow_iterations = 40;
  GumbelThreshold eps{};

  /// Throws Errc::InvalidConfig.
  void validate() const;
};

struct TreeNode {
  GevParams params;
  double log_score_total = 0.0;
  std::size_t size = 0;
  std::optional<SplitRule> rule;
  // Indices into Tree::nodes(); meaningful only when rule is set.
  std::size_t left = 0;
  std::size_t right = 0;

  bool is_leaf() const noexcept { return !rule.has_value(); }
};

/// Immutable fitted tree stored as a flat node array; node 0 is the root and
/// children always follow their parent.
class Tree {
 public:
  Tree() = default;
  /// Throws Errc::CorruptModel when the node graph is not a well-formed tree
  /// over `dims` covariates.
  Tree(std::vector<TreeNode> nodes, std::size_t dims);

  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t dims() const noexcept { return dims_; }

  std::size_t leaf_index(std::span<const double> x) const;
  /// Throws Errc::DimensionMismatch.
  const GevParams& predict(std::span<const double> x) const;

  std::size_t split_count() const noexcept;
  std::size_t leaf_count() const noexcept { return split_count() + 1; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t dims_ = 0;
};

/// T = (parent - left - right) / |parent|, the relative reduction of the
/// summed log score. Throws Errc::ZeroParentScore.
double impurity_drop(double parent_score, double left_score, double right_score);

struct PartitionFit {
  GevParams params;
  double log_score_total = 0.0;
};

/// PWM fit of a partition plus its summed log score; nullopt when the PWM
/// estimate is inadmissible.
std::optional<PartitionFit> fit_partition(std::span<const double> sorted_targets,
                                          GumbelThreshold eps = {});

struct SplitCandidate {
  SplitRule rule;
  double drop = 0.0;
  PartitionFit left;
  PartitionFit right;
  std::size_t left_size = 0;
  std::size_t right_size = 0;
};

/// Exhaustive midpoint scan over every covariate of the partition `rows`.
/// Returns the admissible rule with the largest impurity drop; ties go to the
/// lower dimension, then the lower threshold.
std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         double parent_score, const TreeConfig& config);

/// As above, fitting the parent partition first.
std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         const TreeConfig& config);

/// Best-first growth from a single root. Throws Errc::EmptyDataset and
/// Errc::RootUnfittable.
Tree fit_tree(const Dataset& data, const TreeConfig& config);

inline const GevParams& predict_tree(const Tree& tree, std::span<const double> x) {
  return tree.predict(x);
}

}  // namespace xtree
