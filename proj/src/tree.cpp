#include "xtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xtree/error.hpp"
#include "xtree/pwm.hpp"

namespace xtree {

void TreeConfig::validate() const {
  if (min_partition_size < 3) {
    throw Error(Errc::InvalidConfig, "min_partition_size must be at least 3");
  }
  if (!(t_crit > 0.0)) throw Error(Errc::InvalidConfig, "t_crit must be positive");
  if (max_grow_iterations < 1) throw Error(Errc::InvalidConfig, "max_grow_iterations must be at least 1");
  if (!(eps.eps_xi > 0.0)) throw Error(Errc::InvalidConfig, "eps_xi must be positive");
}

Tree::Tree(std::vector<TreeNode> nodes, std::size_t dims) : nodes_(std::move(nodes)), dims_(dims) {
  if (nodes_.empty()) throw Error(Errc::CorruptModel, "tree has no nodes");
  std::vector<int> parents(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (!(n.params.sigma > 0.0) || !std::isfinite(n.params.mu) || !std::isfinite(n.params.xi)) {
      throw Error(Errc::CorruptModel, "node " + std::to_string(i) + " has invalid parameters");
    }
    if (n.is_leaf()) continue;
    if (n.rule->dim >= dims_ || !std::isfinite(n.rule->threshold)) {
      throw Error(Errc::CorruptModel, "node " + std::to_string(i) + " has an invalid rule");
    }
    for (std::size_t c : {n.left, n.right}) {
      if (c <= i || c >= nodes_.size()) {
        throw Error(Errc::CorruptModel, "node " + std::to_string(i) + " has an invalid child index");
      }
      ++parents[c];
    }
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (parents[i] != 1) throw Error(Errc::CorruptModel, "node " + std::to_string(i) + " is not a tree node");
  }
}

std::size_t Tree::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const SplitRule& r = *nodes_[i].rule;
    i = x[r.dim] <= r.threshold ? nodes_[i].left : nodes_[i].right;
  }
  return i;
}

const GevParams& Tree::predict(std::span<const double> x) const {
  if (x.size() != dims_) {
    throw Error(Errc::DimensionMismatch,
                "expected " + std::to_string(dims_) + " covariates, got " + std::to_string(x.size()));
  }
  return nodes_[leaf_index(x)].params;
}

std::size_t Tree::split_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].is_leaf()) {
      level[nodes_[i].left] = level[i] + 1;
      level[nodes_[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

double impurity_drop(double parent_score, double left_score, double right_score) {
  if (parent_score == 0.0) throw Error(Errc::ZeroParentScore, "parent log score is zero");
  // |parent| keeps the sign meaning "children fit better" when the totals are
  // negative (small scales); identical to dividing by parent otherwise.
  return (parent_score - right_score - left_score) / std::abs(parent_score);
}

std::optional<PartitionFit> fit_partition(std::span<const double> sorted_targets, GumbelThreshold eps) {
  PartitionFit fit;
  try {
    fit.params = estimate_sorted(sorted_targets, eps);
  } catch (const Error&) {
    return std::nullopt;
  }
  double total = 0.0;
  for (double y : sorted_targets) total += log_score(y, fit.params, eps);
  fit.log_score_total = total;
  return fit;
}

namespace {

// Midpoint strictly below `hi` so that the lower value routes left.
double midpoint_threshold(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid < hi ? mid : lo;
}

}  // namespace

std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         double parent_score, const TreeConfig& config) {
  const std::size_t n = rows.size();
  const std::size_t min_size = config.min_partition_size;
  if (n < 2 * min_size || parent_score == 0.0) return std::nullopt;

  std::vector<double> all_sorted;
  all_sorted.reserve(n);
  for (std::size_t r : rows) all_sorted.push_back(data.targets[r]);
  std::sort(all_sorted.begin(), all_sorted.end());

  std::optional<SplitCandidate> best;
  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::vector<double> left, right;
  left.reserve(n);
  right.reserve(n);

  for (std::size_t dim = 0; dim < data.cols(); ++dim) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double xa = data.x(a, dim), xb = data.x(b, dim);
      return xa < xb || (xa == xb && a < b);
    });
    if (data.x(order.front(), dim) == data.x(order.back(), dim)) continue;

    left.clear();
    right.assign(all_sorted.begin(), all_sorted.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double y = data.targets[order[i]];
      left.insert(std::upper_bound(left.begin(), left.end(), y), y);
      right.erase(std::lower_bound(right.begin(), right.end(), y));

      const double lo = data.x(order[i], dim);
      const double hi = data.x(order[i + 1], dim);
      if (lo == hi) continue;
      if (left.size() < min_size) continue;
      if (right.size() < min_size) break;

      const auto left_fit = fit_partition(left, config.eps);
      if (!left_fit) continue;
      const auto right_fit = fit_partition(right, config.eps);
      if (!right_fit) continue;

      const double drop = impurity_drop(parent_score, left_fit->log_score_total, right_fit->log_score_total);
      if (!std::isfinite(drop)) continue;
      if (!best || drop > best->drop) {
        best = SplitCandidate{{dim, midpoint_threshold(lo, hi)}, drop, *left_fit, *right_fit,
                              left.size(), right.size()};
      }
    }
  }
  return best;
}

std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         const TreeConfig& config) {
  std::vector<double> sorted;
  sorted.reserve(rows.size());
  for (std::size_t r : rows) sorted.push_back(data.targets[r]);
  std::sort(sorted.begin(), sorted.end());
  const auto parent = fit_partition(sorted, config.eps);
  if (!parent) return std::nullopt;
  return best_split(data, rows, parent->log_score_total, config);
}

Tree fit_tree(const Dataset& data, const TreeConfig& config) {
  config.validate();
  if (data.rows() == 0) throw Error(Errc::EmptyDataset, "no covariate-target pairs");
  data.validate();

  std::vector<double> sorted(data.targets);
  std::sort(sorted.begin(), sorted.end());
  const auto root_fit = fit_partition(sorted, config.eps);
  if (!root_fit) throw Error(Errc::RootUnfittable, "PWM fit of the full dataset is inadmissible");

  struct Leaf {
    std::size_t node;
    std::vector<std::size_t> rows;
    std::optional<SplitCandidate> best;
  };

  std::vector<TreeNode> nodes;
  nodes.push_back({root_fit->params, root_fit->log_score_total, data.rows(), std::nullopt, 0, 0});

  std::vector<Leaf> frontier;
  {
    std::vector<std::size_t> all(data.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    auto best = best_split(data, all, root_fit->log_score_total, config);
    frontier.push_back({0, std::move(all), std::move(best)});
  }

  for (std::size_t iter = 0; iter < config.max_grow_iterations; ++iter) {
    // Growing leaf: largest drop, earliest leaf on ties.
    std::optional<std::size_t> grow;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (!frontier[i].best) continue;
      if (!grow || frontier[i].best->drop > frontier[*grow].best->drop) grow = i;
    }
    if (!grow || frontier[*grow].best->drop < config.t_crit) break;

    Leaf leaf = std::move(frontier[*grow]);
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(*grow));
    const SplitCandidate& cand = *leaf.best;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : leaf.rows) {
      (data.x(r, cand.rule.dim) <= cand.rule.threshold ? left_rows : right_rows).push_back(r);
    }

    const std::size_t left_node = nodes.size();
    const std::size_t right_node = left_node + 1;
    nodes[leaf.node].rule = cand.rule;
    nodes[leaf.node].left = left_node;
    nodes[leaf.node].right = right_node;
    nodes.push_back({cand.left.params, cand.left.log_score_total, left_rows.size(), std::nullopt, 0, 0});
    nodes.push_back({cand.right.params, cand.right.log_score_total, right_rows.size(), std::nullopt, 0, 0});

    auto left_best = best_split(data, left_rows, cand.left.log_score_total, config);
    auto right_best = best_split(data, right_rows, cand.right.log_score_total, config);
    frontier.push_back({left_node, std::move(left_rows), std::move(left_best)});
    frontier.push_back({right_node, std::move(right_rows), std::move(right_best)});
  }

  return Tree(std::move(nodes), data.cols());
}

}  // namespace xtree
