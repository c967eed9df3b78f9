#include <algorithm>
#include <stdexcept>

#include "msreg/parallel.hpp"
#include "msreg/regressor.hpp"
#include "msreg/rng.hpp"

namespace msreg {

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // summed child SSE; lower is better
};

// Best axis-aligned split over the sampled features. Thresholds are the
// midpoints between consecutive distinct sorted values; both children must
// keep at least min_leaf rows. Features are scanned in ascending index order
// and only strictly better scores replace the incumbent, so ties resolve to
// the lowest feature index and lowest threshold deterministically.
SplitChoice find_split(const Matrix& x, const Vector& y,
                       const std::vector<int>& rows, std::vector<int>& features,
                       int min_leaf) {
  std::sort(features.begin(), features.end());
  const std::size_t n = rows.size();

  SplitChoice best;
  bool have_best = false;

  std::vector<std::pair<double, double>> order(n);  // (feature value, target)
  for (int f : features) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = static_cast<std::size_t>(rows[i]);
      order[i] = {x(r, static_cast<std::size_t>(f)), y[r]};
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double total_sum = 0.0, total_sq = 0.0;
    for (const auto& [v, t] : order) {
      total_sum += t;
      total_sq += t * t;
    }

    double left_sum = 0.0, left_sq = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const auto& prev = order[i - 1];
      left_sum += prev.second;
      left_sq += prev.second * prev.second;
      if (order[i].first == prev.first) continue;  // split only between distinct values
      const std::size_t nl = i, nr = n - i;
      if (nl < static_cast<std::size_t>(min_leaf) ||
          nr < static_cast<std::size_t>(min_leaf))
        continue;
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                         (right_sq - right_sum * right_sum / static_cast<double>(nr));
      if (!have_best || sse < best.score) {
        best.feature = f;
        best.threshold = 0.5 * (prev.first + order[i].first);
        best.score = sse;
        have_best = true;
      }
    }
  }
  return best;
}

RegressionTree grow_tree(const Matrix& x, const Vector& y, const ForestParams& params,
                         int mtry, std::uint64_t seed) {
  const std::size_t n = x.rows();
  const int d = static_cast<int>(x.cols());
  Rng rng(seed);

  std::vector<int> bootstrap(n);
  for (std::size_t i = 0; i < n; ++i)
    bootstrap[i] = static_cast<int>(rng.below(n));

  RegressionTree tree;
  struct Pending {
    int node;
    std::vector<int> rows;
  };
  std::vector<Pending> stack;
  tree.nodes.push_back({});
  stack.push_back({0, std::move(bootstrap)});

  std::vector<double> node_y;
  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    const std::vector<int>& rows = item.rows;

    node_y.clear();
    for (int r : rows) node_y.push_back(y[static_cast<std::size_t>(r)]);
    const double node_mean = mean(node_y);

    TreeNode& node = tree.nodes[static_cast<std::size_t>(item.node)];
    node.value = node_mean;

    if (rows.size() < 2 * static_cast<std::size_t>(params.min_leaf) ||
        variance(node_y) == 0.0)
      continue;  // leaf

    std::vector<int> features = sample_without_replacement(d, mtry, rng);
    const SplitChoice split = find_split(x, y, rows, features, params.min_leaf);
    if (split.feature < 0) continue;  // no admissible split: stay a leaf

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
      if (x(static_cast<std::size_t>(r), static_cast<std::size_t>(split.feature)) <=
          split.threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }

    const int left_index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(item.node)];
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = left_index;
    parent.right = left_index + 1;

    // push right first so the left subtree is laid out (and numbered) first
    stack.push_back({left_index + 1, std::move(right_rows)});
    stack.push_back({left_index, std::move(left_rows)});
  }
  return tree;
}

}  // namespace

double RegressionTree::predict(std::span<const double> x) const {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                    : node.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

FittedRegressor fit_random_forest(const Matrix& x, const Vector& y,
                                  const ForestParams& params) {
  if (x.rows() != y.size())
    throw std::invalid_argument("fit_random_forest: row count mismatch");
  if (x.rows() == 0) throw std::invalid_argument("fit_random_forest: too few rows");
  if (params.n_trees < 1)
    throw std::invalid_argument("fit_random_forest: n_trees must be >= 1");
  if (params.min_leaf < 1)
    throw std::invalid_argument("fit_random_forest: min_leaf must be >= 1");

  const int d = static_cast<int>(x.cols());
  int mtry = params.mtry > 0 ? params.mtry : d / 3;
  if (mtry < 1) mtry = 1;
  if (mtry > d) mtry = d;

  FittedRegressor model;
  model.kind = RegressorKind::random_forest;
  model.n_features = x.cols();
  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(static_cast<std::size_t>(params.n_trees), [&](std::size_t t) {
    model.trees[t] =
        grow_tree(x, y, params, mtry, derive_seed(params.seed, {t}));
  });
  return model;
}

}  // namespace msreg
