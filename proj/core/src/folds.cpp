#include "msreg/folds.hpp"

#include <numeric>
#include <stdexcept>

#include "msreg/rng.hpp"

namespace msreg {

std::vector<int> FoldPlan::test_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t r = 0; r < assignments.size(); ++r)
    if (assignments[r] == fold) out.push_back(static_cast<int>(r));
  return out;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t r = 0; r < assignments.size(); ++r)
    if (assignments[r] != fold) out.push_back(static_cast<int>(r));
  return out;
}

FoldPlan kfold_split(std::size_t n_rows, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw std::invalid_argument("kfold_split: n_folds must be >= 2");
  if (static_cast<std::size_t>(n_folds) > n_rows)
    throw std::invalid_argument("kfold_split: more folds than rows");

  std::vector<int> perm(n_rows);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  fisher_yates(perm, rng);

  FoldPlan plan;
  plan.n_folds = n_folds;
  plan.assignments.resize(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i)
    plan.assignments[static_cast<std::size_t>(perm[i])] = static_cast<int>(i) % n_folds;
  return plan;
}

}  // namespace msreg
