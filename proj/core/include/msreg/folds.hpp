#pragma once

#include <cstdint>
#include <vector>

namespace msreg {

struct FoldPlan {
  int n_folds = 0;
  std::vector<int> assignments;  // row index -> fold index

  std::vector<int> test_indices(int fold) const;   // ascending row order
  std::vector<int> train_indices(int fold) const;  // ascending row order
};

// Seeded permutation dealt round-robin, so fold sizes differ by at most one.
FoldPlan kfold_split(std::size_t n_rows, int n_folds, std::uint64_t seed);

}  // namespace msreg
