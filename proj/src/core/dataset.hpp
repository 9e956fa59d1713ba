#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/idx.hpp"

namespace metapac {

// One task: m training samples and an optional held-out split, features
// row-major (m x dim).
struct TaskData {
  std::vector<double> x, y;
  std::vector<double> x_test, y_test;
};

// n tasks of m samples each (equal m enforced), optional meta-test tasks,
// plus provenance describing exactly how the data was produced.
struct MetaDataset {
  std::int64_t dim = 0;
  std::int64_t m = 0;       // train samples per task
  std::int64_t m_test = 0;  // held-out samples per task
  std::vector<TaskData> tasks;
  std::vector<TaskData> test_tasks;
  nlohmann::json provenance;

  std::int64_t n() const { return static_cast<std::int64_t>(tasks.size()); }
  void validate() const;
};

// Versioned container: a plain-text descriptor line, a single-line JSON
// header, then length-prefixed little-endian float64 payload (layout
// documented in the README).
void save_dataset(const MetaDataset& ds, const std::string& path);
MetaDataset load_dataset(const std::string& path);

enum class PermuteKind { PixelSwaps, LabelPermute };

// Build a meta-dataset of permutation tasks from IDX images + labels.
// PixelSwaps composes `swaps` uniformly-random transpositions of pixel
// positions per task; LabelPermute draws one permutation of the label
// alphabet per task. Images are sampled without replacement within a task.
// Targets are labels mapped to [0,1] by label / (n_classes - 1).
MetaDataset make_permuted_tasks(const IdxData& images, const IdxData& labels, PermuteKind kind,
                                std::int64_t swaps, std::int64_t n, std::int64_t m,
                                std::int64_t m_test, std::int64_t n_test_tasks,
                                std::uint64_t seed);

// The pixel permutation used by PixelSwaps, exposed for testing: identity
// followed by `swaps` random transpositions.
std::vector<std::uint32_t> compose_swaps(std::size_t size, std::int64_t swaps,
                                         std::uint64_t seed, std::uint64_t task_index);

}  // namespace metapac
