#pragma once

// On-disk form of a prepared dataset directory:
//   dataset.csv        split,label,<feature columns> (full-precision floats)
//   meta.json          scheme/task/seed/fractions/columns/class names
//   normalization.json min-max sidecar for reuse at inference time

#include <array>
#include <string>

#include "flowids/dataset.hpp"

namespace flowids {

struct PreparedDatasetInfo {
    std::string scheme;
    std::string task;
    std::uint64_t seed = 0;
    std::array<double, 3> fractions{0.5, 0.2, 0.3};
    bool chronological = false;
};

void save_prepared_dataset(const std::string& dir, const DatasetMatrix& matrix,
                           const NormalizationParams& params, const PreparedDatasetInfo& info);

struct PreparedDataset {
    DatasetMatrix matrix;
    NormalizationParams normalization;
    PreparedDatasetInfo info;
};

PreparedDataset load_prepared_dataset(const std::string& dir);

}  // namespace flowids
