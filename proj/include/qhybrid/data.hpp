// Copyright 2026 The qhybrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * MNIST ingestion in IDX format and seeded, class-balanced splits.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace qhybrid::data {

inline constexpr std::uint32_t kImagesMagic = 0x00000803;
inline constexpr std::uint32_t kLabelsMagic = 0x00000801;

/// IDX contents as read: pixels scaled to [0, 1], original labels.
struct RawDataset {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<std::vector<double>> images;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
};

/// Images with labels remapped to class positions 0..k-1.
struct Dataset {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<std::vector<double>> images;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
    [[nodiscard]] bool empty() const { return labels.empty(); }

    /// Throws DataError on length mismatch, pixels outside [0, 1] or labels
    /// outside [0, n_classes).
    void validate(int n_classes) const;
};

struct Split {
    Dataset train;
    Dataset test;
};

inline const std::vector<int> kPaperClasses{0, 1, 2, 3};

/// Reads an image file and a label file; either may be gzip-compressed.
/// Throws FormatError with a byte offset on bad magic, inconsistent
/// headers or truncation.
RawDataset load_idx(const std::filesystem::path &images_path,
                    const std::filesystem::path &labels_path);

/// Locates `train-images-idx3-ubyte[.gz]` / `train-labels-idx1-ubyte[.gz]`
/// under `dir` and loads them.
RawDataset load_mnist_dir(const std::filesystem::path &dir);

/// Writes uncompressed IDX files; pixels are stored as round(255 * p).
void write_idx(const RawDataset &raw, const std::filesystem::path &images_path,
               const std::filesystem::path &labels_path);

/**
 * Keeps only `classes`, then draws disjoint train/test sets.
 *
 * Balance rule: class i of k receives floor(n / k) items, plus one when
 * i < n mod k. Each class's indices are shuffled with the seed; the first
 * items go to train, the following ones to test. The train and test lists
 * are then shuffled so batches mix classes. Labels become positions in
 * `classes`.
 */
Split filter_and_split(const RawDataset &raw, std::span<const int> classes,
                       std::size_t n_train, std::size_t n_test,
                       std::uint64_t seed);

} // namespace qhybrid::data
