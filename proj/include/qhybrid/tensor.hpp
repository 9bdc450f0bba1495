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
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qhybrid/error.hpp"

namespace qhybrid {

/**
 * Dense real array with an explicit shape and a gradient buffer of the
 * same length. Layout is row-major; image tensors are H x W x C.
 */
class Tensor {
  public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0)
        : shape_(std::move(shape)), values_(element_count(shape_), fill),
          grad_(values_.size(), 0.0) {}

    Tensor(std::vector<std::size_t> shape, std::vector<double> values)
        : shape_(std::move(shape)), values_(std::move(values)),
          grad_(values_.size(), 0.0) {
        if (values_.size() != element_count(shape_)) {
            throw DimensionError("tensor value count " +
                                 std::to_string(values_.size()) +
                                 " does not match its shape");
        }
    }

    static std::size_t element_count(const std::vector<std::size_t> &shape) {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                               std::multiplies<>{});
    }

    [[nodiscard]] const std::vector<std::size_t> &shape() const { return shape_; }
    [[nodiscard]] std::size_t rank() const { return shape_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> grad() { return grad_; }
    [[nodiscard]] std::span<const double> grad() const { return grad_; }

    double &operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    void zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
    std::vector<double> grad_;
};

} // namespace qhybrid
