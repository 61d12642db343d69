// Copyright 2026 The qtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtele::core {

struct Subsystem {
  std::string label;
  std::size_t dim = 0;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered list of labelled tensor factors. The first subsystem is the most
/// significant digit of a flat basis index (Kronecker order).
class HilbertLayout {
 public:
  HilbertLayout() = default;
  explicit HilbertLayout(std::vector<Subsystem> subsystems);

  static HilbertLayout single(std::string label, std::size_t dim);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  bool empty() const { return subsystems_.empty(); }
  std::size_t total_dim() const { return total_dim_; }

  bool contains(std::string_view label) const;
  std::size_t position(std::string_view label) const;
  std::size_t dim_of(std::string_view label) const;
  std::vector<std::string> labels() const;

  HilbertLayout concat(const HilbertLayout& other) const;
  /// Sub-layout with the given labels, in the order given.
  HilbertLayout select(std::span<const std::string> labels) const;

  bool operator==(const HilbertLayout& other) const {
    return subsystems_ == other.subsystems_;
  }

 private:
  std::vector<Subsystem> subsystems_;
  std::size_t total_dim_ = 1;
};

/// Precomputed split of every flat index of a layout into a "target" index
/// (digits of the target subsystems, in the order the targets were listed)
/// and a "rest" index (the remaining digits, in layout order).
struct IndexSplit {
  std::size_t target_dim = 1;
  std::size_t rest_dim = 1;
  std::vector<std::size_t> target_of;
  std::vector<std::size_t> rest_of;
  std::vector<std::size_t> full_of;  // full_of[t * rest_dim + r]

  std::size_t full(std::size_t t, std::size_t r) const {
    return full_of[t * rest_dim + r];
  }
};

IndexSplit split_indices(const HilbertLayout& layout,
                         std::span<const std::string> targets);

}  // namespace qtele::core
