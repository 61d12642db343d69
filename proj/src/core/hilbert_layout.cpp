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

#include "qtele/core/hilbert_layout.hpp"

#include <algorithm>
#include <unordered_set>

#include "qtele/core/error.hpp"

namespace qtele::core {

HilbertLayout::HilbertLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dim == 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "subsystem '" + s.label + "' has dimension 0");
    }
    if (!seen.insert(s.label).second) {
      throw Error(ErrorKind::kDuplicateLabel,
                  "duplicate subsystem label '" + s.label + "'");
    }
    total_dim_ *= s.dim;
  }
}

HilbertLayout HilbertLayout::single(std::string label, std::size_t dim) {
  return HilbertLayout({Subsystem{std::move(label), dim}});
}

bool HilbertLayout::contains(std::string_view label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t HilbertLayout::position(std::string_view label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  throw Error(ErrorKind::kUnknownLabel,
              "unknown subsystem label '" + std::string(label) + "'");
}

std::size_t HilbertLayout::dim_of(std::string_view label) const {
  return subsystems_[position(label)].dim;
}

std::vector<std::string> HilbertLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

HilbertLayout HilbertLayout::concat(const HilbertLayout& other) const {
  std::vector<Subsystem> joined = subsystems_;
  joined.insert(joined.end(), other.subsystems_.begin(),
                other.subsystems_.end());
  return HilbertLayout(std::move(joined));
}

HilbertLayout HilbertLayout::select(std::span<const std::string> labels) const {
  std::vector<Subsystem> picked;
  picked.reserve(labels.size());
  for (const auto& label : labels) picked.push_back(subsystems_[position(label)]);
  return HilbertLayout(std::move(picked));
}

IndexSplit split_indices(const HilbertLayout& layout,
                         std::span<const std::string> targets) {
  const auto& subs = layout.subsystems();
  const std::size_t n = subs.size();

  std::vector<std::size_t> target_pos;
  std::vector<bool> is_target(n, false);
  for (const auto& label : targets) {
    const std::size_t p = layout.position(label);
    if (is_target[p]) {
      throw Error(ErrorKind::kDuplicateLabel,
                  "subsystem '" + label + "' targeted twice");
    }
    is_target[p] = true;
    target_pos.push_back(p);
  }

  // Place value of each subsystem digit inside the target / rest indices.
  std::vector<std::size_t> target_weight(n, 0);
  std::vector<std::size_t> rest_weight(n, 0);
  IndexSplit split;
  for (auto it = target_pos.rbegin(); it != target_pos.rend(); ++it) {
    target_weight[*it] = split.target_dim;
    split.target_dim *= subs[*it].dim;
  }
  for (std::size_t k = n; k-- > 0;) {
    if (is_target[k]) continue;
    rest_weight[k] = split.rest_dim;
    split.rest_dim *= subs[k].dim;
  }

  const std::size_t total = layout.total_dim();
  split.target_of.resize(total);
  split.rest_of.resize(total);
  split.full_of.resize(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t t = 0;
    std::size_t r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (is_target[k]) {
        t += digits[k] * target_weight[k];
      } else {
        r += digits[k] * rest_weight[k];
      }
    }
    split.target_of[idx] = t;
    split.rest_of[idx] = r;
    split.full_of[t * split.rest_dim + r] = idx;
    // Increment the mixed-radix counter, last subsystem fastest.
    for (std::size_t k = n; k-- > 0;) {
      if (++digits[k] < subs[k].dim) break;
      digits[k] = 0;
    }
  }
  return split;
}

}  // namespace qtele::core
