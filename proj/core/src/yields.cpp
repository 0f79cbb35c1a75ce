// Copyright 2026 The tfqkd Authors
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

#include "tfqkd/yields.hpp"

#include <algorithm>

#include "tfqkd/errors.hpp"

namespace tfqkd {

void YieldBounds::grow(int extent) {
  if (extent <= extent_) return;
  std::vector<double> grown(static_cast<std::size_t>(extent * extent), -1.0);
  for (int a = 0; a < extent_; ++a) {
    for (int b = 0; b < extent_; ++b) {
      grown[static_cast<std::size_t>(a * extent + b)] = values_[static_cast<std::size_t>(index({a, b}))];
    }
  }
  values_ = std::move(grown);
  extent_ = extent;
}

void YieldBounds::set(PhotonPair pair, double value) {
  if (pair.n_a < 0 || pair.n_b < 0) throw DomainError("photon numbers must be non-negative");
  if (!(value >= 0.0 && value <= 1.0)) throw DomainError("yield bound must lie in [0, 1]");
  grow(std::max(pair.n_a, pair.n_b) + 1);
  values_[static_cast<std::size_t>(index(pair))] = value;
}

bool YieldBounds::has(PhotonPair pair) const {
  if (pair.n_a < 0 || pair.n_b < 0 || pair.n_a >= extent_ || pair.n_b >= extent_) return false;
  return values_[static_cast<std::size_t>(index(pair))] >= 0.0;
}

double YieldBounds::get(PhotonPair pair) const {
  return has(pair) ? values_[static_cast<std::size_t>(index(pair))] : kTailDefault;
}

std::vector<PhotonPair> YieldBounds::pairs() const {
  std::vector<PhotonPair> out;
  for (int a = 0; a < extent_; ++a) {
    for (int b = 0; b < extent_; ++b) {
      if (values_[static_cast<std::size_t>(index({a, b}))] >= 0.0) out.push_back({a, b});
    }
  }
  return out;
}

}  // namespace tfqkd
