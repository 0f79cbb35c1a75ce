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

#pragma once

#include <array>
#include <compare>
#include <vector>

namespace tfqkd {

/// Photon numbers (n_A, n_B) sent by Alice and Bob.
struct PhotonPair {
  int n_a = 0;
  int n_b = 0;

  friend auto operator<=>(const PhotonPair&, const PhotonPair&) = default;
};

/// The five photon-number yields the decoy analysis bounds explicitly.
inline constexpr std::array<PhotonPair, 5> kBoundedYieldPairs{
    PhotonPair{0, 0}, PhotonPair{2, 0}, PhotonPair{0, 2}, PhotonPair{1, 1}, PhotonPair{2, 2}};

/// Upper bounds on the yields Y_nm = p(k_c, k_d | n_A, n_B) of one detection
/// pattern. Pairs that were never set read as the trivial bound 1.
///
/// The grid grows on demand, so the same type holds the five LP-derived
/// bounds of the finite-decoy analysis and a full table of exact yields in the
/// infinite-decoy case.
class YieldBounds {
 public:
  static constexpr double kTailDefault = 1.0;

  YieldBounds() = default;

  /// Stores an upper bound. Throws DomainError unless 0 <= value <= 1 and
  /// both photon numbers are non-negative.
  void set(PhotonPair pair, double value);

  /// Stored bound, or kTailDefault.
  double get(PhotonPair pair) const;

  bool has(PhotonPair pair) const;

  /// Every explicitly stored pair in (n_A, n_B) lexicographic order.
  std::vector<PhotonPair> pairs() const;

  /// One past the largest photon number on either side with a stored bound.
  int extent() const { return extent_; }

 private:
  int index(PhotonPair pair) const { return pair.n_a * extent_ + pair.n_b; }
  void grow(int extent);

  int extent_ = 0;
  std::vector<double> values_;  // row-major extent_ x extent_, negative = unset
};

}  // namespace tfqkd
