// Copyright 2026 The gridcoal Authors
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

// Set partitions of the provider set (coalition structures), their canonical
// restricted-growth-string encoding, and single merge/split neighborhoods.

#ifndef GRIDCOAL_PARTITION_HPP
#define GRIDCOAL_PARTITION_HPP

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridcoal {

inline constexpr int kMaxPlayers = 12;

/// A set of providers stored as a bitmask over 0-based ids.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}

  static Coalition of(std::initializer_list<int> members) {
    std::uint32_t m = 0;
    for (int i : members) m |= 1u << i;
    return Coalition(m);
  }
  static constexpr Coalition all(int n) {
    return Coalition(n >= 32 ? ~0u : (1u << n) - 1u);
  }

  constexpr std::uint32_t mask() const noexcept { return mask_; }
  constexpr int size() const noexcept { return std::popcount(mask_); }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr bool contains(int i) const noexcept { return (mask_ >> i) & 1u; }
  constexpr int lowest() const noexcept { return std::countr_zero(mask_); }

  constexpr Coalition operator|(Coalition o) const noexcept {
    return Coalition(mask_ | o.mask_);
  }
  constexpr Coalition operator&(Coalition o) const noexcept {
    return Coalition(mask_ & o.mask_);
  }
  constexpr Coalition without(int i) const noexcept {
    return Coalition(mask_ & ~(1u << i));
  }
  constexpr Coalition with(int i) const noexcept {
    return Coalition(mask_ | (1u << i));
  }
  constexpr auto operator<=>(const Coalition&) const = default;

  /// Members in ascending order.
  std::vector<int> members() const;
  /// "{1,2,4}" with 1-based ids.
  std::string to_string() const;

 private:
  std::uint32_t mask_ = 0;
};

/// A coalition structure over players 0..n-1.
class Partition {
 public:
  Partition() = default;

  /// Canonicalizes any labeling (labels only need to be consistent).
  static Partition from_labels(const std::vector<int>& labels);
  static Partition from_blocks(int n, const std::vector<Coalition>& blocks);
  static Partition singletons(int n);
  static Partition grand(int n);

  int num_players() const noexcept { return static_cast<int>(rgs_.size()); }
  const std::vector<std::uint8_t>& rgs() const noexcept { return rgs_; }
  /// Blocks ordered by their lowest member (the RGS label order).
  const std::vector<Coalition>& blocks() const noexcept { return blocks_; }
  Coalition block_of(int player) const { return blocks_.at(rgs_.at(player)); }

  /// 4 bits per player; unique per canonical partition.
  std::uint64_t key() const noexcept;
  bool is_canonical() const;
  std::string to_string() const;

  bool operator==(const Partition& o) const noexcept { return rgs_ == o.rgs_; }

 private:
  std::vector<std::uint8_t> rgs_;
  std::vector<Coalition> blocks_;
};

/// Bell number by the Bell triangle. Throws DomainError outside 1..12.
std::uint64_t bell_number(int n);

/// All partitions of n players in lexicographic RGS order. The position in
/// this list is the state id used by the dynamics and the policy LP.
std::vector<Partition> enumerate_partitions(int n);

enum class MoveKind { kMerge, kSplit };

struct Move {
  MoveKind kind = MoveKind::kMerge;
  Partition from;
  Partition to;
  Coalition actors;  ///< members of the affected blocks
};

/// Every single merge (two blocks into one) and every single bipartition split.
std::vector<Move> neighbors(const Partition& p);

/// Indexed state space: partitions plus precomputed neighbor ids.
class StateSpace {
 public:
  struct Edge {
    std::size_t to = 0;
    MoveKind kind = MoveKind::kMerge;
    Coalition actors;
    Coalition source_blocks[2];  ///< merge: both merged blocks; split: [0]
    Coalition target_blocks[2];  ///< split: both parts; merge: [0]
  };

  explicit StateSpace(int n);

  int num_players() const noexcept { return n_; }
  std::size_t size() const noexcept { return states_.size(); }
  const Partition& state(std::size_t id) const { return states_.at(id); }
  const std::vector<Partition>& states() const noexcept { return states_; }
  const std::vector<Edge>& edges(std::size_t id) const {
    return edges_.at(id);
  }
  std::size_t index_of(const Partition& p) const;
  std::size_t singletons_id() const { return index_of(Partition::singletons(n_)); }
  std::size_t grand_id() const noexcept { return 0; }

 private:
  int n_;
  std::vector<Partition> states_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::vector<Edge>> edges_;
};

struct MergePassResult {
  Partition result;
  std::size_t attempts = 0;
};

/// Repeated bottom-up merge pass: tries block pairs in order, applies the
/// first merge `accept` approves and restarts, until no pair is accepted.
MergePassResult merge_pass(
    const Partition& start,
    const std::function<bool(Coalition, Coalition)>& accept);

}  // namespace gridcoal

#endif  // GRIDCOAL_PARTITION_HPP
