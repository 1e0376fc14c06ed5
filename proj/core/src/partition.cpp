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

#include "gridcoal/partition.hpp"

#include <algorithm>
#include <sstream>

#include "gridcoal/errors.hpp"

namespace gridcoal {

namespace {

void check_players(int n) {
  if (n < 1 || n > kMaxPlayers) {
    throw DomainError("number of players must lie in [1, " +
                      std::to_string(kMaxPlayers) + "], got " +
                      std::to_string(n));
  }
}

}  // namespace

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

std::string Coalition::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int i : members()) {
    if (!first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  }
  out += '}';
  return out;
}

Partition Partition::from_labels(const std::vector<int>& labels) {
  check_players(static_cast<int>(labels.size()));
  Partition p;
  p.rgs_.resize(labels.size());
  std::vector<int> seen;  // original label of each canonical block
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(seen.begin(), seen.end(), labels[i]);
    std::size_t block = static_cast<std::size_t>(it - seen.begin());
    if (it == seen.end()) {
      seen.push_back(labels[i]);
      p.blocks_.emplace_back();
    }
    p.rgs_[i] = static_cast<std::uint8_t>(block);
    p.blocks_[block] = p.blocks_[block].with(static_cast<int>(i));
  }
  return p;
}

Partition Partition::from_blocks(int n, const std::vector<Coalition>& blocks) {
  check_players(n);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::uint32_t covered = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw DomainError("partition block is empty");
    if ((covered & blocks[b].mask()) != 0) {
      throw DomainError("partition blocks overlap");
    }
    covered |= blocks[b].mask();
    for (int i : blocks[b].members()) {
      if (i >= n) throw DomainError("partition member out of range");
      labels[static_cast<std::size_t>(i)] = static_cast<int>(b);
    }
  }
  if (covered != Coalition::all(n).mask()) {
    throw DomainError("partition blocks do not cover all players");
  }
  return from_labels(labels);
}

Partition Partition::singletons(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
  return from_labels(labels);
}

Partition Partition::grand(int n) {
  return from_labels(std::vector<int>(static_cast<std::size_t>(n), 0));
}

std::uint64_t Partition::key() const noexcept {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < rgs_.size(); ++i) {
    k |= static_cast<std::uint64_t>(rgs_[i]) << (4 * i);
  }
  return k;
}

bool Partition::is_canonical() const {
  if (rgs_.empty() || rgs_[0] != 0) return false;
  int max_label = 0;
  for (std::size_t i = 1; i < rgs_.size(); ++i) {
    if (rgs_[i] > max_label + 1) return false;
    max_label = std::max<int>(max_label, rgs_[i]);
  }
  return static_cast<std::size_t>(max_label + 1) == blocks_.size();
}

std::string Partition::to_string() const {
  std::string out;
  for (const auto& b : blocks_) out += b.to_string();
  return out;
}

std::uint64_t bell_number(int n) {
  check_players(n);
  // Bell triangle: each row starts with the last entry of the previous row.
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

std::vector<Partition> enumerate_partitions(int n) {
  check_players(n);
  std::vector<Partition> out;
  out.reserve(bell_number(n));
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  // prefix_max[i] = max(rgs[0..i-1])
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  for (;;) {
    out.push_back(Partition::from_labels(rgs));
    int i = n - 1;
    while (i > 0 && rgs[static_cast<std::size_t>(i)] >
                        prefix_max[static_cast<std::size_t>(i)]) {
      --i;
    }
    if (i == 0) break;
    ++rgs[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      rgs[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] =
          std::max(prefix_max[static_cast<std::size_t>(j - 1)],
                   rgs[static_cast<std::size_t>(j - 1)]);
    }
  }
  return out;
}

namespace {

Partition replace_blocks(const Partition& p, std::initializer_list<Coalition> drop,
                         std::initializer_list<Coalition> add) {
  std::vector<Coalition> blocks;
  for (const auto& b : p.blocks()) {
    if (std::find(drop.begin(), drop.end(), b) == drop.end()) blocks.push_back(b);
  }
  blocks.insert(blocks.end(), add.begin(), add.end());
  return Partition::from_blocks(p.num_players(), blocks);
}

}  // namespace

std::vector<Move> neighbors(const Partition& p) {
  std::vector<Move> moves;
  const auto& blocks = p.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      const Coalition merged = blocks[i] | blocks[j];
      moves.push_back({MoveKind::kMerge, p,
                       replace_blocks(p, {blocks[i], blocks[j]}, {merged}),
                       merged});
    }
  }
  for (const auto& b : blocks) {
    if (b.size() < 2) continue;
    // Pin the lowest member to the first part so each bipartition is listed
    // once; the second part must stay non-empty.
    const int low = b.lowest();
    const std::uint32_t rest = b.without(low).mask();
    std::uint32_t sub = 0;
    do {
      if (sub != rest) {
        const Coalition first = Coalition(sub).with(low);
        const Coalition second(rest & ~sub);
        moves.push_back(
            {MoveKind::kSplit, p, replace_blocks(p, {b}, {first, second}), b});
      }
      sub = (sub - rest) & rest;
    } while (sub != 0);
  }
  return moves;
}

StateSpace::StateSpace(int n) : n_(n), states_(enumerate_partitions(n)) {
  index_.reserve(states_.size());
  for (std::size_t k = 0; k < states_.size(); ++k) {
    index_.emplace(states_[k].key(), k);
  }
  edges_.resize(states_.size());
  for (std::size_t k = 0; k < states_.size(); ++k) {
    for (const Move& m : neighbors(states_[k])) {
      Edge e;
      e.to = index_of(m.to);
      e.kind = m.kind;
      e.actors = m.actors;
      if (m.kind == MoveKind::kMerge) {
        // The two source blocks are the blocks of `from` inside the actors.
        int slot = 0;
        for (const auto& b : m.from.blocks()) {
          if ((b & m.actors) == b) e.source_blocks[slot++] = b;
        }
        e.target_blocks[0] = m.actors;
      } else {
        e.source_blocks[0] = m.actors;
        int slot = 0;
        for (const auto& b : m.to.blocks()) {
          if ((b & m.actors) == b) e.target_blocks[slot++] = b;
        }
      }
      edges_[k].push_back(e);
    }
  }
}

std::size_t StateSpace::index_of(const Partition& p) const {
  auto it = index_.find(p.key());
  if (it == index_.end() || p.num_players() != n_) {
    throw DomainError("partition " + p.to_string() + " is not in the state space");
  }
  return it->second;
}

MergePassResult merge_pass(
    const Partition& start,
    const std::function<bool(Coalition, Coalition)>& accept) {
  MergePassResult out{start, 0};
  for (;;) {
    const auto blocks = out.result.blocks();
    bool merged = false;
    for (std::size_t i = 0; i < blocks.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        ++out.attempts;
        if (accept(blocks[i], blocks[j])) {
          out.result = replace_blocks(out.result, {blocks[i], blocks[j]},
                                      {blocks[i] | blocks[j]});
          merged = true;
          break;
        }
      }
    }
    if (!merged) return out;
  }
}

}  // namespace gridcoal
