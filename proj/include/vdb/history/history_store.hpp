// Copyright 2026 The vdbridge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <shared_mutex>
#include <stdexcept>

#include "vdb/diff/change_set.hpp"
#include "vdb/graph/model.hpp"

namespace vdb::history {

struct HistoryEntry {
  std::size_t index = 0;  // 0 = most recent
  std::shared_ptr<const graph::ObjectGraph> graph;
  diff::ChangeSet changes;  // against the chronologically previous entry
  graph::SourceLocation location;
  std::uint64_t step_seq = 0;
};

class HistoryRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Bounded ring of past snapshots, newest first. Capacity 0 disables it.
// One writer, any number of readers; stored graphs are never mutated.
class HistoryStore {
 public:
  explicit HistoryStore(std::size_t capacity) : capacity_(capacity) {}

  // Returns the step sequence number assigned to the entry. Counts every
  // push, including those dropped because the store is disabled.
  std::uint64_t push(std::shared_ptr<const graph::ObjectGraph> graph,
                     diff::ChangeSet changes, graph::SourceLocation location);

  // Replaces the newest entry's graph and change set, keeping its step
  // sequence number. No-op when empty.
  void amend_current(std::shared_ptr<const graph::ObjectGraph> graph,
                     diff::ChangeSet changes);

  HistoryEntry get(std::size_t index) const;

  std::size_t length() const;
  std::size_t capacity() const;
  std::uint64_t total_pushes() const;

  // Shrinks or grows the ring; shrinking drops the oldest entries.
  void set_capacity(std::size_t capacity);

 private:
  struct Stored {
    std::shared_ptr<const graph::ObjectGraph> graph;
    diff::ChangeSet changes;
    graph::SourceLocation location;
    std::uint64_t step_seq;
  };

  mutable std::shared_mutex mutex_;
  std::size_t capacity_;
  std::uint64_t pushes_ = 0;
  std::deque<Stored> entries_;  // front = newest
};

}  // namespace vdb::history
