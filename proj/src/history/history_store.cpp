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

#include "vdb/history/history_store.hpp"

#include <mutex>
#include <string>

namespace vdb::history {

std::uint64_t HistoryStore::push(std::shared_ptr<const graph::ObjectGraph> graph,
                                 diff::ChangeSet changes,
                                 graph::SourceLocation location) {
  std::unique_lock lock(mutex_);
  const auto seq = ++pushes_;
  if (capacity_ == 0) return seq;
  entries_.push_front({std::move(graph), std::move(changes),
                       std::move(location), seq});
  while (entries_.size() > capacity_) entries_.pop_back();
  return seq;
}

void HistoryStore::amend_current(std::shared_ptr<const graph::ObjectGraph> graph,
                                 diff::ChangeSet changes) {
  std::unique_lock lock(mutex_);
  if (entries_.empty()) return;
  entries_.front().graph = std::move(graph);
  entries_.front().changes = std::move(changes);
}

HistoryEntry HistoryStore::get(std::size_t index) const {
  std::shared_lock lock(mutex_);
  if (index >= entries_.size()) {
    throw HistoryRangeError("history index " + std::to_string(index) +
                            " out of range (length " +
                            std::to_string(entries_.size()) + ")");
  }
  const auto& e = entries_[index];
  return {index, e.graph, e.changes, e.location, e.step_seq};
}

std::size_t HistoryStore::length() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::size_t HistoryStore::capacity() const {
  std::shared_lock lock(mutex_);
  return capacity_;
}

std::uint64_t HistoryStore::total_pushes() const {
  std::shared_lock lock(mutex_);
  return pushes_;
}

void HistoryStore::set_capacity(std::size_t capacity) {
  std::unique_lock lock(mutex_);
  capacity_ = capacity;
  while (entries_.size() > capacity_) entries_.pop_back();
}

}  // namespace vdb::history
