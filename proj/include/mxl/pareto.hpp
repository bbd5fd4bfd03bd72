#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mxl/quality.hpp"

namespace mxl {

/// True iff z1 >= z2 componentwise with at least one strict inequality.
/// Throws std::invalid_argument on length mismatch.
bool dominates(std::span<const double> z1, std::span<const double> z2);

/// A partition in the list together with its bookkeeping. `seq` records
/// insertion order and breaks ties on F.
struct ListEntry {
  LouvainState state;
  std::uint64_t seq = 0;

  const ModularityVector& q() const noexcept { return state.q(); }
  double f() const noexcept { return state.f(); }
};

enum class InsertOutcome { Inserted, RejectedDominated, RejectedCut };

const char* to_string(InsertOutcome o) noexcept;

/// Bounded list of mutually non-dominated partitions, ordered by F
/// descending (ties in insertion order) and cut to `capacity` by F.
class ParetoList {
 public:
  explicit ParetoList(std::size_t capacity);

  /// Rejects candidates dominated by (or equal to) an entry; otherwise
  /// removes the entries the candidate dominates, inserts it, and drops the
  /// lowest-F entries beyond capacity. A candidate that is itself cut leaves
  /// the list unchanged.
  InsertOutcome try_insert(LouvainState candidate);
  /// The outcome try_insert would report for a candidate with this (q, f),
  /// without touching the list.
  InsertOutcome admissible(std::span<const double> q, double f) const;

  /// Entry with the largest F (earliest inserted on ties). Throws std::logic_error if empty.
  const ListEntry& best() const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::span<const ListEntry> entries() const noexcept { return entries_; }
  /// Entry with the given seq, or nullptr if it has left the list.
  const ListEntry* find(std::uint64_t seq) const noexcept;

  /// Number of broken invariants: dominated pairs, excess length, and
  /// out-of-order neighbours. Zero for a well-formed list.
  std::size_t count_violations() const;

 private:
  std::size_t capacity_;
  std::uint64_t next_seq_ = 0;
  std::vector<ListEntry> entries_;
};

}  // namespace mxl
