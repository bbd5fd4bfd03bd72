#include "mxl/pareto.hpp"

#include <algorithm>
#include <stdexcept>

namespace mxl {

bool dominates(std::span<const double> z1, std::span<const double> z2) {
  if (z1.size() != z2.size()) throw std::invalid_argument("dominates: vector lengths differ");
  bool strict = false;
  for (std::size_t i = 0; i < z1.size(); ++i) {
    if (z1[i] < z2[i]) return false;
    if (z1[i] > z2[i]) strict = true;
  }
  return strict;
}

const char* to_string(InsertOutcome o) noexcept {
  switch (o) {
    case InsertOutcome::Inserted: return "inserted";
    case InsertOutcome::RejectedDominated: return "rejected-dominated";
    case InsertOutcome::RejectedCut: return "rejected-cut";
  }
  return "?";
}

ParetoList::ParetoList(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("list capacity must be >= 1");
}

InsertOutcome ParetoList::admissible(std::span<const double> q, double f) const {
  std::size_t removed = 0;
  bool beaten_by_all_kept = true;  // every surviving entry has f >= candidate f
  for (const ListEntry& e : entries_) {
    const auto& eq = e.q();
    if (dominates(eq, q) || std::equal(eq.begin(), eq.end(), q.begin(), q.end()))
      return InsertOutcome::RejectedDominated;
    if (dominates(q, eq)) {
      ++removed;
    } else if (e.f() < f) {
      beaten_by_all_kept = false;
    }
  }
  if (entries_.size() - removed + 1 > capacity_ && beaten_by_all_kept)
    return InsertOutcome::RejectedCut;
  return InsertOutcome::Inserted;
}

InsertOutcome ParetoList::try_insert(LouvainState candidate) {
  const InsertOutcome outcome = admissible(candidate.q(), candidate.f());
  if (outcome != InsertOutcome::Inserted) return outcome;

  const auto& q = candidate.q();
  std::erase_if(entries_, [&](const ListEntry& e) { return dominates(q, e.q()); });
  const double f = candidate.f();
  auto pos = std::find_if(entries_.begin(), entries_.end(),
                          [f](const ListEntry& e) { return e.f() < f; });
  entries_.insert(pos, ListEntry{std::move(candidate), next_seq_++});
  while (entries_.size() > capacity_) entries_.pop_back();
  return InsertOutcome::Inserted;
}

const ListEntry& ParetoList::best() const {
  if (entries_.empty()) throw std::logic_error("best() on an empty list");
  return entries_.front();
}

const ListEntry* ParetoList::find(std::uint64_t seq) const noexcept {
  for (const ListEntry& e : entries_)
    if (e.seq == seq) return &e;
  return nullptr;
}

std::size_t ParetoList::count_violations() const {
  std::size_t bad = entries_.size() > capacity_ ? 1 : 0;
  for (std::size_t a = 0; a < entries_.size(); ++a) {
    for (std::size_t b = 0; b < entries_.size(); ++b)
      if (a != b && dominates(entries_[a].q(), entries_[b].q())) ++bad;
    if (a + 1 < entries_.size()) {
      const ListEntry& x = entries_[a];
      const ListEntry& y = entries_[a + 1];
      if (x.f() < y.f() || (x.f() == y.f() && x.seq > y.seq)) ++bad;
    }
  }
  return bad;
}

}  // namespace mxl
