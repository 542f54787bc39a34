#include "gsearch/transposition.hpp"

#include "gsearch/error.hpp"

namespace gsearch {

ActionStats* TtEntry::find(Action a) {
  for (auto& s : actions)
    if (s.action == a) return &s;
  return nullptr;
}

const ActionStats* TtEntry::find(Action a) const {
  for (const auto& s : actions)
    if (s.action == a) return &s;
  return nullptr;
}

TranspositionTable::TranspositionTable(std::size_t max_entries) : max_entries_(max_entries) {
  if (max_entries_ == 0) throw ContractViolation("transposition table needs a positive capacity");
  entries_.max_load_factor(1.0f);
}

std::optional<TtEntry> TranspositionTable::lookup(std::uint64_t key) const {
  if (const TtEntry* e = probe(key)) return *e;
  return std::nullopt;
}

const TtEntry* TranspositionTable::probe(std::uint64_t key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

TtEntry* TranspositionTable::probe(std::uint64_t key) {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void TranspositionTable::make_room(std::uint64_t key) {
  if (entries_.size() < max_entries_ || entries_.count(key)) return;
  // Two nearest occupied slots in bucket order starting at the key's bucket.
  const std::size_t buckets = entries_.bucket_count();
  std::size_t b = entries_.bucket(key);
  std::uint64_t victims[2] = {0, 0};
  int found = 0;
  for (std::size_t step = 0; step < buckets && found < 2; ++step, b = (b + 1) % buckets) {
    for (auto it = entries_.begin(b); it != entries_.end(b) && found < 2; ++it)
      victims[found++] = it->first;
  }
  std::uint64_t victim = victims[0];
  if (found == 2 && entries_.at(victims[1]).depth < entries_.at(victims[0]).depth)
    victim = victims[1];
  entries_.erase(victim);
  ++evictions_;
}

void TranspositionTable::store(std::uint64_t key, TtEntry entry) {
  if (entry.lower > entry.upper)
    throw ContractViolation("transposition entry with crossing bounds");
  if (entry.resolution.is_solved() && entry.lower != entry.upper)
    throw ContractViolation("solved transposition entry must have equal bounds");
  entry.key = key;
  make_room(key);
  entries_.insert_or_assign(key, std::move(entry));
}

TtEntry& TranspositionTable::emplace(std::uint64_t key) {
  if (auto* e = probe(key)) return *e;
  make_room(key);
  auto& e = entries_[key];
  e.key = key;
  return e;
}

}  // namespace gsearch
