#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gsearch/game.hpp"
#include "gsearch/solver.hpp"

namespace gsearch {

/// Per-action record inside a table entry. Values are first-player view.
struct ActionStats {
  Action action;
  double value = 0;              // v_{s,a}
  bool valued = false;
  std::uint32_t selections = 0;  // n_{s,a} (best-first descent counts)
  Resolution resolution;         // resolution of the child reached by `action`
  double wins = 0;               // MCTS w_a, mover's reward at s
  std::uint32_t visits = 0;      // MCTS n_a
};

inline ActionStats stats_of(Action a) {
  ActionStats st;
  st.action = a;
  return st;
}

/// Everything any search keeps about one state.
struct TtEntry {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::uint64_t key = 0;
  double value = 0;      // v_s
  double lower = -kInf;  // v-_s
  double upper = kInf;   // v+_s
  int depth = -1;        // depth of the search that produced the bounds
  Resolution resolution;
  bool horizon = true;    // bounds depend on heuristic leaves or inexact pruning
  bool expanded = false;  // best-first: every child has been valued
  std::vector<ActionStats> actions;

  ActionStats* find(Action a);
  const ActionStats* find(Action a) const;
};

/// Hash-keyed store of TtEntry, kept across moves of a match.
///
/// Entries are verified against the full 64-bit key. Below `max_entries`
/// nothing is ever evicted and references returned by `probe`/`emplace` stay
/// valid until the entry itself is evicted or the table cleared. At the
/// ceiling a new key evicts the shallower of the two nearest entries in hash
/// order (the first of them on a tie).
class TranspositionTable {
 public:
  explicit TranspositionTable(std::size_t max_entries = std::size_t{1} << 22);

  std::optional<TtEntry> lookup(std::uint64_t key) const;
  const TtEntry* probe(std::uint64_t key) const;
  TtEntry* probe(std::uint64_t key);

  /// Stores (or overwrites) the entry for `key`. Throws ContractViolation when
  /// the entry's bounds cross or a solved entry has open bounds.
  void store(std::uint64_t key, TtEntry entry);

  /// Entry for `key`, created empty when absent.
  TtEntry& emplace(std::uint64_t key);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t max_entries() const noexcept { return max_entries_; }
  std::uint64_t evictions() const noexcept { return evictions_; }
  void clear() { entries_.clear(); }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [key, entry] : entries_) f(entry);
  }

 private:
  void make_room(std::uint64_t key);

  std::unordered_map<std::uint64_t, TtEntry> entries_;
  std::size_t max_entries_;
  std::uint64_t evictions_ = 0;
};

}  // namespace gsearch
