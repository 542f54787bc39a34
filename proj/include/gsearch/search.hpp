#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/solver.hpp"

namespace gsearch {

/// Per-action search budget. At least one bound must be set. `max_nodes`
/// counts node visits for depth-bounded searches and iterations for the
/// best-first and Monte Carlo searches.
struct SearchBudget {
  std::optional<double> seconds;
  std::optional<int> max_depth;
  std::optional<std::uint64_t> max_nodes;

  static SearchBudget time(double s) { return {s, std::nullopt, std::nullopt}; }
  static SearchBudget nodes(std::uint64_t n) { return {std::nullopt, std::nullopt, n}; }
  static SearchBudget depth(int d) { return {std::nullopt, d, std::nullopt}; }

  /// Throws ConfigError when no bound is set or a bound is negative.
  void validate() const;
};

/// Thrown inside a search when the budget runs out mid-iteration.
struct SearchAborted {};

/// Node counting plus a clock read every `check_interval` nodes.
class BudgetTracker {
 public:
  explicit BudgetTracker(const SearchBudget& budget, int check_interval = 64);

  /// Counts one node; true once the budget is spent.
  bool tick();
  bool exhausted() const;

  std::uint64_t nodes() const noexcept { return nodes_; }
  double elapsed() const;
  void disarm() noexcept { armed_ = false; }
  void arm() noexcept { armed_ = true; }

 private:
  using Clock = std::chrono::steady_clock;
  SearchBudget budget_;
  int check_interval_;
  Clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool time_up_ = false;
  bool armed_ = true;
};

struct IterationInfo {
  int depth = 0;
  double value = 0;  // first-player view
  double guess = 0;  // MTD(f) first guess
  std::uint64_t nodes = 0;
  std::uint64_t zero_window_calls = 0;
};

struct SearchResult {
  Action action;
  double value = 0;  // root value, first-player view
  int depth = 0;     // deepest completed iteration
  std::uint64_t nodes = 0;
  std::uint64_t iterations = 0;
  double seconds = 0;
  Resolution resolution;
  std::vector<IterationInfo> trace;
};

/// Fixed-size pool running indexed tasks to completion.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int size() const noexcept { return static_cast<int>(threads_.size()) + 1; }

  /// Calls task(index, worker) for index in [0, count); blocks until done.
  /// The calling thread takes part as worker 0.
  void run(std::size_t count, const std::function<void(std::size_t, int)>& task);

 private:
  void loop(int worker);
  void drain(int worker);

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t, int)>* task_ = nullptr;
  std::size_t count_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t finished_ = 0;
  std::uint64_t generation_ = 0;
  int busy_ = 0;
  bool stop_ = false;
};

/// Child Batching: evaluates all children of a state as one batch. With more
/// than one worker the evaluations run concurrently on per-worker copies of
/// the parent; results always come back in the order of `actions`.
class BatchEvaluator {
 public:
  BatchEvaluator(const Evaluator& eval, int workers = 1);

  /// `resolutions`, when non-empty, receives each child's terminal resolution
  /// (unsolved for live children).
  void evaluate_children(Game& parent, std::span<const Action> actions, std::span<double> out,
                         std::span<Resolution> resolutions = {});
  double evaluate(const Game& s);

  const Evaluator& evaluator() const noexcept { return eval_; }
  int workers() const noexcept { return pool_ ? pool_->size() : 1; }
  std::uint64_t calls() const noexcept { return calls_; }
  std::uint64_t batches() const noexcept { return batches_; }

 private:
  const Evaluator& eval_;
  std::unique_ptr<WorkerPool> pool_;
  std::vector<std::unique_ptr<Game>> scratch_;
  std::uint64_t calls_ = 0;
  std::uint64_t batches_ = 0;
};

}  // namespace gsearch
