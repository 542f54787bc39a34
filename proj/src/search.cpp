#include "gsearch/search.hpp"

#include "gsearch/error.hpp"

namespace gsearch {

void SearchBudget::validate() const {
  if (!seconds && !max_depth && !max_nodes) throw ConfigError("search budget has no bound");
  if (seconds && *seconds < 0) throw ConfigError("negative time budget");
  if (max_depth && *max_depth < 1) throw ConfigError("max depth must be at least 1");
}

BudgetTracker::BudgetTracker(const SearchBudget& budget, int check_interval)
    : budget_(budget), check_interval_(check_interval), start_(Clock::now()) {
  if (check_interval_ < 1) check_interval_ = 1;
}

bool BudgetTracker::tick() {
  ++nodes_;
  if (!armed_) return false;
  if (budget_.max_nodes && nodes_ > *budget_.max_nodes) return true;
  if (budget_.seconds && !time_up_ && nodes_ % static_cast<std::uint64_t>(check_interval_) == 0)
    time_up_ = elapsed() >= *budget_.seconds;
  return time_up_;
}

bool BudgetTracker::exhausted() const {
  if (budget_.max_nodes && nodes_ >= *budget_.max_nodes) return true;
  return time_up_ || (budget_.seconds && elapsed() >= *budget_.seconds);
}

double BudgetTracker::elapsed() const {
  return std::chrono::duration<double>(Clock::now() - start_).count();
}

// ---------------------------------------------------------------- WorkerPool

WorkerPool::WorkerPool(int workers) {
  for (int w = 1; w < workers; ++w) threads_.emplace_back([this, w] { loop(w); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::drain(int worker) {
  for (;;) {
    const std::size_t i = next_.fetch_add(1);
    if (i >= count_) break;
    (*task_)(i, worker);
  }
}

void WorkerPool::loop(int worker) {
  std::uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      ++busy_;
    }
    drain(worker);
    {
      std::lock_guard lock(mutex_);
      --busy_;
    }
    done_.notify_all();
  }
}

void WorkerPool::run(std::size_t count, const std::function<void(std::size_t, int)>& task) {
  if (threads_.empty() || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i, 0);
    return;
  }
  {
    std::unique_lock lock(mutex_);
    // A worker that woke late for the previous batch must leave first.
    done_.wait(lock, [&] { return busy_ == 0; });
    task_ = &task;
    count_ = count;
    next_ = 0;
    ++generation_;
  }
  wake_.notify_all();
  drain(0);
  std::unique_lock lock(mutex_);
  done_.wait(lock, [&] { return busy_ == 0 && next_ >= count_; });
  task_ = nullptr;
}

// ---------------------------------------------------------------- BatchEvaluator

BatchEvaluator::BatchEvaluator(const Evaluator& eval, int workers) : eval_(eval) {
  if (workers > 1) {
    pool_ = std::make_unique<WorkerPool>(workers);
    scratch_.resize(static_cast<std::size_t>(workers));
  }
}

double BatchEvaluator::evaluate(const Game& s) {
  ++calls_;
  return eval_(s);
}

void BatchEvaluator::evaluate_children(Game& parent, std::span<const Action> actions,
                                       std::span<double> out, std::span<Resolution> resolutions) {
  const bool want_res = !resolutions.empty();
  auto resolve = [](const Game& g) {
    return g.ended() ? Resolution::solved(g.terminal_value()) : Resolution::unsolved();
  };
  ++batches_;
  calls_ += actions.size();
  if (!pool_ || actions.size() <= 1) {
    for (std::size_t i = 0; i < actions.size(); ++i) {
      parent.apply(actions[i]);
      out[i] = eval_(parent);
      if (want_res) resolutions[i] = resolve(parent);
      parent.undo();
    }
    return;
  }
  for (auto& g : scratch_) g.reset();
  pool_->run(actions.size(), [&](std::size_t i, int worker) {
    auto& local = scratch_[static_cast<std::size_t>(worker)];
    if (!local) local = parent.clone();
    local->apply(actions[i]);
    out[i] = eval_(*local);
    if (want_res) resolutions[i] = resolve(*local);
    local->undo();
  });
}

}  // namespace gsearch
