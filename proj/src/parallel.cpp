#include "relaxflow/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

namespace relaxflow {

double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

namespace {

// Shared state of one parallel_for invocation.  Workers that wake up late
// (or spuriously) drain a stale task harmlessly: its chunk counter is
// already exhausted.
struct TaskState {
  const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
  std::size_t n = 0;
  std::size_t nchunks = 0;
  std::size_t chunk = 0;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex m;
  std::condition_variable cv;
  bool complete = false;
};

void drain(const std::shared_ptr<TaskState>& t) {
  std::size_t i;
  while ((i = t->next.fetch_add(1)) < t->nchunks) {
    const std::size_t b = i * t->chunk;
    const std::size_t e = std::min(t->n, b + t->chunk);
    if (b < e) (*t->fn)(b, e);
    if (t->done.fetch_add(1) + 1 == t->nchunks) {
      std::lock_guard<std::mutex> lock(t->m);
      t->complete = true;
      t->cv.notify_all();
    }
  }
}

// Lazily grown pool of persistent workers.  Spawning threads per pass is far
// too slow for the per-step loops of the solvers.
class Pool {
 public:
  static Pool& instance() {
    static Pool pool;
    return pool;
  }

  void run(const std::function<void(std::size_t, std::size_t)>& fn,
           std::size_t n, std::size_t nchunks) {
    auto t = std::make_shared<TaskState>();
    t->fn = &fn;
    t->n = n;
    t->nchunks = nchunks;
    t->chunk = (n + nchunks - 1) / nchunks;
    {
      std::lock_guard<std::mutex> lock(m_);
      ensure_workers(nchunks - 1);
      task_ = t;
      ++gen_;
    }
    cv_.notify_all();
    drain(t);
    std::unique_lock<std::mutex> lock(t->m);
    t->cv.wait(lock, [&] { return t->complete; });
  }

 private:
  Pool() = default;
  ~Pool() {
    {
      std::lock_guard<std::mutex> lock(m_);
      stop_ = true;
    }
    cv_.notify_all();
    for (std::thread& w : workers_) w.join();
  }

  void ensure_workers(std::size_t count) {  // caller holds m_
    while (workers_.size() < count)
      workers_.emplace_back([this] { worker_loop(); });
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      std::shared_ptr<TaskState> t;
      {
        std::unique_lock<std::mutex> lock(m_);
        cv_.wait(lock, [&] { return stop_ || gen_ != seen; });
        if (stop_) return;
        seen = gen_;
        t = task_;
      }
      drain(t);
    }
  }

  std::mutex m_;
  std::condition_variable cv_;
  std::vector<std::thread> workers_;
  std::shared_ptr<TaskState> task_;
  std::uint64_t gen_ = 0;
  bool stop_ = false;
};

}  // namespace

void parallel_for(std::size_t n, int threads, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (grain > 0) workers = std::min(workers, (n + grain - 1) / grain);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  Pool::instance().run(fn, n, workers);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  parallel_for(n, threads, 1, fn);
}

}  // namespace relaxflow
