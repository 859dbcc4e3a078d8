#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <vector>

#include "vgw/core/time.hpp"

namespace vgw::sim {

using EventId = std::uint64_t;

/// Single-threaded discrete-event loop over virtual time.
///
/// Events run in (time, insertion order). The clock only moves forward when
/// the next event is popped, so every timestamp observed inside a handler
/// derives from this loop. `post*` may be called from other threads; `run*`
/// must be driven by one thread at a time.
///
/// A positive `compression` paces the loop against the wall clock: one wall
/// second covers `compression` virtual seconds. Zero runs as fast as possible.
class EventLoop {
 public:
  using Handler = std::function<void()>;

  explicit EventLoop(double compression = 0.0) : compression_(compression) {}

  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;

  SimTime now() const {
    std::lock_guard lock(mutex_);
    return now_;
  }

  double compression() const { return compression_; }
  void set_compression(double c) { compression_ = c; }

  EventId post_at(SimTime when, Handler fn) {
    std::lock_guard lock(mutex_);
    if (when < now_) throw std::logic_error("event scheduled in the virtual past");
    const EventId id = next_id_++;
    queue_.push(Entry{when, id, std::move(fn)});
    live_.insert(id);
    return id;
  }

  EventId post_after(SimDuration delay, Handler fn) {
    if (delay < SimDuration::zero()) throw std::logic_error("negative delay");
    SimTime when;
    {
      std::lock_guard lock(mutex_);
      when = now_ + delay;
    }
    return post_at(when, std::move(fn));
  }

  EventId post(Handler fn) { return post_after(SimDuration::zero(), std::move(fn)); }

  void cancel(EventId id) {
    std::lock_guard lock(mutex_);
    live_.erase(id);
  }

  bool idle() const {
    std::lock_guard lock(mutex_);
    return live_.empty();
  }

  std::size_t pending() const {
    std::lock_guard lock(mutex_);
    return live_.size();
  }

  std::uint64_t executed() const { return executed_; }

  /// Runs until no events remain. Returns the number of handlers executed.
  std::uint64_t run() { return run_until(SimTime::max()); }

  /// Runs every event with timestamp <= `limit`, then advances the clock to
  /// `limit` (when finite and later than the last event).
  std::uint64_t run_until(SimTime limit) {
    const auto wall_start = std::chrono::steady_clock::now();
    const SimTime virt_start = now();
    std::uint64_t count = 0;
    for (;;) {
      Entry next;
      {
        std::lock_guard lock(mutex_);
        if (queue_.empty() || queue_.top().when > limit) break;
        next = queue_.top();
        queue_.pop();
        if (live_.erase(next.id) == 0) continue;
      }
      if (compression_ > 0.0) {
        const auto virt_elapsed = std::chrono::duration<double>(next.when - virt_start);
        std::this_thread::sleep_until(
            wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             virt_elapsed / compression_));
      }
      {
        std::lock_guard lock(mutex_);
        now_ = next.when;
      }
      next.fn();
      ++count;
      ++executed_;
    }
    if (limit != SimTime::max()) {
      std::lock_guard lock(mutex_);
      if (limit > now_) now_ = limit;
    }
    return count;
  }

  std::uint64_t run_for(SimDuration span) { return run_until(now() + span); }

 private:
  struct Entry {
    SimTime when{};
    EventId id = 0;
    Handler fn;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.when != b.when) return a.when > b.when;
      return a.id > b.id;
    }
  };

  mutable std::mutex mutex_;
  SimTime now_ = kEpoch;
  EventId next_id_ = 1;
  std::uint64_t executed_ = 0;
  double compression_;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<EventId> live_;
};

}  // namespace vgw::sim
