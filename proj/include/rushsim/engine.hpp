#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rushsim {

/// Simulation seconds. Real-valued, never quantized.
using SimTime = double;

using EventHandle = std::uint64_t;

template <class Payload>
struct SimEvent {
  SimTime fire_at;
  std::uint64_t sequence;
  Payload payload;
};

/// Discrete-event core: a clock and a queue ordered by (fire_at, sequence).
/// Equal timestamps are dequeued in insertion order, which gives a total
/// order over every run.
template <class Payload>
class Scheduler {
 public:
  using Event = SimEvent<Payload>;

  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t pending() const { return heap_.size(); }

  /// Throws std::logic_error when `at` lies before the clock or is not finite.
  EventHandle schedule(SimTime at, Payload payload) {
    if (!std::isfinite(at) || at < now_) {
      std::ostringstream msg;
      msg << "schedule: event at t=" << at << " is before clock t=" << now_;
      throw std::logic_error(msg.str());
    }
    const std::uint64_t seq = next_sequence_++;
    heap_.push_back(Event{at, seq, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    return seq;
  }

  /// Processes every event with fire_at <= t_end, then advances the clock to
  /// t_end. The handler may schedule further events.
  template <class Handler>
  std::size_t run_until(SimTime t_end, Handler&& handler) {
    if (!std::isfinite(t_end) || t_end < now_) {
      throw std::logic_error("run_until: horizon lies before the clock");
    }
    std::size_t processed = 0;
    while (!heap_.empty() && heap_.front().fire_at <= t_end) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      Event ev = std::move(heap_.back());
      heap_.pop_back();
      now_ = ev.fire_at;
      handler(static_cast<const Event&>(ev));
      ++processed;
    }
    now_ = t_end;
    return processed;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) {
        return a.fire_at > b.fire_at;
      }
      return a.sequence > b.sequence;
    }
  };

  SimTime now_ = 0.0;
  std::uint64_t next_sequence_ = 0;
  std::vector<Event> heap_;
};

}  // namespace rushsim
