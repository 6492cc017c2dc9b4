#include "mlstream/time_set.hpp"

#include <algorithm>
#include <string>

#include "mlstream/error.hpp"

namespace mls {
namespace {

void check_resolution(const TimeSet& a, const TimeSet& b) {
  if (a.resolution() != b.resolution()) {
    throw Error(Errc::ResolutionMismatch,
                std::to_string(a.resolution().ticks_per_second) + " vs " +
                    std::to_string(b.resolution().ticks_per_second) + " ticks/s");
  }
}

}  // namespace

TimeInterval make_interval(Tick start, Tick end) {
  if (end < start) {
    throw Error(Errc::InvalidInterval,
                "[" + std::to_string(start) + "," + std::to_string(end) + "]");
  }
  return {start, end};
}

TimeSet::TimeSet(std::initializer_list<TimeInterval> intervals, Resolution resolution)
    : TimeSet(normalize(std::vector<TimeInterval>(intervals), resolution)) {}

TimeSet TimeSet::normalize(std::vector<TimeInterval> intervals, Resolution resolution) {
  for (const auto& iv : intervals) make_interval(iv.start, iv.end);
  std::sort(intervals.begin(), intervals.end());

  TimeSet out(resolution);
  out.intervals_.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (!out.intervals_.empty() && iv.start <= out.intervals_.back().end) {
      out.intervals_.back().end = std::max(out.intervals_.back().end, iv.end);
    } else {
      out.intervals_.push_back(iv);
    }
  }
  return out;
}

TimeSet TimeSet::single(TimeInterval interval, Resolution resolution) {
  TimeSet out(resolution);
  out.intervals_.push_back(make_interval(interval.start, interval.end));
  return out;
}

Tick TimeSet::measure() const noexcept {
  Tick total = 0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool TimeSet::contains(Tick t) const noexcept {
  // first interval whose end >= t
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), t,
                             [](const TimeInterval& iv, Tick v) { return iv.end < v; });
  return it != intervals_.end() && it->start <= t;
}

bool TimeSet::is_subset_of(const TimeSet& other) const {
  check_resolution(*this, other);
  // In normal form every interval of *this must sit inside a single interval
  // of other, since other's intervals are separated by gaps.
  auto it = other.intervals_.begin();
  for (const auto& iv : intervals_) {
    while (it != other.intervals_.end() && it->end < iv.start) ++it;
    if (it == other.intervals_.end() || !it->contains(iv)) return false;
  }
  return true;
}

TimeInterval TimeSet::hull() const {
  if (intervals_.empty()) return {};
  return {intervals_.front().start, intervals_.back().end};
}

TimeSet TimeSet::clipped(TimeInterval window) const {
  TimeSet out(resolution_);
  for (const auto& iv : intervals_) {
    Tick s = std::max(iv.start, window.start);
    Tick e = std::min(iv.end, window.end);
    if (s <= e) out.intervals_.push_back({s, e});
  }
  return out;
}

TimeSet TimeSet::scaled(Tick factor) const {
  if (factor <= 0) throw Error(Errc::InvalidArgument, "scale factor must be positive");
  TimeSet out(resolution_);
  out.intervals_.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.intervals_.push_back({iv.start * factor, iv.end * factor});
  return out;
}

TimeSet unite(const TimeSet& a, const TimeSet& b) {
  check_resolution(a, b);
  std::vector<TimeInterval> all;
  all.reserve(a.size() + b.size());
  std::merge(a.intervals().begin(), a.intervals().end(), b.intervals().begin(),
             b.intervals().end(), std::back_inserter(all));
  return TimeSet::normalize(std::move(all), a.resolution());
}

TimeSet intersect(const TimeSet& a, const TimeSet& b) {
  check_resolution(a, b);
  std::vector<TimeInterval> out;
  auto ia = a.intervals().begin();
  auto ib = b.intervals().begin();
  while (ia != a.intervals().end() && ib != b.intervals().end()) {
    Tick s = std::max(ia->start, ib->start);
    Tick e = std::min(ia->end, ib->end);
    if (s <= e) out.push_back({s, e});
    if (ia->end < ib->end) {
      ++ia;
    } else {
      ++ib;
    }
  }
  // Pieces come out sorted and disjoint; normalize is a cheap no-op merge.
  return TimeSet::normalize(std::move(out), a.resolution());
}

TimeSet subtract(const TimeSet& a, const TimeSet& b) {
  check_resolution(a, b);
  std::vector<TimeInterval> out;
  auto ib = b.intervals().begin();
  for (const auto& iv : a.intervals()) {
    Tick cursor = iv.start;
    bool open = true;
    while (ib != b.intervals().end() && ib->end < iv.start) ++ib;
    for (auto it = ib; it != b.intervals().end() && it->start <= iv.end; ++it) {
      if (it->start > cursor) out.push_back({cursor, it->start});
      if (it->end >= iv.end) {
        open = false;
        break;
      }
      cursor = std::max(cursor, it->end);
    }
    if (open && (cursor < iv.end || (cursor == iv.start && iv.start == iv.end &&
                                      !b.contains(cursor)))) {
      out.push_back({cursor, iv.end});
    }
  }
  return TimeSet::normalize(std::move(out), a.resolution());
}

}  // namespace mls
