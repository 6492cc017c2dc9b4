#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mls {

/// Time is counted in integer ticks; a graph fixes how many ticks make one
/// second. The 64-bit range covers well beyond +/-1e15 ticks.
using Tick = std::int64_t;

struct Resolution {
  std::int64_t ticks_per_second = 1;

  friend bool operator==(Resolution, Resolution) = default;
};

/// Closed interval [start, end]. start == end is an instantaneous interval.
struct TimeInterval {
  Tick start = 0;
  Tick end = 0;

  constexpr Tick length() const noexcept { return end - start; }
  constexpr bool contains(Tick t) const noexcept { return start <= t && t <= end; }
  constexpr bool contains(const TimeInterval& o) const noexcept {
    return start <= o.start && o.end <= end;
  }

  friend constexpr auto operator<=>(const TimeInterval&, const TimeInterval&) = default;
};

/// Throws Errc::InvalidInterval when end < start.
TimeInterval make_interval(Tick start, Tick end);

/// A finite union of closed intervals kept in normal form: sorted, pairwise
/// disjoint and non-abutting. Values are immutable once built.
class TimeSet {
 public:
  TimeSet() = default;
  explicit TimeSet(Resolution resolution) : resolution_(resolution) {}
  TimeSet(std::initializer_list<TimeInterval> intervals, Resolution resolution = {});

  /// Sorts and merges overlapping or abutting intervals.
  static TimeSet normalize(std::vector<TimeInterval> intervals, Resolution resolution = {});
  static TimeSet single(TimeInterval interval, Resolution resolution = {});

  std::span<const TimeInterval> intervals() const noexcept { return intervals_; }
  Resolution resolution() const noexcept { return resolution_; }
  bool empty() const noexcept { return intervals_.empty(); }
  std::size_t size() const noexcept { return intervals_.size(); }

  /// Total length; instantaneous intervals contribute nothing.
  Tick measure() const noexcept;
  bool contains(Tick t) const noexcept;
  bool is_subset_of(const TimeSet& other) const;

  /// Smallest interval covering the set; only meaningful when non-empty.
  TimeInterval hull() const;

  TimeSet clipped(TimeInterval window) const;
  TimeSet scaled(Tick factor) const;

  friend bool operator==(const TimeSet&, const TimeSet&) = default;

 private:
  std::vector<TimeInterval> intervals_;
  Resolution resolution_{};
};

TimeSet unite(const TimeSet& a, const TimeSet& b);
TimeSet intersect(const TimeSet& a, const TimeSet& b);

/// Closure of a \ b. Used to report uncovered time in closure violations.
TimeSet subtract(const TimeSet& a, const TimeSet& b);

inline Tick measure(const TimeSet& a) noexcept { return a.measure(); }
inline bool contains(const TimeSet& a, Tick t) noexcept { return a.contains(t); }

}  // namespace mls
