#pragma once

#include <algorithm>
#include <vector>

namespace betashrink {

// half-open [lo, hi)
template <class T>
struct Interval {
  T lo;
  T hi;
  T length() const { return hi > lo ? T(hi - lo) : T(0); }
};

template <class T>
std::vector<Interval<T>> merge_intervals(std::vector<Interval<T>> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](const Interval<T>& i) { return !(i.lo < i.hi); }),
          v.end());
  std::sort(v.begin(), v.end(), [](const Interval<T>& a, const Interval<T>& b) { return a.lo < b.lo; });
  std::vector<Interval<T>> out;
  for (auto& i : v) {
    if (!out.empty() && i.lo <= out.back().hi) {
      if (i.hi > out.back().hi) out.back().hi = i.hi;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

template <class T>
T merged_measure(const std::vector<Interval<T>>& merged) {
  T total = 0;
  for (const auto& i : merged) total += i.length();
  return total;
}

template <class T>
T union_measure(std::vector<Interval<T>> v) {
  return merged_measure(merge_intervals(std::move(v)));
}

// both inputs merged (sorted, disjoint)
template <class T>
std::vector<Interval<T>> intersect_merged(const std::vector<Interval<T>>& a,
                                          const std::vector<Interval<T>>& b) {
  std::vector<Interval<T>> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const T lo = std::max(a[i].lo, b[j].lo);
    const T hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

template <class T>
T overlap(const Interval<T>& a, const Interval<T>& b) {
  const T lo = std::max(a.lo, b.lo);
  const T hi = std::min(a.hi, b.hi);
  return hi > lo ? T(hi - lo) : T(0);
}

}  // namespace betashrink
