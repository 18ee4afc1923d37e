// Copyright 2026 The swapanneal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPANNEAL_SCHEDULE_HPP
#define SWAPANNEAL_SCHEDULE_HPP

/** @file swapanneal/schedule.hpp
    @brief Pairing schedules for networks of 2m systems.

    Every system j carries an integer flow-time index tau_j. A scheduled pair
    {j, j'} (j < j') shares a common tau; the protocol sends j to tau - 1
    (backward/heated branch) and j' to tau + 1 (forward/cooled branch).

    Indices in this header are 0-based; system j here is system j+1 in the
    usual 1-based numbering.
*/

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace swapanneal {

struct Pair {
  std::size_t low = 0;   // takes tau - 1
  std::size_t high = 0;  // takes tau + 1
  bool fresh = false;    // both members reset to the initial state first

  friend bool operator==(const Pair&, const Pair&) = default;
};

enum class ScheduleKind { improved, tournament };

struct Schedule {
  ScheduleKind kind = ScheduleKind::improved;
  std::size_t m = 0;  // 2m systems
  /// tau[step][j] for step in 0..step_star.
  std::vector<std::vector<std::int64_t>> tau;
  /// pairs[step] for step in 0..step_star-1; the set at step_star is empty.
  std::vector<std::vector<Pair>> pairs;
  std::size_t step_star = 0;

  std::size_t systems() const { return 2 * m; }
  const std::vector<std::int64_t>& terminal_tau() const { return tau.back(); }
};

/// Iterative pairing network on 2m systems.
///
/// At each step, scan j upward from the first system. If some later
/// unpaired j' shares tau_j, pair j with the smallest such j'. Then jump to
/// the smallest index above j not yet used in this step's pairs. Pairs at
/// tau = 0 (after step 0) are flagged for fresh replacement. Stop when a step
/// produces no pairs.
inline Schedule build_improved_schedule(std::size_t m) {
  if (m < 1) throw std::invalid_argument("build_improved_schedule: m must be >= 1");
  const std::size_t n = 2 * m;
  const std::size_t step_limit = 10 * m * m;

  Schedule s;
  s.kind = ScheduleKind::improved;
  s.m = m;
  s.tau.emplace_back(n, 0);

  std::vector<char> used(n);
  // systems bucketed by tau (offset by n) in ascending index order
  const std::size_t buckets = 2 * n + 1;
  std::vector<std::size_t> start(buckets + 1), cursor(buckets), order(n);
  const auto bucket = [n](std::int64_t t) { return std::size_t(t + std::int64_t(n)); };

  for (std::size_t step = 0;; ++step) {
    if (step > step_limit)
      throw std::logic_error("build_improved_schedule: no termination within 10 m^2 steps");
    const auto& cur = s.tau.back();
    std::fill(start.begin(), start.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (cur[j] < -std::int64_t(n) || cur[j] > std::int64_t(n))
        throw std::logic_error("build_improved_schedule: tau out of range");
      ++start[bucket(cur[j]) + 1];
    }
    for (std::size_t b = 0; b < buckets; ++b) start[b + 1] += start[b];
    std::copy(start.begin(), start.end() - 1, cursor.begin());
    for (std::size_t j = 0; j < n; ++j) order[cursor[bucket(cur[j])]++] = j;
    std::copy(start.begin(), start.end() - 1, cursor.begin());
    std::fill(used.begin(), used.end(), 0);

    std::vector<Pair> step_pairs;
    std::vector<std::int64_t> next = cur;
    std::size_t j = 0;
    while (j < n) {
      // smallest j' > j with the same tau that is not already paired
      const std::size_t b = bucket(cur[j]);
      auto& pos = cursor[b];
      const std::size_t end = start[b + 1];
      while (pos < end && (order[pos] <= j || used[order[pos]])) ++pos;
      if (pos < end) {
        const std::size_t jp = order[pos];
        used[j] = used[jp] = 1;
        next[j] = cur[j] - 1;
        next[jp] = cur[jp] + 1;
        step_pairs.push_back({j, jp, cur[j] == 0 && step != 0});
      }
      std::size_t k = j + 1;
      while (k < n && used[k]) ++k;
      j = k;
    }
    if (step_pairs.empty()) {
      s.step_star = step;
      break;
    }
    s.pairs.push_back(std::move(step_pairs));
    s.tau.push_back(std::move(next));
  }
  return s;
}

/// Tournament network on 2^n systems. At stage s the surviving forward
/// branches (multiples of 2^s in 1-based numbering) are paired at common
/// tau = s; the higher index of each pair survives at tau = s + 1.
inline Schedule build_tournament_schedule(std::size_t n) {
  if (n < 1) throw std::invalid_argument("build_tournament_schedule: n must be >= 1");
  if (n > 30) throw std::invalid_argument("build_tournament_schedule: n too large");
  const std::size_t systems = std::size_t{1} << n;
  Schedule s;
  s.kind = ScheduleKind::tournament;
  s.m = systems / 2;
  s.tau.emplace_back(systems, 0);
  for (std::size_t stage = 0; stage < n; ++stage) {
    const std::size_t stride = std::size_t{1} << stage;
    std::vector<Pair> step_pairs;
    std::vector<std::int64_t> next = s.tau.back();
    for (std::size_t hi = 2 * stride; hi <= systems; hi += 2 * stride) {
      const std::size_t lo = hi - stride;
      step_pairs.push_back({lo - 1, hi - 1, false});
      next[lo - 1] -= 1;
      next[hi - 1] += 1;
    }
    s.pairs.push_back(std::move(step_pairs));
    s.tau.push_back(std::move(next));
  }
  s.step_star = n;
  return s;
}

/// Terminal profile of the improved network: j - m - 1 for j <= m and
/// j - m above (1-based j).
inline std::vector<std::int64_t> expected_terminal_tau(std::size_t m) {
  std::vector<std::int64_t> out(2 * m);
  const auto mm = static_cast<std::int64_t>(m);
  for (std::int64_t j = 1; j <= 2 * mm; ++j)
    out[std::size_t(j - 1)] = j <= mm ? j - mm - 1 : j - mm;
  return out;
}

/// Empty string when the schedule satisfies its structural invariants,
/// otherwise a description of the first violation.
inline std::string validate(const Schedule& s) {
  const std::size_t n = s.systems();
  if (s.tau.size() != s.step_star + 1 || s.pairs.size() != s.step_star)
    return "tau/pairs length does not match step_star";
  for (auto t : s.tau.front())
    if (t != 0) return "tau does not start at zero";
  for (std::size_t step = 0; step < s.step_star; ++step) {
    const auto& cur = s.tau[step];
    auto expect = cur;
    std::vector<char> seen(n);
    if (s.pairs[step].empty()) return "empty pair set before step_star";
    for (const auto& p : s.pairs[step]) {
      if (p.low >= p.high || p.high >= n) return "bad pair ordering";
      if (seen[p.low] || seen[p.high]) return "pairs overlap";
      seen[p.low] = seen[p.high] = 1;
      if (cur[p.low] != cur[p.high]) return "paired systems differ in tau";
      const bool want_fresh = s.kind == ScheduleKind::improved &&
                              cur[p.low] == 0 && step != 0;
      if (p.fresh != want_fresh) return "fresh flag mismatch";
      expect[p.low] -= 1;
      expect[p.high] += 1;
    }
    if (expect != s.tau[step + 1])
      return "tau update rule violated at step " + std::to_string(step);
  }
  if (s.kind == ScheduleKind::improved &&
      s.terminal_tau() != expected_terminal_tau(s.m))
    return "terminal profile differs from the closed form";
  return {};
}

inline nlohmann::json to_json(const Schedule& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& step : s.pairs) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& p : step)
      row.push_back({{"j", p.low + 1}, {"jp", p.high + 1}, {"fresh", p.fresh}});
    pairs.push_back(std::move(row));
  }
  return {{"kind", s.kind == ScheduleKind::improved ? "improved" : "tournament"},
          {"m", s.m},
          {"systems", s.systems()},
          {"step_star", s.step_star},
          {"tau", s.tau},
          {"pairs", std::move(pairs)}};
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  s.kind = j.at("kind").get<std::string>() == "tournament" ? ScheduleKind::tournament
                                                          : ScheduleKind::improved;
  s.m = j.at("m").get<std::size_t>();
  s.step_star = j.at("step_star").get<std::size_t>();
  s.tau = j.at("tau").get<std::vector<std::vector<std::int64_t>>>();
  for (const auto& row : j.at("pairs")) {
    std::vector<Pair> step;
    for (const auto& p : row)
      step.push_back({p.at("j").get<std::size_t>() - 1,
                      p.at("jp").get<std::size_t>() - 1, p.at("fresh").get<bool>()});
    s.pairs.push_back(std::move(step));
  }
  return s;
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_SCHEDULE_HPP
