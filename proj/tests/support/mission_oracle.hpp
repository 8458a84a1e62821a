#pragma once

// Brute-force references for mission decisions.

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mobman/mission.hpp"

namespace oracle {

struct Choice {
  mobman::ActionKind kind;
  int station;
  std::string object;
  double cost;
};

inline int count_of(const mobman::ObjectBag& bag, const std::string& k) {
  return static_cast<int>(bag.count(k));
}

/// Every legal action from `st`, listed directly from the rules: deliver any
/// carried kind to any reachable station that has fewer than it wants; fetch
/// any kind a station has more of than it wants, if the robot has room and
/// some other station wants it and is reachable from there.
inline std::vector<Choice> legal_actions(const mobman::MissionState& st,
                                         const mobman::TravelCost& travel) {
  std::vector<Choice> out;
  std::set<std::string> carried;
  for (const auto& c : st.inventory) {
    carried.insert(c.kind);
  }
  for (const auto& k : carried) {
    for (const auto& s : st.stations) {
      if (count_of(s.desired, k) > count_of(s.present, k)) {
        if (const auto c = travel(st.robot_cell, s.approach)) {
          out.push_back({mobman::ActionKind::Deliver, s.id, k, *c});
        }
      }
    }
  }
  if (static_cast<int>(st.inventory.size()) < st.capacity) {
    for (const auto& s : st.stations) {
      const std::set<std::string> kinds(s.present.begin(), s.present.end());
      for (const auto& k : kinds) {
        if (count_of(s.present, k) <= count_of(s.desired, k)) {
          continue;
        }
        bool wanted = false;
        for (const auto& o : st.stations) {
          wanted = wanted || (o.id != s.id && count_of(o.desired, k) > count_of(o.present, k) &&
                              travel(s.approach, o.approach).has_value());
        }
        const auto c = travel(st.robot_cell, s.approach);
        if (wanted && c) {
          out.push_back({mobman::ActionKind::Fetch, s.id, k, *c});
        }
      }
    }
  }
  return out;
}

/// The immediate-cost minimizer with the documented tie order.
inline std::optional<Choice> best_immediate(const mobman::MissionState& st,
                                            const mobman::TravelCost& travel) {
  const auto all = legal_actions(st, travel);
  if (all.empty()) {
    return std::nullopt;
  }
  auto key = [](const Choice& c) {
    return std::make_tuple(c.cost, c.kind == mobman::ActionKind::Deliver ? 0 : 1, c.station,
                           c.object);
  };
  return *std::min_element(all.begin(), all.end(),
                           [&](const Choice& a, const Choice& b) { return key(a) < key(b); });
}

/// Applies an action as if travel and manipulation succeeded.
inline mobman::MissionState apply(mobman::MissionState st, const Choice& c) {
  mobman::Station& s = st.station(c.station);
  st.robot_cell = s.approach;
  if (c.kind == mobman::ActionKind::Fetch) {
    s.present.erase(s.present.find(c.object));
    st.inventory.push_back({c.object, s.id});
  } else {
    const auto it = std::find_if(st.inventory.begin(), st.inventory.end(),
                                 [&](const auto& x) { return x.kind == c.object; });
    st.inventory.erase(it);
    s.present.insert(c.object);
  }
  return st;
}

inline bool satisfied(const mobman::MissionState& st) {
  if (!st.inventory.empty()) {
    return false;
  }
  for (const auto& s : st.stations) {
    if (s.present != s.desired) {
      return false;
    }
  }
  return true;
}

/// Total travel of every complete action order, explored exhaustively.
inline void all_mission_totals(const mobman::MissionState& st, const mobman::TravelCost& travel,
                               double so_far, int depth, std::vector<double>& totals) {
  if (satisfied(st)) {
    totals.push_back(so_far);
    return;
  }
  if (depth == 0) {
    return;
  }
  for (const Choice& c : legal_actions(st, travel)) {
    all_mission_totals(apply(st, c), travel, so_far + c.cost, depth - 1, totals);
  }
}

}  // namespace oracle
