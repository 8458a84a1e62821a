#include "mobman/mission.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "mobman/error.hpp"

namespace mobman {

const Station& MissionState::station(int id) const {
  for (const auto& s : stations) {
    if (s.id == id) {
      return s;
    }
  }
  throw std::out_of_range("unknown station " + std::to_string(id));
}

Station& MissionState::station(int id) {
  return const_cast<Station&>(std::as_const(*this).station(id));
}

int surplus(const Station& s, const ObjectKind& kind) {
  const auto have = static_cast<int>(s.present.count(kind));
  const auto want = static_cast<int>(s.desired.count(kind));
  return std::max(0, have - want);
}

int deficit(const Station& s, const ObjectKind& kind) {
  const auto have = static_cast<int>(s.present.count(kind));
  const auto want = static_cast<int>(s.desired.count(kind));
  return std::max(0, want - have);
}

Assessment assess(const MissionState& state) {
  if (!state.inventory.empty()) {
    return Assessment::NotDesired;
  }
  for (const auto& s : state.stations) {
    if (s.present != s.desired) {
      return Assessment::NotDesired;
    }
  }
  return Assessment::Desired;
}

namespace {

struct Target {
  int station;
  double cost;
};

// Cheapest reachable station lacking `kind`, skipping `exclude`.
std::optional<Target> best_receiver(const MissionState& state, const ObjectKind& kind,
                                    const TravelCost& travel_cost, int exclude) {
  std::optional<Target> best;
  for (const auto& s : state.stations) {
    if (s.id == exclude || deficit(s, kind) == 0) {
      continue;
    }
    const auto cost = travel_cost(state.robot_cell, s.approach);
    if (!cost) {
      continue;
    }
    if (!best || *cost < best->cost || (*cost == best->cost && s.id < best->station)) {
      best = Target{s.id, *cost};
    }
  }
  return best;
}

bool receiver_exists(const MissionState& state, const ObjectKind& kind, int exclude,
                     const TravelCost& travel_cost, Cell from) {
  for (const auto& s : state.stations) {
    if (s.id != exclude && deficit(s, kind) > 0 && travel_cost(from, s.approach)) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<ActionCandidate> enumerate_actions(const MissionState& state,
                                               const TravelCost& travel_cost) {
  std::vector<ActionCandidate> out;
  for (const auto& item : state.inventory) {
    if (const auto target = best_receiver(state, item.kind, travel_cost, -1)) {
      out.push_back({ActionKind::Deliver, target->station, item.kind, target->cost});
    }
  }
  if (static_cast<int>(state.inventory.size()) < state.capacity) {
    for (const auto& s : state.stations) {
      // Distinct kinds in multiset order, one candidate per surplus unit.
      for (auto it = s.present.begin(); it != s.present.end(); it = s.present.upper_bound(*it)) {
        const int extra = surplus(s, *it);
        if (extra == 0) {
          continue;
        }
        const auto cost = travel_cost(state.robot_cell, s.approach);
        if (!cost || !receiver_exists(state, *it, s.id, travel_cost, s.approach)) {
          continue;
        }
        for (int n = 0; n < extra; ++n) {
          out.push_back({ActionKind::Fetch, s.id, *it, *cost});
        }
      }
    }
  }
  if (out.empty()) {
    throw NoFeasibleAction("no feasible fetch or deliver action");
  }
  return out;
}

ActionCandidate choose_action(std::span<const ActionCandidate> candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("choose_action: no candidates");
  }
  auto rank = [](const ActionCandidate& c) {
    return std::make_tuple(c.cost, c.kind == ActionKind::Deliver ? 0 : 1, c.station,
                           std::cref(c.object));
  };
  return *std::min_element(candidates.begin(), candidates.end(),
                           [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
}

Decision mission_decide(const MissionState& state, const TravelCost& travel_cost) {
  if (state.phase.kind != PhaseKind::Assess) {
    throw IllegalEvent(std::string("mission_decide: phase is ") + to_string(state.phase.kind));
  }
  Decision d{state, std::nullopt, {}};
  if (assess(state) == Assessment::Desired) {
    d.state.phase = {PhaseKind::Done, -1, {}};
    return d;
  }
  d.candidates = enumerate_actions(state, travel_cost);
  const ActionCandidate chosen = choose_action(d.candidates);
  d.action = chosen;
  d.state.phase = {chosen.kind == ActionKind::Fetch ? PhaseKind::GoFetch : PhaseKind::GoDeliver,
                   chosen.station, chosen.object};
  return d;
}

MissionState mission_step(const MissionState& state, MissionEvent event) {
  MissionState next = state;
  const PhaseKind kind = state.phase.kind;
  auto illegal = [&]() {
    return IllegalEvent(std::string("event ") + to_string(event) + " is illegal in phase " +
                        to_string(kind));
  };

  switch (event) {
    case MissionEvent::ArrivedAtStation:
      if (kind == PhaseKind::GoFetch) {
        next.phase.kind = PhaseKind::AwaitPick;
      } else if (kind == PhaseKind::GoDeliver) {
        next.phase.kind = PhaseKind::AwaitPlace;
      } else {
        throw illegal();
      }
      next.robot_cell = state.station(state.phase.station).approach;
      return next;

    case MissionEvent::PickDone: {
      if (kind != PhaseKind::AwaitPick) {
        throw illegal();
      }
      if (static_cast<int>(state.inventory.size()) >= state.capacity) {
        throw illegal();
      }
      Station& s = next.station(state.phase.station);
      const auto it = s.present.find(state.phase.object);
      if (it == s.present.end()) {
        throw illegal();
      }
      s.present.erase(it);
      next.inventory.push_back({state.phase.object, s.id});
      next.phase = {PhaseKind::Assess, -1, {}};
      return next;
    }

    case MissionEvent::PlaceDone: {
      if (kind != PhaseKind::AwaitPlace) {
        throw illegal();
      }
      const auto it = std::find_if(next.inventory.begin(), next.inventory.end(),
                                   [&](const auto& c) { return c.kind == state.phase.object; });
      if (it == next.inventory.end()) {
        throw illegal();
      }
      next.inventory.erase(it);
      next.station(state.phase.station).present.insert(state.phase.object);
      next.phase = {PhaseKind::Assess, -1, {}};
      return next;
    }

    case MissionEvent::Replanned:
      if (kind != PhaseKind::GoFetch && kind != PhaseKind::GoDeliver) {
        throw illegal();
      }
      return next;

    case MissionEvent::Aborted:
      if (kind == PhaseKind::Assess || kind == PhaseKind::Done) {
        throw illegal();
      }
      next.phase = {PhaseKind::Assess, -1, {}};
      return next;
  }
  throw illegal();
}

TravelCost astar_travel_cost(const GridMap& map, const DistanceField& field,
                             AStarParams params) {
  return [&map, &field, params](Cell from, Cell to) -> std::optional<double> {
    if (from == to) {
      return 0.0;
    }
    try {
      return astar(map, field, from, to, params).total_cost;
    } catch (const NoPath&) {
      return std::nullopt;
    } catch (const InvalidEndpoint&) {
      return std::nullopt;
    }
  };
}

const char* to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::Assess:
      return "Assess";
    case PhaseKind::GoFetch:
      return "GoFetch";
    case PhaseKind::AwaitPick:
      return "AwaitPick";
    case PhaseKind::GoDeliver:
      return "GoDeliver";
    case PhaseKind::AwaitPlace:
      return "AwaitPlace";
    case PhaseKind::Done:
      return "Done";
  }
  return "?";
}

const char* to_string(ActionKind kind) { return kind == ActionKind::Fetch ? "Fetch" : "Deliver"; }

const char* to_string(MissionEvent event) {
  switch (event) {
    case MissionEvent::ArrivedAtStation:
      return "ArrivedAtStation";
    case MissionEvent::PickDone:
      return "PickDone";
    case MissionEvent::PlaceDone:
      return "PlaceDone";
    case MissionEvent::Replanned:
      return "Replanned";
    case MissionEvent::Aborted:
      return "Aborted";
  }
  return "?";
}

std::multiset<ObjectKind> all_objects(const MissionState& state) {
  std::multiset<ObjectKind> out;
  for (const auto& s : state.stations) {
    out.insert(s.present.begin(), s.present.end());
  }
  for (const auto& c : state.inventory) {
    out.insert(c.kind);
  }
  return out;
}

int outstanding_work(const MissionState& state) {
  int n = static_cast<int>(state.inventory.size());
  for (const auto& s : state.stations) {
    for (auto it = s.present.begin(); it != s.present.end(); it = s.present.upper_bound(*it)) {
      n += surplus(s, *it);
    }
  }
  return n;
}

}  // namespace mobman
