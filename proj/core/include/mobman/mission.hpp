#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mobman/grid_map.hpp"
#include "mobman/planning.hpp"

namespace mobman {

using ObjectKind = std::string;
using ObjectBag = std::multiset<ObjectKind>;

/// A service area. The robot parks on `approach` to work on `location`.
struct Station {
  int id = 0;
  Cell location;
  Cell approach;
  ObjectBag present;
  ObjectBag desired;

  friend bool operator==(const Station&, const Station&) = default;
};

struct CarriedObject {
  ObjectKind kind;
  int source_station = 0;

  friend bool operator==(const CarriedObject&, const CarriedObject&) = default;
};

enum class PhaseKind { Assess, GoFetch, AwaitPick, GoDeliver, AwaitPlace, Done };

struct MissionPhase {
  PhaseKind kind = PhaseKind::Assess;
  int station = -1;
  ObjectKind object;

  friend bool operator==(const MissionPhase&, const MissionPhase&) = default;
};

struct MissionState {
  std::vector<Station> stations;
  std::vector<CarriedObject> inventory;
  int capacity = 1;
  MissionPhase phase;
  Cell robot_cell;

  const Station& station(int id) const;
  Station& station(int id);

  friend bool operator==(const MissionState&, const MissionState&) = default;
};

enum class ActionKind { Fetch, Deliver };

struct ActionCandidate {
  ActionKind kind = ActionKind::Fetch;
  int station = 0;
  ObjectKind object;
  double cost = 0.0;  // travel cost from robot_cell to the station's approach cell

  friend bool operator==(const ActionCandidate&, const ActionCandidate&) = default;
};

enum class Assessment { Desired, NotDesired };

enum class MissionEvent { ArrivedAtStation, PickDone, PlaceDone, Replanned, Aborted };

/// Travel cost between two cells, nullopt when unreachable.
using TravelCost = std::function<std::optional<double>(Cell from, Cell to)>;

/// Desired iff every station holds exactly its desired objects and the robot
/// carries nothing.
Assessment assess(const MissionState& state);

/// Objects of `kind` at `s` beyond what it should hold (>= 0).
int surplus(const Station& s, const ObjectKind& kind);
/// Objects of `kind` that `s` still lacks (>= 0).
int deficit(const Station& s, const ObjectKind& kind);

/// One Deliver per carried object, aimed at the cheapest reachable station
/// lacking that kind; one Fetch per surplus object whose kind some other
/// reachable station lacks, only while below capacity. Throws
/// NoFeasibleAction when nothing qualifies.
std::vector<ActionCandidate> enumerate_actions(const MissionState& state,
                                               const TravelCost& travel_cost);

/// Minimum cost; ties go Deliver before Fetch, then lower station id, then
/// lower object kind.
ActionCandidate choose_action(std::span<const ActionCandidate> candidates);

struct Decision {
  MissionState state;
  std::optional<ActionCandidate> action;  // empty when the mission is Done
  std::vector<ActionCandidate> candidates;
};

/// The Assess transition: Done when assess() is Desired, otherwise the chosen
/// action's GoFetch / GoDeliver phase. Requires phase Assess.
Decision mission_decide(const MissionState& state, const TravelCost& travel_cost);

/// Event-driven transitions. Throws IllegalEvent for a (phase, event) pair
/// that has no transition.
MissionState mission_step(const MissionState& state, MissionEvent event);

/// Travel cost backed by astar's total_cost on a fixed map and field.
TravelCost astar_travel_cost(const GridMap& map, const DistanceField& field,
                             AStarParams params);

const char* to_string(PhaseKind kind);
const char* to_string(ActionKind kind);
const char* to_string(MissionEvent event);

/// Object count per kind over all stations and the inventory.
std::multiset<ObjectKind> all_objects(const MissionState& state);

/// Number of objects sitting where they are not wanted plus the carried ones.
int outstanding_work(const MissionState& state);

}  // namespace mobman
