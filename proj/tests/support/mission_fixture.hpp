#pragma once

// Frozen expectations for the thirteen-function mission fixture
// (tests/fixtures/uav_mission.json). The bit pattern is the function-level
// dependency matrix in id order; the reference allocation groups the
// mission-management and vision functions and was verified by hand.

#include <vector>

#include "dsmopt/arch_model.hpp"

namespace dsmopt::testfix {

inline constexpr int kMissionSize = 13;

// Row = source function id, column = target function id, '1' = at least one
// exchange. Diagonal entries are structurally zero.
inline constexpr const char* kMissionMatrix[kMissionSize] = {
    "0000000000000",  // Emergency Landing
    "0000000000000",  // Sense and Avoid Obstacles
    "0000100000000",  // Build FlightPlan Relative to Aircraft Type
    "0000001000000",  // CheckWinForce
    "0000000000000",  // Retrieve POI
    "0000100000000",  // Identify Absolute Aircraft Coordinates
    "1000100000100",  // Manage Mission Modes
    "0000000000000",  // Send Pictures to DB
    "0000000001000",  // Record photos and videos
    "0000000000000",  // Control Camera Orientation
    "0000000111000",  // Manage Photos Recording
    "0010000000000",  // Configure Flight Plan
    "0000000010000",  // Send aircraft view
};

// Functions 0-6 and 11 on the mission subsystem, 7-10 on the vision
// subsystem, 12 locked on the aircraft actor.
inline Allocation mission_reference_allocation() {
  return Allocation{{1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 1, 0}};
}

// Contiguous blocks in component-id order, function ids ascending inside.
inline std::vector<FunctionId> mission_clustered_order() {
  return {12, 0, 1, 2, 3, 4, 5, 6, 11, 7, 8, 9, 10};
}

// Hand-computed for the reference allocation: two crossing exchanges
// (6->10 and 12->8) give the sender components 1/2 each and the vision
// subsystem 3/4; dropping the actor removes its 1/2.
inline constexpr double kMissionReferenceCoupling = 1.75;
inline constexpr double kMissionReferenceCouplingNoActors = 1.25;
inline constexpr int kMissionReferenceInteractions = 2;

}  // namespace dsmopt::testfix
