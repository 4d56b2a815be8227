#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddsync/datamod.hpp"
#include "ddsync/leaderspec.hpp"
#include "ddsync/netgraph.hpp"

namespace ddsync {

/// One follower as presented to the toolkit: known output matrices, the
/// recorded data, and (for simulation and tests only) the true plant.
struct FollowerSetup {
    Matrix c;  // p x n
    Matrix d;  // p x m
    TrajectoryData data;
    std::optional<TrueSystem> true_model;
};

struct Scenario {
    LeaderSpec leader;
    CommGraph graph;
    std::vector<FollowerSetup> followers;
};

/// Structural validation: follower count matches the graph, output
/// dimensions match the leader, data dimensions are coherent.
/// Throws std::invalid_argument with a named field on violation.
void validate_scenario(const Scenario& scenario);

/// The built-in nine-follower demo used by the `demo` subcommand and the
/// acceptance tests (three plant families on a ring with two chords).
Scenario demo_scenario();

}  // namespace ddsync
