#include "ddsync/scenario.hpp"

namespace ddsync {

// Nine heterogeneous followers built from three plant families, coupled on
// a bidirectional ring with two directed chords; the leader feeds nodes 1
// and 9. Each follower carries tau = 3 recorded input samples and the
// four matching state samples. The recorded data identify the plants
// exactly, which makes this scenario a fully reproducible end-to-end
// exercise of the certification pipeline.
Scenario demo_scenario() {
    Scenario scenario;

    scenario.leader.s = {{0.0, 1.0}, {1.0, 0.0}};
    scenario.leader.r_out = {{1.0, 0.0}};
    scenario.leader.x0 = {{1.0}, {1.0}};

    const Matrix a1 = {{0.0, 1.0}, {1.0, 1.0}};
    const Matrix a2 = {{0.0, 1.0}, {1.0, -1.0}};
    const Matrix a3 = {{0.0, -1.0}, {1.0, 0.0}};
    const Matrix b = {{1.0}, {0.0}};
    const Matrix c1 = {{1.0, 1.0}};
    const Matrix c2 = {{-1.0, 1.0}};
    const Matrix c3 = {{0.0, 1.0}};
    const Matrix d1 = {{2.0}};
    const Matrix d2 = {{2.0}};
    const Matrix d3 = {{0.5}};

    const Matrix x_family1 = {{1.0, 0.0, 1.0, 1.0}, {-1.0, 0.0, 0.0, 1.0}};
    const Matrix x_family2 = {{1.0, 0.0, 3.0, -1.0}, {-1.0, 2.0, -2.0, 5.0}};
    const Matrix x_family3 = {{1.0, 2.0, 0.0, -1.0}, {-1.0, 1.0, 2.0, 0.0}};
    const Matrix u_common = {{1.0, 1.0, 1.0}};
    const Matrix no_disturbance(0, 3);
    const Matrix no_e(2, 0);

    const TrueSystem plant1{a1, b, no_e, c1, d1};
    const TrueSystem plant2{a2, b, no_e, c2, d2};
    const TrueSystem plant3{a3, b, no_e, c3, d3};

    const FollowerSetup family1{c1, d1, {u_common, no_disturbance, x_family1}, plant1};
    const FollowerSetup family2{c2, d2, {u_common, no_disturbance, x_family2}, plant2};
    const FollowerSetup family3{c3, d3, {u_common, no_disturbance, x_family3}, plant3};

    // followers 1..9 cycle through the three families
    const FollowerSetup* families[] = {&family1, &family2, &family3};
    for (std::size_t i = 0; i < 9; ++i) scenario.followers.push_back(*families[i % 3]);

    // Ring 1-2-...-9-1, every ring edge bidirectional, plus chords
    // 7 -> 2 and 8 -> 5. weights(i, j) > 0 means j sends to i.
    Matrix weights(9, 9);
    const auto connect_both = [&](std::size_t i, std::size_t j) {
        weights(i, j) = 1.0;
        weights(j, i) = 1.0;
    };
    for (std::size_t i = 0; i < 8; ++i) connect_both(i, i + 1);
    connect_both(8, 0);
    weights(1, 6) = 1.0;  // 7 -> 2
    weights(4, 7) = 1.0;  // 8 -> 5
    scenario.graph.weights = weights;
    scenario.graph.leader_gains = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0};

    return scenario;
}

}  // namespace ddsync
