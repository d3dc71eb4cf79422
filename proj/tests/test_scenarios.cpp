#include <doctest.h>

#include <chrono>

#include "igame/scenarios.hpp"
#include "igame/serialize.hpp"

using namespace igame;

TEST_CASE("the catalog covers the required ground-truth games") {
    const auto catalog = builtin_catalog();
    CHECK(catalog.size() >= 5);
    for (const char* name :
         {"autonomous", "still-point", "linear-relaxation", "pursuit", "saccade", "saccade-duo",
          "two-stage"}) {
        CHECK_NOTHROW(builtin_scenario(name));
    }
    CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), BadConfig);
}

TEST_CASE("catalog entries round-trip through JSON value-exactly") {
    for (const auto& scenario : builtin_catalog()) {
        const Json once = json_scenario(scenario);
        const Scenario parsed = scenario_from_json(once);
        const Json twice = json_scenario(parsed);
        CHECK(once.dump() == twice.dump());
    }
}

TEST_CASE("every catalog entry generates at its default grid in bounded time") {
    for (const auto& scenario : builtin_catalog()) {
        const auto start = std::chrono::steady_clock::now();
        GenerationResult result;
        CHECK_NOTHROW(result = generate(scenario, 42));
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        CHECK(elapsed < 5.0);
        CHECK(result.trajectory.states.allFinite());
        if (!scenario.channels.empty()) {
            REQUIRE(result.trajectory.controls.has_value());
            // The record replays exactly through the stored coupling.
            CHECK(result.epsilon.recovery_residual == 0.0);
            for (std::size_t k = 0; k < scenario.grid.n_nodes(); k += 97) {
                const Eigen::VectorXd replay =
                    result.epsilon.replay(result.trajectory.state_at(k), k);
                CHECK((replay - result.trajectory.control_at(k)).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("generation is a pure function of scenario and seed") {
    const Scenario scenario = builtin_scenario("pursuit");
    const auto a = generate(scenario, 7);
    const auto b = generate(scenario, 7);
    CHECK((a.trajectory.states.array() == b.trajectory.states.array()).all());
    CHECK((a.interactive.values.array() == b.interactive.values.array()).all());
    CHECK((a.pure.values.array() == b.pure.values.array()).all());
}

TEST_CASE("the still-point game holds the state constant") {
    const auto result = generate(builtin_scenario("still-point"), 0);
    CHECK((result.trajectory.states.array() == 1.0).all());
    CHECK(result.interactive.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("saccade events equal the recomputed threshold crossings") {
    const Scenario scenario = builtin_scenario("saccade");
    const auto result = generate(scenario, 11);
    REQUIRE(result.stats.count("saccade_events_ch0") == 1);
    const double recorded = result.stats.at("saccade_events_ch0");
    CHECK(recorded >= 2.0);

    // Recompute upcrossings of |x - g| over the bound from the emitted data.
    const auto& proc = scenario.channels[0].epsilon;
    const Eigen::MatrixXd& states = result.trajectory.states;
    int crossings = 0;
    bool above = std::abs(states(0, proc.target_coord) - states(0, proc.self_coord)) >= proc.bound;
    if (above) ++crossings;
    for (Eigen::Index k = 1; k < states.rows(); ++k) {
        const bool now =
            std::abs(states(k, proc.target_coord) - states(k, proc.self_coord)) >= proc.bound;
        if (now && !above) ++crossings;
        above = now;
    }
    CHECK(static_cast<double>(crossings) == recorded);
}

TEST_CASE("the smooth-noise process is seeded and reproducible") {
    Scenario scenario = builtin_scenario("linear-relaxation");
    scenario.channels[0].epsilon.kind = EpsilonProcessSpec::Kind::smooth_noise;
    scenario.channels[0].epsilon.sigma = 0.3;
    scenario.channels[0].epsilon.smoothing_window = 9;
    const auto a = generate(scenario, 123);
    const auto b = generate(scenario, 123);
    const auto c = generate(scenario, 124);
    CHECK((a.epsilon.epsilon_series[0].values.array() ==
           b.epsilon.epsilon_series[0].values.array())
              .all());
    CHECK((a.epsilon.epsilon_series[0].values - c.epsilon.epsilon_series[0].values)
              .cwiseAbs()
              .maxCoeff() > 1e-6);
    CHECK(a.epsilon.epsilon_series[0].values.cwiseAbs().maxCoeff() > 1e-4);
}

TEST_CASE("builtin menus pair the generating candidate with two decoys") {
    for (const auto& scenario : builtin_catalog()) {
        if (scenario.channels.empty()) continue;
        const auto menus = builtin_menus(scenario);
        REQUIRE(!menus.empty());
        CHECK(menus.front().size() == 3);
        const Json generating = json_filtration(scenario.channels[0].generating_filtration);
        Json emitted = json_filtration(menus.front()[0].filtration);
        // The menu-level filtration covers all coordinates.
        CHECK(emitted["pipeline"].dump() == generating["pipeline"].dump());
        if (scenario.name == "two-stage") CHECK(menus.size() == 2);
    }
}
