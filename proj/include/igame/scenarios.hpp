#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "igame/detection.hpp"
#include "igame/epsilon.hpp"

namespace igame {

/// Closed-form pure-control policy of one scenario channel.
struct PolicySpec {
    enum class Kind { zero, constant, sinusoid, state_feedback };
    Kind kind = Kind::zero;
    Eigen::VectorXd constant;                      // constant
    double amplitude = 0.0, omega = 0.0, phase = 0.0;  // sinusoid (per channel coordinate)
    double gain = 0.0;                             // state_feedback: u° = gain*(phi_a - phi_b)
    int target_coord = 0, self_coord = 0;

    Eigen::VectorXd eval(double t, const Eigen::VectorXd& state, int dim) const;
};

/// Ground-truth epsilon process of one scenario channel.
struct EpsilonProcessSpec {
    enum class Kind { zero, sinusoid, smooth_noise, saccade_pulse, relaxation_ode };
    Kind kind = Kind::zero;
    double amplitude = 0.0, omega = 0.0, phase = 0.0;  // sinusoid / relaxation drive
    double sigma = 0.0;                                // smooth_noise amplitude
    int smoothing_window = 1;                          // smooth_noise moving-average width
    double bound = 0.0;        // saccade_pulse: trigger threshold on |error|
    double correction = 0.9;   // saccade_pulse: fraction of the error corrected
    double duration = 0.5;     // saccade_pulse: pulse length in time units
    int target_coord = 0, self_coord = 0;  // saccade_pulse error = phi_a - phi_b
    double relax_rate = 0.0;   // relaxation_ode: epsdot = -rate*eps + drive(t)
};

struct ScenarioChannel {
    std::string name;
    std::vector<int> control_coords;  // coordinates of u this channel drives
    PolicySpec policy;
    EpsilonProcessSpec epsilon;
    FiltrationSpec generating_filtration;
    GoalFunctional generating_goal;
};

/// Fully specified ground-truth interactive game.
struct Scenario {
    std::string name;
    DynamicsModel dynamics;
    CouplingForm coupling;  // channels aligned with `channels`
    std::vector<ScenarioChannel> channels;
    Eigen::VectorXd initial_state;
    TimeGrid grid;

    void validate() const;
};

struct GenerationResult {
    Trajectory trajectory;      // states + recorded interactive controls
    ControlSignal interactive;  // u, role interactive
    ControlSignal pure;         // u°, role pure
    EpsilonRepresentation epsilon;
    std::map<std::string, double> stats;  // e.g. saccade event counts per channel
};

/// Simulate the scenario: pure controls from the stored policies, epsilon
/// from the descriptors (seeded where random), coupled and integrated
/// closed-loop. Pure function of (scenario, seed).
GenerationResult generate(const Scenario& scenario, std::uint64_t seed);

/// Ground-truth catalog: autonomous, still-point, linear-relaxation,
/// pursuit, saccade, saccade-duo, two-stage.
std::vector<Scenario> builtin_catalog();

/// Catalog lookup by name; throws BadConfig for unknown names.
Scenario builtin_scenario(const std::string& name);

/// The generating candidate of an interactive scenario plus two decoy
/// (filtration, goal) pairs, for candidate-menu construction. For the
/// two-stage scenario a second menu level covers the epsilon game.
std::vector<std::vector<Candidate>> builtin_menus(const Scenario& scenario);

}  // namespace igame
