#pragma once

#include "igame/epsilon.hpp"

namespace igame {

enum class ActorRole { subjects, desires };

std::string to_string(ActorRole role);
ActorRole actor_role_from_string(const std::string& s);

/// One description of the system: who acts interactively (subjects in the
/// S-picture, desires in the D-picture) and how the picture's hidden
/// epsilon-parameters depend on the other picture's pure inputs and states.
struct PictureModel {
    DynamicsModel dynamics;          // Phi(phi, u) or Phi~(phi, v)
    CouplingForm couplings;          // per actor channel, affine in eps
    ActorRole actor_roles = ActorRole::subjects;
    DesireMap hidden_parameter_map;  // S: eps = f(v°, phi); D: eps~ = f(u°, phi)

    void validate() const;
};

struct SDPair {
    PictureModel s_picture;
    PictureModel d_picture;
    double consistency_residual = 0.0;
};

struct SDTransformResult {
    PictureModel picture;            // the D-picture
    ControlSignal pure_desires;      // v° from the desire channels
    ControlSignal realized_desires;  // v = v° + eps~ along the construction trajectory
    double dynamics_fit_residual = 0.0;  // max per-node replay mismatch of the embedded fit
};

/// SD-transform: the desire signals become the interactive controls of the
/// dual picture and the subjects' pure controls are absorbed into the
/// picture's hidden parameters. The returned D-picture replays the
/// S-picture's state derivatives on the construction trajectory up to the
/// embedded regression residual.
SDTransformResult sd_transform(const PictureModel& s,
                               const std::vector<FiltrationSpec>& desire_channels,
                               const EpsilonRepresentation& eps, const Trajectory& traj);

/// max over nodes of || Phi(phi, u) - Phi~(phi, v) ||; stored on the pair.
double sd_consistency(SDPair& pair, const Trajectory& traj, const ControlSignal& u,
                      const ControlSignal& v);

/// Addition of a new acting person: the evolution equations and couplings are
/// untouched, only a subsidiary term is added to the hidden parameters.
PictureModel add_agent(const PictureModel& d, const DictionaryExpansion& new_agent_term);

/// max over nodes of the mismatch between the picture's rhs (under replayed
/// interactive controls) and the estimated derivatives of the trajectory.
double picture_replay_residual(const PictureModel& picture, const Trajectory& traj,
                               const ControlSignal& other_pure, const ControlSignal& pure_inputs);

/// Realized interactive controls of a picture along a trajectory:
/// couple(pure, phi, eps) with eps = hidden_parameter_map(other_pure, phi).
ControlSignal replay_picture_controls(const PictureModel& picture, const Trajectory& traj,
                                      const ControlSignal& other_pure,
                                      const ControlSignal& pure_inputs);

}  // namespace igame
