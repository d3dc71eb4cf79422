#pragma once

#include <Eigen/Dense>
#include <functional>

#include "igame/basis.hpp"
#include "igame/types.hpp"

namespace igame {

/// Right-hand side dphi/dt = Phi(phi, u) of a dynamics model.
Eigen::VectorXd evaluate_rhs(const DynamicsModel& model, const Eigen::VectorXd& state,
                             const Eigen::VectorXd& control);

/// Classic fourth-order one-step integration of phidot = Phi(phi, u) on the
/// grid. Controls, when given, are linearly interpolated between nodes for
/// the substeps; the returned trajectory stores the control node values used.
Trajectory integrate(const DynamicsModel& model, const Eigen::VectorXd& initial_state,
                     const ControlSignal* controls, const TimeGrid& grid);

/// State-feedback control law evaluated at every integration substep.
using ControlPolicy = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& state)>;

/// Closed-loop variant of integrate: u = policy(t, phi) at each substep.
/// Records policy(t_k, phi_k) as the control value at node k.
Trajectory integrate_policy(const DynamicsModel& model, const Eigen::VectorXd& initial_state,
                            const TimeGrid& grid, const ControlPolicy& policy);

/// Generic RK4 path for an arbitrary rhs; used by the scenario generator for
/// augmented states. Returns one row per node.
Eigen::MatrixXd rk4_path(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& rhs,
                         const Eigen::VectorXd& initial_state, const TimeGrid& grid);

/// Per-node derivative estimates: central differences at interior nodes,
/// one-sided second-order stencils at the endpoints. Needs n_steps >= 2.
Eigen::MatrixXd estimate_derivatives(const Trajectory& traj);

}  // namespace igame
