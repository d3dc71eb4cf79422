#include "igame/sdpair.hpp"

#include <cmath>

#include "igame/regression.hpp"

namespace igame {

std::string to_string(ActorRole role) {
    return role == ActorRole::subjects ? "subjects" : "desires";
}

ActorRole actor_role_from_string(const std::string& s) {
    if (s == "subjects") return ActorRole::subjects;
    if (s == "desires") return ActorRole::desires;
    throw ParseError("unknown actor role: " + s);
}

void PictureModel::validate() const {
    dynamics.validate();
    couplings.validate(dynamics.state_dim);
    if (couplings.control_dim() != dynamics.control_dim) {
        throw DimensionMismatch("PictureModel: coupling channels do not cover the control vector");
    }
    hidden_parameter_map.validate();
    if (!hidden_parameter_map.components.empty() &&
        hidden_parameter_map.output_dim() != couplings.total_epsilon_dim()) {
        throw DimensionMismatch("PictureModel: hidden parameter map does not match epsilon size");
    }
}

SDTransformResult sd_transform(const PictureModel& s,
                               const std::vector<FiltrationSpec>& desire_channels,
                               const EpsilonRepresentation& eps, const Trajectory& traj) {
    if (s.actor_roles != ActorRole::subjects) {
        throw BadConfig("sd_transform: input picture must be an S-picture");
    }
    if (desire_channels.empty()) {
        throw BadConfig("sd_transform: a D-picture needs at least one acting desire channel");
    }
    const int d = static_cast<int>(traj.state_dim());
    const int k = s.dynamics.control_dim;
    if (static_cast<int>(eps.pure_series.dim()) != k) {
        throw DimensionMismatch("sd_transform: pure-control series does not match the dynamics");
    }

    // Pure desires from the filtration channels.
    const std::vector<ControlSignal> desires = extract_desires(desire_channels, eps, traj);
    const ControlSignal pure_desires = hstack(desires, SignalRole::desire);
    const int m = static_cast<int>(pure_desires.dim());
    const auto n_nodes = traj.grid.n_nodes();

    // The subjects' pure controls u° are absorbed coordinate-wise into the
    // leading epsilon~ coordinates of the desire space.
    Eigen::MatrixXd eps_tilde(static_cast<Eigen::Index>(n_nodes), m);
    eps_tilde.setZero();
    const int absorbed = std::min(m, k);
    eps_tilde.leftCols(absorbed) = eps.pure_series.values.leftCols(absorbed);

    // Realized interactive desires along the construction trajectory.
    ControlSignal realized(traj.grid, pure_desires.values + eps_tilde, SignalRole::interactive);

    // Targets: the S-picture's state derivatives under the replayed controls.
    Eigen::MatrixXd targets(static_cast<Eigen::Index>(n_nodes), d);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        const Eigen::VectorXd phi = traj.state_at(n);
        targets.row(static_cast<Eigen::Index>(n)) =
            evaluate_rhs(s.dynamics, phi, eps.replay(phi, n)).transpose();
    }

    // Embedded fit 1: the dual dynamics Phi~ over (phi, v).
    const int degree = std::max(1, s.dynamics.max_term_degree());
    const auto dual_dictionary = monomial_dictionary(d, m, degree);
    if (n_nodes < dual_dictionary.size() + 2) {
        throw InsufficientData("sd_transform: trajectory too short for the dual dynamics fit");
    }
    const Eigen::MatrixXd dual_features =
        feature_matrix(dual_dictionary, traj.states, realized.values);
    const RegressionResult dual_fit = fit_linear_map(dual_features, targets, 0.0, 0.0);

    // Embedded fit 2: the hidden parameter map eps~ = E(u°, phi).
    const auto hidden_dictionary = monomial_dictionary(d, k, 1);
    const Eigen::MatrixXd hidden_features =
        feature_matrix(hidden_dictionary, traj.states, eps.pure_series.values);
    const RegressionResult hidden_fit = fit_linear_map(hidden_features, eps_tilde, 0.0, 0.0);

    SDTransformResult out;
    out.picture.dynamics = DynamicsModel(d, m, dual_dictionary, dual_fit.coefficients);
    out.picture.couplings = CouplingForm::additive(d, m);
    out.picture.actor_roles = ActorRole::desires;
    out.picture.hidden_parameter_map.components = {
        DictionaryExpansion(d, k, hidden_dictionary, hidden_fit.coefficients)};
    out.picture.hidden_parameter_map.fit_residual = hidden_fit.rms_residual;
    out.pure_desires = pure_desires;
    out.realized_desires = std::move(realized);
    out.dynamics_fit_residual = dual_fit.max_node_residual;
    return out;
}

double sd_consistency(SDPair& pair, const Trajectory& traj, const ControlSignal& u,
                      const ControlSignal& v) {
    if (!(u.grid == traj.grid) || !(v.grid == traj.grid)) {
        throw DimensionMismatch("sd_consistency: signals must share the trajectory grid");
    }
    if (pair.s_picture.dynamics.state_dim != pair.d_picture.dynamics.state_dim) {
        throw DimensionMismatch("sd_consistency: pictures disagree on the state dimension");
    }
    double residual = 0.0;
    for (std::size_t n = 0; n < traj.grid.n_nodes(); ++n) {
        const Eigen::VectorXd phi = traj.state_at(n);
        const Eigen::VectorXd lhs = evaluate_rhs(pair.s_picture.dynamics, phi, u.at(n));
        const Eigen::VectorXd rhs = evaluate_rhs(pair.d_picture.dynamics, phi, v.at(n));
        residual = std::max(residual, (lhs - rhs).norm());
    }
    pair.consistency_residual = residual;
    return residual;
}

PictureModel add_agent(const PictureModel& d, const DictionaryExpansion& new_agent_term) {
    if (d.actor_roles != ActorRole::desires) {
        throw BadConfig("add_agent: the picture must be a D-picture");
    }
    new_agent_term.validate();
    if (!d.hidden_parameter_map.components.empty()) {
        const auto& head = d.hidden_parameter_map.components.front();
        if (new_agent_term.state_dim != head.state_dim ||
            new_agent_term.control_dim != head.control_dim ||
            new_agent_term.output_dim != head.output_dim) {
            throw DimensionMismatch("add_agent: subsidiary term shape does not match the map");
        }
    }
    PictureModel out = d;
    out.hidden_parameter_map.components.push_back(new_agent_term);
    return out;
}

ControlSignal replay_picture_controls(const PictureModel& picture, const Trajectory& traj,
                                      const ControlSignal& other_pure,
                                      const ControlSignal& pure_inputs) {
    if (!(other_pure.grid == traj.grid) || !(pure_inputs.grid == traj.grid)) {
        throw DimensionMismatch("replay_picture_controls: signals must share the trajectory grid");
    }
    const auto n_nodes = traj.grid.n_nodes();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n_nodes), picture.dynamics.control_dim);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        const Eigen::VectorXd phi = traj.state_at(n);
        const Eigen::VectorXd eps = picture.hidden_parameter_map.eval(phi, other_pure.at(n));
        values.row(static_cast<Eigen::Index>(n)) =
            picture.couplings.couple_full(phi, pure_inputs.at(n), eps).transpose();
    }
    return ControlSignal(traj.grid, std::move(values), SignalRole::interactive);
}

double picture_replay_residual(const PictureModel& picture, const Trajectory& traj,
                               const ControlSignal& other_pure, const ControlSignal& pure_inputs) {
    const ControlSignal controls = replay_picture_controls(picture, traj, other_pure, pure_inputs);
    const Eigen::MatrixXd derivs = estimate_derivatives(traj);
    double residual = 0.0;
    for (std::size_t n = 0; n < traj.grid.n_nodes(); ++n) {
        const Eigen::VectorXd rhs =
            evaluate_rhs(picture.dynamics, traj.state_at(n), controls.at(n));
        residual = std::max(
            residual, (derivs.row(static_cast<Eigen::Index>(n)).transpose() - rhs).norm());
    }
    return residual;
}

}  // namespace igame
