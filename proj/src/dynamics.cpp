#include "igame/dynamics.hpp"

#include <cmath>

namespace igame {

namespace {

constexpr double kStateBound = 1e150;

void check_finite(const Eigen::VectorXd& x, std::size_t node) {
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kStateBound) {
        throw NonFiniteState("integrate: state left the finite range at node " +
                                 std::to_string(node),
                             node);
    }
}

}  // namespace

Eigen::VectorXd evaluate_rhs(const DynamicsModel& model, const Eigen::VectorXd& state,
                             const Eigen::VectorXd& control) {
    if (model.output_dim != model.state_dim) {
        throw DimensionMismatch("evaluate_rhs: model output dimension must equal state dimension");
    }
    return model.eval(state, control);
}

Eigen::MatrixXd rk4_path(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& rhs,
                         const Eigen::VectorXd& initial_state, const TimeGrid& grid) {
    const auto n = grid.n_nodes();
    Eigen::MatrixXd states(static_cast<Eigen::Index>(n), initial_state.size());
    Eigen::VectorXd x = initial_state;
    check_finite(x, 0);
    states.row(0) = x.transpose();
    const double h = grid.dt;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double t = grid.time(k);
        const Eigen::VectorXd k1 = rhs(t, x);
        const Eigen::VectorXd k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
        const Eigen::VectorXd k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
        const Eigen::VectorXd k4 = rhs(t + h, x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(x, k + 1);
        states.row(static_cast<Eigen::Index>(k + 1)) = x.transpose();
    }
    return states;
}

Trajectory integrate(const DynamicsModel& model, const Eigen::VectorXd& initial_state,
                     const ControlSignal* controls, const TimeGrid& grid) {
    if (initial_state.size() != model.state_dim) {
        throw DimensionMismatch("integrate: initial state dimension does not match model");
    }
    if (model.control_dim > 0 && controls == nullptr) {
        throw MissingInput("integrate: model has controls but no control signal was given");
    }
    if (controls != nullptr) {
        if (!(controls->grid == grid)) {
            throw DimensionMismatch("integrate: control signal must live on the integration grid");
        }
        if (static_cast<int>(controls->dim()) != model.control_dim) {
            throw DimensionMismatch("integrate: control dimension does not match model");
        }
    }

    const Eigen::VectorXd no_control = Eigen::VectorXd::Zero(0);
    auto rhs = [&](double t, const Eigen::VectorXd& x) {
        return model.eval(x, controls ? controls->interpolate(t) : no_control);
    };
    Eigen::MatrixXd states = rk4_path(rhs, initial_state, grid);
    if (controls != nullptr) {
        return Trajectory(grid, std::move(states), controls->values);
    }
    return Trajectory(grid, std::move(states));
}

Trajectory integrate_policy(const DynamicsModel& model, const Eigen::VectorXd& initial_state,
                            const TimeGrid& grid, const ControlPolicy& policy) {
    if (initial_state.size() != model.state_dim) {
        throw DimensionMismatch("integrate_policy: initial state dimension does not match model");
    }
    auto rhs = [&](double t, const Eigen::VectorXd& x) { return model.eval(x, policy(t, x)); };
    Eigen::MatrixXd states = rk4_path(rhs, initial_state, grid);

    Eigen::MatrixXd controls(states.rows(), model.control_dim);
    for (Eigen::Index k = 0; k < states.rows(); ++k) {
        controls.row(k) =
            policy(grid.time(static_cast<std::size_t>(k)), states.row(k).transpose()).transpose();
    }
    return Trajectory(grid, std::move(states), std::move(controls));
}

Eigen::MatrixXd estimate_derivatives(const Trajectory& traj) {
    if (traj.grid.n_steps < 2) {
        throw InsufficientData("estimate_derivatives: need at least 2 steps");
    }
    const Eigen::MatrixXd& x = traj.states;
    const double dt = traj.grid.dt;
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d(n, x.cols());
    d.row(0) = (-3.0 * x.row(0) + 4.0 * x.row(1) - x.row(2)) / (2.0 * dt);
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        d.row(k) = (x.row(k + 1) - x.row(k - 1)) / (2.0 * dt);
    }
    d.row(n - 1) = (3.0 * x.row(n - 1) - 4.0 * x.row(n - 2) + x.row(n - 3)) / (2.0 * dt);
    return d;
}

}  // namespace igame
