#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "igame/errors.hpp"

namespace igame {

/// Uniform time grid t_k = t0 + k*dt for k = 0..n_steps.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double t0_, double dt_, std::size_t n_steps_);

    std::size_t n_nodes() const { return n_steps + 1; }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double duration() const { return dt * static_cast<double>(n_steps); }

    bool operator==(const TimeGrid&) const = default;
};

enum class SignalRole { interactive, pure, epsilon, desire };

std::string to_string(SignalRole role);
SignalRole signal_role_from_string(const std::string& s);

/// A vector-valued series sampled on a time grid, one row per node.
struct ControlSignal {
    TimeGrid grid;
    Eigen::MatrixXd values;  // n_nodes x dim
    SignalRole role = SignalRole::interactive;

    ControlSignal() = default;
    ControlSignal(TimeGrid g, Eigen::MatrixXd v, SignalRole r);

    std::size_t dim() const { return static_cast<std::size_t>(values.cols()); }
    Eigen::VectorXd at(std::size_t k) const { return values.row(static_cast<Eigen::Index>(k)).transpose(); }

    /// Linear interpolation between grid nodes, clamped to the grid span.
    Eigen::VectorXd interpolate(double t) const;

    static ControlSignal zero(const TimeGrid& g, std::size_t dim, SignalRole r);
};

/// Recorded (or simulated) system history: states and optional controls.
struct Trajectory {
    TimeGrid grid;
    Eigen::MatrixXd states;                   // n_nodes x d
    std::optional<Eigen::MatrixXd> controls;  // n_nodes x k

    Trajectory() = default;
    Trajectory(TimeGrid g, Eigen::MatrixXd s);
    Trajectory(TimeGrid g, Eigen::MatrixXd s, Eigen::MatrixXd u);

    std::size_t state_dim() const { return static_cast<std::size_t>(states.cols()); }
    std::size_t control_dim() const {
        return controls ? static_cast<std::size_t>(controls->cols()) : 0;
    }
    Eigen::VectorXd state_at(std::size_t k) const {
        return states.row(static_cast<Eigen::Index>(k)).transpose();
    }
    Eigen::VectorXd control_at(std::size_t k) const;

    ControlSignal control_signal(SignalRole role = SignalRole::interactive) const;

    void validate() const;
};

/// Concatenate signal columns; all inputs must share the grid.
ControlSignal hstack(const std::vector<ControlSignal>& signals, SignalRole role);

}  // namespace igame
