#include "igame/types.hpp"

#include <algorithm>
#include <cmath>

namespace igame {

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_steps_)
    : t0(t0_), dt(dt_), n_steps(n_steps_) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw BadConfig("TimeGrid: dt must be positive and finite");
    }
    if (n_steps < 1) {
        throw BadConfig("TimeGrid: n_steps must be >= 1");
    }
}

std::string to_string(SignalRole role) {
    switch (role) {
        case SignalRole::interactive: return "interactive";
        case SignalRole::pure: return "pure";
        case SignalRole::epsilon: return "epsilon";
        case SignalRole::desire: return "desire";
    }
    return "interactive";
}

SignalRole signal_role_from_string(const std::string& s) {
    if (s == "interactive") return SignalRole::interactive;
    if (s == "pure") return SignalRole::pure;
    if (s == "epsilon") return SignalRole::epsilon;
    if (s == "desire") return SignalRole::desire;
    throw ParseError("unknown signal role: " + s);
}

ControlSignal::ControlSignal(TimeGrid g, Eigen::MatrixXd v, SignalRole r)
    : grid(g), values(std::move(v)), role(r) {
    if (static_cast<std::size_t>(values.rows()) != grid.n_nodes()) {
        throw DimensionMismatch("ControlSignal: values must have one row per grid node");
    }
}

Eigen::VectorXd ControlSignal::interpolate(double t) const {
    const double s = (t - grid.t0) / grid.dt;
    if (s <= 0.0) return values.row(0).transpose();
    const auto last = static_cast<double>(grid.n_steps);
    if (s >= last) return values.row(values.rows() - 1).transpose();
    const auto k = static_cast<Eigen::Index>(std::floor(s));
    const double w = s - static_cast<double>(k);
    return ((1.0 - w) * values.row(k) + w * values.row(k + 1)).transpose();
}

ControlSignal ControlSignal::zero(const TimeGrid& g, std::size_t dim, SignalRole r) {
    return ControlSignal(g, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.n_nodes()),
                                                  static_cast<Eigen::Index>(dim)),
                         r);
}

Trajectory::Trajectory(TimeGrid g, Eigen::MatrixXd s) : grid(g), states(std::move(s)) {
    validate();
}

Trajectory::Trajectory(TimeGrid g, Eigen::MatrixXd s, Eigen::MatrixXd u)
    : grid(g), states(std::move(s)), controls(std::move(u)) {
    validate();
}

Eigen::VectorXd Trajectory::control_at(std::size_t k) const {
    if (!controls) throw MissingInput("Trajectory: no control series recorded");
    return controls->row(static_cast<Eigen::Index>(k)).transpose();
}

ControlSignal Trajectory::control_signal(SignalRole role) const {
    if (!controls) throw MissingInput("Trajectory: no control series recorded");
    return ControlSignal(grid, *controls, role);
}

void Trajectory::validate() const {
    if (static_cast<std::size_t>(states.rows()) != grid.n_nodes()) {
        throw DimensionMismatch("Trajectory: states must have one row per grid node");
    }
    if (controls && controls->rows() != states.rows()) {
        throw DimensionMismatch("Trajectory: control series length must match states");
    }
}

ControlSignal hstack(const std::vector<ControlSignal>& signals, SignalRole role) {
    if (signals.empty()) throw MissingInput("hstack: no signals given");
    const TimeGrid grid = signals.front().grid;
    Eigen::Index cols = 0;
    for (const auto& s : signals) {
        if (!(s.grid == grid)) throw DimensionMismatch("hstack: signals must share the grid");
        cols += s.values.cols();
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(grid.n_nodes()), cols);
    Eigen::Index at = 0;
    for (const auto& s : signals) {
        out.middleCols(at, s.values.cols()) = s.values;
        at += s.values.cols();
    }
    return ControlSignal(grid, std::move(out), role);
}

}  // namespace igame
