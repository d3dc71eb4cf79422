#include "igame/epsilon.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "igame/regression.hpp"

namespace igame {

ControlSignal EpsilonRepresentation::concatenated() const {
    if (epsilon_series.empty()) {
        return ControlSignal::zero(pure_series.grid, 0, SignalRole::epsilon);
    }
    return hstack(epsilon_series, SignalRole::epsilon);
}

Eigen::VectorXd EpsilonRepresentation::epsilon_at(std::size_t node) const {
    Eigen::VectorXd out(coupling.total_epsilon_dim());
    Eigen::Index at = 0;
    for (const auto& series : epsilon_series) {
        out.segment(at, static_cast<Eigen::Index>(series.dim())) = series.at(node);
        at += static_cast<Eigen::Index>(series.dim());
    }
    return out;
}

Eigen::VectorXd EpsilonRepresentation::replay(const Eigen::VectorXd& phi, std::size_t node) const {
    return coupling.couple_full(phi, pure_series.at(node), epsilon_at(node));
}

EpsilonRepresentation recover_epsilon(const CouplingForm& coupling, const ControlSignal& u,
                                      const ControlSignal& u_pure, const Trajectory& traj,
                                      double singular_tolerance) {
    if (!(singular_tolerance > 0.0)) {
        throw BadConfig("recover_epsilon: singular tolerance must be > 0");
    }
    coupling.validate(static_cast<int>(traj.state_dim()));
    if (!(u.grid == traj.grid) || !(u_pure.grid == traj.grid)) {
        throw DimensionMismatch("recover_epsilon: signals must share the trajectory grid");
    }
    if (static_cast<int>(u.dim()) != coupling.control_dim() ||
        static_cast<int>(u_pure.dim()) != coupling.control_dim()) {
        throw DimensionMismatch("recover_epsilon: control dimensions do not match the coupling");
    }

    const std::size_t n_nodes = traj.grid.n_nodes();
    EpsilonRepresentation out;
    out.coupling = coupling;
    out.pure_series = u_pure;
    out.pure_series.role = SignalRole::pure;
    out.epsilon_series.reserve(coupling.channels.size());
    for (const auto& ch : coupling.channels) {
        out.epsilon_series.push_back(ControlSignal::zero(
            traj.grid, static_cast<std::size_t>(ch.epsilon_dim), SignalRole::epsilon));
    }

    for (std::size_t k = 0; k < n_nodes; ++k) {
        const Eigen::VectorXd phi = traj.state_at(k);
        const Eigen::VectorXd pure_full = u_pure.at(k);
        const Eigen::VectorXd u_full = u.at(k);
        for (std::size_t c = 0; c < coupling.channels.size(); ++c) {
            const auto& ch = coupling.channels[c];
            const Eigen::VectorXd pure_ch = coupling.channel_slice(c, pure_full);
            const Eigen::VectorXd rhs =
                coupling.channel_slice(c, u_full) - ch.offset.eval(phi, pure_ch);
            const Eigen::MatrixXd B = ch.gain_matrix(phi, pure_ch);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
            if (svd.singularValues().minCoeff() < singular_tolerance) {
                throw SingularCoupling("recover_epsilon: coupling gain is singular at node " +
                                           std::to_string(k) + " (channel " + std::to_string(c) +
                                           ")",
                                       k, c);
            }
            out.epsilon_series[c].values.row(static_cast<Eigen::Index>(k)) =
                svd.solve(rhs).transpose();
        }
    }

    double residual = 0.0;
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const Eigen::VectorXd diff = out.replay(traj.state_at(k), k) - u.at(k);
        residual = std::max(residual, diff.size() > 0 ? diff.cwiseAbs().maxCoeff() : 0.0);
    }
    out.recovery_residual = residual;
    return out;
}

std::vector<ControlSignal> extract_desires(const std::vector<FiltrationSpec>& specs,
                                           const EpsilonRepresentation& eps,
                                           const Trajectory& traj) {
    const ControlSignal concat = eps.concatenated();
    SignalSet signals;
    signals.traj = &traj;
    signals.epsilon = &concat;

    std::vector<ControlSignal> desires;
    desires.reserve(specs.size());
    for (const auto& spec : specs) {
        if (spec.input != SignalSource::epsilon && spec.input != SignalSource::states) {
            throw MissingInput("extract_desires: specs may select only epsilon and state inputs");
        }
        ControlSignal v = apply_filtration(spec, signals);
        v.role = SignalRole::desire;
        desires.push_back(std::move(v));
    }
    return desires;
}

int DesireMap::input_dim() const {
    return components.empty() ? 0 : components.front().control_dim;
}

int DesireMap::output_dim() const {
    return components.empty() ? 0 : components.front().output_dim;
}

Eigen::VectorXd DesireMap::eval(const Eigen::VectorXd& phi, const Eigen::VectorXd& inputs) const {
    if (components.empty()) throw MissingInput("DesireMap: no components");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(output_dim());
    for (const auto& c : components) out += c.eval(phi, inputs);
    return out;
}

void DesireMap::validate() const {
    for (const auto& c : components) {
        c.validate();
        if (c.state_dim != components.front().state_dim ||
            c.control_dim != components.front().control_dim ||
            c.output_dim != components.front().output_dim) {
            throw DimensionMismatch("DesireMap: components must share input and output shapes");
        }
    }
}

DesireMap fit_desire_map(const std::vector<ControlSignal>& desires, const Trajectory& traj,
                         const EpsilonRepresentation& eps, const std::vector<BasisTerm>& dictionary,
                         double ridge) {
    if (desires.empty()) throw MissingInput("fit_desire_map: no desire signals");
    const ControlSignal inputs = hstack(desires, SignalRole::desire);
    if (!(inputs.grid == traj.grid)) {
        throw DimensionMismatch("fit_desire_map: desire series must share the trajectory grid");
    }
    const ControlSignal targets = eps.concatenated();
    if (!(targets.grid == traj.grid)) {
        throw DimensionMismatch("fit_desire_map: epsilon series must share the trajectory grid");
    }
    if (traj.grid.n_nodes() < dictionary.size()) {
        throw InsufficientData("fit_desire_map: fewer nodes than dictionary terms");
    }
    const int d = static_cast<int>(traj.state_dim());
    const int m = static_cast<int>(inputs.dim());
    for (const auto& t : dictionary) {
        if (static_cast<int>(t.state_exponents.size()) != d ||
            static_cast<int>(t.control_exponents.size()) != m) {
            throw DimensionMismatch("fit_desire_map: dictionary does not match (phi, v°) dimensions");
        }
    }

    const Eigen::MatrixXd theta = feature_matrix(dictionary, traj.states, inputs.values);
    const RegressionResult reg = fit_linear_map(theta, targets.values, ridge, 0.0);

    DesireMap map;
    map.components = {DictionaryExpansion(d, m, dictionary, reg.coefficients)};
    map.fit_residual = reg.rms_residual;
    return map;
}

namespace {

/// Hidden-input estimate for the next unraveling level: the per-node
/// derivative residual of the best autonomous fit of the series.
Eigen::MatrixXd residual_inputs(const Trajectory& traj, const DynamicsModel& model) {
    const Eigen::MatrixXd derivs = estimate_derivatives(traj);
    const Eigen::VectorXd no_control(0);
    Eigen::MatrixXd resid(derivs.rows(), derivs.cols());
    for (Eigen::Index k = 0; k < derivs.rows(); ++k) {
        resid.row(k) =
            derivs.row(k) -
            evaluate_rhs(model, traj.states.row(k).transpose(), no_control).transpose();
    }
    return resid;
}

UnravelLevel unravel_series(const ControlSignal& series,
                            const std::vector<std::vector<Candidate>>& menus,
                            std::size_t level, int remaining_depth, const UnravelConfig& config) {
    Trajectory level_traj(series.grid, series.values);
    const auto dictionary = monomial_dictionary(static_cast<int>(series.dim()), 0,
                                                config.selection.dictionary_degree);
    const FitResult autonomous = fit_dynamics(level_traj, dictionary, false,
                                              config.selection.ridge,
                                              config.selection.sparsify_threshold);
    const double threshold =
        config.threshold_override
            ? *config.threshold_override
            : default_hidden_input_threshold(level_traj, dictionary, config.selection.ridge,
                                             config.selection.sparsify_threshold,
                                             config.calibration_fraction);

    UnravelLevel node;
    node.verdict = detect_hidden_inputs(level_traj, autonomous.model, threshold);
    if (!node.verdict.hidden_inputs || remaining_depth < 1 || level >= menus.size()) {
        return node;
    }

    level_traj.controls = residual_inputs(level_traj, autonomous.model);
    node.ranking = select_interactive_model(level_traj, menus[level], config.holdout_fraction,
                                            config.selection);

    const Candidate& best = node.ranking->candidates[node.ranking->best_index];
    SignalSet signals;
    signals.traj = &level_traj;
    const ControlSignal pure = apply_filtration(best.filtration, signals);
    node.recovered = recover_epsilon(best.coupling, level_traj.control_signal(), pure, level_traj,
                                     config.singular_tolerance);

    if (remaining_depth > 1) {
        node.children.push_back(unravel_series(node.recovered->concatenated(), menus, level + 1,
                                               remaining_depth - 1, config));
    }
    return node;
}

}  // namespace

UnravelLevel unravel_recursive(const Trajectory& traj, const EpsilonRepresentation& eps,
                               const std::vector<std::vector<Candidate>>& candidate_menus,
                               int depth, const UnravelConfig& config) {
    if (depth < 1) throw BadConfig("unravel_recursive: depth must be >= 1");
    const ControlSignal series = eps.concatenated();
    if (!(series.grid == traj.grid)) {
        throw DimensionMismatch("unravel_recursive: epsilon series must share the trajectory grid");
    }
    return unravel_series(series, candidate_menus, 0, depth, config);
}

}  // namespace igame
