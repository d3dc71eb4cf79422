#include "igame/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "igame/regression.hpp"

namespace igame {

FitResult fit_dynamics(const Trajectory& traj, const std::vector<BasisTerm>& dictionary,
                       bool use_controls, double ridge, double sparsify_threshold) {
    if (dictionary.empty()) throw BadConfig("fit_dynamics: empty dictionary");
    if (traj.grid.n_nodes() < dictionary.size() + 2) {
        throw InsufficientData("fit_dynamics: trajectory shorter than |dictionary| + 2 nodes");
    }
    if (use_controls && !traj.controls) {
        throw MissingInput("fit_dynamics: use_controls requested but trajectory has none");
    }

    const int d = static_cast<int>(traj.state_dim());
    const int k = use_controls ? static_cast<int>(traj.control_dim()) : 0;
    for (const auto& t : dictionary) {
        if (static_cast<int>(t.state_exponents.size()) != d ||
            static_cast<int>(t.control_exponents.size()) != k) {
            throw DimensionMismatch("fit_dynamics: dictionary does not match trajectory dimensions");
        }
    }

    const Eigen::MatrixXd inputs =
        use_controls ? *traj.controls : Eigen::MatrixXd(traj.states.rows(), 0);
    const Eigen::MatrixXd theta = feature_matrix(dictionary, traj.states, inputs);
    const Eigen::MatrixXd targets = estimate_derivatives(traj);

    const RegressionResult reg = fit_linear_map(theta, targets, ridge, sparsify_threshold);

    FitResult out;
    out.model = DynamicsModel(d, k, dictionary, reg.coefficients);
    out.residual_norm = reg.rms_residual;
    return out;
}

DetectionVerdict detect_hidden_inputs(const Trajectory& traj, const DynamicsModel& autonomous_model,
                                      double threshold) {
    if (autonomous_model.control_dim != 0) {
        throw DimensionMismatch("detect_hidden_inputs: model must be autonomous");
    }
    if (autonomous_model.state_dim != static_cast<int>(traj.state_dim())) {
        throw DimensionMismatch("detect_hidden_inputs: state dimension mismatch");
    }
    const Eigen::MatrixXd derivs = estimate_derivatives(traj);
    const Eigen::VectorXd no_control(0);

    DetectionVerdict verdict;
    verdict.per_node_residuals.resize(derivs.rows());
    for (Eigen::Index n = 0; n < derivs.rows(); ++n) {
        const Eigen::VectorXd rhs = evaluate_rhs(autonomous_model, traj.states.row(n).transpose(),
                                                 no_control);
        verdict.per_node_residuals[n] = (derivs.row(n).transpose() - rhs).norm();
    }
    verdict.residual_norm =
        std::sqrt(verdict.per_node_residuals.squaredNorm() / static_cast<double>(derivs.rows()));
    verdict.threshold_used = threshold;
    verdict.hidden_inputs = verdict.residual_norm > threshold;
    return verdict;
}

double default_hidden_input_threshold(const Trajectory& traj,
                                      const std::vector<BasisTerm>& dictionary, double ridge,
                                      double sparsify_threshold, double calibration_fraction) {
    if (!(calibration_fraction > 0.0) || calibration_fraction > 1.0) {
        throw BadConfig("default_hidden_input_threshold: calibration fraction must be in (0, 1]");
    }
    const std::size_t n_nodes = traj.grid.n_nodes();
    std::size_t prefix_nodes = static_cast<std::size_t>(
        std::ceil(calibration_fraction * static_cast<double>(n_nodes)));
    prefix_nodes = std::max(prefix_nodes, dictionary.size() + 2);
    prefix_nodes = std::min(prefix_nodes, n_nodes);
    if (prefix_nodes < dictionary.size() + 2 || prefix_nodes < 3) {
        throw InsufficientData("default_hidden_input_threshold: calibration prefix too short");
    }

    Trajectory prefix(TimeGrid(traj.grid.t0, traj.grid.dt, prefix_nodes - 1),
                      traj.states.topRows(static_cast<Eigen::Index>(prefix_nodes)));
    const FitResult fit = fit_dynamics(prefix, dictionary, false, ridge, sparsify_threshold);

    const Eigen::MatrixXd derivs = estimate_derivatives(prefix);
    const Eigen::VectorXd no_control(0);
    std::vector<double> residuals(prefix_nodes);
    for (std::size_t n = 0; n < prefix_nodes; ++n) {
        const Eigen::VectorXd rhs =
            evaluate_rhs(fit.model, prefix.state_at(n), no_control);
        residuals[n] = (derivs.row(static_cast<Eigen::Index>(n)).transpose() - rhs).norm();
    }
    std::nth_element(residuals.begin(), residuals.begin() + residuals.size() / 2, residuals.end());
    return 5.0 * residuals[residuals.size() / 2];
}

namespace {

/// Smooth zero-endpoint perturbation: sum of the first four sine modes with
/// seeded normal amplitudes decaying as 1/j.
Eigen::MatrixXd draw_smooth_perturbation(const TimeGrid& grid, std::size_t dim, double scale,
                                         std::mt19937_64& rng) {
    constexpr int n_modes = 4;
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(grid.n_nodes());
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(dim));
    const double span = grid.duration();
    for (std::size_t c = 0; c < dim; ++c) {
        for (int j = 1; j <= n_modes; ++j) {
            const double amplitude = scale * normal(rng) / static_cast<double>(j);
            for (Eigen::Index k = 0; k < n; ++k) {
                const double s = (grid.time(static_cast<std::size_t>(k)) - grid.t0) / span;
                delta(k, static_cast<Eigen::Index>(c)) +=
                    amplitude * std::sin(static_cast<double>(j) * M_PI * s);
            }
        }
    }
    return delta;
}

/// Closed-loop resimulation feeding a pure-control series through a coupling
/// with eps = 0.
Trajectory resimulate_with_pure(const DynamicsModel& model, const CouplingForm& coupling,
                                const ControlSignal& pure, const Eigen::VectorXd& initial_state,
                                const TimeGrid& grid) {
    const Eigen::VectorXd zero_eps = Eigen::VectorXd::Zero(coupling.total_epsilon_dim());
    auto policy = [&](double t, const Eigen::VectorXd& x) {
        return coupling.couple_full(x, pure.interpolate(t), zero_eps);
    };
    return integrate_policy(model, initial_state, grid, policy);
}

}  // namespace

double local_optimality_score(const GoalFunctional& K, const DynamicsModel& model,
                              const CouplingForm& coupling, const ControlSignal& pure_control,
                              const Trajectory& traj, int n_perturbations,
                              double perturbation_scale, std::uint64_t seed) {
    if (n_perturbations < 1) {
        throw InsufficientData("local_optimality_score: n_perturbations must be >= 1");
    }
    if (!(perturbation_scale > 0.0)) {
        throw BadConfig("local_optimality_score: perturbation scale must be > 0");
    }
    if (coupling.control_dim() != model.control_dim) {
        throw DimensionMismatch("local_optimality_score: coupling does not match model controls");
    }

    const Trajectory base = resimulate_with_pure(model, coupling, pure_control,
                                                 traj.state_at(0), traj.grid);
    const double base_goal = evaluate_goal(K, base);

    std::mt19937_64 rng(seed);
    int worsened = 0;
    for (int p = 0; p < n_perturbations; ++p) {
        const Eigen::MatrixXd delta =
            draw_smooth_perturbation(traj.grid, pure_control.dim(), perturbation_scale, rng);
        ControlSignal perturbed(pure_control.grid, pure_control.values + delta, SignalRole::pure);
        const Trajectory sim =
            resimulate_with_pure(model, coupling, perturbed, traj.state_at(0), traj.grid);
        if (evaluate_goal(K, sim) > base_goal) ++worsened;
    }
    return static_cast<double>(worsened) / static_cast<double>(n_perturbations);
}

CandidateRanking select_interactive_model(const Trajectory& traj,
                                          const std::vector<Candidate>& candidates,
                                          double holdout_fraction, const SelectionConfig& config) {
    if (candidates.empty()) throw EmptyCandidateSet("select_interactive_model: no candidates");
    if (!(holdout_fraction > 0.0) || !(holdout_fraction < 1.0)) {
        throw BadConfig("select_interactive_model: holdout fraction must lie in (0, 1)");
    }
    if (!traj.controls) {
        throw MissingInput("select_interactive_model: trajectory has no recorded controls");
    }

    const int d = static_cast<int>(traj.state_dim());
    const int k = static_cast<int>(traj.control_dim());
    const auto dictionary = monomial_dictionary(d, k, config.dictionary_degree);

    const std::size_t n_steps = traj.grid.n_steps;
    std::size_t suffix_steps = static_cast<std::size_t>(
        std::llround(holdout_fraction * static_cast<double>(n_steps)));
    suffix_steps = std::max<std::size_t>(suffix_steps, 1);
    if (suffix_steps >= n_steps) {
        throw InsufficientData("select_interactive_model: holdout leaves no training prefix");
    }
    const std::size_t split = n_steps - suffix_steps;
    if (split + 1 < dictionary.size() + 2) {
        throw InsufficientData("select_interactive_model: training prefix too short for the fit");
    }

    Trajectory train(TimeGrid(traj.grid.t0, traj.grid.dt, split),
                     traj.states.topRows(static_cast<Eigen::Index>(split + 1)),
                     traj.controls->topRows(static_cast<Eigen::Index>(split + 1)));
    const FitResult fit =
        fit_dynamics(train, dictionary, true, config.ridge, config.sparsify_threshold);

    const TimeGrid suffix_grid(traj.grid.time(split), traj.grid.dt, suffix_steps);
    const Eigen::MatrixXd observed_suffix =
        traj.states.bottomRows(static_cast<Eigen::Index>(suffix_steps + 1));

    SignalSet signals;
    signals.traj = &traj;

    CandidateRanking ranking;
    ranking.candidates = candidates;
    ranking.scores.resize(candidates.size());

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Candidate& cand = candidates[i];
        CandidateScore& score = ranking.scores[i];
        try {
            const ControlSignal pure = apply_filtration(cand.filtration, signals);
            if (static_cast<int>(pure.dim()) != cand.coupling.control_dim()) {
                throw DimensionMismatch(
                    "select_interactive_model: filtration output does not match coupling");
            }
            const Trajectory sim = resimulate_with_pure(fit.model, cand.coupling, pure,
                                                        traj.state_at(split), suffix_grid);
            score.prediction_error = std::sqrt((sim.states - observed_suffix).squaredNorm() /
                                               static_cast<double>(sim.states.size()));
            score.optimality_score = local_optimality_score(
                cand.goal, fit.model, cand.coupling, pure, traj, config.n_perturbations,
                config.perturbation_scale, config.seed);
        } catch (const NonFiniteState&) {
            // A diverging replay disqualifies the candidate but must not
            // abort the ranking of the others.
            score.prediction_error = std::numeric_limits<double>::max();
            score.optimality_score = 0.0;
        }
    }

    ranking.best_index = 0;
    for (std::size_t i = 1; i < ranking.scores.size(); ++i) {
        const auto& best = ranking.scores[ranking.best_index];
        const auto& cur = ranking.scores[i];
        if (cur.prediction_error < best.prediction_error ||
            (cur.prediction_error == best.prediction_error &&
             cur.optimality_score > best.optimality_score)) {
            ranking.best_index = i;
        }
    }
    return ranking;
}

}  // namespace igame
