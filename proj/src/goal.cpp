#include "igame/goal.hpp"

#include "igame/dynamics.hpp"

namespace igame {

GoalFunctional GoalFunctional::running_only(DictionaryExpansion g) {
    GoalFunctional K;
    K.running = std::move(g);
    return K;
}

double evaluate_goal(const GoalFunctional& K, const Trajectory& traj) {
    const auto d = static_cast<int>(traj.state_dim());
    double value = 0.0;

    if (!K.running.terms.empty()) {
        if (K.running.state_dim != d || K.running.control_dim != d || K.running.output_dim != 1) {
            throw DimensionMismatch("evaluate_goal: running cost must map (phi, phidot) to a scalar");
        }
        const Eigen::MatrixXd derivs = estimate_derivatives(traj);
        const std::size_t n_nodes = traj.grid.n_nodes();
        std::size_t start = 0;
        if (K.horizon.kind == GoalHorizon::Kind::trailing) {
            const std::size_t window = std::min(K.horizon.nodes, n_nodes);
            start = n_nodes - window;
        }
        Eigen::VectorXd g(static_cast<Eigen::Index>(n_nodes - start));
        for (std::size_t k = start; k < n_nodes; ++k) {
            g[static_cast<Eigen::Index>(k - start)] =
                K.running.eval(traj.state_at(k), derivs.row(static_cast<Eigen::Index>(k)).transpose())[0];
        }
        for (Eigen::Index k = 0; k + 1 < g.size(); ++k) {
            value += 0.5 * (g[k] + g[k + 1]) * traj.grid.dt;
        }
    }

    if (!K.terminal.terms.empty()) {
        if (K.terminal.state_dim != d || K.terminal.control_dim != 0 || K.terminal.output_dim != 1) {
            throw DimensionMismatch("evaluate_goal: terminal cost must map phi(T) to a scalar");
        }
        value += K.terminal.eval(traj.state_at(traj.grid.n_steps), Eigen::VectorXd(0))[0];
    }
    return value;
}

GoalFunctional state_polynomial_goal(int state_dim, int degree,
                                     const Eigen::VectorXd& coefficients) {
    auto state_terms = monomial_dictionary(state_dim, 0, degree);
    if (coefficients.size() != static_cast<Eigen::Index>(state_terms.size())) {
        throw DimensionMismatch("state_polynomial_goal: coefficient count does not match dictionary");
    }
    // Embed phi-only monomials into the (phi, phidot) input convention.
    for (auto& t : state_terms) {
        t.control_exponents.assign(static_cast<std::size_t>(state_dim), 0);
    }
    GoalFunctional K;
    K.running = DictionaryExpansion(state_dim, state_dim, std::move(state_terms),
                                    coefficients.transpose());
    return K;
}

}  // namespace igame
