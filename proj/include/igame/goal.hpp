#pragma once

#include "igame/basis.hpp"
#include "igame/types.hpp"

namespace igame {

/// Evaluation window of a goal functional.
struct GoalHorizon {
    enum class Kind { full, trailing };
    Kind kind = Kind::full;
    std::size_t nodes = 0;  // trailing window length in nodes (>= 2 when used)
};

/// K([phi]) = integral of g(phi, phidot) dt over the horizon + h(phi(T)).
/// running: expansion over (state=phi, input=phidot), one output row.
/// terminal: expansion over phi only, one output row. Empty terms mean 0.
struct GoalFunctional {
    DictionaryExpansion running;
    DictionaryExpansion terminal;
    GoalHorizon horizon;

    static GoalFunctional running_only(DictionaryExpansion g);
};

/// Trapezoidal quadrature of the running cost (derivatives from
/// estimate_derivatives) plus the terminal cost.
double evaluate_goal(const GoalFunctional& K, const Trajectory& traj);

/// Convenience: running cost that is a polynomial in phi alone, given by
/// monomial coefficients over a degree-`degree` dictionary of dimension d.
GoalFunctional state_polynomial_goal(int state_dim, int degree, const Eigen::VectorXd& coefficients);

}  // namespace igame
