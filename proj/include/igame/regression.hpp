#pragma once

#include <Eigen/Dense>
#include <vector>

#include "igame/basis.hpp"

namespace igame {

/// Feature matrix with one row per node: Theta(k, j) = term_j(x_k, u_k).
/// `inputs` may have zero columns for autonomous dictionaries.
Eigen::MatrixXd feature_matrix(const std::vector<BasisTerm>& terms, const Eigen::MatrixXd& states,
                               const Eigen::MatrixXd& inputs);

struct RegressionResult {
    Eigen::MatrixXd coefficients;  // targets-cols x features-cols
    double rms_residual = 0.0;     // over all (node, coordinate) entries
    double max_node_residual = 0.0;  // max over nodes of the 2-norm row mismatch
};

/// Ridge least squares of targets (n x q) against features (n x p), followed
/// by iterated hard thresholding of coefficients below sparsify_threshold
/// with a refit on the surviving terms after each prune (per target row).
/// ridge == 0 uses an exact minimum-norm solve.
RegressionResult fit_linear_map(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                                double ridge, double sparsify_threshold = 0.0);

}  // namespace igame
