#include "igame/regression.hpp"

#include <algorithm>
#include <cmath>

#include "igame/errors.hpp"

namespace igame {

Eigen::MatrixXd feature_matrix(const std::vector<BasisTerm>& terms, const Eigen::MatrixXd& states,
                               const Eigen::MatrixXd& inputs) {
    if (inputs.cols() > 0 && inputs.rows() != states.rows()) {
        throw DimensionMismatch("feature_matrix: states and inputs must have equal node counts");
    }
    Eigen::MatrixXd theta(states.rows(), static_cast<Eigen::Index>(terms.size()));
    Eigen::VectorXd empty(0);
    for (Eigen::Index k = 0; k < states.rows(); ++k) {
        const Eigen::VectorXd x = states.row(k).transpose();
        const Eigen::VectorXd u = inputs.cols() > 0 ? inputs.row(k).transpose() : empty;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            theta(k, static_cast<Eigen::Index>(j)) = terms[j].eval(x, u);
        }
    }
    return theta;
}

namespace {

Eigen::MatrixXd solve_columns(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double ridge) {
    if (ridge > 0.0) {
        const Eigen::MatrixXd gram =
            X.transpose() * X + ridge * Eigen::MatrixXd::Identity(X.cols(), X.cols());
        return gram.ldlt().solve(X.transpose() * Y);
    }
    return X.completeOrthogonalDecomposition().solve(Y);
}

}  // namespace

RegressionResult fit_linear_map(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                                double ridge, double sparsify_threshold) {
    if (features.rows() != targets.rows()) {
        throw DimensionMismatch("fit_linear_map: feature and target node counts differ");
    }
    if (ridge < 0.0) throw BadConfig("fit_linear_map: ridge must be >= 0");
    if (sparsify_threshold < 0.0) throw BadConfig("fit_linear_map: sparsify threshold must be >= 0");

    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    const Eigen::Index q = targets.cols();

    Eigen::MatrixXd beta = solve_columns(features, targets, ridge);  // p x q

    if (sparsify_threshold > 0.0) {
        for (Eigen::Index col = 0; col < q; ++col) {
            std::vector<Eigen::Index> active;
            for (Eigen::Index j = 0; j < p; ++j) {
                if (std::abs(beta(j, col)) >= sparsify_threshold) active.push_back(j);
            }
            for (int iter = 0; iter < 20; ++iter) {
                if (active.empty()) break;
                Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(active.size()));
                for (std::size_t j = 0; j < active.size(); ++j) {
                    sub.col(static_cast<Eigen::Index>(j)) = features.col(active[j]);
                }
                Eigen::VectorXd b = solve_columns(sub, targets.col(col), ridge);
                std::vector<Eigen::Index> next;
                for (std::size_t j = 0; j < active.size(); ++j) {
                    if (std::abs(b[static_cast<Eigen::Index>(j)]) >= sparsify_threshold) {
                        next.push_back(active[j]);
                    }
                }
                const bool stable = next == active;
                beta.col(col).setZero();
                for (std::size_t j = 0; j < active.size(); ++j) {
                    const double v = b[static_cast<Eigen::Index>(j)];
                    beta(active[j], col) = std::abs(v) >= sparsify_threshold ? v : 0.0;
                }
                active = std::move(next);
                if (stable) break;
            }
            if (active.empty()) {
                beta.col(col).setZero();
                const double target_scale = targets.col(col).cwiseAbs().maxCoeff();
                if (target_scale > 1e-10) {
                    throw DegenerateRegression(
                        "fit_linear_map: all terms pruned for a target with non-zero norm");
                }
            }
        }
    } else {
        // A target that cannot be touched by any feature is degenerate.
        const double feature_scale = features.cwiseAbs().maxCoeff();
        const double target_scale = targets.size() > 0 ? targets.cwiseAbs().maxCoeff() : 0.0;
        if ((p == 0 || feature_scale < 1e-14) && target_scale > 1e-10) {
            throw DegenerateRegression("fit_linear_map: feature matrix has zero column norms");
        }
    }

    RegressionResult out;
    out.coefficients = beta.transpose();  // q x p
    const Eigen::MatrixXd resid = targets - features * beta;
    out.rms_residual =
        n > 0 && q > 0 ? std::sqrt(resid.squaredNorm() / static_cast<double>(n * q)) : 0.0;
    out.max_node_residual = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        out.max_node_residual = std::max(out.max_node_residual, resid.row(k).norm());
    }
    return out;
}

}  // namespace igame
