#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "igame/errors.hpp"

namespace igame {

/// One multivariate monomial over a state block x and an input block u:
///   psi(x, u) = prod_i x_i^state_exponents[i] * prod_j u_j^control_exponents[j]
struct BasisTerm {
    std::vector<int> state_exponents;
    std::vector<int> control_exponents;

    int degree() const;
    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

    /// Unique readable descriptor, e.g. "1", "x0^2*u1".
    std::string key() const;

    bool operator==(const BasisTerm&) const = default;
};

/// All monomials over (state_dim + control_dim) variables with total degree
/// <= max_degree, ordered by total degree then lexicographic exponents.
std::vector<BasisTerm> monomial_dictionary(int state_dim, int control_dim, int max_degree);

/// Linear combination of dictionary terms mapping (x, u) to a vector:
///   F(x, u) = sum_j coefficients.col(j) * term_j(x, u)
///
/// Doubles as the DynamicsModel of the toolkit (output_dim == state_dim,
/// u = control), the running/terminal cost of a goal functional, the offset
/// and gain of a coupling, and the regression map of a desire map.
struct DictionaryExpansion {
    int state_dim = 0;
    int control_dim = 0;
    int output_dim = 0;
    std::vector<BasisTerm> terms;
    Eigen::MatrixXd coefficients;  // output_dim x |terms|

    DictionaryExpansion() = default;
    DictionaryExpansion(int state_dim_, int control_dim_, std::vector<BasisTerm> terms_,
                        Eigen::MatrixXd coefficients_);

    /// Feature vector (term_0(x,u), ..., term_{m-1}(x,u)).
    Eigen::VectorXd features(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    Eigen::VectorXd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

    int max_term_degree() const;
    void validate() const;

    /// Zero map of the given shape over the full monomial dictionary.
    static DictionaryExpansion zero(int state_dim, int control_dim, int output_dim, int degree);
    /// F(x, u) = u (identity on the input block).
    static DictionaryExpansion input_identity(int state_dim, int control_dim);
    /// Constant map F(x, u) = value.
    static DictionaryExpansion constant(int state_dim, int control_dim, const Eigen::VectorXd& value);
};

using DynamicsModel = DictionaryExpansion;

}  // namespace igame
