#include "igame/basis.hpp"

#include <numeric>

namespace igame {

namespace {

double ipow(double base, int exponent) {
    double out = 1.0;
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

void enumerate_exponents(int n_vars, int budget, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == n_vars) {
        out.push_back(current);
        return;
    }
    for (int e = 0; e <= budget; ++e) {
        current.push_back(e);
        enumerate_exponents(n_vars, budget - e, current, out);
        current.pop_back();
    }
}

}  // namespace

int BasisTerm::degree() const {
    return std::accumulate(state_exponents.begin(), state_exponents.end(), 0) +
           std::accumulate(control_exponents.begin(), control_exponents.end(), 0);
}

double BasisTerm::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    double v = 1.0;
    for (std::size_t i = 0; i < state_exponents.size(); ++i) {
        if (state_exponents[i] != 0) v *= ipow(x[static_cast<Eigen::Index>(i)], state_exponents[i]);
    }
    for (std::size_t j = 0; j < control_exponents.size(); ++j) {
        if (control_exponents[j] != 0) v *= ipow(u[static_cast<Eigen::Index>(j)], control_exponents[j]);
    }
    return v;
}

std::string BasisTerm::key() const {
    std::string out;
    auto append = [&out](char symbol, std::size_t index, int exponent) {
        if (exponent == 0) return;
        if (!out.empty()) out += '*';
        out += symbol;
        out += std::to_string(index);
        if (exponent > 1) {
            out += '^';
            out += std::to_string(exponent);
        }
    };
    for (std::size_t i = 0; i < state_exponents.size(); ++i) append('x', i, state_exponents[i]);
    for (std::size_t j = 0; j < control_exponents.size(); ++j) append('u', j, control_exponents[j]);
    if (out.empty()) out = "1";
    return out;
}

std::vector<BasisTerm> monomial_dictionary(int state_dim, int control_dim, int max_degree) {
    if (state_dim < 0 || control_dim < 0 || max_degree < 0) {
        throw BadConfig("monomial_dictionary: dimensions and degree must be non-negative");
    }
    const int n_vars = state_dim + control_dim;
    std::vector<std::vector<int>> raw;
    std::vector<int> current;
    enumerate_exponents(n_vars, max_degree, current, raw);

    std::vector<BasisTerm> terms;
    terms.reserve(raw.size());
    for (int degree = 0; degree <= max_degree; ++degree) {
        for (const auto& exps : raw) {
            const int total = std::accumulate(exps.begin(), exps.end(), 0);
            if (total != degree) continue;
            BasisTerm term;
            term.state_exponents.assign(exps.begin(), exps.begin() + state_dim);
            term.control_exponents.assign(exps.begin() + state_dim, exps.end());
            terms.push_back(std::move(term));
        }
    }
    return terms;
}

DictionaryExpansion::DictionaryExpansion(int state_dim_, int control_dim_,
                                         std::vector<BasisTerm> terms_,
                                         Eigen::MatrixXd coefficients_)
    : state_dim(state_dim_),
      control_dim(control_dim_),
      output_dim(static_cast<int>(coefficients_.rows())),
      terms(std::move(terms_)),
      coefficients(std::move(coefficients_)) {
    validate();
}

Eigen::VectorXd DictionaryExpansion::features(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& u) const {
    if (x.size() != state_dim || u.size() != control_dim) {
        throw DimensionMismatch("DictionaryExpansion: input dimensions do not match");
    }
    Eigen::VectorXd f(static_cast<Eigen::Index>(terms.size()));
    for (std::size_t j = 0; j < terms.size(); ++j) {
        f[static_cast<Eigen::Index>(j)] = terms[j].eval(x, u);
    }
    return f;
}

Eigen::VectorXd DictionaryExpansion::eval(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& u) const {
    return coefficients * features(x, u);
}

int DictionaryExpansion::max_term_degree() const {
    int degree = 0;
    for (const auto& t : terms) degree = std::max(degree, t.degree());
    return degree;
}

void DictionaryExpansion::validate() const {
    if (coefficients.rows() != output_dim ||
        coefficients.cols() != static_cast<Eigen::Index>(terms.size())) {
        throw DimensionMismatch("DictionaryExpansion: coefficient shape must be output_dim x |terms|");
    }
    for (const auto& t : terms) {
        if (static_cast<int>(t.state_exponents.size()) != state_dim ||
            static_cast<int>(t.control_exponents.size()) != control_dim) {
            throw DimensionMismatch("DictionaryExpansion: term exponent sizes must match dimensions");
        }
        for (int e : t.state_exponents) {
            if (e < 0) throw BadConfig("BasisTerm: exponents must be non-negative");
        }
        for (int e : t.control_exponents) {
            if (e < 0) throw BadConfig("BasisTerm: exponents must be non-negative");
        }
    }
}

DictionaryExpansion DictionaryExpansion::zero(int state_dim, int control_dim, int output_dim,
                                              int degree) {
    auto terms = monomial_dictionary(state_dim, control_dim, degree);
    Eigen::MatrixXd coeffs =
        Eigen::MatrixXd::Zero(output_dim, static_cast<Eigen::Index>(terms.size()));
    return DictionaryExpansion(state_dim, control_dim, std::move(terms), std::move(coeffs));
}

DictionaryExpansion DictionaryExpansion::input_identity(int state_dim, int control_dim) {
    std::vector<BasisTerm> terms;
    terms.reserve(static_cast<std::size_t>(control_dim));
    for (int j = 0; j < control_dim; ++j) {
        BasisTerm t;
        t.state_exponents.assign(static_cast<std::size_t>(state_dim), 0);
        t.control_exponents.assign(static_cast<std::size_t>(control_dim), 0);
        t.control_exponents[static_cast<std::size_t>(j)] = 1;
        terms.push_back(std::move(t));
    }
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Identity(control_dim, control_dim);
    return DictionaryExpansion(state_dim, control_dim, std::move(terms), std::move(coeffs));
}

DictionaryExpansion DictionaryExpansion::constant(int state_dim, int control_dim,
                                                  const Eigen::VectorXd& value) {
    BasisTerm one;
    one.state_exponents.assign(static_cast<std::size_t>(state_dim), 0);
    one.control_exponents.assign(static_cast<std::size_t>(control_dim), 0);
    Eigen::MatrixXd coeffs = value;
    return DictionaryExpansion(state_dim, control_dim, {one}, std::move(coeffs));
}

}  // namespace igame
