#include <doctest.h>

#include <random>

#include "igame/dynamics.hpp"

using namespace igame;

namespace {

DynamicsModel model_from(int d, int k, int degree,
                         const std::vector<std::pair<std::string, double>>& entries,
                         int row = 0) {
    auto terms = monomial_dictionary(d, k, degree);
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(terms.size()));
    for (const auto& [key, value] : entries) {
        bool found = false;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (terms[j].key() == key) {
                coeffs(row, static_cast<Eigen::Index>(j)) = value;
                found = true;
            }
        }
        REQUIRE(found);
    }
    return DynamicsModel(d, k, std::move(terms), std::move(coeffs));
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("monomial dictionary enumerates unique terms up to the degree") {
    const auto dict = monomial_dictionary(2, 1, 3);
    // C(3+3,3) = 20 monomials in 3 variables of degree <= 3.
    CHECK(dict.size() == 20);
    std::vector<std::string> keys;
    for (const auto& t : dict) keys.push_back(t.key());
    std::sort(keys.begin(), keys.end());
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    for (const auto& t : dict) CHECK(t.degree() <= 3);
}

TEST_CASE("evaluate_rhs reads off the dictionary expansion") {
    SUBCASE("zero coefficients give the zero field") {
        const auto model = model_from(1, 0, 2, {});
        CHECK(evaluate_rhs(model, scalar(3.7), Eigen::VectorXd(0))[0] == 0.0);
    }
    SUBCASE("phidot = -phi") {
        const auto model = model_from(1, 0, 1, {{"x0", -1.0}});
        CHECK(evaluate_rhs(model, scalar(2.0), Eigen::VectorXd(0))[0] == doctest::Approx(-2.0));
    }
    SUBCASE("phidot = phi^2 + 3u at (2, 1)") {
        const auto model = model_from(1, 1, 2, {{"x0^2", 1.0}, {"u0", 3.0}});
        CHECK(evaluate_rhs(model, scalar(2.0), scalar(1.0))[0] == doctest::Approx(7.0));
    }
    SUBCASE("dimension mismatch is rejected") {
        const auto model = model_from(1, 0, 1, {{"x0", -1.0}});
        CHECK_THROWS_AS(evaluate_rhs(model, Eigen::VectorXd::Zero(2), Eigen::VectorXd(0)),
                        DimensionMismatch);
    }
}

TEST_CASE("evaluate_rhs is linear in the coefficient matrix") {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> normal;
    const auto terms = monomial_dictionary(2, 1, 2);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd c1(2, static_cast<Eigen::Index>(terms.size()));
        Eigen::MatrixXd c2(2, static_cast<Eigen::Index>(terms.size()));
        for (Eigen::Index i = 0; i < c1.size(); ++i) {
            c1.data()[i] = normal(rng);
            c2.data()[i] = normal(rng);
        }
        const DynamicsModel a(2, 1, terms, c1);
        const DynamicsModel b(2, 1, terms, c2);
        const DynamicsModel sum(2, 1, terms, c1 + c2);
        const Eigen::Vector2d x(normal(rng), normal(rng));
        const Eigen::VectorXd u = scalar(normal(rng));
        const Eigen::VectorXd lhs = evaluate_rhs(sum, x, u);
        const Eigen::VectorXd rhs = evaluate_rhs(a, x, u) + evaluate_rhs(b, x, u);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("integrate") {
    SUBCASE("zero dynamics holds the state") {
        const auto model = model_from(1, 0, 1, {});
        const auto traj = integrate(model, scalar(1.0), nullptr, TimeGrid(0.0, 0.1, 50));
        CHECK(traj.states.col(0).minCoeff() == 1.0);
        CHECK(traj.states.col(0).maxCoeff() == 1.0);
    }
    SUBCASE("exponential decay matches the closed form") {
        const auto model = model_from(1, 0, 1, {{"x0", -1.0}});
        const auto traj = integrate(model, scalar(1.0), nullptr, TimeGrid(0.0, 0.01, 100));
        CHECK(std::abs(traj.states(100, 0) - 0.3678794) < 1e-6);
        CHECK(std::abs(traj.states(100, 0) - std::exp(-1.0)) < 1e-6);
    }
    SUBCASE("phidot = u with unit control is exact at the nodes") {
        const auto model = model_from(1, 1, 1, {{"u0", 1.0}});
        const TimeGrid grid(0.0, 0.05, 40);
        const auto u = ControlSignal(grid, Eigen::MatrixXd::Ones(41, 1), SignalRole::interactive);
        const auto traj = integrate(model, scalar(0.0), &u, grid);
        for (std::size_t k = 0; k <= 40; ++k) {
            CHECK(traj.states(static_cast<Eigen::Index>(k), 0) ==
                  doctest::Approx(grid.time(k)).epsilon(1e-13));
        }
        REQUIRE(traj.controls.has_value());
        CHECK(traj.controls->col(0).minCoeff() == 1.0);
    }
    SUBCASE("identical inputs give bitwise identical trajectories") {
        const auto model = model_from(1, 0, 2, {{"x0", -0.7}, {"x0^2", 0.1}});
        const TimeGrid grid(0.0, 0.01, 300);
        const auto a = integrate(model, scalar(1.3), nullptr, grid);
        const auto b = integrate(model, scalar(1.3), nullptr, grid);
        CHECK((a.states.array() == b.states.array()).all());
    }
    SUBCASE("finite-range escape raises NonFiniteState") {
        const auto model = model_from(1, 0, 2, {{"x0^2", 1.0}});
        CHECK_THROWS_AS(integrate(model, scalar(2.0), nullptr, TimeGrid(0.0, 0.01, 200)),
                        NonFiniteState);
    }
}

TEST_CASE("estimate_derivatives") {
    SUBCASE("constant trajectory has zero derivatives") {
        const Trajectory traj(TimeGrid(0.0, 0.1, 10), Eigen::MatrixXd::Constant(11, 1, 4.2));
        CHECK(estimate_derivatives(traj).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("affine data is differentiated exactly") {
        const TimeGrid grid(0.0, 0.1, 10);
        Eigen::MatrixXd states(11, 1);
        for (int k = 0; k <= 10; ++k) states(k, 0) = grid.time(static_cast<std::size_t>(k));
        const auto d = estimate_derivatives(Trajectory(grid, states));
        CHECK((d.array() - 1.0).abs().maxCoeff() < 1e-13);
    }
    SUBCASE("central differences are exact for quadratics") {
        const TimeGrid grid(0.0, 0.1, 10);
        Eigen::MatrixXd states(11, 1);
        for (int k = 0; k <= 10; ++k) {
            const double t = grid.time(static_cast<std::size_t>(k));
            states(k, 0) = t * t;
        }
        const auto d = estimate_derivatives(Trajectory(grid, states));
        CHECK(d(5, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("needs at least two steps") {
        const Trajectory traj(TimeGrid(0.0, 0.1, 1), Eigen::MatrixXd::Zero(2, 1));
        CHECK_THROWS_AS(estimate_derivatives(traj), InsufficientData);
    }
}

TEST_CASE("derivative estimates converge at second order along integrated paths") {
    const auto model = model_from(1, 0, 2, {{"1", 0.3}, {"x0", 0.5}, {"x0^2", -0.2}});
    auto max_error = [&](double dt, std::size_t steps) {
        const auto traj = integrate(model, scalar(0.4), nullptr, TimeGrid(0.0, dt, steps));
        const auto d = estimate_derivatives(traj);
        double err = 0.0;
        for (std::size_t k = 0; k <= steps; ++k) {
            const auto rhs = evaluate_rhs(model, traj.state_at(k), Eigen::VectorXd(0));
            err = std::max(err, std::abs(d(static_cast<Eigen::Index>(k), 0) - rhs[0]));
        }
        return err;
    };
    const double coarse = max_error(0.02, 100);
    const double fine = max_error(0.01, 200);
    CHECK(coarse / fine >= 3.5);
}

TEST_CASE("closed-loop integration records the policy at the nodes") {
    const auto model = model_from(1, 1, 1, {{"u0", 1.0}});
    const TimeGrid grid(0.0, 0.01, 100);
    const auto traj = integrate_policy(model, scalar(0.0), grid, [](double, const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Constant(1, 1.0 - x[0]);
    });
    REQUIRE(traj.controls.has_value());
    // phidot = 1 - phi from 0: phi(t) = 1 - e^{-t}.
    CHECK(std::abs(traj.states(100, 0) - (1.0 - std::exp(-1.0))) < 1e-8);
    CHECK(std::abs((*traj.controls)(100, 0) - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("time grid invariants") {
    CHECK_THROWS_AS(TimeGrid(0.0, 0.0, 10), BadConfig);
    CHECK_THROWS_AS(TimeGrid(0.0, -0.1, 10), BadConfig);
    CHECK_THROWS_AS(TimeGrid(0.0, 0.1, 0), BadConfig);
    const TimeGrid grid(1.0, 0.5, 4);
    CHECK(grid.time(3) == doctest::Approx(2.5));
    CHECK(grid.n_nodes() == 5);
}
