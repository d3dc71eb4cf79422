#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "igame/quantize.hpp"

using namespace igame;

namespace {

Eigen::MatrixXcd dense(const QuantumOperator& op) { return Eigen::MatrixXcd(op.matrix); }

/// Independent evolution oracle: full dense eigendecomposition of H.
Eigen::VectorXcd eigen_evolve(const QuantumOperator& H, const Eigen::VectorXcd& psi, double tau) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(H));
    const Eigen::VectorXcd phases =
        (Complex(0.0, -tau) * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * psi;
}

QuantumOperator random_hermitian(const FockSpace& space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    }
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    QuantumOperator op;
    op.matrix = h.sparseView();
    op.hermitian = true;
    return op;
}

Eigen::VectorXcd random_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = Complex(normal(rng), normal(rng));
    return psi;
}

}  // namespace

TEST_CASE("fock space indexing") {
    const FockSpace space(3, 2);
    CHECK(space.dimension() == 27);
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        CHECK(space.index_of(space.occupations(i)) == i);
    }
    CHECK(space.occupations(0) == std::vector<int>{0, 0, 0});
    CHECK(space.occupations(1) == std::vector<int>{0, 0, 1});  // last mode fastest
    CHECK_THROWS_AS(space.index_of({0, 0, 3}), DimensionMismatch);
}

TEST_CASE("ladder operators on a single truncated mode") {
    const FockSpace space(1, 3);
    auto [a, adag] = ladder_operators(space);
    REQUIRE(a.size() == 1);

    SUBCASE("annihilating the vacuum gives zero") {
        const auto psi = QuantumState::vacuum(space);
        CHECK((a[0].matrix * psi.coefficients).norm() == 0.0);
    }
    SUBCASE("creation from |1> gives sqrt(2)|2>") {
        const auto psi = QuantumState::basis_state(space, {1});
        const Eigen::VectorXcd out = adag[0].matrix * psi.coefficients;
        CHECK(std::abs(out[2] - Complex(std::sqrt(2.0), 0.0)) < 1e-15);
        CHECK(out.norm() == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("raising the top level is annihilated by the cutoff") {
        const auto psi = QuantumState::basis_state(space, {3});
        CHECK((adag[0].matrix * psi.coefficients).norm() == 0.0);
    }
}

TEST_CASE("commutation relations on the truncated space") {
    const FockSpace space(2, 3);
    auto [a, adag] = ladder_operators(space);
    const auto dim = static_cast<Eigen::Index>(space.dimension());

    SUBCASE("[a_a, a_b] vanishes exactly") {
        for (int alpha = 0; alpha < 2; ++alpha) {
            for (int beta = 0; beta < 2; ++beta) {
                const Eigen::MatrixXcd comm = dense(a[alpha]) * dense(a[beta]) -
                                              dense(a[beta]) * dense(a[alpha]);
                CHECK(comm.cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
    SUBCASE("[a_a, a†_b] = delta off the truncation boundary") {
        for (int alpha = 0; alpha < 2; ++alpha) {
            for (int beta = 0; beta < 2; ++beta) {
                const Eigen::MatrixXcd comm = dense(a[alpha]) * dense(adag[beta]) -
                                              dense(adag[beta]) * dense(a[alpha]);
                const double delta = alpha == beta ? 1.0 : 0.0;
                double deviation = 0.0;
                for (Eigen::Index r = 0; r < dim; ++r) {
                    const auto occ_r = space.occupations(static_cast<std::size_t>(r));
                    if (occ_r[alpha] == space.cutoff || occ_r[beta] == space.cutoff) continue;
                    for (Eigen::Index c = 0; c < dim; ++c) {
                        const auto occ_c = space.occupations(static_cast<std::size_t>(c));
                        if (occ_c[alpha] == space.cutoff || occ_c[beta] == space.cutoff) continue;
                        const Complex expected = r == c ? Complex(delta, 0.0) : Complex(0.0, 0.0);
                        deviation = std::max(deviation, std::abs(comm(r, c) - expected));
                    }
                }
                CHECK(deviation <= 1e-12);
            }
        }
    }
}

TEST_CASE("build_hamiltonian") {
    SUBCASE("the number operator comes out diagonal") {
        const FockSpace space(1, 5);
        HamiltonianSpec spec;
        spec.quadratic = Eigen::MatrixXcd::Identity(1, 1);
        const auto H = build_hamiltonian(spec, space);
        CHECK(H.hermitian);
        const Eigen::MatrixXcd h = dense(H);
        for (int n = 0; n <= 5; ++n) {
            CHECK(std::abs(h(n, n) - Complex(n, 0.0)) < 1e-14);
        }
        CHECK((h - h.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("the zero spec builds the zero operator") {
        const FockSpace space(2, 2);
        HamiltonianSpec spec;
        spec.quadratic = Eigen::MatrixXcd::Zero(2, 2);
        const auto H = build_hamiltonian(spec, space);
        CHECK(H.matrix.nonZeros() == 0);
    }
    SUBCASE("non-hermitian quadratic coefficients are rejected") {
        HamiltonianSpec spec;
        spec.quadratic = Eigen::MatrixXcd::Zero(2, 2);
        spec.quadratic(0, 1) = Complex(1.0, 0.0);
        spec.quadratic(1, 0) = Complex(0.5, 0.0);
        CHECK_THROWS_AS(build_hamiltonian(spec, FockSpace(2, 2)), NonHermitianSpec);
    }
    SUBCASE("vertex terms keep the operator hermitian") {
        const FockSpace space(2, 3);
        HamiltonianSpec spec;
        spec.quadratic = Eigen::MatrixXcd::Zero(2, 2);
        spec.vertex.assign(8, 0.0);
        spec.vertex[(0 * 2 + 1) * 2 + 1] = 0.3;  // a†_0 a_1 a_1 + h.c.
        const auto H = build_hamiltonian(spec, space);
        CHECK(H.hermitian);
        const Eigen::MatrixXcd h = dense(H);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(h.cwiseAbs().maxCoeff() > 0.0);
    }
}

TEST_CASE("evolve_slow") {
    SUBCASE("zero duration returns the state bitwise") {
        const FockSpace space(1, 4);
        const auto H = build_hamiltonian([] {
            HamiltonianSpec s;
            s.quadratic = Eigen::MatrixXcd::Identity(1, 1);
            return s;
        }(), space);
        QuantumState psi;
        psi.coefficients = random_state(space.dimension(), 5);
        const auto out = evolve_slow(psi, H, 0.0);
        CHECK((out.coefficients.array() == psi.coefficients.array()).all());
    }
    SUBCASE("the number operator only rotates phases") {
        const FockSpace space(1, 6);
        HamiltonianSpec spec;
        spec.quadratic = Eigen::MatrixXcd::Identity(1, 1);
        const auto H = build_hamiltonian(spec, space);
        const auto psi = QuantumState::basis_state(space, {2});
        const double tau = 0.83;
        const auto out = evolve_slow(psi, H, tau);
        const Complex expected = std::exp(Complex(0.0, -2.0 * tau));
        CHECK(std::abs(out.coefficients[2] - expected) < 1e-12);
        CHECK(std::abs(std::abs(out.coefficients[2]) - 1.0) <= 1e-12);
    }
    SUBCASE("random hermitian evolution is unitary and matches the dense oracle") {
        const FockSpace space(2, 7);  // dimension 64
        const auto H = random_hermitian(space, 21);
        QuantumState psi;
        psi.coefficients = random_state(space.dimension(), 22);
        const double before = psi.norm();
        const auto out = evolve_slow(psi, H, 0.6);
        CHECK(std::abs(out.norm() - before) <= 1e-10 * before);
        const Eigen::VectorXcd oracle = eigen_evolve(H, psi.coefficients, 0.6);
        CHECK((out.coefficients - oracle).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("evolution composes over time splits") {
        const FockSpace space(2, 5);
        const auto H = random_hermitian(space, 77);
        QuantumState psi;
        psi.coefficients = random_state(space.dimension(), 78);
        const auto one_shot = evolve_slow(psi, H, 0.9);
        const auto split = evolve_slow(evolve_slow(psi, H, 0.4), H, 0.5);
        CHECK((one_shot.coefficients - split.coefficients).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("diagonal quadratic spectra conserve the total occupation") {
        const FockSpace space(2, 4);
        HamiltonianSpec spec;
        spec.quadratic = Eigen::Vector2cd(1.3, 0.4).asDiagonal();
        const auto H = build_hamiltonian(spec, space);
        QuantumState psi;
        psi.coefficients = random_state(space.dimension(), 3);
        psi.coefficients /= psi.norm();
        const double before = total_occupation_expectation(psi, space);
        QuantumState evolved = psi;
        for (int step = 0; step < 5; ++step) evolved = evolve_slow(evolved, H, 0.37);
        CHECK(std::abs(total_occupation_expectation(evolved, space) - before) < 1e-10);
    }
    SUBCASE("non-hermitian operators are rejected") {
        QuantumOperator op;
        op.matrix = SparseComplex(4, 4);
        op.hermitian = false;
        QuantumState psi;
        psi.coefficients = Eigen::VectorXcd::Ones(4);
        CHECK_THROWS_AS(evolve_slow(psi, op, 1.0), NonHermitianSpec);
    }
}

TEST_CASE("quick_time_coefficients") {
    const TimeGrid grid(0.0, 0.1, 99);
    const Trajectory traj(grid, Eigen::MatrixXd::Zero(100, 1));

    auto eps_of = [&](double value) {
        EpsilonRepresentation eps;
        eps.coupling = CouplingForm::additive(1, 1);
        eps.pure_series = ControlSignal::zero(grid, 1, SignalRole::pure);
        eps.epsilon_series = {
            ControlSignal(grid, Eigen::MatrixXd::Constant(100, 1, value), SignalRole::epsilon)};
        return eps;
    };

    SUBCASE("zero filtration outputs give the zero spec") {
        FilterBasis basis;
        basis.specs = {FiltrationSpec::identity(SignalSource::epsilon)};
        const auto spec = quick_time_coefficients(basis, eps_of(0.0), traj, 10);
        CHECK(spec.quadratic.cwiseAbs().maxCoeff() == 0.0);
        CHECK(spec.vertex.empty());
    }
    SUBCASE("a single mode squares its output") {
        FilterBasis basis;
        basis.specs = {FiltrationSpec::identity(SignalSource::epsilon)};
        const auto spec = quick_time_coefficients(basis, eps_of(1.5), traj, 10);
        CHECK(spec.quadratic(0, 0).real() == doctest::Approx(2.25));
    }
    SUBCASE("two modes with outputs (1, 2) give the hand-computed product") {
        // Two epsilon coordinates held at 1 and 2; each mode reads one of them.
        EpsilonRepresentation eps;
        eps.coupling = CouplingForm::additive(1, 2);
        eps.pure_series = ControlSignal::zero(grid, 2, SignalRole::pure);
        Eigen::MatrixXd values(100, 2);
        values.col(0).setConstant(1.0);
        values.col(1).setConstant(2.0);
        eps.epsilon_series = {ControlSignal(grid, values, SignalRole::epsilon)};

        FilterBasis basis;
        basis.specs = {FiltrationSpec::identity(SignalSource::epsilon, {0}),
                       FiltrationSpec::identity(SignalSource::epsilon, {1})};
        const auto spec = quick_time_coefficients(basis, eps, traj, 10);
        CHECK(spec.quadratic(0, 0).real() == doctest::Approx(1.0));
        CHECK(spec.quadratic(0, 1).real() == doctest::Approx(2.0));
        CHECK(spec.quadratic(1, 0).real() == doctest::Approx(2.0));
        CHECK(spec.quadratic(1, 1).real() == doctest::Approx(4.0));
    }
    SUBCASE("window bounds") {
        FilterBasis basis;
        basis.specs = {FiltrationSpec::identity(SignalSource::epsilon)};
        CHECK_THROWS_AS(quick_time_coefficients(basis, eps_of(1.0), traj, 0), InsufficientData);
        CHECK_THROWS_AS(quick_time_coefficients(basis, eps_of(1.0), traj, 101), InsufficientData);
        CHECK_NOTHROW(quick_time_coefficients(basis, eps_of(1.0), traj, 1));
    }
    SUBCASE("duplicate basis specs are rejected") {
        FilterBasis basis;
        basis.specs = {FiltrationSpec::identity(SignalSource::epsilon),
                       FiltrationSpec::identity(SignalSource::epsilon)};
        CHECK_THROWS_AS(quick_time_coefficients(basis, eps_of(1.0), traj, 5), BadConfig);
    }
}
