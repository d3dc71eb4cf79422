#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <utility>
#include <vector>

#include "igame/epsilon.hpp"
#include "igame/filtration.hpp"

namespace igame {

/// Ordered basis of the classical filtration space H; one quantum mode per
/// spec. Specs must be pairwise distinct under serialization.
struct FilterBasis {
    std::vector<FiltrationSpec> specs;

    std::size_t mode_count() const { return specs.size(); }
    void validate() const;
};

/// Truncated bosonic Fock space over the desire modes: occupation tuples
/// (n_1..n_m) with 0 <= n_alpha <= cutoff, ordered lexicographically (the
/// last mode varies fastest).
struct FockSpace {
    int modes = 1;
    int cutoff = 1;

    FockSpace() = default;
    FockSpace(int modes_, int cutoff_);

    std::size_t dimension() const;
    std::vector<int> occupations(std::size_t index) const;
    std::size_t index_of(const std::vector<int>& occupation) const;
};

using Complex = std::complex<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;

struct QuantumState {
    Eigen::VectorXcd coefficients;

    double norm() const { return coefficients.norm(); }

    static QuantumState basis_state(const FockSpace& space, const std::vector<int>& occupation);
    static QuantumState vacuum(const FockSpace& space);
};

struct QuantumOperator {
    SparseComplex matrix;
    bool hermitian = false;

    std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Standard truncated ladder operators: a†|..n..> = sqrt(n+1)|..n+1..> with
/// the raise of a top-level occupation mapped to zero; a = a†^H.
/// Returns (annihilation, creation), one pair per mode.
std::pair<std::vector<QuantumOperator>, std::vector<QuantumOperator>> ladder_operators(
    const FockSpace& space);

/// Quadratic propagator coefficients plus real cubic vertex coefficients
/// g[(alpha*m + beta)*m + gamma] (added together with the conjugate
/// transpose partner).
struct HamiltonianSpec {
    Eigen::MatrixXcd quadratic;   // omega, hermitian m x m
    std::vector<double> vertex;   // g, size m^3 or empty

    int modes() const { return static_cast<int>(quadratic.rows()); }
    double vertex_at(int a, int b, int c) const;
    bool has_vertex() const;
    void validate() const;  // throws NonHermitianSpec
};

/// H = sum omega_ab a†_a a_b + sum g_abc (a†_a a_b a_c + h.c.)
QuantumOperator build_hamiltonian(const HamiltonianSpec& spec, const FockSpace& space);

/// exp(-i H duration) * state via a Lanczos–Krylov projection with full
/// reorthogonalization (time-split when the subspace does not converge).
QuantumState evolve_slow(const QuantumState& state, const QuantumOperator& hamiltonian,
                         double duration, double tolerance = 1e-12);

/// Classical quick-time pass: evaluate every basis filtration on the trailing
/// window of the (eps, phi) record and form omega as the symmetrized product
/// of the scalar outputs (multi-coordinate outputs are averaged); g = 0.
HamiltonianSpec quick_time_coefficients(const FilterBasis& basis, const EpsilonRepresentation& eps,
                                        const Trajectory& traj, std::size_t window);

/// <state| N_total |state> / <state|state>, the total occupation expectation.
double total_occupation_expectation(const QuantumState& state, const FockSpace& space);

}  // namespace igame
