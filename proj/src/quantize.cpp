#include "igame/quantize.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "igame/serialize.hpp"

namespace igame {

void FilterBasis::validate() const {
    if (specs.empty()) throw BadConfig("FilterBasis: need at least one filtration spec");
    std::vector<std::string> keys;
    for (const auto& spec : specs) {
        spec.validate();
        keys.push_back(serialize_filtration(spec));
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            if (keys[i] == keys[j]) {
                throw BadConfig("FilterBasis: specs must be distinct under serialization");
            }
        }
    }
}

FockSpace::FockSpace(int modes_, int cutoff_) : modes(modes_), cutoff(cutoff_) {
    if (modes < 1) throw BadConfig("FockSpace: need at least one mode");
    if (cutoff < 0) throw BadConfig("FockSpace: cutoff must be >= 0");
    double dim = 1.0;
    for (int i = 0; i < modes; ++i) dim *= static_cast<double>(cutoff + 1);
    if (dim > 1e7) throw BadConfig("FockSpace: dimension too large for desk-scale simulation");
}

std::size_t FockSpace::dimension() const {
    std::size_t dim = 1;
    for (int i = 0; i < modes; ++i) dim *= static_cast<std::size_t>(cutoff + 1);
    return dim;
}

std::vector<int> FockSpace::occupations(std::size_t index) const {
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    const auto base = static_cast<std::size_t>(cutoff + 1);
    for (int alpha = modes - 1; alpha >= 0; --alpha) {
        occ[static_cast<std::size_t>(alpha)] = static_cast<int>(index % base);
        index /= base;
    }
    return occ;
}

std::size_t FockSpace::index_of(const std::vector<int>& occupation) const {
    if (occupation.size() != static_cast<std::size_t>(modes)) {
        throw DimensionMismatch("FockSpace: occupation tuple has wrong mode count");
    }
    const auto base = static_cast<std::size_t>(cutoff + 1);
    std::size_t index = 0;
    for (int n : occupation) {
        if (n < 0 || n > cutoff) throw DimensionMismatch("FockSpace: occupation out of range");
        index = index * base + static_cast<std::size_t>(n);
    }
    return index;
}

QuantumState QuantumState::basis_state(const FockSpace& space, const std::vector<int>& occupation) {
    QuantumState psi;
    psi.coefficients = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dimension()));
    psi.coefficients[static_cast<Eigen::Index>(space.index_of(occupation))] = Complex(1.0, 0.0);
    return psi;
}

QuantumState QuantumState::vacuum(const FockSpace& space) {
    return basis_state(space, std::vector<int>(static_cast<std::size_t>(space.modes), 0));
}

std::pair<std::vector<QuantumOperator>, std::vector<QuantumOperator>> ladder_operators(
    const FockSpace& space) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    std::vector<QuantumOperator> lowering, raising;
    for (int alpha = 0; alpha < space.modes; ++alpha) {
        std::vector<Eigen::Triplet<Complex>> entries;
        for (std::size_t col = 0; col < space.dimension(); ++col) {
            auto occ = space.occupations(col);
            const int n = occ[static_cast<std::size_t>(alpha)];
            if (n >= space.cutoff) continue;  // raising the top level gives 0
            occ[static_cast<std::size_t>(alpha)] = n + 1;
            entries.emplace_back(static_cast<int>(space.index_of(occ)), static_cast<int>(col),
                                 Complex(std::sqrt(static_cast<double>(n) + 1.0), 0.0));
        }
        QuantumOperator create;
        create.matrix.resize(dim, dim);
        create.matrix.setFromTriplets(entries.begin(), entries.end());
        QuantumOperator annihilate;
        annihilate.matrix = create.matrix.adjoint();
        raising.push_back(std::move(create));
        lowering.push_back(std::move(annihilate));
    }
    return {std::move(lowering), std::move(raising)};
}

double HamiltonianSpec::vertex_at(int a, int b, int c) const {
    if (vertex.empty()) return 0.0;
    const int m = modes();
    return vertex[static_cast<std::size_t>((a * m + b) * m + c)];
}

bool HamiltonianSpec::has_vertex() const {
    for (double g : vertex) {
        if (g != 0.0) return true;
    }
    return false;
}

void HamiltonianSpec::validate() const {
    const int m = modes();
    if (m < 1 || quadratic.cols() != m) {
        throw DimensionMismatch("HamiltonianSpec: quadratic part must be square and non-empty");
    }
    const double scale = 1.0 + quadratic.cwiseAbs().maxCoeff();
    if ((quadratic - quadratic.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NonHermitianSpec("HamiltonianSpec: quadratic coefficients are not hermitian");
    }
    if (!vertex.empty() && vertex.size() != static_cast<std::size_t>(m) * m * m) {
        throw DimensionMismatch("HamiltonianSpec: vertex coefficients must have m^3 entries");
    }
    for (double g : vertex) {
        if (!std::isfinite(g)) throw BadConfig("HamiltonianSpec: vertex coefficients must be finite");
    }
}

QuantumOperator build_hamiltonian(const HamiltonianSpec& spec, const FockSpace& space) {
    spec.validate();
    if (spec.modes() != space.modes) {
        throw DimensionMismatch("build_hamiltonian: spec and space disagree on mode count");
    }
    auto [a, adag] = ladder_operators(space);
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    SparseComplex H(dim, dim);

    for (int alpha = 0; alpha < space.modes; ++alpha) {
        for (int beta = 0; beta < space.modes; ++beta) {
            const Complex w = spec.quadratic(alpha, beta);
            if (w == Complex(0.0, 0.0)) continue;
            H += w * (adag[static_cast<std::size_t>(alpha)].matrix *
                      a[static_cast<std::size_t>(beta)].matrix);
        }
    }
    if (!spec.vertex.empty()) {
        for (int alpha = 0; alpha < space.modes; ++alpha) {
            for (int beta = 0; beta < space.modes; ++beta) {
                for (int gamma = 0; gamma < space.modes; ++gamma) {
                    const double g = spec.vertex_at(alpha, beta, gamma);
                    if (g == 0.0) continue;
                    const SparseComplex term = g * (adag[static_cast<std::size_t>(alpha)].matrix *
                                                    a[static_cast<std::size_t>(beta)].matrix *
                                                    a[static_cast<std::size_t>(gamma)].matrix);
                    H += term;
                    H += SparseComplex(term.adjoint());
                }
            }
        }
    }

    QuantumOperator out;
    out.matrix = std::move(H);
    out.matrix.makeCompressed();
    const SparseComplex asym = SparseComplex(out.matrix.adjoint()) - out.matrix;
    double deviation = 0.0;
    for (int k = 0; k < asym.outerSize(); ++k) {
        for (SparseComplex::InnerIterator it(asym, k); it; ++it) {
            deviation = std::max(deviation, std::abs(it.value()));
        }
    }
    if (deviation > 1e-10) {
        throw NonHermitianSpec("build_hamiltonian: assembled operator failed the hermiticity check");
    }
    out.hermitian = true;
    return out;
}

namespace {

/// One Lanczos pass; returns false when the Krylov space did not converge at
/// the maximal size (caller splits the time step).
bool lanczos_expm_apply(const SparseComplex& H, const Eigen::VectorXcd& psi, double duration,
                        double tolerance, Eigen::VectorXcd& out) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0) {
        out = psi;
        return true;
    }
    const Eigen::Index dim = psi.size();
    const Eigen::Index m_max = std::min<Eigen::Index>(dim, 140);

    std::vector<Eigen::VectorXcd> basis;
    basis.reserve(static_cast<std::size_t>(m_max));
    basis.push_back(psi / beta0);
    std::vector<double> alpha, beta;  // tridiagonal coefficients

    for (Eigen::Index j = 0; j < m_max; ++j) {
        Eigen::VectorXcd w = H * basis[static_cast<std::size_t>(j)];
        alpha.push_back(basis[static_cast<std::size_t>(j)].dot(w).real());
        w -= alpha.back() * basis[static_cast<std::size_t>(j)];
        if (j > 0) w -= beta.back() * basis[static_cast<std::size_t>(j - 1)];
        // Full reorthogonalization keeps the basis numerically orthonormal.
        for (const auto& v : basis) w -= v.dot(w) * v;
        const double b = w.norm();

        const auto k = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Eigen::VectorXcd phases =
            (Complex(0.0, -duration) * es.eigenvalues().cast<Complex>().array()).exp().matrix();
        const Eigen::VectorXcd small = es.eigenvectors().cast<Complex>() *
                                       phases.asDiagonal() *
                                       es.eigenvectors().cast<Complex>().adjoint() *
                                       Eigen::VectorXcd::Unit(k, 0);

        const bool exhausted = b < 1e-13 * (1.0 + std::abs(alpha.back()));
        const double error_estimate = exhausted ? 0.0 : b * std::abs(small[k - 1]) * std::abs(duration);
        if (exhausted || error_estimate < tolerance || k == m_max) {
            if (!exhausted && error_estimate >= tolerance && k == m_max) return false;
            out = Eigen::VectorXcd::Zero(dim);
            for (Eigen::Index i = 0; i < k; ++i) {
                out += small[i] * basis[static_cast<std::size_t>(i)];
            }
            out *= beta0;
            return true;
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }
    return false;
}

}  // namespace

QuantumState evolve_slow(const QuantumState& state, const QuantumOperator& hamiltonian,
                         double duration, double tolerance) {
    if (!hamiltonian.hermitian) {
        throw NonHermitianSpec("evolve_slow: hamiltonian must be hermitian");
    }
    if (static_cast<Eigen::Index>(hamiltonian.dimension()) != state.coefficients.size()) {
        throw DimensionMismatch("evolve_slow: state and hamiltonian dimensions differ");
    }
    if (duration == 0.0 || hamiltonian.matrix.nonZeros() == 0) {
        return state;
    }

    QuantumState out;
    int splits = 1;
    while (splits <= 1024) {
        const double step = duration / static_cast<double>(splits);
        Eigen::VectorXcd psi = state.coefficients;
        bool ok = true;
        for (int s = 0; s < splits && ok; ++s) {
            Eigen::VectorXcd next;
            ok = lanczos_expm_apply(hamiltonian.matrix, psi, step, tolerance, next);
            if (ok) psi = std::move(next);
        }
        if (ok) {
            out.coefficients = std::move(psi);
            return out;
        }
        splits *= 2;
    }
    throw Error("evolve_slow: Krylov evolution failed to converge");
}

HamiltonianSpec quick_time_coefficients(const FilterBasis& basis, const EpsilonRepresentation& eps,
                                        const Trajectory& traj, std::size_t window) {
    basis.validate();
    const std::size_t n_nodes = traj.grid.n_nodes();
    if (window < 1 || window > n_nodes) {
        throw InsufficientData("quick_time_coefficients: window must lie in [1, n_nodes]");
    }

    const ControlSignal concat = eps.concatenated();
    const auto rows = static_cast<Eigen::Index>(window);
    const Eigen::MatrixXd eps_window = concat.values.bottomRows(rows);
    const Eigen::MatrixXd phi_window = traj.states.bottomRows(rows);

    const auto m = static_cast<Eigen::Index>(basis.mode_count());
    Eigen::VectorXd f(m);
    for (Eigen::Index alpha = 0; alpha < m; ++alpha) {
        const auto& spec = basis.specs[static_cast<std::size_t>(alpha)];
        const Eigen::MatrixXd* source = nullptr;
        switch (spec.input) {
            case SignalSource::epsilon: source = &eps_window; break;
            case SignalSource::states: source = &phi_window; break;
            default:
                throw MissingInput("quick_time_coefficients: basis specs may read only eps and phi");
        }
        Eigen::MatrixXd selected;
        if (spec.coords.empty()) {
            selected = *source;
        } else {
            selected.resize(source->rows(), static_cast<Eigen::Index>(spec.coords.size()));
            for (std::size_t j = 0; j < spec.coords.size(); ++j) {
                if (spec.coords[j] >= source->cols()) {
                    throw DimensionMismatch("quick_time_coefficients: coordinate out of range");
                }
                selected.col(static_cast<Eigen::Index>(j)) = source->col(spec.coords[j]);
            }
        }
        const Eigen::MatrixXd filtered = run_pipeline(spec.pipeline, selected, traj.grid.dt);
        f[alpha] = filtered.row(filtered.rows() - 1).mean();
    }

    HamiltonianSpec spec;
    spec.quadratic = (0.5 * (f * f.transpose() + (f * f.transpose()).transpose())).cast<Complex>();
    return spec;
}

double total_occupation_expectation(const QuantumState& state, const FockSpace& space) {
    const double norm2 = state.coefficients.squaredNorm();
    if (norm2 == 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto occ = space.occupations(i);
        int n = 0;
        for (int v : occ) n += v;
        total += static_cast<double>(n) *
                 std::norm(state.coefficients[static_cast<Eigen::Index>(i)]);
    }
    return total / norm2;
}

}  // namespace igame
