#pragma once

#include <optional>
#include <vector>

#include "igame/detection.hpp"

namespace igame {

/// Result of inverting the coupling along a trajectory: per-channel epsilon
/// series plus the pure-control series they were recovered against. Replaying
/// the coupling with the stored epsilon reproduces the recorded controls
/// within recovery_residual at every node.
struct EpsilonRepresentation {
    CouplingForm coupling;
    std::vector<ControlSignal> epsilon_series;  // one per channel, role epsilon
    ControlSignal pure_series;                  // u° used in the recovery
    double recovery_residual = 0.0;             // max over nodes, inf-norm

    ControlSignal concatenated() const;
    Eigen::VectorXd epsilon_at(std::size_t node) const;

    /// Reconstruct u at a node from the stored series.
    Eigen::VectorXd replay(const Eigen::VectorXd& phi, std::size_t node) const;
};

/// Per-node least-squares solve of u = A + B*eps for eps in each channel.
/// Raises SingularCoupling (with node and channel index) when the smallest
/// singular value of B falls below singular_tolerance at some node.
EpsilonRepresentation recover_epsilon(const CouplingForm& coupling, const ControlSignal& u,
                                      const ControlSignal& u_pure, const Trajectory& traj,
                                      double singular_tolerance);

/// v°_alpha = V_alpha([eps],[phi]): one desire signal per spec. Specs may
/// select only epsilon and state inputs.
std::vector<ControlSignal> extract_desires(const std::vector<FiltrationSpec>& specs,
                                           const EpsilonRepresentation& eps,
                                           const Trajectory& traj);

/// Regression map eps = D(v°_1..v°_m, phi), as a sum of dictionary
/// expansions over (state=phi, input=v° concatenated). Extra additive
/// components model subsidiary agents.
struct DesireMap {
    std::vector<DictionaryExpansion> components;
    double fit_residual = 0.0;

    int input_dim() const;
    int output_dim() const;
    Eigen::VectorXd eval(const Eigen::VectorXd& phi, const Eigen::VectorXd& inputs) const;
    void validate() const;
};

DesireMap fit_desire_map(const std::vector<ControlSignal>& desires, const Trajectory& traj,
                         const EpsilonRepresentation& eps, const std::vector<BasisTerm>& dictionary,
                         double ridge);

/// One level of the recursive unraveling of interactivity.
struct UnravelLevel {
    DetectionVerdict verdict;
    std::optional<CandidateRanking> ranking;       // present when hidden inputs were pursued
    std::optional<EpsilonRepresentation> recovered;  // eps of the best candidate
    std::vector<UnravelLevel> children;            // at most one per level
};

struct UnravelConfig {
    SelectionConfig selection;
    double holdout_fraction = 0.3;
    double calibration_fraction = 0.25;
    double singular_tolerance = 1e-8;
    std::optional<double> threshold_override;
};

/// Treat the recovered epsilon series as the new observed magnitudes: fit an
/// autonomous model, estimate the hidden-input series from its derivative
/// residuals, run candidate selection on them, and recurse on the newly
/// recovered epsilon up to `depth` levels. Levels beyond the supplied menus
/// stop with a verdict-only node.
UnravelLevel unravel_recursive(const Trajectory& traj, const EpsilonRepresentation& eps,
                               const std::vector<std::vector<Candidate>>& candidate_menus,
                               int depth, const UnravelConfig& config);

}  // namespace igame
