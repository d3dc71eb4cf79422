#pragma once

#include <cstdint>
#include <vector>

#include "igame/coupling.hpp"
#include "igame/dynamics.hpp"
#include "igame/filtration.hpp"
#include "igame/goal.hpp"

namespace igame {

struct FitResult {
    DynamicsModel model;
    double residual_norm = 0.0;  // RMS derivative mismatch
};

/// Ridge-regularized least squares of estimated derivatives against the
/// dictionary, with iterated hard thresholding of small coefficients.
FitResult fit_dynamics(const Trajectory& traj, const std::vector<BasisTerm>& dictionary,
                       bool use_controls, double ridge, double sparsify_threshold);

struct DetectionVerdict {
    double residual_norm = 0.0;           // RMS of the per-node residuals
    Eigen::VectorXd per_node_residuals;   // 2-norm of derivative mismatch per node
    bool hidden_inputs = false;           // residual_norm > threshold_used
    double threshold_used = 0.0;
};

/// Compare estimated derivatives against an autonomous model's rhs.
DetectionVerdict detect_hidden_inputs(const Trajectory& traj, const DynamicsModel& autonomous_model,
                                      double threshold);

/// Default threshold: 5x the median per-node residual of an autonomous fit
/// on the leading calibration prefix of the trajectory.
double default_hidden_input_threshold(const Trajectory& traj,
                                      const std::vector<BasisTerm>& dictionary, double ridge,
                                      double sparsify_threshold,
                                      double calibration_fraction = 0.25);

/// One hypothesis about the interactive structure of a control channel set.
struct Candidate {
    FiltrationSpec filtration;
    CouplingForm coupling;
    GoalFunctional goal;
};

struct CandidateScore {
    double prediction_error = 0.0;   // RMS state error over the held-out suffix
    double optimality_score = 0.0;   // fraction of perturbations that worsen the goal
};

struct CandidateRanking {
    std::vector<Candidate> candidates;
    std::vector<CandidateScore> scores;
    std::size_t best_index = 0;
};

struct SelectionConfig {
    int dictionary_degree = 3;
    double ridge = 0.0;
    double sparsify_threshold = 0.0;
    int n_perturbations = 40;
    double perturbation_scale = 0.1;
    std::uint64_t seed = 0;
};

/// Resimulate the game under seeded smooth perturbations of the pure control
/// (coupled with eps = 0) and report the fraction that strictly increase K
/// relative to the unperturbed pure control.
double local_optimality_score(const GoalFunctional& K, const DynamicsModel& model,
                              const CouplingForm& coupling, const ControlSignal& pure_control,
                              const Trajectory& traj, int n_perturbations,
                              double perturbation_scale, std::uint64_t seed);

/// Temporal train/test split: fit the controlled model on the prefix, replay
/// each candidate's filtered pure controls through its coupling over the
/// suffix, and rank by state prediction error (optimality score breaks ties,
/// then the lower candidate index).
CandidateRanking select_interactive_model(const Trajectory& traj,
                                          const std::vector<Candidate>& candidates,
                                          double holdout_fraction, const SelectionConfig& config);

}  // namespace igame
