#pragma once

#include <optional>
#include <vector>

#include "igame/filtration.hpp"
#include "igame/types.hpp"

namespace igame {

/// A posteriori partition of the history: breakpoint node indices with
/// first = 0 and last = n_steps. Segment j runs from breakpoints[j] to
/// breakpoints[j+1]; word functionals read the closed node range, the
/// segmentation cost uses disjoint blocks (each node belongs to the segment
/// it starts).
struct Partition {
    std::vector<std::size_t> breakpoints;
    std::size_t min_segment_len = 2;

    std::size_t n_segments() const { return breakpoints.size() - 1; }
    void validate(std::size_t n_steps) const;
};

/// Exact dynamic-programming change-point detection on the driver signal:
/// minimizes within-segment squared deviation from the segment mean plus
/// penalty per interior breakpoint.
Partition segment_trajectory(const Trajectory& traj, const ControlSignal& driver, double penalty,
                             std::size_t min_len);

/// One output block of a word: a segment functional applied to a series.
struct WordRecipe {
    enum class Kind { mean, integral, terminal, total_variation };
    Kind kind = Kind::mean;
    SignalSource source = SignalSource::epsilon;
    std::vector<int> coords;  // empty = all coordinates
};

std::string to_string(WordRecipe::Kind kind);
WordRecipe::Kind word_recipe_kind_from_string(const std::string& s);

struct SegmentFunctionalSpec {
    std::vector<WordRecipe> recipes;
    std::optional<std::vector<Eigen::VectorXd>> codebook;  // present => quantized words
};

enum class PictureTag { S, D };

struct WordSequence {
    Eigen::MatrixXd words;   // n_segments x word_dim (raw vectors, also when quantized)
    std::vector<int> codes;  // nearest-centroid indices when quantized
    bool quantized = false;
    PictureTag picture = PictureTag::S;

    std::size_t n_segments() const { return static_cast<std::size_t>(words.rows()); }
};

WordSequence compute_words(const SegmentFunctionalSpec& spec, const Partition& partition,
                           const SignalSet& signals);

/// Affine recursion omega_n = A omega_{n-1} + B u*_n + C s_n + c fitted over
/// segments 2..n. Residuals are inf-norm per fitted segment.
struct RecursionModel {
    Eigen::MatrixXd prev_word_map;   // A
    Eigen::MatrixXd tactic_map;      // B
    Eigen::MatrixXd state_map;       // C
    Eigen::VectorXd intercept;       // c
    Eigen::VectorXd segment_residuals;  // one per fitted segment (n_segments - 1)
    bool verbalizable = false;
    double tolerance = 0.0;
};

RecursionModel fit_recursion(const WordSequence& words, const WordSequence& tactics,
                             const Eigen::MatrixXd& state_features, double ridge, double tolerance);

/// Per-segment state feature vector (mean of phi over the segment, segment
/// length in time units).
Eigen::MatrixXd segment_state_features(const Trajectory& traj, const Partition& partition);

struct SynlinguismReport {
    bool synlinguistic = false;
    std::optional<std::size_t> first_mismatch;
    Eigen::VectorXd per_segment_deviation;
};

/// Continuous words: max inf-norm deviation <= tolerance. Quantized words:
/// exact code equality.
SynlinguismReport check_synlinguism(const WordSequence& words_s, const WordSequence& words_d,
                                    double tolerance);

}  // namespace igame
