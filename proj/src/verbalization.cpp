#include "igame/verbalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "igame/regression.hpp"

namespace igame {

void Partition::validate(std::size_t n_steps) const {
    if (breakpoints.size() < 2 || breakpoints.front() != 0 || breakpoints.back() != n_steps) {
        throw BadConfig("Partition: breakpoints must start at 0 and end at n_steps");
    }
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
        if (breakpoints[j + 1] <= breakpoints[j]) {
            throw BadConfig("Partition: breakpoints must be strictly increasing");
        }
        const bool last = j + 2 == breakpoints.size();
        const std::size_t len = breakpoints[j + 1] - breakpoints[j] + (last ? 1 : 0);
        if (len < min_segment_len) {
            throw BadConfig("Partition: segment shorter than the minimum length");
        }
    }
}

Partition segment_trajectory(const Trajectory& traj, const ControlSignal& driver, double penalty,
                             std::size_t min_len) {
    if (!(driver.grid == traj.grid)) {
        throw DimensionMismatch("segment_trajectory: driver must share the trajectory grid");
    }
    if (min_len < 2) throw BadConfig("segment_trajectory: min_len must be >= 2");
    if (!(penalty > 0.0)) throw BadConfig("segment_trajectory: penalty must be > 0");
    const std::size_t n = traj.grid.n_nodes();
    if (n < 2 * min_len) {
        throw InsufficientData("segment_trajectory: grid shorter than twice the minimum length");
    }

    // Prefix sums for O(1) within-block squared deviation from the mean.
    const Eigen::MatrixXd& x = driver.values;
    const Eigen::Index dims = x.cols();
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) + 1, dims);
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) + 1);
    for (std::size_t k = 0; k < n; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        sums.row(i + 1) = sums.row(i) + x.row(i);
        sq[i + 1] = sq[i] + x.row(i).squaredNorm();
    }
    auto block_cost = [&](std::size_t lo, std::size_t hi) {  // nodes [lo, hi)
        const auto a = static_cast<Eigen::Index>(lo);
        const auto b = static_cast<Eigen::Index>(hi);
        const double count = static_cast<double>(hi - lo);
        const Eigen::RowVectorXd s = sums.row(b) - sums.row(a);
        return std::max(0.0, (sq[b] - sq[a]) - s.squaredNorm() / count);
    };

    // best[i]: minimal cost of partitioning nodes [0, i); cut[i]: last block start.
    std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> cut(n + 1, 0);
    best[0] = 0.0;
    for (std::size_t i = min_len; i <= n; ++i) {
        for (std::size_t j = 0; j + min_len <= i; ++j) {
            if (j != 0 && j < min_len) continue;  // the first block starts at 0
            if (!std::isfinite(best[j])) continue;
            const double c = best[j] + block_cost(j, i) + (j > 0 ? penalty : 0.0);
            if (c < best[i]) {
                best[i] = c;
                cut[i] = j;
            }
        }
    }

    std::vector<std::size_t> starts;
    for (std::size_t i = n; i > 0; i = cut[i]) {
        starts.push_back(cut[i]);
        if (cut[i] == 0) break;
    }
    std::reverse(starts.begin(), starts.end());

    Partition partition;
    partition.min_segment_len = min_len;
    partition.breakpoints = std::move(starts);  // begins with 0
    partition.breakpoints.push_back(traj.grid.n_steps);
    partition.validate(traj.grid.n_steps);
    return partition;
}

std::string to_string(WordRecipe::Kind kind) {
    switch (kind) {
        case WordRecipe::Kind::mean: return "mean";
        case WordRecipe::Kind::integral: return "integral";
        case WordRecipe::Kind::terminal: return "terminal";
        case WordRecipe::Kind::total_variation: return "total_variation";
    }
    return "mean";
}

WordRecipe::Kind word_recipe_kind_from_string(const std::string& s) {
    if (s == "mean") return WordRecipe::Kind::mean;
    if (s == "integral") return WordRecipe::Kind::integral;
    if (s == "terminal") return WordRecipe::Kind::terminal;
    if (s == "total_variation") return WordRecipe::Kind::total_variation;
    throw ParseError("unknown word recipe kind: " + s);
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& series, const std::vector<int>& coords) {
    if (coords.empty()) return series;
    Eigen::MatrixXd out(series.rows(), static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (coords[j] < 0 || coords[j] >= series.cols()) {
            throw DimensionMismatch("compute_words: recipe coordinate out of range");
        }
        out.col(static_cast<Eigen::Index>(j)) = series.col(coords[j]);
    }
    return out;
}

Eigen::VectorXd segment_functional(WordRecipe::Kind kind, const Eigen::MatrixXd& block, double dt) {
    const Eigen::Index rows = block.rows();
    switch (kind) {
        case WordRecipe::Kind::mean:
            return block.colwise().mean().transpose();
        case WordRecipe::Kind::integral: {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(block.cols());
            for (Eigen::Index k = 0; k + 1 < rows; ++k) {
                acc += 0.5 * dt * (block.row(k) + block.row(k + 1)).transpose();
            }
            return acc;
        }
        case WordRecipe::Kind::terminal:
            return block.row(rows - 1).transpose();
        case WordRecipe::Kind::total_variation: {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(block.cols());
            for (Eigen::Index k = 0; k + 1 < rows; ++k) {
                acc += (block.row(k + 1) - block.row(k)).cwiseAbs().transpose();
            }
            return acc;
        }
    }
    throw BadConfig("compute_words: unknown recipe kind");
}

}  // namespace

WordSequence compute_words(const SegmentFunctionalSpec& spec, const Partition& partition,
                           const SignalSet& signals) {
    if (spec.recipes.empty()) throw BadConfig("compute_words: spec has no recipes");
    if (spec.codebook && spec.codebook->empty()) {
        throw EmptyCodebook("compute_words: codebook present but empty");
    }

    // Resolve sources once and check output width.
    std::vector<Eigen::MatrixXd> sources;
    double dt = 0.0;
    Eigen::Index word_dim = 0;
    for (const auto& r : spec.recipes) {
        auto [series, grid] = signals.resolve(r.source);
        dt = grid.dt;
        sources.push_back(select_columns(*series, r.coords));
        word_dim += sources.back().cols();
    }

    const std::size_t n_seg = partition.n_segments();
    WordSequence out;
    out.words.resize(static_cast<Eigen::Index>(n_seg), word_dim);
    for (std::size_t seg = 0; seg < n_seg; ++seg) {
        const auto lo = static_cast<Eigen::Index>(partition.breakpoints[seg]);
        const auto hi = static_cast<Eigen::Index>(partition.breakpoints[seg + 1]);  // inclusive
        Eigen::Index at = 0;
        for (std::size_t r = 0; r < spec.recipes.size(); ++r) {
            const Eigen::MatrixXd block = sources[r].middleRows(lo, hi - lo + 1);
            const Eigen::VectorXd value = segment_functional(spec.recipes[r].kind, block, dt);
            out.words.row(static_cast<Eigen::Index>(seg)).segment(at, value.size()) =
                value.transpose();
            at += value.size();
        }
    }

    if (spec.codebook) {
        for (const auto& centroid : *spec.codebook) {
            if (centroid.size() != word_dim) {
                throw DimensionMismatch("compute_words: codebook dimension does not match words");
            }
        }
        out.quantized = true;
        out.codes.resize(n_seg);
        for (std::size_t seg = 0; seg < n_seg; ++seg) {
            int best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < spec.codebook->size(); ++c) {
                const double dist =
                    (out.words.row(static_cast<Eigen::Index>(seg)).transpose() - (*spec.codebook)[c])
                        .squaredNorm();
                if (dist < best_dist) {  // ties keep the lowest index
                    best_dist = dist;
                    best = static_cast<int>(c);
                }
            }
            out.codes[seg] = best;
        }
    }
    return out;
}

RecursionModel fit_recursion(const WordSequence& words, const WordSequence& tactics,
                             const Eigen::MatrixXd& state_features, double ridge,
                             double tolerance) {
    const std::size_t n_seg = words.n_segments();
    if (tactics.n_segments() != n_seg ||
        static_cast<std::size_t>(state_features.rows()) != n_seg) {
        throw LengthMismatch("fit_recursion: words, tactics and state features disagree in length");
    }
    if (n_seg < 2) throw InsufficientData("fit_recursion: need at least 2 segments");

    const Eigen::Index w = words.words.cols();
    const Eigen::Index t = tactics.words.cols();
    const Eigen::Index s = state_features.cols();
    const auto rows = static_cast<Eigen::Index>(n_seg - 1);

    Eigen::MatrixXd X(rows, w + t + s + 1);
    Eigen::MatrixXd Y(rows, w);
    for (Eigen::Index n = 0; n < rows; ++n) {
        X.block(n, 0, 1, w) = words.words.row(n);
        X.block(n, w, 1, t) = tactics.words.row(n + 1);
        X.block(n, w + t, 1, s) = state_features.row(n + 1);
        X(n, w + t + s) = 1.0;
        Y.row(n) = words.words.row(n + 1);
    }

    const RegressionResult reg = fit_linear_map(X, Y, ridge, 0.0);

    RecursionModel model;
    model.prev_word_map = reg.coefficients.leftCols(w);
    model.tactic_map = reg.coefficients.middleCols(w, t);
    model.state_map = reg.coefficients.middleCols(w + t, s);
    model.intercept = reg.coefficients.col(w + t + s);
    model.tolerance = tolerance;
    model.segment_residuals.resize(rows);
    const Eigen::MatrixXd pred = X * reg.coefficients.transpose();
    for (Eigen::Index n = 0; n < rows; ++n) {
        model.segment_residuals[n] = (pred.row(n) - Y.row(n)).cwiseAbs().maxCoeff();
    }
    model.verbalizable = model.segment_residuals.maxCoeff() <= tolerance;
    return model;
}

Eigen::MatrixXd segment_state_features(const Trajectory& traj, const Partition& partition) {
    const std::size_t n_seg = partition.n_segments();
    Eigen::MatrixXd features(static_cast<Eigen::Index>(n_seg), traj.states.cols() + 1);
    for (std::size_t seg = 0; seg < n_seg; ++seg) {
        const auto lo = static_cast<Eigen::Index>(partition.breakpoints[seg]);
        const auto hi = static_cast<Eigen::Index>(partition.breakpoints[seg + 1]);
        features.row(static_cast<Eigen::Index>(seg))
            .head(traj.states.cols()) = traj.states.middleRows(lo, hi - lo + 1).colwise().mean();
        features(static_cast<Eigen::Index>(seg), traj.states.cols()) =
            static_cast<double>(hi - lo) * traj.grid.dt;
    }
    return features;
}

SynlinguismReport check_synlinguism(const WordSequence& words_s, const WordSequence& words_d,
                                    double tolerance) {
    if (tolerance < 0.0) throw BadConfig("check_synlinguism: tolerance must be >= 0");
    if (words_s.quantized != words_d.quantized) {
        throw MixedRepresentation("check_synlinguism: one sequence is quantized, the other is not");
    }
    if (words_s.n_segments() != words_d.n_segments() ||
        (!words_s.quantized && words_s.words.cols() != words_d.words.cols())) {
        throw LengthMismatch("check_synlinguism: word sequences disagree in shape");
    }

    const std::size_t n_seg = words_s.n_segments();
    SynlinguismReport report;
    report.per_segment_deviation.resize(static_cast<Eigen::Index>(n_seg));
    report.synlinguistic = true;
    for (std::size_t seg = 0; seg < n_seg; ++seg) {
        double deviation = 0.0;
        bool mismatch = false;
        if (words_s.quantized) {
            mismatch = words_s.codes[seg] != words_d.codes[seg];
            deviation = mismatch ? 1.0 : 0.0;
        } else {
            deviation = (words_s.words.row(static_cast<Eigen::Index>(seg)) -
                         words_d.words.row(static_cast<Eigen::Index>(seg)))
                            .cwiseAbs()
                            .maxCoeff();
            mismatch = deviation > tolerance;
        }
        report.per_segment_deviation[static_cast<Eigen::Index>(seg)] = deviation;
        if (mismatch && report.synlinguistic) {
            report.synlinguistic = false;
            report.first_mismatch = seg;
        }
    }
    return report;
}

}  // namespace igame
