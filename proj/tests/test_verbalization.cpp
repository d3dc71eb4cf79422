#include <doctest.h>

#include <functional>
#include <random>

#include "igame/verbalization.hpp"

using namespace igame;

namespace {

Trajectory zero_traj(const TimeGrid& grid, int dim = 1) {
    return Trajectory(grid, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.n_nodes()), dim));
}

/// Cost of a node partition under the segmentation objective: within-block
/// squared deviation from the block mean plus penalty per interior break.
double partition_cost(const Eigen::MatrixXd& x, const std::vector<std::size_t>& starts,
                      double penalty) {
    double cost = penalty * static_cast<double>(starts.size() - 1);
    for (std::size_t j = 0; j < starts.size(); ++j) {
        const std::size_t lo = starts[j];
        const std::size_t hi = j + 1 < starts.size() ? starts[j + 1] : static_cast<std::size_t>(x.rows());
        const auto rows = static_cast<Eigen::Index>(hi - lo);
        const Eigen::MatrixXd block = x.middleRows(static_cast<Eigen::Index>(lo), rows);
        const Eigen::RowVectorXd mean = block.colwise().mean();
        cost += (block.rowwise() - mean).squaredNorm();
    }
    return cost;
}

/// Exhaustive minimum over all admissible block partitions (test oracle).
double exhaustive_best(const Eigen::MatrixXd& x, std::size_t min_len, double penalty) {
    const auto n = static_cast<std::size_t>(x.rows());
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> starts{0};
    std::function<void(std::size_t)> recurse = [&](std::size_t at) {
        if (n - at >= min_len) {
            best = std::min(best, partition_cost(x, starts, penalty));
        }
        for (std::size_t next = at + min_len; next + min_len <= n; ++next) {
            starts.push_back(next);
            recurse(next);
            starts.pop_back();
        }
    };
    recurse(0);
    return best;
}

std::vector<std::size_t> block_starts(const Partition& p) {
    std::vector<std::size_t> starts(p.breakpoints.begin(), p.breakpoints.end() - 1);
    return starts;
}

}  // namespace

TEST_CASE("segment_trajectory") {
    SUBCASE("a constant driver yields a single segment") {
        const TimeGrid grid(0.0, 0.1, 60);
        const auto driver = ControlSignal(grid, Eigen::MatrixXd::Constant(61, 1, 1.5),
                                          SignalRole::epsilon);
        const auto partition = segment_trajectory(zero_traj(grid), driver, 0.5, 4);
        CHECK(partition.breakpoints == std::vector<std::size_t>{0, 60});
    }
    SUBCASE("noise-free level shifts are located exactly") {
        const TimeGrid grid(0.0, 0.1, 79);
        Eigen::MatrixXd x(80, 1);
        for (int k = 0; k < 80; ++k) {
            double level = 0.0;
            if (k >= 20) level += 5.0;
            if (k >= 45) level += 5.0;
            if (k >= 66) level -= 5.0;
            x(k, 0) = level;
        }
        const auto driver = ControlSignal(grid, x, SignalRole::epsilon);
        const auto partition = segment_trajectory(zero_traj(grid), driver, 1.0, 5);
        CHECK(partition.breakpoints == std::vector<std::size_t>{0, 20, 45, 66, 79});
    }
    SUBCASE("an overwhelming penalty forces a single segment") {
        const TimeGrid grid(0.0, 0.1, 50);
        Eigen::MatrixXd x(51, 1);
        for (int k = 0; k <= 50; ++k) x(k, 0) = (k < 25) ? 0.0 : 8.0;
        const auto driver = ControlSignal(grid, x, SignalRole::epsilon);
        const auto partition =
            segment_trajectory(zero_traj(grid), driver, std::numeric_limits<double>::infinity(), 4);
        CHECK(partition.n_segments() == 1);
    }
    SUBCASE("preconditions") {
        const TimeGrid grid(0.0, 0.1, 10);
        const auto driver = ControlSignal::zero(grid, 1, SignalRole::epsilon);
        CHECK_THROWS_AS(segment_trajectory(zero_traj(grid), driver, 1.0, 1), BadConfig);
        CHECK_THROWS_AS(segment_trajectory(zero_traj(grid), driver, 0.0, 4), BadConfig);
        CHECK_THROWS_AS(segment_trajectory(zero_traj(grid), driver, 1.0, 6), InsufficientData);
    }
}

TEST_CASE("segmentation matches the exhaustive optimum on small grids") {
    std::mt19937_64 rng(1234);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n_nodes = 12 + 4 * static_cast<std::size_t>(trial);  // up to 56
        const std::size_t min_len = n_nodes <= 28 ? 2 : (n_nodes <= 44 ? 5 : 8);
        const TimeGrid grid(0.0, 0.1, n_nodes - 1);
        Eigen::MatrixXd x(static_cast<Eigen::Index>(n_nodes), 1);
        double level = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            if (k % 9 == 8) level += normal(rng) * 2.0;
            x(static_cast<Eigen::Index>(k), 0) = level + 0.3 * normal(rng);
        }
        const double penalty = 0.4 + 0.2 * (trial % 3);
        const auto driver = ControlSignal(grid, x, SignalRole::epsilon);
        const auto partition = segment_trajectory(zero_traj(grid), driver, penalty, min_len);
        const double dp_cost = partition_cost(x, block_starts(partition), penalty);
        const double oracle = exhaustive_best(x, min_len, penalty);
        CHECK(dp_cost == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("compute_words") {
    const TimeGrid grid(0.0, 0.01, 100);
    Eigen::MatrixXd states(101, 1);
    for (int k = 0; k <= 100; ++k) states(k, 0) = grid.time(static_cast<std::size_t>(k));
    const Trajectory traj(grid, states);
    const auto eps =
        ControlSignal(grid, Eigen::MatrixXd::Constant(101, 1, 2.5), SignalRole::epsilon);
    SignalSet signals;
    signals.traj = &traj;
    signals.epsilon = &eps;

    Partition partition;
    partition.min_segment_len = 2;
    partition.breakpoints = {0, 50, 100};

    SUBCASE("segment means of a constant are that constant") {
        SegmentFunctionalSpec spec;
        spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::epsilon, {}}};
        const auto words = compute_words(spec, partition, signals);
        REQUIRE(words.n_segments() == 2);
        CHECK(words.words(0, 0) == doctest::Approx(2.5));
        CHECK(words.words(1, 0) == doctest::Approx(2.5));
    }
    SUBCASE("terminal values read off the state at the segment ends") {
        SegmentFunctionalSpec spec;
        spec.recipes = {WordRecipe{WordRecipe::Kind::terminal, SignalSource::states, {}}};
        const auto words = compute_words(spec, partition, signals);
        CHECK(words.words(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(words.words(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("integral and total variation recipes") {
        SegmentFunctionalSpec spec;
        spec.recipes = {WordRecipe{WordRecipe::Kind::integral, SignalSource::states, {}},
                        WordRecipe{WordRecipe::Kind::total_variation, SignalSource::states, {}}};
        const auto words = compute_words(spec, partition, signals);
        CHECK(words.words(0, 0) == doctest::Approx(0.125).epsilon(1e-9));  // int t dt over [0, .5]
        CHECK(words.words(0, 1) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("codebooks quantize to the nearest centroid") {
        const TimeGrid g3(0.0, 0.1, 29);
        Eigen::MatrixXd values(30, 1);
        for (int k = 0; k < 30; ++k) {
            values(k, 0) = k < 10 ? 0.2 : (k < 20 ? 0.9 : 0.45);
        }
        const auto signal = ControlSignal(g3, values, SignalRole::epsilon);
        const Trajectory t3(g3, Eigen::MatrixXd::Zero(30, 1));
        SignalSet s3;
        s3.traj = &t3;
        s3.epsilon = &signal;
        Partition p3;
        p3.min_segment_len = 2;
        p3.breakpoints = {0, 10, 20, 29};
        SegmentFunctionalSpec spec;
        spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::epsilon, {}}};
        spec.codebook = std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 0.0),
                                                     Eigen::VectorXd::Constant(1, 1.0)};
        const auto words = compute_words(spec, p3, s3);
        REQUIRE(words.quantized);
        // Means: segment 1 ~0.2 -> 0, segment 2 mix(0.9..) -> 1, segment 3 ~0.45 -> 0.
        CHECK(words.codes == std::vector<int>{0, 1, 0});
    }
    SUBCASE("an empty codebook is an error") {
        SegmentFunctionalSpec spec;
        spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::epsilon, {}}};
        spec.codebook = std::vector<Eigen::VectorXd>{};
        CHECK_THROWS_AS(compute_words(spec, partition, signals), EmptyCodebook);
    }
    SUBCASE("mean words are equivariant under constant shifts") {
        SegmentFunctionalSpec spec;
        spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::epsilon, {}}};
        const auto base = compute_words(spec, partition, signals);
        const double shift = -1.7;
        const auto shifted_eps =
            ControlSignal(grid, eps.values.array() + shift, SignalRole::epsilon);
        SignalSet shifted = signals;
        shifted.epsilon = &shifted_eps;
        const auto moved = compute_words(spec, partition, shifted);
        CHECK(((moved.words - base.words).array() - shift).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fit_recursion") {
    SUBCASE("an exact affine recursion refits exactly") {
        const int n_seg = 12;
        Eigen::MatrixXd tactics(n_seg, 1), words(n_seg, 1);
        std::mt19937_64 rng(8);
        std::normal_distribution<double> normal;
        words(0, 0) = 0.3;
        for (int n = 0; n < n_seg; ++n) tactics(n, 0) = normal(rng);
        for (int n = 1; n < n_seg; ++n) words(n, 0) = words(n - 1, 0) + tactics(n, 0);
        WordSequence w{words, {}, false, PictureTag::S};
        WordSequence t{tactics, {}, false, PictureTag::S};
        const Eigen::MatrixXd features = Eigen::MatrixXd::Zero(n_seg, 1);
        const auto model = fit_recursion(w, t, features, 0.0, 1e-6);
        CHECK(model.prev_word_map(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(model.tactic_map(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(model.segment_residuals.maxCoeff() < 1e-9);
        CHECK(model.verbalizable);
    }
    SUBCASE("a single segment is insufficient") {
        WordSequence w{Eigen::MatrixXd::Zero(1, 1), {}, false, PictureTag::S};
        WordSequence t{Eigen::MatrixXd::Zero(1, 1), {}, false, PictureTag::S};
        CHECK_THROWS_AS(fit_recursion(w, t, Eigen::MatrixXd::Zero(1, 1), 0.0, 1e-6),
                        InsufficientData);
    }
    SUBCASE("independent random words are not verbalizable at 1e-6") {
        const int n_seg = 50;
        std::mt19937_64 rng(91);
        std::normal_distribution<double> normal;
        Eigen::MatrixXd words(n_seg, 1), tactics(n_seg, 1);
        for (int n = 0; n < n_seg; ++n) {
            words(n, 0) = normal(rng);
            tactics(n, 0) = normal(rng);
        }
        WordSequence w{words, {}, false, PictureTag::S};
        WordSequence t{tactics, {}, false, PictureTag::S};
        const auto model = fit_recursion(w, t, Eigen::MatrixXd::Zero(n_seg, 1), 0.0, 1e-6);
        CHECK_FALSE(model.verbalizable);
    }
}

TEST_CASE("check_synlinguism") {
    Eigen::MatrixXd a(5, 2);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
    SUBCASE("identical sequences agree") {
        WordSequence s{a, {}, false, PictureTag::S};
        WordSequence d{a, {}, false, PictureTag::D};
        const auto report = check_synlinguism(s, d, 0.0);
        CHECK(report.synlinguistic);
        CHECK_FALSE(report.first_mismatch.has_value());
        CHECK(report.per_segment_deviation.maxCoeff() == 0.0);
    }
    SUBCASE("a unit gap at segment 3 is found") {
        Eigen::MatrixXd b = a;
        b(3, 1) += 1.0;
        WordSequence s{a, {}, false, PictureTag::S};
        WordSequence d{b, {}, false, PictureTag::D};
        const auto report = check_synlinguism(s, d, 0.1);
        CHECK_FALSE(report.synlinguistic);
        REQUIRE(report.first_mismatch.has_value());
        CHECK(*report.first_mismatch == 3);
        CHECK(report.per_segment_deviation[3] == doctest::Approx(1.0));
    }
    SUBCASE("the check is symmetric") {
        Eigen::MatrixXd b = a;
        b(2, 0) += 0.7;
        WordSequence s{a, {}, false, PictureTag::S};
        WordSequence d{b, {}, false, PictureTag::D};
        const auto forward = check_synlinguism(s, d, 0.05);
        const auto backward = check_synlinguism(d, s, 0.05);
        CHECK(forward.synlinguistic == backward.synlinguistic);
        CHECK((forward.per_segment_deviation - backward.per_segment_deviation).cwiseAbs().maxCoeff() ==
              0.0);
    }
    SUBCASE("quantized sequences compare by code") {
        WordSequence s{a, {0, 1, 1, 0, 2}, true, PictureTag::S};
        WordSequence d{a, {0, 1, 2, 0, 2}, true, PictureTag::D};
        const auto report = check_synlinguism(s, d, 100.0);  // tolerance ignored
        CHECK_FALSE(report.synlinguistic);
        CHECK(*report.first_mismatch == 2);
    }
    SUBCASE("mixed representations are rejected") {
        WordSequence s{a, {}, false, PictureTag::S};
        WordSequence d{a, {0, 1, 2, 3, 4}, true, PictureTag::D};
        CHECK_THROWS_AS(check_synlinguism(s, d, 0.1), MixedRepresentation);
    }
    SUBCASE("length mismatches are rejected") {
        WordSequence s{a, {}, false, PictureTag::S};
        WordSequence d{a.topRows(3), {}, false, PictureTag::D};
        CHECK_THROWS_AS(check_synlinguism(s, d, 0.1), LengthMismatch);
    }
}

TEST_CASE("segment state features carry the mean and the length") {
    const TimeGrid grid(0.0, 0.5, 10);
    Eigen::MatrixXd states(11, 1);
    states.col(0).setLinSpaced(11, 0.0, 10.0);
    const Trajectory traj(grid, states);
    Partition partition;
    partition.min_segment_len = 2;
    partition.breakpoints = {0, 4, 10};
    const auto features = segment_state_features(traj, partition);
    REQUIRE(features.rows() == 2);
    CHECK(features(0, 0) == doctest::Approx(2.0));   // mean of 0..4
    CHECK(features(0, 1) == doctest::Approx(2.0));   // 4 steps of 0.5
    CHECK(features(1, 0) == doctest::Approx(7.0));   // mean of 4..10
    CHECK(features(1, 1) == doctest::Approx(3.0));
}
