#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "igame/types.hpp"

namespace igame {

/// One primitive filter of a filtration pipeline. Window-based primitives use
/// trailing windows truncated at the series start, so output length always
/// equals input length.
struct FilterPrimitive {
    enum class Kind { moving_average, exponential_smoothing, finite_difference, median, dead_band };

    Kind kind = Kind::moving_average;
    int window = 1;          // moving_average, median
    double rate = 1.0;       // exponential_smoothing, in (0, 1]
    double threshold = 0.0;  // dead_band, >= 0

    bool linear() const {
        return kind == Kind::moving_average || kind == Kind::exponential_smoothing ||
               kind == Kind::finite_difference;
    }
    void validate() const;

    static FilterPrimitive moving_average(int window);
    static FilterPrimitive exponential_smoothing(double rate);
    static FilterPrimitive finite_difference();
    static FilterPrimitive median(int window);
    static FilterPrimitive dead_band(double threshold);
};

std::string to_string(FilterPrimitive::Kind kind);
FilterPrimitive::Kind filter_kind_from_string(const std::string& s);

/// Which recorded series feeds a pipeline (or a word recipe).
enum class SignalSource { controls, states, epsilon, pure };

std::string to_string(SignalSource source);
SignalSource signal_source_from_string(const std::string& s);

/// Finite-memory filtration F([u],[phi]) / V([eps],[phi]) realized as a
/// pipeline of primitive filters over one selected input series.
struct FiltrationSpec {
    SignalSource input = SignalSource::controls;
    std::vector<int> coords;  // empty = all coordinates of the source
    std::vector<FilterPrimitive> pipeline;

    bool linear() const;
    void validate() const;

    static FiltrationSpec identity(SignalSource source, std::vector<int> coords = {});
};

/// Named series a filtration or word recipe may read from.
struct SignalSet {
    const Trajectory* traj = nullptr;         // states; controls fallback
    const ControlSignal* controls = nullptr;  // observed interactive controls u
    const ControlSignal* epsilon = nullptr;   // recovered epsilon series
    const ControlSignal* pure = nullptr;      // pure controls / pure desires

    /// Resolve a source to (series matrix, grid). Throws MissingInput.
    std::pair<const Eigen::MatrixXd*, TimeGrid> resolve(SignalSource source) const;
};

/// Run the pipeline over a raw series (one row per node). dt scales the
/// finite-difference primitive.
Eigen::MatrixXd run_pipeline(const std::vector<FilterPrimitive>& pipeline,
                             const Eigen::MatrixXd& series, double dt);

/// Apply a filtration to the selected signals. The output is tagged
/// role=pure, except that epsilon-fed pipelines produce role=desire.
ControlSignal apply_filtration(const FiltrationSpec& spec, const SignalSet& signals);

}  // namespace igame
