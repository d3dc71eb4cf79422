#include "igame/filtration.hpp"

#include <algorithm>
#include <cmath>

namespace igame {

void FilterPrimitive::validate() const {
    switch (kind) {
        case Kind::moving_average:
        case Kind::median:
            if (window < 1) throw BadConfig("filter window must be >= 1");
            break;
        case Kind::exponential_smoothing:
            if (!(rate > 0.0) || rate > 1.0) {
                throw BadConfig("exponential smoothing rate must lie in (0, 1]");
            }
            break;
        case Kind::dead_band:
            if (threshold < 0.0) throw BadConfig("dead band threshold must be >= 0");
            break;
        case Kind::finite_difference:
            break;
    }
}

FilterPrimitive FilterPrimitive::moving_average(int window) {
    FilterPrimitive p;
    p.kind = Kind::moving_average;
    p.window = window;
    p.validate();
    return p;
}

FilterPrimitive FilterPrimitive::exponential_smoothing(double rate) {
    FilterPrimitive p;
    p.kind = Kind::exponential_smoothing;
    p.rate = rate;
    p.validate();
    return p;
}

FilterPrimitive FilterPrimitive::finite_difference() {
    FilterPrimitive p;
    p.kind = Kind::finite_difference;
    return p;
}

FilterPrimitive FilterPrimitive::median(int window) {
    FilterPrimitive p;
    p.kind = Kind::median;
    p.window = window;
    p.validate();
    return p;
}

FilterPrimitive FilterPrimitive::dead_band(double threshold) {
    FilterPrimitive p;
    p.kind = Kind::dead_band;
    p.threshold = threshold;
    p.validate();
    return p;
}

std::string to_string(FilterPrimitive::Kind kind) {
    switch (kind) {
        case FilterPrimitive::Kind::moving_average: return "moving_average";
        case FilterPrimitive::Kind::exponential_smoothing: return "exponential_smoothing";
        case FilterPrimitive::Kind::finite_difference: return "finite_difference";
        case FilterPrimitive::Kind::median: return "median";
        case FilterPrimitive::Kind::dead_band: return "dead_band";
    }
    return "moving_average";
}

FilterPrimitive::Kind filter_kind_from_string(const std::string& s) {
    if (s == "moving_average") return FilterPrimitive::Kind::moving_average;
    if (s == "exponential_smoothing") return FilterPrimitive::Kind::exponential_smoothing;
    if (s == "finite_difference") return FilterPrimitive::Kind::finite_difference;
    if (s == "median") return FilterPrimitive::Kind::median;
    if (s == "dead_band") return FilterPrimitive::Kind::dead_band;
    throw ParseError("unknown filter kind: " + s);
}

std::string to_string(SignalSource source) {
    switch (source) {
        case SignalSource::controls: return "controls";
        case SignalSource::states: return "states";
        case SignalSource::epsilon: return "epsilon";
        case SignalSource::pure: return "pure";
    }
    return "controls";
}

SignalSource signal_source_from_string(const std::string& s) {
    if (s == "controls") return SignalSource::controls;
    if (s == "states") return SignalSource::states;
    if (s == "epsilon") return SignalSource::epsilon;
    if (s == "pure") return SignalSource::pure;
    throw ParseError("unknown signal source: " + s);
}

bool FiltrationSpec::linear() const {
    return std::all_of(pipeline.begin(), pipeline.end(),
                       [](const FilterPrimitive& p) { return p.linear(); });
}

void FiltrationSpec::validate() const {
    if (pipeline.empty()) throw BadConfig("filtration pipeline must not be empty");
    for (const auto& p : pipeline) p.validate();
    for (int c : coords) {
        if (c < 0) throw BadConfig("filtration coordinate selection must be non-negative");
    }
}

FiltrationSpec FiltrationSpec::identity(SignalSource source, std::vector<int> coords) {
    FiltrationSpec spec;
    spec.input = source;
    spec.coords = std::move(coords);
    spec.pipeline = {FilterPrimitive::moving_average(1)};
    return spec;
}

std::pair<const Eigen::MatrixXd*, TimeGrid> SignalSet::resolve(SignalSource source) const {
    switch (source) {
        case SignalSource::states:
            if (traj) return {&traj->states, traj->grid};
            throw MissingInput("signal set has no state series");
        case SignalSource::controls:
            if (controls) return {&controls->values, controls->grid};
            if (traj && traj->controls) return {&*traj->controls, traj->grid};
            throw MissingInput("signal set has no control series");
        case SignalSource::epsilon:
            if (epsilon) return {&epsilon->values, epsilon->grid};
            throw MissingInput("signal set has no epsilon series");
        case SignalSource::pure:
            if (pure) return {&pure->values, pure->grid};
            throw MissingInput("signal set has no pure-control series");
    }
    throw MissingInput("unknown signal source");
}

namespace {

Eigen::MatrixXd apply_moving_average(const Eigen::MatrixXd& x, int window) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        acc += x.row(k);
        if (k >= window) acc -= x.row(k - window);
        const double count = static_cast<double>(std::min<Eigen::Index>(k + 1, window));
        out.row(k) = acc / count;
    }
    return out;
}

Eigen::MatrixXd apply_exponential(const Eigen::MatrixXd& x, double rate) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    out.row(0) = x.row(0);
    for (Eigen::Index k = 1; k < x.rows(); ++k) {
        out.row(k) = rate * x.row(k) + (1.0 - rate) * out.row(k - 1);
    }
    return out;
}

Eigen::MatrixXd apply_finite_difference(const Eigen::MatrixXd& x, double dt) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (Eigen::Index k = 1; k < x.rows(); ++k) {
        out.row(k) = (x.row(k) - x.row(k - 1)) / dt;
    }
    return out;
}

Eigen::MatrixXd apply_median(const Eigen::MatrixXd& x, int window) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    std::vector<double> buf;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index k = 0; k < x.rows(); ++k) {
            const Eigen::Index lo = std::max<Eigen::Index>(0, k - window + 1);
            buf.assign(x.col(c).data() + lo, x.col(c).data() + k + 1);
            std::sort(buf.begin(), buf.end());
            const std::size_t n = buf.size();
            out(k, c) = (n % 2 == 1) ? buf[n / 2] : 0.5 * (buf[n / 2 - 1] + buf[n / 2]);
        }
    }
    return out;
}

Eigen::MatrixXd apply_dead_band(const Eigen::MatrixXd& x, double threshold) {
    return (x.cwiseAbs().array() > threshold).select(x, 0.0);
}

}  // namespace

Eigen::MatrixXd run_pipeline(const std::vector<FilterPrimitive>& pipeline,
                             const Eigen::MatrixXd& series, double dt) {
    Eigen::MatrixXd x = series;
    for (const auto& p : pipeline) {
        p.validate();
        switch (p.kind) {
            case FilterPrimitive::Kind::moving_average: x = apply_moving_average(x, p.window); break;
            case FilterPrimitive::Kind::exponential_smoothing: x = apply_exponential(x, p.rate); break;
            case FilterPrimitive::Kind::finite_difference: x = apply_finite_difference(x, dt); break;
            case FilterPrimitive::Kind::median: x = apply_median(x, p.window); break;
            case FilterPrimitive::Kind::dead_band: x = apply_dead_band(x, p.threshold); break;
        }
    }
    return x;
}

ControlSignal apply_filtration(const FiltrationSpec& spec, const SignalSet& signals) {
    spec.validate();
    auto [series, grid] = signals.resolve(spec.input);
    if (signals.traj && !(grid == signals.traj->grid)) {
        throw DimensionMismatch("apply_filtration: selected series does not share the trajectory grid");
    }

    Eigen::MatrixXd input;
    if (spec.coords.empty()) {
        input = *series;
    } else {
        input.resize(series->rows(), static_cast<Eigen::Index>(spec.coords.size()));
        for (std::size_t j = 0; j < spec.coords.size(); ++j) {
            if (spec.coords[j] >= series->cols()) {
                throw DimensionMismatch("apply_filtration: coordinate selection out of range");
            }
            input.col(static_cast<Eigen::Index>(j)) = series->col(spec.coords[j]);
        }
    }

    Eigen::MatrixXd output = run_pipeline(spec.pipeline, input, grid.dt);
    const SignalRole role =
        spec.input == SignalSource::epsilon ? SignalRole::desire : SignalRole::pure;
    return ControlSignal(grid, std::move(output), role);
}

}  // namespace igame
