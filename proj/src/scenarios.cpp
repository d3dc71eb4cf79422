#include "igame/scenarios.hpp"

#include <cmath>
#include <random>

namespace igame {

Eigen::VectorXd PolicySpec::eval(double t, const Eigen::VectorXd& state, int dim) const {
    switch (kind) {
        case Kind::zero:
            return Eigen::VectorXd::Zero(dim);
        case Kind::constant:
            if (constant.size() != dim) {
                throw DimensionMismatch("PolicySpec: constant value has wrong dimension");
            }
            return constant;
        case Kind::sinusoid:
            return Eigen::VectorXd::Constant(dim, amplitude * std::sin(omega * t + phase));
        case Kind::state_feedback:
            if (target_coord >= state.size() || self_coord >= state.size()) {
                throw DimensionMismatch("PolicySpec: feedback coordinate out of range");
            }
            return Eigen::VectorXd::Constant(dim, gain * (state[target_coord] - state[self_coord]));
    }
    throw BadConfig("PolicySpec: unknown policy kind");
}

void Scenario::validate() const {
    dynamics.validate();
    if (dynamics.output_dim != dynamics.state_dim) {
        throw DimensionMismatch("Scenario: dynamics must map states to state derivatives");
    }
    if (initial_state.size() != dynamics.state_dim) {
        throw DimensionMismatch("Scenario: initial state dimension mismatch");
    }
    if (channels.size() != coupling.channels.size()) {
        throw DimensionMismatch("Scenario: channel list does not match the coupling");
    }
    if (!channels.empty()) {
        coupling.validate(dynamics.state_dim);
        if (coupling.control_dim() != dynamics.control_dim) {
            throw DimensionMismatch("Scenario: coupling does not cover the control vector");
        }
        for (std::size_t c = 0; c < channels.size(); ++c) {
            if (channels[c].control_coords != coupling.channels[c].control_coords) {
                throw DimensionMismatch("Scenario: channel coordinates disagree with the coupling");
            }
        }
    } else if (dynamics.control_dim != 0) {
        throw DimensionMismatch("Scenario: controlled dynamics needs at least one channel");
    }
}

namespace {

struct PulseSchedule {
    double start = -1e300;
    double amplitude = 0.0;
    double duration = 1.0;
    int events = 0;

    double value(double t) const {
        if (t < start || t >= start + duration) return 0.0;
        const double s = std::sin(M_PI * (t - start) / duration);
        return amplitude * s * s;
    }
    bool active(double t) const { return t >= start && t < start + duration; }
};

constexpr std::uint64_t kSeedMix = 0x9E3779B97F4A7C15ULL;

}  // namespace

GenerationResult generate(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    const int d = scenario.dynamics.state_dim;
    const TimeGrid& grid = scenario.grid;
    const auto n_nodes = grid.n_nodes();
    const std::size_t n_channels = scenario.channels.size();

    // Precompute seeded smooth-noise node series and lay out the augmented
    // state: ode-driven epsilon channels live behind the physical state.
    std::vector<Eigen::MatrixXd> noise_series(n_channels);
    std::vector<PulseSchedule> pulses(n_channels);
    std::vector<int> ode_offset(n_channels, -1);
    int n_ode = 0;
    for (std::size_t c = 0; c < n_channels; ++c) {
        const auto& proc = scenario.channels[c].epsilon;
        const int eps_dim = scenario.coupling.channels[c].epsilon_dim;
        if (proc.kind == EpsilonProcessSpec::Kind::smooth_noise) {
            std::mt19937_64 rng(seed * kSeedMix + 0x1234567 * (c + 1));
            std::normal_distribution<double> normal(0.0, proc.sigma);
            Eigen::MatrixXd raw(static_cast<Eigen::Index>(n_nodes), eps_dim);
            for (Eigen::Index i = 0; i < raw.rows(); ++i) {
                for (Eigen::Index j = 0; j < raw.cols(); ++j) raw(i, j) = normal(rng);
            }
            noise_series[c] = run_pipeline({FilterPrimitive::moving_average(proc.smoothing_window)},
                                           raw, grid.dt);
        } else if (proc.kind == EpsilonProcessSpec::Kind::saccade_pulse) {
            pulses[c].duration = proc.duration;
        } else if (proc.kind == EpsilonProcessSpec::Kind::relaxation_ode) {
            ode_offset[c] = n_ode;
            n_ode += eps_dim;
        }
    }

    auto noise_at = [&](std::size_t c, double t) {
        ControlSignal s(grid, noise_series[c], SignalRole::epsilon);
        return s.interpolate(t);
    };

    auto epsilon_at = [&](std::size_t c, double t, const Eigen::VectorXd& augmented) {
        const auto& proc = scenario.channels[c].epsilon;
        const int eps_dim = scenario.coupling.channels[c].epsilon_dim;
        switch (proc.kind) {
            case EpsilonProcessSpec::Kind::zero:
                return Eigen::VectorXd::Zero(eps_dim).eval();
            case EpsilonProcessSpec::Kind::sinusoid:
                return Eigen::VectorXd::Constant(eps_dim,
                                                 proc.amplitude * std::sin(proc.omega * t + proc.phase))
                    .eval();
            case EpsilonProcessSpec::Kind::smooth_noise:
                return noise_at(c, t).eval();
            case EpsilonProcessSpec::Kind::saccade_pulse:
                return Eigen::VectorXd::Constant(eps_dim, pulses[c].value(t)).eval();
            case EpsilonProcessSpec::Kind::relaxation_ode:
                return augmented.segment(d + ode_offset[c], eps_dim).eval();
        }
        throw BadConfig("EpsilonProcessSpec: unknown process kind");
    };

    auto pure_full_at = [&](double t, const Eigen::VectorXd& phi) {
        Eigen::VectorXd u_pure = Eigen::VectorXd::Zero(scenario.dynamics.control_dim);
        for (std::size_t c = 0; c < n_channels; ++c) {
            const auto& ch = scenario.channels[c];
            const Eigen::VectorXd v =
                ch.policy.eval(t, phi, static_cast<int>(ch.control_coords.size()));
            for (std::size_t j = 0; j < ch.control_coords.size(); ++j) {
                u_pure[ch.control_coords[j]] = v[static_cast<Eigen::Index>(j)];
            }
        }
        return u_pure;
    };

    auto control_at = [&](double t, const Eigen::VectorXd& augmented) {
        const Eigen::VectorXd phi = augmented.head(d);
        if (n_channels == 0) return Eigen::VectorXd(0).eval();
        Eigen::VectorXd eps(scenario.coupling.total_epsilon_dim());
        Eigen::Index at = 0;
        for (std::size_t c = 0; c < n_channels; ++c) {
            const int eps_dim = scenario.coupling.channels[c].epsilon_dim;
            eps.segment(at, eps_dim) = epsilon_at(c, t, augmented);
            at += eps_dim;
        }
        return scenario.coupling.couple_full(phi, pure_full_at(t, phi), eps).eval();
    };

    auto rhs = [&](double t, const Eigen::VectorXd& augmented) {
        const Eigen::VectorXd phi = augmented.head(d);
        Eigen::VectorXd out(augmented.size());
        out.head(d) = scenario.dynamics.eval(phi, control_at(t, augmented));
        for (std::size_t c = 0; c < n_channels; ++c) {
            const auto& proc = scenario.channels[c].epsilon;
            if (proc.kind != EpsilonProcessSpec::Kind::relaxation_ode) continue;
            const int eps_dim = scenario.coupling.channels[c].epsilon_dim;
            const auto offset = static_cast<Eigen::Index>(d + ode_offset[c]);
            const double drive = proc.amplitude * std::sin(proc.omega * t + proc.phase);
            out.segment(offset, eps_dim) =
                (-proc.relax_rate * augmented.segment(offset, eps_dim).array() + drive).matrix();
        }
        return out;
    };

    Eigen::VectorXd augmented = Eigen::VectorXd::Zero(d + n_ode);
    augmented.head(d) = scenario.initial_state;

    Eigen::MatrixXd states(static_cast<Eigen::Index>(n_nodes), d);
    Eigen::MatrixXd controls(static_cast<Eigen::Index>(n_nodes), scenario.dynamics.control_dim);
    Eigen::MatrixXd pure(static_cast<Eigen::Index>(n_nodes), scenario.dynamics.control_dim);
    std::vector<Eigen::MatrixXd> eps_values;
    for (std::size_t c = 0; c < n_channels; ++c) {
        eps_values.emplace_back(static_cast<Eigen::Index>(n_nodes),
                                scenario.coupling.channels[c].epsilon_dim);
    }

    const double h = grid.dt;
    for (std::size_t node = 0; node < n_nodes; ++node) {
        const double t = grid.time(node);
        const Eigen::VectorXd phi = augmented.head(d);
        if (!phi.allFinite()) {
            throw NonFiniteState("generate: state left the finite range at node " +
                                     std::to_string(node),
                                 node);
        }

        // Trigger saccade pulses at nodes; the schedule is frozen inside steps.
        for (std::size_t c = 0; c < n_channels; ++c) {
            const auto& proc = scenario.channels[c].epsilon;
            if (proc.kind != EpsilonProcessSpec::Kind::saccade_pulse) continue;
            if (pulses[c].active(t)) continue;
            const double error = phi[proc.target_coord] - phi[proc.self_coord];
            if (std::abs(error) >= proc.bound) {
                pulses[c].start = t;
                pulses[c].amplitude = 2.0 * proc.correction * error / proc.duration;
                pulses[c].events += 1;
            }
        }

        states.row(static_cast<Eigen::Index>(node)) = phi.transpose();
        const auto row = static_cast<Eigen::Index>(node);
        pure.row(row) = pure_full_at(t, phi).transpose();
        controls.row(row) = control_at(t, augmented).transpose();
        for (std::size_t c = 0; c < n_channels; ++c) {
            eps_values[c].row(row) = epsilon_at(c, t, augmented).transpose();
        }

        if (node < grid.n_steps) {
            const Eigen::VectorXd k1 = rhs(t, augmented);
            const Eigen::VectorXd k2 = rhs(t + 0.5 * h, augmented + 0.5 * h * k1);
            const Eigen::VectorXd k3 = rhs(t + 0.5 * h, augmented + 0.5 * h * k2);
            const Eigen::VectorXd k4 = rhs(t + h, augmented + h * k3);
            augmented += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }

    GenerationResult out;
    if (n_channels > 0) {
        out.trajectory = Trajectory(grid, states, controls);
    } else {
        out.trajectory = Trajectory(grid, states);
    }
    out.interactive = ControlSignal(grid, controls, SignalRole::interactive);
    out.pure = ControlSignal(grid, pure, SignalRole::pure);
    out.epsilon.coupling = scenario.coupling;
    out.epsilon.pure_series = out.pure;
    for (std::size_t c = 0; c < n_channels; ++c) {
        out.epsilon.epsilon_series.emplace_back(grid, eps_values[c], SignalRole::epsilon);
    }
    out.epsilon.recovery_residual = 0.0;
    for (std::size_t c = 0; c < n_channels; ++c) {
        const auto& proc = scenario.channels[c].epsilon;
        if (proc.kind == EpsilonProcessSpec::Kind::saccade_pulse) {
            out.stats["saccade_events_ch" + std::to_string(c)] = pulses[c].events;
        }
    }
    out.stats["seed"] = static_cast<double>(seed);
    return out;
}

namespace {

/// Coefficient vector over monomial_dictionary(d, 0, degree) from key/value
/// pairs like {"x0^2", 1.0}.
Eigen::VectorXd state_poly(int d, int degree,
                           const std::vector<std::pair<std::string, double>>& entries) {
    const auto dict = monomial_dictionary(d, 0, degree);
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dict.size()));
    for (const auto& [key, value] : entries) {
        bool found = false;
        for (std::size_t j = 0; j < dict.size(); ++j) {
            if (dict[j].key() == key) {
                coeffs[static_cast<Eigen::Index>(j)] = value;
                found = true;
                break;
            }
        }
        if (!found) throw BadConfig("state_poly: no dictionary term " + key);
    }
    return coeffs;
}

/// Running cost in the derivative block: sum of entries over phidot terms,
/// e.g. {{"u0^2", 1.0}} for the integral of phidot_0^2.
GoalFunctional rate_goal(int d, const std::vector<std::pair<std::string, double>>& entries) {
    auto terms = monomial_dictionary(d, d, 2);
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(terms.size()));
    for (const auto& [key, value] : entries) {
        bool found = false;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (terms[j].key() == key) {
                coeffs(0, static_cast<Eigen::Index>(j)) = value;
                found = true;
                break;
            }
        }
        if (!found) throw BadConfig("rate_goal: no dictionary term " + key);
    }
    GoalFunctional K;
    K.running = DictionaryExpansion(d, d, std::move(terms), std::move(coeffs));
    return K;
}

FiltrationSpec controls_ma(int window) {
    FiltrationSpec spec;
    spec.input = SignalSource::controls;
    spec.pipeline = {FilterPrimitive::moving_average(window)};
    return spec;
}

DynamicsModel linear_model(int d, int k,
                           const std::vector<std::pair<std::string, Eigen::VectorXd>>& columns) {
    auto terms = monomial_dictionary(d, k, 1);
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(terms.size()));
    for (const auto& [key, column] : columns) {
        bool found = false;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (terms[j].key() == key) {
                coeffs.col(static_cast<Eigen::Index>(j)) = column;
                found = true;
                break;
            }
        }
        if (!found) throw BadConfig("linear_model: no dictionary term " + key);
    }
    return DynamicsModel(d, k, std::move(terms), std::move(coeffs));
}

Eigen::VectorXd e1(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

std::vector<Scenario> builtin_catalog() {
    std::vector<Scenario> catalog;

    {  // Autonomous relaxation; no controls at all.
        Scenario s;
        s.name = "autonomous";
        s.dynamics = linear_model(1, 0, {{"1", e1(0.4)}, {"x0", e1(-0.8)}});
        s.initial_state = e1(2.0);
        s.grid = TimeGrid(0.0, 0.01, 800);
        catalog.push_back(std::move(s));
    }

    {  // Holding still is the whole game: zero pure control, zero feedback.
        Scenario s;
        s.name = "still-point";
        s.dynamics = linear_model(1, 1, {{"u0", e1(1.0)}});
        s.coupling = CouplingForm::additive(1, 1);
        ScenarioChannel ch;
        ch.name = "holder";
        ch.control_coords = {0};
        ch.policy.kind = PolicySpec::Kind::zero;
        ch.epsilon.kind = EpsilonProcessSpec::Kind::zero;
        ch.generating_filtration = controls_ma(1);
        ch.generating_goal =
            state_polynomial_goal(1, 2, state_poly(1, 2, {{"1", 1.0}, {"x0", -2.0}, {"x0^2", 1.0}}));
        s.channels = {std::move(ch)};
        s.initial_state = e1(1.0);
        s.grid = TimeGrid(0.0, 0.01, 400);
        catalog.push_back(std::move(s));
    }

    {  // Relaxation driven by a slow pure sine plus a quick hidden sine.
        Scenario s;
        s.name = "linear-relaxation";
        s.dynamics = linear_model(1, 1, {{"u0", e1(1.0)}, {"x0", e1(-1.0)}});
        s.coupling = CouplingForm::additive(1, 1);
        ScenarioChannel ch;
        ch.name = "driver";
        ch.control_coords = {0};
        ch.policy.kind = PolicySpec::Kind::sinusoid;
        ch.policy.amplitude = 0.8;
        ch.policy.omega = 0.9;
        ch.epsilon.kind = EpsilonProcessSpec::Kind::sinusoid;
        ch.epsilon.amplitude = 0.5;
        ch.epsilon.omega = 40.0;
        ch.epsilon.phase = 1.0;
        ch.generating_filtration = controls_ma(15);
        ch.generating_goal = state_polynomial_goal(1, 2, state_poly(1, 2, {{"x0^2", 1.0}}));
        s.channels = {std::move(ch)};
        s.initial_state = e1(1.5);
        s.grid = TimeGrid(0.0, 0.01, 1200);
        catalog.push_back(std::move(s));
    }

    {  // Two-state chase: the chaser's feedback policy plus a quick hidden sine.
        Scenario s;
        s.name = "pursuit";
        s.dynamics = linear_model(2, 1,
                                  {{"u0", Eigen::Vector2d(1.0, 0.0)},
                                   {"1", Eigen::Vector2d(0.0, 0.25)}});
        CouplingForm coupling;
        coupling.channels = {ChannelCoupling::additive(2, {0})};
        s.coupling = std::move(coupling);
        ScenarioChannel ch;
        ch.name = "chaser";
        ch.control_coords = {0};
        ch.policy.kind = PolicySpec::Kind::state_feedback;
        ch.policy.gain = 1.2;
        ch.policy.target_coord = 1;
        ch.policy.self_coord = 0;
        ch.epsilon.kind = EpsilonProcessSpec::Kind::sinusoid;
        ch.epsilon.amplitude = 0.4;
        ch.epsilon.omega = 30.0;
        ch.epsilon.phase = 2.0;
        ch.generating_filtration = controls_ma(21);
        ch.generating_goal = state_polynomial_goal(
            2, 2, state_poly(2, 2, {{"x0^2", 1.0}, {"x0*x1", -2.0}, {"x1^2", 1.0}}));
        s.channels = {std::move(ch)};
        s.initial_state = Eigen::Vector2d(0.0, 1.0);
        s.grid = TimeGrid(0.0, 0.01, 1000);
        catalog.push_back(std::move(s));
    }

    {  // The eye-movement toy: slow drift pursuit plus saccadic correction pulses.
        Scenario s;
        s.name = "saccade";
        s.dynamics = linear_model(2, 1,
                                  {{"u0", Eigen::Vector2d(1.0, 0.0)},
                                   {"1", Eigen::Vector2d(0.0, 0.2)}});
        CouplingForm coupling;
        coupling.channels = {ChannelCoupling::additive(2, {0})};
        s.coupling = std::move(coupling);
        ScenarioChannel ch;
        ch.name = "gaze";
        ch.control_coords = {0};
        ch.policy.kind = PolicySpec::Kind::sinusoid;
        ch.policy.amplitude = 0.08;
        ch.policy.omega = 0.8;
        ch.epsilon.kind = EpsilonProcessSpec::Kind::saccade_pulse;
        ch.epsilon.bound = 0.5;
        ch.epsilon.correction = 0.9;
        ch.epsilon.duration = 0.8;
        ch.epsilon.target_coord = 1;
        ch.epsilon.self_coord = 0;
        ch.generating_filtration = controls_ma(101);
        ch.generating_goal = state_polynomial_goal(
            2, 2, state_poly(2, 2, {{"x0^2", 1.0}, {"x0*x1", -2.0}, {"x1^2", 1.0}}));
        s.channels = {std::move(ch)};
        s.initial_state = Eigen::Vector2d(0.0, 0.4);
        s.grid = TimeGrid(0.0, 0.01, 1500);
        catalog.push_back(std::move(s));
    }

    {  // Two observers sharing one image state, saccading on their own rhythms.
        Scenario s;
        s.name = "saccade-duo";
        s.dynamics = linear_model(3, 2,
                                  {{"u0", Eigen::Vector3d(1.0, 0.0, 0.0)},
                                   {"u1", Eigen::Vector3d(0.0, 1.0, 0.0)},
                                   {"1", Eigen::Vector3d(0.0, 0.0, 0.2)}});
        CouplingForm coupling;
        coupling.channels = {ChannelCoupling::additive(3, {0}), ChannelCoupling::additive(3, {1})};
        s.coupling = std::move(coupling);

        ScenarioChannel first;
        first.name = "observer-1";
        first.control_coords = {0};
        first.policy.kind = PolicySpec::Kind::sinusoid;
        first.policy.amplitude = 0.06;
        first.policy.omega = 0.7;
        first.epsilon.kind = EpsilonProcessSpec::Kind::saccade_pulse;
        first.epsilon.bound = 0.5;
        first.epsilon.correction = 0.9;
        first.epsilon.duration = 0.8;
        first.epsilon.target_coord = 2;
        first.epsilon.self_coord = 0;
        first.generating_filtration = controls_ma(101);
        first.generating_goal = state_polynomial_goal(
            3, 2,
            state_poly(3, 2,
                       {{"x0^2", 1.0}, {"x0*x2", -2.0}, {"x1^2", 1.0}, {"x1*x2", -2.0}, {"x2^2", 2.0}}));

        ScenarioChannel second = first;
        second.name = "observer-2";
        second.control_coords = {1};
        second.policy.phase = 0.9;
        second.epsilon.bound = 0.55;
        second.epsilon.duration = 0.7;
        second.epsilon.self_coord = 1;

        s.channels = {std::move(first), std::move(second)};
        s.initial_state = Eigen::Vector3d(0.0, 0.1, 0.4);
        s.grid = TimeGrid(0.0, 0.01, 1500);
        catalog.push_back(std::move(s));
    }

    {  // The epsilon series is itself a one-level interactive game.
        Scenario s;
        s.name = "two-stage";
        s.dynamics = linear_model(1, 1, {{"u0", e1(1.0)}, {"x0", e1(-1.0)}});
        s.coupling = CouplingForm::additive(1, 1);
        ScenarioChannel ch;
        ch.name = "outer";
        ch.control_coords = {0};
        ch.policy.kind = PolicySpec::Kind::sinusoid;
        ch.policy.amplitude = 0.9;
        ch.policy.omega = 0.7;
        ch.epsilon.kind = EpsilonProcessSpec::Kind::relaxation_ode;
        ch.epsilon.relax_rate = 2.0;
        ch.epsilon.amplitude = 0.6;
        ch.epsilon.omega = 2.4;
        ch.epsilon.phase = 0.3;
        ch.generating_filtration = controls_ma(39);
        ch.generating_goal = state_polynomial_goal(1, 2, state_poly(1, 2, {{"x0^2", 1.0}}));
        s.channels = {std::move(ch)};
        s.initial_state = e1(1.0);
        s.grid = TimeGrid(0.0, 0.01, 1500);
        catalog.push_back(std::move(s));
    }

    return catalog;
}

Scenario builtin_scenario(const std::string& name) {
    for (auto& s : builtin_catalog()) {
        if (s.name == name) return s;
    }
    throw BadConfig("unknown builtin scenario: " + name);
}

std::vector<std::vector<Candidate>> builtin_menus(const Scenario& scenario) {
    if (scenario.channels.empty()) {
        throw BadConfig("builtin_menus: the scenario has no interactive channels");
    }
    const int d = scenario.dynamics.state_dim;

    Candidate generating;
    generating.filtration = scenario.channels.front().generating_filtration;
    generating.filtration.coords.clear();  // cover the whole control vector
    generating.coupling = scenario.coupling;
    generating.goal = scenario.channels.front().generating_goal;

    Candidate blind;  // kills the controls entirely
    blind.filtration.input = SignalSource::controls;
    blind.filtration.pipeline = {FilterPrimitive::dead_band(1e6)};
    blind.coupling = scenario.coupling;
    blind.goal = state_polynomial_goal(d, 2, state_poly(d, 2, {{"1", 9.0}, {"x0", -6.0}, {"x0^2", 1.0}}));

    Candidate jitter;  // differentiates the controls into spikes
    jitter.filtration.input = SignalSource::controls;
    jitter.filtration.pipeline = {FilterPrimitive::finite_difference()};
    jitter.coupling = scenario.coupling;
    jitter.goal = rate_goal(d, {{"1", 1.0}, {"u0", -2.0}, {"u0^2", 1.0}});

    std::vector<std::vector<Candidate>> menus;
    menus.push_back({generating, blind, jitter});

    if (scenario.name == "two-stage") {
        // The epsilon game: its hidden-input estimate is the pure drive itself.
        const int eps_dim = scenario.coupling.total_epsilon_dim();
        Candidate inner;
        inner.filtration = FiltrationSpec::identity(SignalSource::controls);
        inner.coupling = CouplingForm::additive(eps_dim, eps_dim);
        inner.goal = state_polynomial_goal(eps_dim, 2, state_poly(eps_dim, 2, {{"x0^2", 1.0}}));

        Candidate inner_blind = inner;
        inner_blind.filtration.pipeline = {FilterPrimitive::dead_band(1e6)};
        inner_blind.goal = state_polynomial_goal(
            eps_dim, 2, state_poly(eps_dim, 2, {{"1", 9.0}, {"x0", -6.0}, {"x0^2", 1.0}}));

        Candidate inner_jitter = inner;
        inner_jitter.filtration.pipeline = {FilterPrimitive::finite_difference()};
        inner_jitter.goal = rate_goal(eps_dim, {{"1", 1.0}, {"u0", -2.0}, {"u0^2", 1.0}});

        menus.push_back({inner, inner_blind, inner_jitter});
    }
    return menus;
}

}  // namespace igame
