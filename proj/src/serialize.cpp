#include "igame/serialize.hpp"

#include <fstream>

namespace igame {

Json json_vector(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Json json_matrix(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
            throw ParseError("matrix rows have unequal lengths");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
        }
    }
    return m;
}

Json json_basis_term(const BasisTerm& term) {
    return Json{{"state", term.state_exponents}, {"control", term.control_exponents}};
}

BasisTerm basis_term_from_json(const Json& j) {
    BasisTerm t;
    t.state_exponents = j.at("state").get<std::vector<int>>();
    t.control_exponents = j.at("control").get<std::vector<int>>();
    return t;
}

Json json_expansion(const DictionaryExpansion& e) {
    Json terms = Json::array();
    for (const auto& t : e.terms) terms.push_back(json_basis_term(t));
    return Json{{"state_dim", e.state_dim},
                {"control_dim", e.control_dim},
                {"output_dim", e.output_dim},
                {"terms", std::move(terms)},
                {"coefficients", json_matrix(e.coefficients)}};
}

DictionaryExpansion expansion_from_json(const Json& j) {
    DictionaryExpansion e;
    e.state_dim = j.at("state_dim").get<int>();
    e.control_dim = j.at("control_dim").get<int>();
    e.output_dim = j.at("output_dim").get<int>();
    for (const auto& t : j.at("terms")) e.terms.push_back(basis_term_from_json(t));
    e.coefficients = matrix_from_json(j.at("coefficients"));
    if (e.coefficients.size() == 0) {
        e.coefficients.resize(e.output_dim, static_cast<Eigen::Index>(e.terms.size()));
    }
    e.validate();
    return e;
}

Json json_grid(const TimeGrid& grid) {
    return Json{{"t0", grid.t0}, {"dt", grid.dt}, {"n_steps", grid.n_steps}};
}

TimeGrid grid_from_json(const Json& j) {
    return TimeGrid(j.at("t0").get<double>(), j.at("dt").get<double>(),
                    j.at("n_steps").get<std::size_t>());
}

namespace {

Json json_primitive(const FilterPrimitive& p) {
    Json out{{"kind", to_string(p.kind)}};
    switch (p.kind) {
        case FilterPrimitive::Kind::moving_average:
        case FilterPrimitive::Kind::median:
            out["window"] = p.window;
            break;
        case FilterPrimitive::Kind::exponential_smoothing:
            out["rate"] = p.rate;
            break;
        case FilterPrimitive::Kind::dead_band:
            out["threshold"] = p.threshold;
            break;
        case FilterPrimitive::Kind::finite_difference:
            break;
    }
    return out;
}

FilterPrimitive primitive_from_json(const Json& j) {
    FilterPrimitive p;
    p.kind = filter_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("window")) p.window = j["window"].get<int>();
    if (j.contains("rate")) p.rate = j["rate"].get<double>();
    if (j.contains("threshold")) p.threshold = j["threshold"].get<double>();
    p.validate();
    return p;
}

}  // namespace

Json json_filtration(const FiltrationSpec& spec) {
    Json pipeline = Json::array();
    for (const auto& p : spec.pipeline) pipeline.push_back(json_primitive(p));
    return Json{{"input", to_string(spec.input)},
                {"coords", spec.coords},
                {"pipeline", std::move(pipeline)}};
}

FiltrationSpec filtration_from_json(const Json& j) {
    FiltrationSpec spec;
    spec.input = signal_source_from_string(j.at("input").get<std::string>());
    if (j.contains("coords")) spec.coords = j["coords"].get<std::vector<int>>();
    for (const auto& p : j.at("pipeline")) spec.pipeline.push_back(primitive_from_json(p));
    spec.validate();
    return spec;
}

std::string serialize_filtration(const FiltrationSpec& spec) { return json_filtration(spec).dump(); }

Json json_goal(const GoalFunctional& goal) {
    Json horizon{{"kind", goal.horizon.kind == GoalHorizon::Kind::full ? "full" : "trailing"},
                 {"nodes", goal.horizon.nodes}};
    return Json{{"running", json_expansion(goal.running)},
                {"terminal", json_expansion(goal.terminal)},
                {"horizon", std::move(horizon)}};
}

GoalFunctional goal_from_json(const Json& j) {
    GoalFunctional goal;
    goal.running = expansion_from_json(j.at("running"));
    goal.terminal = expansion_from_json(j.at("terminal"));
    const auto& h = j.at("horizon");
    const auto kind = h.at("kind").get<std::string>();
    if (kind == "full") {
        goal.horizon.kind = GoalHorizon::Kind::full;
    } else if (kind == "trailing") {
        goal.horizon.kind = GoalHorizon::Kind::trailing;
    } else {
        throw ParseError("unknown goal horizon kind: " + kind);
    }
    goal.horizon.nodes = h.at("nodes").get<std::size_t>();
    return goal;
}

Json json_coupling(const CouplingForm& coupling) {
    Json channels = Json::array();
    for (const auto& ch : coupling.channels) {
        channels.push_back(Json{{"control_coords", ch.control_coords},
                                {"epsilon_dim", ch.epsilon_dim},
                                {"offset", json_expansion(ch.offset)},
                                {"gain", json_expansion(ch.gain)}});
    }
    return Json{{"channels", std::move(channels)}};
}

CouplingForm coupling_from_json(const Json& j) {
    CouplingForm coupling;
    for (const auto& c : j.at("channels")) {
        ChannelCoupling ch;
        ch.control_coords = c.at("control_coords").get<std::vector<int>>();
        ch.epsilon_dim = c.at("epsilon_dim").get<int>();
        ch.offset = expansion_from_json(c.at("offset"));
        ch.gain = expansion_from_json(c.at("gain"));
        coupling.channels.push_back(std::move(ch));
    }
    return coupling;
}

Json json_desire_map(const DesireMap& map) {
    Json components = Json::array();
    for (const auto& c : map.components) components.push_back(json_expansion(c));
    return Json{{"components", std::move(components)}, {"fit_residual", map.fit_residual}};
}

DesireMap desire_map_from_json(const Json& j) {
    DesireMap map;
    for (const auto& c : j.at("components")) map.components.push_back(expansion_from_json(c));
    map.fit_residual = j.at("fit_residual").get<double>();
    map.validate();
    return map;
}

Json json_candidate(const Candidate& candidate) {
    return Json{{"filtration", json_filtration(candidate.filtration)},
                {"coupling", json_coupling(candidate.coupling)},
                {"goal", json_goal(candidate.goal)}};
}

Candidate candidate_from_json(const Json& j) {
    Candidate c;
    c.filtration = filtration_from_json(j.at("filtration"));
    c.coupling = coupling_from_json(j.at("coupling"));
    c.goal = goal_from_json(j.at("goal"));
    return c;
}

Json json_menus(const std::vector<std::vector<Candidate>>& menus) {
    Json levels = Json::array();
    for (const auto& menu : menus) {
        Json level = Json::array();
        for (const auto& c : menu) level.push_back(json_candidate(c));
        levels.push_back(std::move(level));
    }
    return Json{{"menus", std::move(levels)}};
}

std::vector<std::vector<Candidate>> menus_from_json(const Json& j) {
    std::vector<std::vector<Candidate>> menus;
    for (const auto& level : j.at("menus")) {
        std::vector<Candidate> menu;
        for (const auto& c : level) menu.push_back(candidate_from_json(c));
        menus.push_back(std::move(menu));
    }
    return menus;
}

Json json_picture(const PictureModel& picture) {
    return Json{{"dynamics", json_expansion(picture.dynamics)},
                {"couplings", json_coupling(picture.couplings)},
                {"actor_roles", to_string(picture.actor_roles)},
                {"hidden_parameter_map", json_desire_map(picture.hidden_parameter_map)}};
}

PictureModel picture_from_json(const Json& j) {
    PictureModel picture;
    picture.dynamics = expansion_from_json(j.at("dynamics"));
    picture.couplings = coupling_from_json(j.at("couplings"));
    picture.actor_roles = actor_role_from_string(j.at("actor_roles").get<std::string>());
    picture.hidden_parameter_map = desire_map_from_json(j.at("hidden_parameter_map"));
    return picture;
}

Json json_sdpair(const SDPair& pair) {
    return Json{{"s_picture", json_picture(pair.s_picture)},
                {"d_picture", json_picture(pair.d_picture)},
                {"consistency_residual", pair.consistency_residual}};
}

SDPair sdpair_from_json(const Json& j) {
    SDPair pair;
    pair.s_picture = picture_from_json(j.at("s_picture"));
    pair.d_picture = picture_from_json(j.at("d_picture"));
    pair.consistency_residual = j.at("consistency_residual").get<double>();
    return pair;
}

Json json_partition(const Partition& partition) {
    return Json{{"breakpoints", partition.breakpoints},
                {"min_segment_len", partition.min_segment_len}};
}

Partition partition_from_json(const Json& j) {
    Partition p;
    p.breakpoints = j.at("breakpoints").get<std::vector<std::size_t>>();
    p.min_segment_len = j.at("min_segment_len").get<std::size_t>();
    return p;
}

Json json_word_spec(const SegmentFunctionalSpec& spec) {
    Json recipes = Json::array();
    for (const auto& r : spec.recipes) {
        recipes.push_back(Json{{"kind", to_string(r.kind)},
                               {"source", to_string(r.source)},
                               {"coords", r.coords}});
    }
    Json out{{"recipes", std::move(recipes)}};
    if (spec.codebook) {
        Json codebook = Json::array();
        for (const auto& c : *spec.codebook) codebook.push_back(json_vector(c));
        out["codebook"] = std::move(codebook);
    } else {
        out["codebook"] = nullptr;
    }
    return out;
}

SegmentFunctionalSpec word_spec_from_json(const Json& j) {
    SegmentFunctionalSpec spec;
    for (const auto& r : j.at("recipes")) {
        WordRecipe recipe;
        recipe.kind = word_recipe_kind_from_string(r.at("kind").get<std::string>());
        recipe.source = signal_source_from_string(r.at("source").get<std::string>());
        if (r.contains("coords")) recipe.coords = r["coords"].get<std::vector<int>>();
        spec.recipes.push_back(std::move(recipe));
    }
    if (j.contains("codebook") && !j["codebook"].is_null()) {
        std::vector<Eigen::VectorXd> codebook;
        for (const auto& c : j["codebook"]) codebook.push_back(vector_from_json(c));
        spec.codebook = std::move(codebook);
    }
    return spec;
}

Json json_recursion(const RecursionModel& model) {
    return Json{{"prev_word_map", json_matrix(model.prev_word_map)},
                {"tactic_map", json_matrix(model.tactic_map)},
                {"state_map", json_matrix(model.state_map)},
                {"intercept", json_vector(model.intercept)},
                {"segment_residuals", json_vector(model.segment_residuals)},
                {"verbalizable", model.verbalizable},
                {"tolerance", model.tolerance}};
}

Json json_hamiltonian_spec(const HamiltonianSpec& spec) {
    return Json{{"omega_re", json_matrix(spec.quadratic.real())},
                {"omega_im", json_matrix(spec.quadratic.imag())},
                {"vertex", spec.vertex}};
}

HamiltonianSpec hamiltonian_spec_from_json(const Json& j) {
    HamiltonianSpec spec;
    const Eigen::MatrixXd re = matrix_from_json(j.at("omega_re"));
    const Eigen::MatrixXd im = matrix_from_json(j.at("omega_im"));
    if (re.rows() != im.rows() || re.cols() != im.cols()) {
        throw ParseError("hamiltonian spec: omega_re and omega_im shapes differ");
    }
    spec.quadratic = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
    if (j.contains("vertex") && !j["vertex"].is_null()) {
        spec.vertex = j["vertex"].get<std::vector<double>>();
    }
    spec.validate();
    return spec;
}

Json json_filter_basis(const FilterBasis& basis) {
    Json specs = Json::array();
    for (const auto& s : basis.specs) specs.push_back(json_filtration(s));
    return Json{{"specs", std::move(specs)}};
}

FilterBasis filter_basis_from_json(const Json& j) {
    FilterBasis basis;
    for (const auto& s : j.at("specs")) basis.specs.push_back(filtration_from_json(s));
    basis.validate();
    return basis;
}

namespace {

Json json_policy(const PolicySpec& p) {
    Json out;
    switch (p.kind) {
        case PolicySpec::Kind::zero: out["kind"] = "zero"; break;
        case PolicySpec::Kind::constant:
            out["kind"] = "constant";
            out["value"] = json_vector(p.constant);
            break;
        case PolicySpec::Kind::sinusoid:
            out["kind"] = "sinusoid";
            out["amplitude"] = p.amplitude;
            out["omega"] = p.omega;
            out["phase"] = p.phase;
            break;
        case PolicySpec::Kind::state_feedback:
            out["kind"] = "state_feedback";
            out["gain"] = p.gain;
            out["target_coord"] = p.target_coord;
            out["self_coord"] = p.self_coord;
            break;
    }
    return out;
}

PolicySpec policy_from_json(const Json& j) {
    PolicySpec p;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "zero") {
        p.kind = PolicySpec::Kind::zero;
    } else if (kind == "constant") {
        p.kind = PolicySpec::Kind::constant;
        p.constant = vector_from_json(j.at("value"));
    } else if (kind == "sinusoid") {
        p.kind = PolicySpec::Kind::sinusoid;
        p.amplitude = j.at("amplitude").get<double>();
        p.omega = j.at("omega").get<double>();
        p.phase = j.at("phase").get<double>();
    } else if (kind == "state_feedback") {
        p.kind = PolicySpec::Kind::state_feedback;
        p.gain = j.at("gain").get<double>();
        p.target_coord = j.at("target_coord").get<int>();
        p.self_coord = j.at("self_coord").get<int>();
    } else {
        throw ParseError("unknown policy kind: " + kind);
    }
    return p;
}

Json json_epsilon_process(const EpsilonProcessSpec& e) {
    Json out;
    switch (e.kind) {
        case EpsilonProcessSpec::Kind::zero: out["kind"] = "zero"; break;
        case EpsilonProcessSpec::Kind::sinusoid:
            out["kind"] = "sinusoid";
            out["amplitude"] = e.amplitude;
            out["omega"] = e.omega;
            out["phase"] = e.phase;
            break;
        case EpsilonProcessSpec::Kind::smooth_noise:
            out["kind"] = "smooth_noise";
            out["sigma"] = e.sigma;
            out["smoothing_window"] = e.smoothing_window;
            break;
        case EpsilonProcessSpec::Kind::saccade_pulse:
            out["kind"] = "saccade_pulse";
            out["bound"] = e.bound;
            out["correction"] = e.correction;
            out["duration"] = e.duration;
            out["target_coord"] = e.target_coord;
            out["self_coord"] = e.self_coord;
            break;
        case EpsilonProcessSpec::Kind::relaxation_ode:
            out["kind"] = "relaxation_ode";
            out["relax_rate"] = e.relax_rate;
            out["amplitude"] = e.amplitude;
            out["omega"] = e.omega;
            out["phase"] = e.phase;
            break;
    }
    return out;
}

EpsilonProcessSpec epsilon_process_from_json(const Json& j) {
    EpsilonProcessSpec e;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "zero") {
        e.kind = EpsilonProcessSpec::Kind::zero;
    } else if (kind == "sinusoid") {
        e.kind = EpsilonProcessSpec::Kind::sinusoid;
        e.amplitude = j.at("amplitude").get<double>();
        e.omega = j.at("omega").get<double>();
        e.phase = j.at("phase").get<double>();
    } else if (kind == "smooth_noise") {
        e.kind = EpsilonProcessSpec::Kind::smooth_noise;
        e.sigma = j.at("sigma").get<double>();
        e.smoothing_window = j.at("smoothing_window").get<int>();
    } else if (kind == "saccade_pulse") {
        e.kind = EpsilonProcessSpec::Kind::saccade_pulse;
        e.bound = j.at("bound").get<double>();
        e.correction = j.at("correction").get<double>();
        e.duration = j.at("duration").get<double>();
        e.target_coord = j.at("target_coord").get<int>();
        e.self_coord = j.at("self_coord").get<int>();
    } else if (kind == "relaxation_ode") {
        e.kind = EpsilonProcessSpec::Kind::relaxation_ode;
        e.relax_rate = j.at("relax_rate").get<double>();
        e.amplitude = j.at("amplitude").get<double>();
        e.omega = j.at("omega").get<double>();
        e.phase = j.at("phase").get<double>();
    } else {
        throw ParseError("unknown epsilon process kind: " + kind);
    }
    return e;
}

}  // namespace

Json json_scenario(const Scenario& scenario) {
    Json channels = Json::array();
    for (const auto& ch : scenario.channels) {
        channels.push_back(Json{{"name", ch.name},
                                {"control_coords", ch.control_coords},
                                {"policy", json_policy(ch.policy)},
                                {"epsilon", json_epsilon_process(ch.epsilon)},
                                {"generating_filtration", json_filtration(ch.generating_filtration)},
                                {"generating_goal", json_goal(ch.generating_goal)}});
    }
    return Json{{"name", scenario.name},
                {"dynamics", json_expansion(scenario.dynamics)},
                {"coupling", json_coupling(scenario.coupling)},
                {"channels", std::move(channels)},
                {"initial_state", json_vector(scenario.initial_state)},
                {"grid", json_grid(scenario.grid)}};
}

Scenario scenario_from_json(const Json& j) {
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.dynamics = expansion_from_json(j.at("dynamics"));
    s.coupling = coupling_from_json(j.at("coupling"));
    for (const auto& c : j.at("channels")) {
        ScenarioChannel ch;
        ch.name = c.at("name").get<std::string>();
        ch.control_coords = c.at("control_coords").get<std::vector<int>>();
        ch.policy = policy_from_json(c.at("policy"));
        ch.epsilon = epsilon_process_from_json(c.at("epsilon"));
        ch.generating_filtration = filtration_from_json(c.at("generating_filtration"));
        ch.generating_goal = goal_from_json(c.at("generating_goal"));
        s.channels.push_back(std::move(ch));
    }
    s.initial_state = vector_from_json(j.at("initial_state"));
    s.grid = grid_from_json(j.at("grid"));
    s.validate();
    return s;
}

Json json_verdict(const DetectionVerdict& verdict, bool include_profile) {
    Json out{{"residual_norm", verdict.residual_norm},
             {"threshold_used", verdict.threshold_used},
             {"verdict", verdict.hidden_inputs ? "hidden_inputs" : "autonomous"}};
    if (include_profile) out["per_node_residuals"] = json_vector(verdict.per_node_residuals);
    return out;
}

Json json_ranking(const CandidateRanking& ranking) {
    Json scores = Json::array();
    for (const auto& s : ranking.scores) {
        scores.push_back(Json{{"prediction_error", s.prediction_error},
                              {"optimality_score", s.optimality_score}});
    }
    Json candidates = Json::array();
    for (const auto& c : ranking.candidates) candidates.push_back(json_candidate(c));
    return Json{{"candidates", std::move(candidates)},
                {"scores", std::move(scores)},
                {"best_index", ranking.best_index}};
}

Json json_unravel(const UnravelLevel& level) {
    Json out{{"verdict", json_verdict(level.verdict, false)}};
    if (level.ranking) out["ranking"] = json_ranking(*level.ranking);
    if (level.recovered) out["recovery_residual"] = level.recovered->recovery_residual;
    Json children = Json::array();
    for (const auto& child : level.children) children.push_back(json_unravel(child));
    out["children"] = std::move(children);
    return out;
}

void expect_keys(const Json& j, const std::vector<std::string>& allowed,
                 const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw BadConfig(context + ": unknown key '" + key + "'");
        }
    }
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace igame
