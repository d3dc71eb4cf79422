#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "igame/csv.hpp"
#include "igame/scenarios.hpp"
#include "igame/serialize.hpp"

using namespace igame;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("igame_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("format_double is shortest-exact") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal;
    std::vector<double> values{0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 1e-300, 1e300, M_PI};
    for (int i = 0; i < 200; ++i) values.push_back(normal(rng) * std::pow(10.0, i % 40 - 20));
    for (double v : values) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("trajectory CSV round trip") {
    TempDir tmp;
    const auto data = generate(builtin_scenario("pursuit"), 9);
    const fs::path path = tmp.path / "traj.csv";
    write_trajectory_csv(path, data.trajectory);
    const Trajectory back = read_trajectory_csv(path);
    CHECK(back.state_dim() == data.trajectory.state_dim());
    CHECK(back.control_dim() == data.trajectory.control_dim());
    CHECK((back.states.array() == data.trajectory.states.array()).all());
    CHECK((back.controls->array() == data.trajectory.controls->array()).all());
    CHECK(back.grid.n_steps == data.trajectory.grid.n_steps);
}

TEST_CASE("signal CSV round trip preserves values") {
    TempDir tmp;
    const TimeGrid grid(0.25, 0.05, 40);
    Eigen::MatrixXd values(41, 2);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < values.size(); ++i) values.data()[i] = normal(rng);
    const ControlSignal signal(grid, values, SignalRole::epsilon);
    const fs::path path = tmp.path / "eps.csv";
    write_signal_csv(path, signal, "eps");
    const ControlSignal back = read_signal_csv(path, SignalRole::epsilon);
    CHECK((back.values.array() == values.array()).all());
}

TEST_CASE("trajectory CSV validation") {
    TempDir tmp;
    SUBCASE("non-monotone time is rejected with the row number") {
        const fs::path path = tmp.path / "bad.csv";
        std::ofstream out(path);
        out << "t,phi_1\n0,1\n0.1,1\n0.05,1\n0.3,1\n";
        out.close();
        try {
            read_trajectory_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("row 4") != std::string::npos);
            CHECK(e.row == 4);
        }
    }
    SUBCASE("non-constant steps are rejected") {
        const fs::path path = tmp.path / "uneven.csv";
        std::ofstream out(path);
        out << "t,phi_1\n0,1\n0.1,1\n0.2,1\n0.4,1\n";
        out.close();
        CHECK_THROWS_AS(read_trajectory_csv(path), ParseError);
    }
    SUBCASE("field-count mismatches carry the row number") {
        const fs::path path = tmp.path / "short.csv";
        std::ofstream out(path);
        out << "t,phi_1\n0,1\n0.1\n0.2,1\n";
        out.close();
        try {
            read_trajectory_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row == 3);
        }
    }
    SUBCASE("non-numeric fields are rejected") {
        const fs::path path = tmp.path / "alpha.csv";
        std::ofstream out(path);
        out << "t,phi_1\n0,1\n0.1,x\n0.2,1\n";
        out.close();
        CHECK_THROWS_AS(read_trajectory_csv(path), ParseError);
    }
    SUBCASE("headers must declare phi columns") {
        const fs::path path = tmp.path / "nophi.csv";
        std::ofstream out(path);
        out << "t,y_1\n0,1\n0.1,1\n";
        out.close();
        CHECK_THROWS_AS(read_trajectory_csv(path), ParseError);
    }
}

TEST_CASE("model JSON round trips are value-exact") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> normal;

    SUBCASE("dictionary expansions") {
        auto terms = monomial_dictionary(2, 1, 2);
        Eigen::MatrixXd coeffs(2, static_cast<Eigen::Index>(terms.size()));
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs.data()[i] = normal(rng);
        const DictionaryExpansion e(2, 1, terms, coeffs);
        const auto back = expansion_from_json(json_expansion(e));
        CHECK((back.coefficients.array() == e.coefficients.array()).all());
        CHECK(back.terms == e.terms);
    }
    SUBCASE("candidate menus") {
        const auto menus = builtin_menus(builtin_scenario("two-stage"));
        const Json j = json_menus(menus);
        const auto back = menus_from_json(j);
        CHECK(json_menus(back).dump() == j.dump());
    }
    SUBCASE("filtration specs serialize distinctly") {
        FiltrationSpec a = FiltrationSpec::identity(SignalSource::epsilon);
        FiltrationSpec b = FiltrationSpec::identity(SignalSource::epsilon, {0});
        CHECK(serialize_filtration(a) != serialize_filtration(b));
        const auto back = filtration_from_json(json_filtration(a));
        CHECK(serialize_filtration(back) == serialize_filtration(a));
    }
    SUBCASE("hamiltonian specs") {
        HamiltonianSpec spec;
        spec.quadratic = Eigen::MatrixXcd(2, 2);
        spec.quadratic << Complex(1.0, 0.0), Complex(0.2, 0.3), Complex(0.2, -0.3),
            Complex(-0.5, 0.0);
        spec.vertex.assign(8, 0.0);
        spec.vertex[3] = 0.25;
        const auto back = hamiltonian_spec_from_json(json_hamiltonian_spec(spec));
        CHECK((back.quadratic - spec.quadratic).cwiseAbs().maxCoeff() == 0.0);
        CHECK(back.vertex == spec.vertex);
    }
    SUBCASE("goal functionals evaluate identically after a round trip") {
        const auto goal = state_polynomial_goal(2, 2, [&] {
            Eigen::VectorXd c(6);
            for (int i = 0; i < 6; ++i) c[i] = normal(rng);
            return c;
        }());
        const auto back = goal_from_json(json_goal(goal));
        CHECK((back.running.coefficients.array() == goal.running.coefficients.array()).all());
    }
}

TEST_CASE("unknown config keys are rejected") {
    const Json config{{"seed", 4}, {"tpyo", 1}};
    CHECK_THROWS_AS(expect_keys(config, {"seed"}, "test config"), BadConfig);
    CHECK_NOTHROW(expect_keys(Json{{"seed", 4}}, {"seed"}, "test config"));
}

TEST_CASE("word and state CSV writers produce the documented shapes") {
    TempDir tmp;
    SUBCASE("continuous words") {
        WordSequence words;
        words.words = Eigen::MatrixXd::Constant(2, 2, 1.5);
        Partition partition;
        partition.min_segment_len = 2;
        partition.breakpoints = {0, 5, 10};
        const fs::path path = tmp.path / "words.csv";
        write_words_csv(path, words, partition, TimeGrid(0.0, 0.1, 10));
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "segment,start_t,end_t,w_1,w_2");
        std::string row;
        std::getline(in, row);
        CHECK(row.rfind("0,0,0.5", 0) == 0);
    }
    SUBCASE("quantum state snapshots") {
        const FockSpace space(2, 1);
        const auto psi = QuantumState::basis_state(space, {1, 0});
        const fs::path path = tmp.path / "state.csv";
        write_state_csv(path, psi, space);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "basis_index,occupations,re,im");
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 4);
    }
}
