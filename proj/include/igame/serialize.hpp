#pragma once

#include <json.hpp>

#include <filesystem>

#include "igame/detection.hpp"
#include "igame/epsilon.hpp"
#include "igame/quantize.hpp"
#include "igame/scenarios.hpp"
#include "igame/sdpair.hpp"
#include "igame/verbalization.hpp"

namespace igame {

using Json = nlohmann::json;

Json json_vector(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);
Json json_matrix(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json json_basis_term(const BasisTerm& term);
BasisTerm basis_term_from_json(const Json& j);
Json json_expansion(const DictionaryExpansion& e);
DictionaryExpansion expansion_from_json(const Json& j);

Json json_grid(const TimeGrid& grid);
TimeGrid grid_from_json(const Json& j);

Json json_filtration(const FiltrationSpec& spec);
FiltrationSpec filtration_from_json(const Json& j);
std::string serialize_filtration(const FiltrationSpec& spec);

Json json_goal(const GoalFunctional& goal);
GoalFunctional goal_from_json(const Json& j);

Json json_coupling(const CouplingForm& coupling);
CouplingForm coupling_from_json(const Json& j);

Json json_desire_map(const DesireMap& map);
DesireMap desire_map_from_json(const Json& j);

Json json_candidate(const Candidate& candidate);
Candidate candidate_from_json(const Json& j);
Json json_menus(const std::vector<std::vector<Candidate>>& menus);
std::vector<std::vector<Candidate>> menus_from_json(const Json& j);

Json json_picture(const PictureModel& picture);
PictureModel picture_from_json(const Json& j);
Json json_sdpair(const SDPair& pair);
SDPair sdpair_from_json(const Json& j);

Json json_partition(const Partition& partition);
Partition partition_from_json(const Json& j);
Json json_word_spec(const SegmentFunctionalSpec& spec);
SegmentFunctionalSpec word_spec_from_json(const Json& j);
Json json_recursion(const RecursionModel& model);

Json json_hamiltonian_spec(const HamiltonianSpec& spec);
HamiltonianSpec hamiltonian_spec_from_json(const Json& j);
Json json_filter_basis(const FilterBasis& basis);
FilterBasis filter_basis_from_json(const Json& j);

Json json_scenario(const Scenario& scenario);
Scenario scenario_from_json(const Json& j);

Json json_verdict(const DetectionVerdict& verdict, bool include_profile = true);
Json json_ranking(const CandidateRanking& ranking);
Json json_unravel(const UnravelLevel& level);

/// Strict helper for config blocks: every present key must be known.
void expect_keys(const Json& j, const std::vector<std::string>& allowed,
                 const std::string& context);

Json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace igame
