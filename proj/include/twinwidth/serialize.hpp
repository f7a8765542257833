#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "twinwidth/elimination.hpp"
#include "twinwidth/inference.hpp"
#include "twinwidth/jointree.hpp"
#include "twinwidth/model.hpp"
#include "twinwidth/thinning.hpp"
#include "twinwidth/world.hpp"

namespace twinwidth {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Parses and validates a network document. Syntax errors raise ParseError
/// with a line and column, shape errors raise ParseError naming the field,
/// and model violations raise ModelError naming the variable.
Scm parse_network(const std::string& text);
Scm load_network(const std::filesystem::path& path);
struct NetworkStructure {
  Dag dag;
  VarSet functional;  // "functional" flags, defaulting to "has parents"
};

/// Reads only ids, parents and functional flags, so structure-only
/// documents are accepted. Throws ModelError for unknown parents,
/// duplicate parents and cycles.
NetworkStructure parse_structure(const std::string& text);
NetworkStructure load_structure(const std::filesystem::path& path);

/// The optional "world_map" member of a network document.
std::optional<WorldMap> parse_world_map(const std::string& text);

Json network_to_json(const Scm& scm, const WorldMap* map = nullptr);
/// Structure-only document (ids and parents) for graphs without mechanisms.
Json dag_to_json(const Dag& dag, const WorldMap* map = nullptr);
Json world_map_to_json(const WorldMap& map);
WorldMap world_map_from_json(const Json& j);

Json order_to_json(const EliminationOrder& order, const std::vector<std::string>& names);
EliminationOrder order_from_json(const Json& j, const Dag& dag);

Json separators_to_json(const Jointree& jt, const SeparatorAssignment& seps);
Json jointree_to_json(const Jointree& jt, const SeparatorAssignment& seps);
Json thinned_to_json(const ThinnedJointree& tj, const SeparatorAssignment& classical);

CounterfactualQuery parse_query(const std::string& text);
Json query_to_json(const CounterfactualQuery& q);
Json result_to_json(const InferenceResult& r);

/// Two-space indented dump followed by a newline.
std::string dump(const Json& j);

}  // namespace twinwidth
