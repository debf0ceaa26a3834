#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sphform/dynamics.hpp"
#include "sphform/graph.hpp"
#include "sphform/polyhedra.hpp"
#include "sphform/stability.hpp"

namespace sphform {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.1";

Json to_json(const SchlafliSolid& s);
Json to_json(const SymmetrySet& h);
/// {"n": ..., "edges": [[i, j], ...]} with 1-based vertices.
Json to_json(const InterAgentGraph& g);
Json to_json(const StabilityReport& r);
Json to_json(const SimulationConfig& c);
Json to_json(const OutcomeReport& o);
Json state_to_json(const FormationState& s);

/// Accepts the edge-list object above or a bare adjacency matrix.
/// Throws std::invalid_argument on malformed input.
InterAgentGraph graph_from_json(const Json& j, int expected_n);

/// Array of [x, y, z] triples; each is normalized and must not be zero.
FormationState state_from_json(const Json& j);

/// Reads and parses a JSON file. Throws std::runtime_error if it cannot be read
/// and std::invalid_argument if it does not parse.
Json read_json_file(const std::string& path);

/// Header "t,x1,y1,z1,...", then one row per sample with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

struct RunManifest {
    std::string command;
    int p = 0;
    int q = 0;
    std::uint64_t seed = 0;
    SimulationConfig config;
    std::string start;
    std::string graph;
    int ensemble = 1;
    std::string tool_version = kToolVersion;
    std::string timestamp;
};

Json to_json(const RunManifest& m);

/// Current UTC time as YYYY-MM-DDThh:mm:ssZ.
std::string iso8601_now();

}  // namespace sphform
