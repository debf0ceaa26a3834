#include "sphform/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sphform {

namespace {

Json vec_json(const Vec3& v)
{
    return Json::array({v.x(), v.y(), v.z()});
}

Json complex_list(const std::vector<std::complex<double>>& zs)
{
    Json out = Json::array();
    for (auto z : zs)
        out.push_back({{"re", z.real()}, {"im", z.imag()}});
    return out;
}

}  // namespace

Json to_json(const SchlafliSolid& s)
{
    Json verts = Json::array();
    for (const auto& v : s.vertices)
        verts.push_back(vec_json(v));
    return {{"p", s.p},
            {"q", s.q},
            {"n_vertices", s.n_vertices},
            {"n_edges", s.n_edges},
            {"n_faces", s.n_faces},
            {"vertices", verts}};
}

Json to_json(const SymmetrySet& h)
{
    Json syms = Json::array();
    for (const auto& s : h.symmetries)
        syms.push_back({{"vertex", s.vertex_index + 1}, {"permutation", cycle_notation(s.perm)}});
    return {{"solid", to_json(h.solid)}, {"symmetries", syms}, {"group_order", h.group.size()}};
}

Json to_json(const InterAgentGraph& g)
{
    Json edges = Json::array();
    for (auto [i, j] : g.edges())
        edges.push_back({i + 1, j + 1});
    return {{"n", g.size()}, {"edges", edges}};
}

Json to_json(const StabilityReport& r)
{
    Json sets = Json::array();
    for (const auto& c : r.constraint_sets)
        sets.push_back({c[0] + 1, c[1] + 1, c[2] + 1, c[3] + 1});
    Json hist = Json::array();
    for (const auto& st : r.history)
        hist.push_back({{"constraints", st.constraints},
                        {"block_dimension", st.block_dimension},
                        {"negative_count", st.negative_count}});
    return {{"solid", {r.p, r.q}},
            {"m_max", r.m_max},
            {"constraint_sets", sets},
            {"restricted_spectrum", complex_list(r.restricted_spectrum)},
            {"block_dimension", r.restricted_spectrum.size()},
            {"required_negative", r.required_negative},
            {"verdict", to_string(r.verdict)},
            {"gradient_rank", r.gradient_rank},
            {"extended_candidates_used", r.used_extended_candidates},
            {"history", hist},
            {"seconds", r.total_seconds}};
}

Json to_json(const SimulationConfig& c)
{
    return {{"step_size", c.step_size},
            {"t_final", c.t_final},
            {"integrator", c.integrator == Integrator::rk4 ? "rk4" : "euler"},
            {"renormalize_every", c.renormalize_every},
            {"record_every", c.record_every},
            {"seed", c.seed}};
}

Json to_json(const OutcomeReport& o)
{
    Json relabel = Json::array();
    for (int v : o.relabeling)
        relabel.push_back(v + 1);
    return {{"outcome", to_string(o.outcome)},
            {"xi_error", o.xi_error},
            {"xi_rate", o.xi_rate},
            {"relabeling", relabel}};
}

Json state_to_json(const FormationState& s)
{
    Json out = Json::array();
    for (const auto& v : s)
        out.push_back(vec_json(v));
    return out;
}

InterAgentGraph graph_from_json(const Json& j, int expected_n)
{
    try {
        if (j.is_array()) {
            const auto n = static_cast<int>(j.size());
            if (n != expected_n)
                throw std::invalid_argument("adjacency has " + std::to_string(n) + " rows, expected " +
                                            std::to_string(expected_n));
            Eigen::MatrixXi a(n, n);
            for (int r = 0; r < n; ++r) {
                if (!j[static_cast<std::size_t>(r)].is_array() || static_cast<int>(j[static_cast<std::size_t>(r)].size()) != n)
                    throw std::invalid_argument("adjacency row " + std::to_string(r + 1) + " has wrong length");
                for (int c = 0; c < n; ++c)
                    a(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<int>();
            }
            return InterAgentGraph(std::move(a));
        }
        if (!j.is_object() || !j.contains("edges"))
            throw std::invalid_argument("graph must be an adjacency matrix or an object with \"edges\"");
        const int n = j.value("n", expected_n);
        if (n != expected_n)
            throw std::invalid_argument("graph has n=" + std::to_string(n) + ", expected " + std::to_string(expected_n));
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("edge must be a pair");
            edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
        }
        return InterAgentGraph::from_edges(n, edges);
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("bad graph JSON: ") + ex.what());
    }
}

FormationState state_from_json(const Json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("state must be an array of [x, y, z] triples");
    FormationState s;
    try {
        for (const auto& v : j) {
            if (!v.is_array() || v.size() != 3)
                throw std::invalid_argument("state entries must be [x, y, z]");
            Vec3 x(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
            if (!x.allFinite() || x.norm() < 1e-12)
                throw std::invalid_argument("state entry is zero or not finite");
            s.push_back(x.normalized());
        }
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("bad state JSON: ") + ex.what());
    }
    return s;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr)
{
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i)
        out << ",x" << i << ",y" << i << ",z" << i;
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out << tr.times[k];
        for (const auto& v : tr.states[k])
            out << ',' << v.x() << ',' << v.y() << ',' << v.z();
        out << '\n';
    }
}

Json to_json(const RunManifest& m)
{
    return {{"command", m.command},
            {"solid", {m.p, m.q}},
            {"seed", m.seed},
            {"config", to_json(m.config)},
            {"start", m.start},
            {"graph", m.graph},
            {"ensemble", m.ensemble},
            {"tool_version", m.tool_version},
            {"timestamp", m.timestamp}};
}

std::string iso8601_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace sphform
