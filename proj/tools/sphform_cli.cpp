// Command-line front end: simulate, analyze, enumerate-graphs, verify.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sphform/dynamics.hpp"
#include "sphform/graph.hpp"
#include "sphform/io.hpp"
#include "sphform/polyhedra.hpp"
#include "sphform/stability.hpp"
#include "sphform/xi.hpp"

namespace fs = std::filesystem;
using namespace sphform;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

InterAgentGraph load_graph(const std::string& path, const SchlafliSolid& s)
{
    if (path.empty())
        return assumption3_graph(s);
    try {
        return graph_from_json(read_json_file(path), s.n_vertices);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream out(p);
    if (!out)
        throw IoError("cannot write " + p.string());
    out << text;
    if (!out)
        throw IoError("write failed for " + p.string());
}

struct SimulateArgs {
    std::string solid;
    std::string graph;
    std::uint64_t seed = 1;
    double t_final = 50.0;
    double step = 1e-3;
    std::string start = "random";
    double radius = 0.3;
    int ensemble = 1;
    int record_every = 100;
    std::string integrator = "rk4";
    std::string out = ".";
};

struct RunResult {
    std::uint64_t seed = 0;
    Json outcome;
    std::string csv;
};

RunResult run_one(const SchlafliSolid& s, const InterAgentGraph& g, const SimulateArgs& a,
                  const SimulationConfig& cfg, const FormationState* from_file)
{
    const GainFunction h = exponential_gain();
    FormationState x0;
    if (a.start == "canonical")
        x0 = s.vertices;
    else if (a.start == "random")
        x0 = random_state(s.n_vertices, cfg.seed);
    else if (a.start == "perturbed")
        x0 = perturbed_state(rotate(random_rotation(cfg.seed ^ 0x9e3779b97f4a7c15ull), s.vertices), a.radius, cfg.seed);
    else
        x0 = *from_file;

    const Trajectory tr = integrate(x0, g, h, cfg);
    OutcomeReport rep = classify_outcome(tr.states.back(), s, g, h);
    if (a.start == "canonical") {
        bool stayed = true;
        for (const auto& st : tr.states)
            stayed = stayed && formation_membership(st, s, 1e-6).member;
        if (stayed)
            rep.outcome = Outcome::stayed_on_manifold;
    }
    Json j = to_json(rep);
    j["seed"] = cfg.seed;
    j["max_norm_drift"] = tr.max_norm_drift;
    j["steps"] = tr.steps;
    j["final_state"] = state_to_json(tr.states.back());
    std::ostringstream csv;
    write_trajectory_csv(csv, tr);
    return {cfg.seed, std::move(j), csv.str()};
}

int cmd_simulate(const SimulateArgs& a)
{
    const SchlafliSolid s = parse_solid(a.solid);
    const InterAgentGraph g = load_graph(a.graph, s);
    SimulationConfig cfg;
    cfg.step_size = a.step;
    cfg.t_final = a.t_final;
    cfg.record_every = a.record_every;
    cfg.seed = a.seed;
    if (a.integrator == "euler")
        cfg.integrator = Integrator::euler;
    else if (a.integrator != "rk4")
        throw std::invalid_argument("integrator must be rk4 or euler");
    cfg.validate();
    if (a.ensemble < 1)
        throw std::invalid_argument("ensemble size must be at least 1");

    FormationState from_file;
    if (a.start != "random" && a.start != "canonical" && a.start != "perturbed") {
        try {
            from_file = state_from_json(read_json_file(a.start));
        } catch (const std::runtime_error& e) {
            throw IoError(e.what());
        }
        if (static_cast<int>(from_file.size()) != s.n_vertices)
            throw std::invalid_argument("start state has " + std::to_string(from_file.size()) +
                                        " attitudes, expected " + std::to_string(s.n_vertices));
    }

    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec)
        throw IoError("cannot create " + a.out + ": " + ec.message());

    // bounded fan-out; results are consumed in seed order
    const int width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<RunResult>> jobs;
    int launched = 0;
    auto launch = [&] {
        SimulationConfig c = cfg;
        c.seed = a.seed + static_cast<std::uint64_t>(launched++);
        jobs.push_back(std::async(std::launch::async, run_one, std::cref(s), std::cref(g), std::cref(a), c,
                                  &from_file));
    };
    while (launched < std::min(width, a.ensemble))
        launch();
    Json outcomes = Json::array();
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        RunResult r = jobs[k].get();
        if (launched < a.ensemble)
            launch();
        const std::string tag = "seed" + std::to_string(r.seed);
        write_file(fs::path(a.out) / ("trajectory_" + tag + ".csv"), r.csv);
        write_file(fs::path(a.out) / ("outcome_" + tag + ".json"), r.outcome.dump(2) + "\n");
        Json brief = r.outcome;
        brief.erase("final_state");
        outcomes.push_back(brief);
    }

    RunManifest m;
    m.command = "simulate";
    m.p = s.p;
    m.q = s.q;
    m.seed = a.seed;
    m.config = cfg;
    m.start = a.start;
    m.graph = a.graph.empty() ? "default" : a.graph;
    m.ensemble = a.ensemble;
    m.timestamp = iso8601_now();
    write_file(fs::path(a.out) / "manifest.json", to_json(m).dump(2) + "\n");

    Json summary = {{"solid", {s.p, s.q}}, {"runs", outcomes}};
    write_file(fs::path(a.out) / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& solid, const std::string& graph, bool basic)
{
    const SchlafliSolid s = parse_solid(solid);
    const InterAgentGraph g = load_graph(graph, s);
    Algorithm1Options opt;
    opt.extended_candidates = !basic;
    const StabilityReport r = algorithm1(s, g, exponential_gain(), opt);
    Json j = to_json(r);
    j["exponential_lift"] = theorem3_exponential_lift(r);
    std::cout << j.dump(2) << "\n";
    return r.verdict == Verdict::exponentially_stable ? kExitOk : kExitVerdict;
}

Json enumeration_json(const GraphEnumeration& e, std::size_t group_order)
{
    const auto classes = isomorphism_classes(e.graphs);
    return {{"group_order", group_order},
            {"orbits", e.orbits.size()},
            {"orbit_unions", e.total_unions},
            {"connected_labeled", e.graphs.size()},
            {"isomorphism_classes", classes.size()}};
}

int cmd_enumerate(const std::string& solid)
{
    const SchlafliSolid s = parse_solid(solid);
    const SymmetrySet h = derive_symmetries(s);
    std::vector<Permutation> vgens;
    for (const auto& sym : h.symmetries)
        vgens.push_back(sym.perm);
    std::vector<Permutation> full;
    for (const auto& r : full_rotation_group(s))
        full.push_back(r.perm);

    const GraphEnumeration by_vertex = enumerate_symmetric_graphs(vgens, s.n_vertices);
    const GraphEnumeration by_full = enumerate_symmetric_graphs(full, s.n_vertices);
    const auto classes = isomorphism_classes(by_full.graphs);

    const InterAgentGraph complete = InterAgentGraph::complete(s.n_vertices);
    const InterAgentGraph platonic = platonic_graph(s);
    Json graphs = Json::array();
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t idx : classes[c]) {
            Json gj = to_json(by_full.graphs[idx]);
            gj["class"] = c + 1;
            graphs.push_back(gj);
        }
    auto contains = [&](const InterAgentGraph& x) {
        return std::find(by_full.graphs.begin(), by_full.graphs.end(), x) != by_full.graphs.end();
    };
    Json j = {{"solid", {s.p, s.q}},
              {"count", classes.size()},
              {"vertex_rotations", enumeration_json(by_vertex, h.group.size())},
              {"all_rotations", enumeration_json(by_full, full.size())},
              {"contains_complete", contains(complete)},
              {"contains_platonic", contains(platonic)},
              {"graphs", graphs}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& state_path, const std::string& solid, double tol)
{
    const SchlafliSolid s = parse_solid(solid);
    FormationState x;
    if (state_path == "canonical") {
        x = s.vertices;
    } else {
        try {
            x = state_from_json(read_json_file(state_path));
        } catch (const std::runtime_error& e) {
            throw IoError(e.what());
        }
    }
    const MembershipReport m = formation_membership(x, s, tol);
    const Eigen::VectorXd eq = equilibrium_xi(s);
    Json j = {{"solid", {s.p, s.q}},
              {"member", m.member},
              {"nondegenerate", m.nondegenerate},
              {"residual", m.residual},
              {"tolerance", tol},
              {"equilibrium_xi", std::vector<double>(eq.data(), eq.data() + eq.size())}};
    std::cout << j.dump(2) << "\n";
    return m.member ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Intrinsic formation control of reduced attitudes on Platonic solids"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate the closed loop and classify the outcome");
    simulate->add_option("--solid", sim.solid, "Schlafli symbol p,q")->required();
    simulate->add_option("--graph", sim.graph, "Graph JSON (edge list or adjacency)");
    simulate->add_option("--seed", sim.seed, "Seed of the first run");
    simulate->add_option("--t-final", sim.t_final, "Final time");
    simulate->add_option("--step", sim.step, "Integration step");
    simulate->add_option("--start", sim.start, "random | canonical | perturbed | <state.json>");
    simulate->add_option("--radius", sim.radius, "Perturbation radius for --start perturbed");
    simulate->add_option("--ensemble", sim.ensemble, "Number of seeded runs");
    simulate->add_option("--record-every", sim.record_every, "Steps between trajectory samples");
    simulate->add_option("--integrator", sim.integrator, "rk4 | euler");
    simulate->add_option("--out", sim.out, "Output directory");

    std::string an_solid;
    std::string an_graph;
    bool an_basic = false;
    auto* analyze = app.add_subcommand("analyze", "Run the stepwise restricted-stability test");
    analyze->add_option("--solid", an_solid, "Schlafli symbol p,q")->required();
    analyze->add_option("--graph", an_graph, "Graph JSON (edge list or adjacency)");
    analyze->add_flag("--basic-candidates", an_basic, "Only try constraint sets {1,2,3,i}");

    std::string en_solid;
    auto* enumerate = app.add_subcommand("enumerate-graphs", "List symmetric inter-agent graphs");
    enumerate->add_option("--solid", en_solid, "Schlafli symbol p,q")->required();

    std::string vf_state;
    std::string vf_solid;
    double vf_tol = 1e-6;
    auto* verify = app.add_subcommand("verify", "Check formation membership of a state");
    verify->add_option("--state", vf_state, "State JSON or 'canonical'")->required();
    verify->add_option("--solid", vf_solid, "Schlafli symbol p,q")->required();
    verify->add_option("--tol", vf_tol, "Membership tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*simulate)
            return cmd_simulate(sim);
        if (*analyze)
            return cmd_analyze(an_solid, an_graph, an_basic);
        if (*enumerate)
            return cmd_enumerate(en_solid);
        if (*verify)
            return cmd_verify(vf_state, vf_solid, vf_tol);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
