#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sphform/dynamics.hpp"

using namespace sphform;

namespace {

double max_diff(const FormationState& a, const FormationState& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, (a[i] - b[i]).norm());
    return m;
}

std::function<double(double)> exp_of_cosine()
{
    return [](double c) { return std::exp(2.0 * c); };
}

}  // namespace

TEST(Gain, ExponentialValuesAndLipschitz)
{
    const GainFunction h = exponential_gain();
    EXPECT_DOUBLE_EQ(h(M_PI / 2), 1.0);
    EXPECT_NEAR(h(0.0), std::exp(2.0), 1e-12);
    EXPECT_NEAR(h.of_cosine(-1.0), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(h.lipschitz, 2.0 * std::exp(2.0), 1e-12);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const double a = -1.0 + 2.0 * k / 2000.0;
        const double b = a + 1e-3;
        worst = std::max(worst, std::abs(h.of_cosine(b) - h.of_cosine(a)) / 1e-3);
        EXPECT_NEAR(h.slope(a), (h.of_cosine(a + 1e-6) - h.of_cosine(a - 1e-6)) / 2e-6, 1e-6);
        EXPECT_GT(h.of_cosine(a), 0.0);
    }
    EXPECT_LE(worst, h.lipschitz);
    EXPECT_EQ(unit_gain()(1.3), 1.0);
    EXPECT_EQ(unit_gain().slope(0.2), 0.0);
}

TEST(ControlOmega, Examples)
{
    const auto g = InterAgentGraph::from_edges(2, {{0, 1}});
    const GainFunction h = exponential_gain();
    EXPECT_LT(control_omega(0, {Vec3::UnitZ(), Vec3::UnitZ()}, g, h).norm(), 1e-15);
    EXPECT_LT((control_omega(0, {Vec3::UnitZ(), Vec3::UnitX()}, g, h) + Vec3::UnitY()).norm(), 1e-15);
    EXPECT_LT(control_omega(0, {Vec3::UnitZ(), -Vec3::UnitZ()}, g, h).norm(), 1e-15);
}

TEST(ClosedLoop, MatchesOracleAndIsTangent)
{
    std::mt19937_64 rng(2);
    const GainFunction h = exponential_gain();
    for (int k = 0; k < 1000; ++k) {
        const int n = 2 + static_cast<int>(rng() % 10);
        Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                a(i, j) = a(j, i) = static_cast<int>(rng() % 2);
        const InterAgentGraph g(a);
        const FormationState s = oracle::random_state(n, rng);
        const FormationState f = closed_loop_rhs(s, g, h);
        const auto ref = oracle::closed_loop(s, a, exp_of_cosine());
        ASSERT_LT(max_diff(f, ref), 1e-11);
        for (int i = 0; i < n; ++i) {
            ASSERT_LT(std::abs(s[static_cast<std::size_t>(i)].dot(f[static_cast<std::size_t>(i)])), 1e-12);
            const Vec3 w = control_omega(i, s, g, h);
            ASSERT_LT((w.cross(s[static_cast<std::size_t>(i)]) - f[static_cast<std::size_t>(i)]).norm(), 1e-11);
        }
    }
}

TEST(ClosedLoop, Equilibria)
{
    const GainFunction h = exponential_gain();
    const FormationState consensus(5, Vec3(0.6, 0.0, 0.8));
    for (const auto& v : closed_loop_rhs(consensus, InterAgentGraph::complete(5), h))
        EXPECT_EQ(v.norm(), 0.0);
    for (const auto& s : platonic_solids()) {
        const auto f = closed_loop_rhs(s.vertices, assumption3_graph(s), h);
        for (const auto& v : f)
            EXPECT_LT(v.norm(), 1e-9) << s.symbol();
    }
}

TEST(BodyFrame, FramesCoincide)
{
    const auto g = InterAgentGraph::from_edges(2, {{0, 1}});
    const GainFunction h = exponential_gain();
    const FormationState s = {Vec3::UnitZ(), Vec3(1, 1, 0).normalized()};
    const Vec3 w = body_frame_control(0, s, g, h, Mat3::Identity(), Vec3::UnitZ());
    EXPECT_LT((w - control_omega(0, s, g, h)).norm(), 1e-15);
    const FormationState anti = {Vec3::UnitZ(), -Vec3::UnitZ()};
    EXPECT_LT(body_frame_control(0, anti, g, h, Mat3::Identity(), Vec3::UnitZ()).norm(), 1e-15);
}

TEST(BodyFrame, ReproducesClosedLoop)
{
    std::mt19937_64 rng(19);
    const GainFunction h = exponential_gain();
    const InterAgentGraph g = InterAgentGraph::complete(6);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        std::vector<Mat3> rots;
        std::vector<Vec3> axes;
        FormationState s;
        for (int i = 0; i < 6; ++i) {
            rots.push_back(oracle::random_rotation(rng));
            axes.push_back(oracle::random_unit(rng));
            s.push_back(rots.back() * axes.back());
        }
        const auto f = closed_loop_rhs(s, g, h);
        for (int i = 0; i < 6; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const Vec3 wb = body_frame_control(i, s, g, h, rots[ui], axes[ui]);
            worst = std::max(worst, (body_frame_rate(rots[ui], axes[ui], wb) - f[ui]).norm());
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Config, Validation)
{
    SimulationConfig c;
    EXPECT_NO_THROW(c.validate());
    c.step_size = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.t_final = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.renormalize_every = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.record_every = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Integrate, ConsensusIsConstant)
{
    const FormationState s(4, Vec3::UnitX());
    SimulationConfig cfg;
    cfg.t_final = 1.0;
    const Trajectory tr = integrate(s, InterAgentGraph::complete(4), exponential_gain(), cfg);
    for (const auto& x : tr.states)
        EXPECT_EQ(max_diff(x, s), 0.0);
    EXPECT_EQ(tr.steps, 1000);
    EXPECT_NEAR(tr.times.back(), 1.0, 1e-12);
}

TEST(Integrate, CanonicalTetrahedronStays)
{
    const SchlafliSolid s = make_solid(3, 3);
    SimulationConfig cfg;
    cfg.t_final = 10.0;
    const Trajectory tr = integrate(s.vertices, assumption3_graph(s), exponential_gain(), cfg);
    for (const auto& x : tr.states) {
        EXPECT_LT(max_diff(x, s.vertices), 1e-6);
        EXPECT_TRUE(formation_membership(x, s).member);
    }
}

TEST(Integrate, CanonicalFormationsStayOnManifold)
{
    const GainFunction h = exponential_gain();
    for (const auto& s : platonic_solids()) {
        SimulationConfig cfg;
        cfg.t_final = 5.0;
        const Trajectory tr = integrate(s.vertices, assumption3_graph(s), h, cfg);
        EXPECT_TRUE(formation_membership(tr.states.back(), s).member) << s.symbol();
    }
}

TEST(Integrate, RotationEquivariant)
{
    std::mt19937_64 rng(6);
    const GainFunction h = exponential_gain();
    const auto g = InterAgentGraph::complete(5);
    SimulationConfig cfg;
    cfg.t_final = 2.0;
    for (int k = 0; k < 5; ++k) {
        const FormationState s = oracle::random_state(5, rng);
        const Mat3 r = oracle::random_rotation(rng);
        const Trajectory a = integrate(s, g, h, cfg);
        const Trajectory b = integrate(rotate(r, s), g, h, cfg);
        EXPECT_LT(max_diff(rotate(r, a.states.back()), b.states.back()), 1e-6);
    }
}

TEST(Integrate, NormDriftAndRecording)
{
    SimulationConfig cfg;
    cfg.t_final = 3.0;
    cfg.record_every = 7;
    const Trajectory tr = integrate(random_state(6, 3), InterAgentGraph::complete(6), exponential_gain(), cfg);
    EXPECT_LT(tr.max_norm_drift, 1e-7);
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_NEAR(tr.times.back(), 3.0, 1e-12);
    EXPECT_EQ(tr.times.size(), tr.states.size());
    EXPECT_EQ(tr.times.size(), 3000U / 7U + 2U);
    for (const auto& v : tr.states.back())
        EXPECT_NEAR(v.norm(), 1.0, 1e-14);
}

TEST(Integrate, EulerConvergesToRk4)
{
    SimulationConfig rk;
    rk.t_final = 1.0;
    SimulationConfig eu = rk;
    eu.integrator = Integrator::euler;
    eu.step_size = 1e-5;
    const FormationState s = random_state(4, 12);
    const auto g = InterAgentGraph::complete(4);
    const auto a = integrate(s, g, exponential_gain(), rk).states.back();
    const auto b = integrate(s, g, exponential_gain(), eu).states.back();
    EXPECT_LT(max_diff(a, b), 1e-3);
}

TEST(Sampling, DeterministicPerSeed)
{
    EXPECT_EQ(max_diff(random_state(7, 99), random_state(7, 99)), 0.0);
    EXPECT_GT(max_diff(random_state(7, 99), random_state(7, 100)), 0.0);
    EXPECT_TRUE(random_rotation(5).isApprox(random_rotation(5)));
    EXPECT_TRUE(is_rotation(random_rotation(5)));
    for (const auto& v : random_state(50, 1))
        EXPECT_NEAR(v.norm(), 1.0, 1e-14);
}

TEST(Sampling, PerturbationWithinRadius)
{
    const SchlafliSolid s = make_solid(3, 5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FormationState p = perturbed_state(s.vertices, 0.3, seed);
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_NEAR(p[i].norm(), 1.0, 1e-14);
            EXPECT_LE(geodesic_angle(p[i], s.vertices[i]), 0.3 + 1e-12);
        }
    }
}

TEST(Sampling, PermuteMovesAgents)
{
    const FormationState s = random_state(4, 2);
    const Permutation p({1, 2, 3, 0});
    const FormationState t = permute(p, s);
    for (int i = 0; i < 4; ++i)
        EXPECT_EQ(t[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(p(i))]);
}

TEST(Outcome, Classification)
{
    const GainFunction h = exponential_gain();
    const SchlafliSolid s = make_solid(3, 4);
    const auto g = assumption3_graph(s);
    std::mt19937_64 rng(1);
    const FormationState moved = rotate(oracle::random_rotation(rng), permute(Permutation({2, 0, 1, 5, 3, 4}), s.vertices));
    const OutcomeReport ok = classify_outcome(moved, s, g, h);
    EXPECT_EQ(ok.outcome, Outcome::converged_to_target);
    EXPECT_LT(ok.xi_error, 1e-12);

    const FormationState consensus(6, Vec3::UnitY());
    EXPECT_EQ(classify_outcome(consensus, s, g, h).outcome, Outcome::other_equilibrium);

    const OutcomeReport mid = classify_outcome(random_state(6, 4), s, g, h);
    EXPECT_EQ(mid.outcome, Outcome::timeout);
    EXPECT_GT(mid.xi_rate, 1e-8);

    EXPECT_EQ(to_string(Outcome::converged_to_target), "converged-to-target");
    EXPECT_EQ(to_string(Outcome::other_equilibrium), "other-equilibrium");
    EXPECT_EQ(to_string(Outcome::timeout), "timeout");
    EXPECT_EQ(to_string(Outcome::stayed_on_manifold), "stayed-on-manifold");
}
