#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sphform/dynamics.hpp"
#include "sphform/polyhedra.hpp"

using namespace sphform;

TEST(MakeSolid, Counts)
{
    const SchlafliSolid t = make_solid(3, 3);
    EXPECT_EQ(t.n_vertices, 4);
    EXPECT_EQ(t.n_edges, 6);
    EXPECT_EQ(t.n_faces, 4);
    const SchlafliSolid d = make_solid(5, 3);
    EXPECT_EQ(d.n_vertices, 20);
    EXPECT_EQ(d.n_edges, 30);
    EXPECT_EQ(d.n_faces, 12);
    for (const auto& s : platonic_solids())
        EXPECT_EQ(s.n_vertices - s.n_edges + s.n_faces, 2) << s.symbol();
}

TEST(MakeSolid, RejectsNonPlatonic)
{
    for (auto [p, q] : {std::pair{4, 4}, {3, 6}, {6, 3}, {2, 5}, {7, 7}}) {
        try {
            make_solid(p, q);
            FAIL() << p << "," << q;
        } catch (const std::invalid_argument& e) {
            EXPECT_NE(std::string(e.what()).find("not a Platonic solid"), std::string::npos);
        }
    }
}

TEST(MakeSolid, ParseForms)
{
    EXPECT_EQ(parse_solid("3,5").n_vertices, 12);
    EXPECT_EQ(parse_solid("{4,3}").n_vertices, 8);
    EXPECT_THROW(parse_solid("3"), std::invalid_argument);
    EXPECT_THROW(parse_solid("a,b"), std::invalid_argument);
    EXPECT_THROW(parse_solid("4,4"), std::invalid_argument);
}

TEST(MakeSolid, VerticesUnitDistinctCentred)
{
    for (const auto& s : platonic_solids()) {
        ASSERT_EQ(static_cast<int>(s.vertices.size()), s.n_vertices);
        Vec3 centroid = Vec3::Zero();
        for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            EXPECT_NEAR(s.vertices[i].norm(), 1.0, 1e-12);
            centroid += s.vertices[i];
            for (std::size_t j = 0; j < i; ++j)
                EXPECT_GT((s.vertices[i] - s.vertices[j]).norm(), 0.1);
        }
        EXPECT_LT(centroid.norm(), 1e-9) << s.symbol();
    }
}

TEST(MakeSolid, EachVertexHasQNearestNeighbours)
{
    for (const auto& s : platonic_solids()) {
        double dmin = 10.0;
        for (std::size_t i = 1; i < s.vertices.size(); ++i)
            dmin = std::min(dmin, (s.vertices[i] - s.vertices[0]).norm());
        int edges = 0;
        for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            int deg = 0;
            for (std::size_t j = 0; j < s.vertices.size(); ++j)
                if (i != j && std::abs((s.vertices[i] - s.vertices[j]).norm() - dmin) < 1e-9)
                    ++deg;
            EXPECT_EQ(deg, s.q);
            edges += deg;
        }
        EXPECT_EQ(edges / 2, s.n_edges);
    }
}

TEST(Permutation, Composition)
{
    const Permutation a({1, 2, 0});
    const Permutation b({1, 0, 2});
    const Permutation ab = a * b;
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(ab(i), b(a(i)));
    EXPECT_EQ(permutation_matrix(ab), permutation_matrix(a) * permutation_matrix(b));
    EXPECT_TRUE((a * a.inverse()).is_identity());
    EXPECT_EQ(a.order(), 3);
    EXPECT_EQ(b.order(), 2);
    EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);
}

TEST(Permutation, MatrixExamples)
{
    EXPECT_EQ(permutation_matrix(Permutation::identity(4)), Eigen::MatrixXi::Identity(4, 4));
    Eigen::MatrixXi anti(2, 2);
    anti << 0, 1, 1, 0;
    EXPECT_EQ(permutation_matrix(Permutation({1, 0})), anti);
}

TEST(Permutation, RandomMatricesOrthogonalAndHomomorphic)
{
    std::mt19937_64 rng(42);
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(rng() % 9);
        std::vector<int> x(static_cast<std::size_t>(n));
        std::vector<int> y(x.size());
        std::iota(x.begin(), x.end(), 0);
        std::iota(y.begin(), y.end(), 0);
        std::shuffle(x.begin(), x.end(), rng);
        std::shuffle(y.begin(), y.end(), rng);
        const Permutation a(x);
        const Permutation b(y);
        const Eigen::MatrixXi pa = permutation_matrix(a);
        EXPECT_EQ(pa * pa.transpose(), Eigen::MatrixXi::Identity(n, n));
        EXPECT_EQ(permutation_matrix(a * b), pa * permutation_matrix(b));
        // (P x)_i = x_{sigma(i)}
        Eigen::VectorXi v = Eigen::VectorXi::LinSpaced(n, 10, 10 + n - 1);
        const Eigen::VectorXi pv = pa * v;
        for (int i = 0; i < n; ++i)
            EXPECT_EQ(pv[i], v[a(i)]);
    }
}

TEST(CycleNotation, Examples)
{
    EXPECT_EQ(cycle_notation(Permutation({0, 2, 3, 1})), "(1)(2,3,4)");
    EXPECT_EQ(cycle_notation(Permutation::identity(3)), "(1)(2)(3)");
    EXPECT_EQ(cycle_notation(parse_cycles("(1)(2,3,4)", 4)), "(1)(2,3,4)");
    EXPECT_EQ(cycle_notation(parse_cycles("(3,4,2)", 4)), "(1)(2,3,4)");
}

TEST(CycleNotation, RoundTripRandom)
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + static_cast<int>(rng() % 20);
        std::vector<int> x(static_cast<std::size_t>(n));
        std::iota(x.begin(), x.end(), 0);
        std::shuffle(x.begin(), x.end(), rng);
        const Permutation p(x);
        EXPECT_EQ(parse_cycles(cycle_notation(p), n), p);
    }
}

TEST(CycleNotation, ParseErrors)
{
    EXPECT_THROW(parse_cycles("(1,2", 4), std::invalid_argument);
    EXPECT_THROW(parse_cycles("(1,5)", 4), std::invalid_argument);
    EXPECT_THROW(parse_cycles("(1,2)(2,3)", 4), std::invalid_argument);
    EXPECT_THROW(parse_cycles("(0,1)", 4), std::invalid_argument);
    EXPECT_THROW(parse_cycles("1,2", 4), std::invalid_argument);
    EXPECT_THROW(parse_cycles("(1,x)", 4), std::invalid_argument);
}

TEST(Symmetries, TetrahedronTable)
{
    const SymmetrySet h = derive_symmetries(make_solid(3, 3));
    ASSERT_EQ(h.symmetries.size(), 4U);
    EXPECT_EQ(cycle_notation(h.symmetries[0].perm), "(1)(2,3,4)");
    EXPECT_EQ(h.symmetries[1].perm, parse_cycles("(2)(1,4,3)", 4));
    EXPECT_EQ(h.symmetries[2].perm, parse_cycles("(3)(1,2,4)", 4));
    EXPECT_EQ(h.symmetries[3].perm, parse_cycles("(4)(2,1,3)", 4));
    EXPECT_EQ(h.group.size(), 12U);
}

TEST(Symmetries, FixedPointOrderAndResidual)
{
    for (const auto& s : platonic_solids()) {
        const SymmetrySet h = derive_symmetries(s);
        ASSERT_EQ(static_cast<int>(h.symmetries.size()), s.n_vertices);
        for (int i = 0; i < s.n_vertices; ++i) {
            const auto& sym = h.symmetries[static_cast<std::size_t>(i)];
            EXPECT_EQ(sym.vertex_index, i);
            EXPECT_EQ(sym.perm(i), i);
            EXPECT_EQ(sym.perm.order(), s.q);
            const Mat3 r = oracle::expm(oracle::skew(s.vertices[static_cast<std::size_t>(i)] * (2 * M_PI / s.q)));
            EXPECT_LT((r - sym.rotation).norm(), 1e-12);
            for (int j = 0; j < s.n_vertices; ++j)
                EXPECT_LT((r * s.vertices[static_cast<std::size_t>(j)] -
                           s.vertices[static_cast<std::size_t>(sym.perm(j))])
                              .norm(),
                          1e-8);
        }
    }
}

TEST(Symmetries, GroupClosedWithIdentityAndInverses)
{
    for (const auto& s : platonic_solids()) {
        const SymmetrySet h = derive_symmetries(s);
        const std::set<Permutation> g(h.group.begin(), h.group.end());
        EXPECT_TRUE(g.count(Permutation::identity(s.n_vertices)));
        for (const auto& a : h.group) {
            EXPECT_TRUE(g.count(a.inverse()));
            for (const auto& b : h.group)
                ASSERT_TRUE(g.count(a * b));
        }
        const std::size_t full = full_rotation_group(s).size();
        EXPECT_EQ(full % h.group.size(), 0U) << s.symbol();
    }
}

TEST(Symmetries, FullRotationGroupOrders)
{
    const std::vector<std::size_t> expected = {12, 24, 24, 60, 60};
    const auto solids = platonic_solids();
    for (std::size_t k = 0; k < solids.size(); ++k) {
        const auto rots = full_rotation_group(solids[k]);
        EXPECT_EQ(rots.size(), expected[k]) << solids[k].symbol();
        for (const auto& r : rots) {
            EXPECT_TRUE(is_rotation(r.rotation, 1e-9));
            for (int j = 0; j < solids[k].n_vertices; ++j)
                EXPECT_LT((r.rotation * solids[k].vertices[static_cast<std::size_t>(j)] -
                           solids[k].vertices[static_cast<std::size_t>(r.perm(j))])
                              .norm(),
                          1e-8);
        }
    }
}

TEST(Symmetries, CloseGroupOfGenerators)
{
    const auto g = close_group({Permutation({1, 2, 3, 0})});
    EXPECT_EQ(g.size(), 4U);
    const auto s4 = close_group({Permutation({1, 0, 2, 3}), Permutation({1, 2, 3, 0})});
    EXPECT_EQ(s4.size(), 24U);
}

TEST(GreedyMatch, RecoversPermutation)
{
    const SchlafliSolid s = make_solid(3, 5);
    const Permutation p(std::vector<int>{3, 0, 1, 2, 5, 4, 7, 6, 9, 8, 11, 10});
    const FormationState moved = permute(p, s.vertices);
    const auto m = greedy_match(moved, s.vertices);
    for (std::size_t i = 0; i < moved.size(); ++i)
        EXPECT_LT((moved[i] - s.vertices[static_cast<std::size_t>(m[i])]).norm(), 1e-12);
}

TEST(Membership, CanonicalAndRotated)
{
    std::mt19937_64 rng(4);
    for (const auto& s : platonic_solids()) {
        const MembershipReport c = formation_membership(s.vertices, s);
        EXPECT_TRUE(c.member) << s.symbol();
        EXPECT_TRUE(c.nondegenerate);
        EXPECT_LT(c.residual, 1e-9);
        const Mat3 r = oracle::random_rotation(rng);
        FormationState rotated;
        for (const auto& v : s.vertices)
            rotated.push_back(r * v);
        EXPECT_TRUE(formation_membership(rotated, s).member) << s.symbol();
    }
}

TEST(Membership, ConsensusAndPerturbedRejected)
{
    for (const auto& s : platonic_solids()) {
        const FormationState consensus(static_cast<std::size_t>(s.n_vertices), Vec3::UnitZ());
        const MembershipReport c = formation_membership(consensus, s);
        EXPECT_FALSE(c.member);
        EXPECT_FALSE(c.nondegenerate);

        FormationState bent = s.vertices;
        bent[1] = (bent[1] + 0.05 * Vec3(0.3, -0.2, 0.9)).normalized();
        EXPECT_FALSE(formation_membership(bent, s).member) << s.symbol();
    }
    const SchlafliSolid t = make_solid(3, 3);
    EXPECT_FALSE(formation_membership(FormationState(3, Vec3::UnitX()), t).member);
}
